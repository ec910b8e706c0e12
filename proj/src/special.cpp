#include "wecfarm/special.hpp"

#include <cmath>
#include <numbers>

namespace wecfarm {
namespace {

constexpr double kAsymptoticThreshold = 25.0;

// Miller's backward recurrence normalised with J0 + 2 * sum J_2k = 1.
double j0_backward_recurrence(double x) {
  const int start = 2 * (static_cast<int>(x + 6.0 * std::cbrt(x) + 16.0) / 2);
  const double two_over_x = 2.0 / x;
  double next = 0.0;      // J_{n+1} (unnormalised)
  double current = 1e-30; // J_n
  double even_sum = 0.0;
  for (int n = start; n > 0; --n) {
    const double previous = n * two_over_x * current - next;
    next = current;
    current = previous;
    if ((n - 1) % 2 == 0 && n - 1 > 0) even_sum += current;
    if (std::abs(current) > 1e250) {
      current *= 1e-250;
      next *= 1e-250;
      even_sum *= 1e-250;
    }
  }
  return current / (current + 2.0 * even_sum);
}

// Hankel expansion: J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4.
double j0_asymptotic(double x) {
  const double eight_x = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd / (k * eight_x);
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? -1.0 : 1.0) * term;
    } else {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (std::abs(term) < 1e-17) break;
  }
  const double chi = x - 0.25 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x == 0.0) return 1.0;
  if (x < 1e-4) return 1.0 - 0.25 * x * x;
  if (x < kAsymptoticThreshold) return j0_backward_recurrence(x);
  return j0_asymptotic(x);
}

}  // namespace wecfarm
