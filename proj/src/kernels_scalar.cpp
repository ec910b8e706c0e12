#include <cmath>
#include <cstddef>

#include "wecfarm/kernels.hpp"

namespace wecfarm::kernels::scalar {

void complex_sub_scaled(std::span<cplx> y, cplx a, std::span<const cplx> x) {
  const double ar = a.real();
  const double ai = a.imag();
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double xr = x[k].real();
    const double xi = x[k].imag();
    const double pr = ar * xr - ai * xi;
    const double pi = ar * xi + ai * xr;
    y[k] = cplx(y[k].real() - pr, y[k].imag() - pi);
  }
}

cplx complex_dot(std::span<const cplx> a, std::span<const cplx> x) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double ar = a[k].real();
    const double ai = a[k].imag();
    const double xr = x[k].real();
    const double xi = x[k].imag();
    re += ar * xr - ai * xi;
    im += ar * xi + ai * xr;
  }
  return {re, im};
}

double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x) {
  double sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double xr = x[k].real();
    const double xi = x[k].imag();
    sum += w[k] * (xr * xr + xi * xi);
  }
  return sum;
}

void distances_from(double px, double py, std::span<const double> xs,
                    std::span<const double> ys, std::span<double> out) {
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double dx = xs[k] - px;
    const double dy = ys[k] - py;
    out[k] = std::sqrt(dx * dx + dy * dy);
  }
}

double shortfall_sum(std::span<const double> xs, std::span<const double> ys,
                     double min_dist) {
  double sum = 0.0;
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xs[j] - xs[i];
      const double dy = ys[j] - ys[i];
      const double d = std::sqrt(dx * dx + dy * dy);
      if (d < min_dist) sum += min_dist - d;
    }
  }
  return sum;
}

}  // namespace wecfarm::kernels::scalar
