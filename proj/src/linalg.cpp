#include "wecfarm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wecfarm/kernels.hpp"

namespace wecfarm {
namespace {

cplx divide(cplx num, cplx den) {
  // Smith's algorithm; std::complex division routes through a slow libcall.
  const double a = num.real(), b = num.imag(), c = den.real(), d = den.imag();
  if (std::abs(c) >= std::abs(d)) {
    const double r = d / c;
    const double t = 1.0 / (c + d * r);
    return {(a + b * r) * t, (b - a * r) * t};
  }
  const double r = c / d;
  const double t = 1.0 / (c * r + d);
  return {(a * r + b) * t, (b * r - a) * t};
}

}  // namespace

void ComplexLu::factor(ComplexMatrix a) {
  lu_ = std::move(a);
  const std::size_t n = lu_.size();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  ok_ = true;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::norm(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::norm(lu_(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) {
      ok_ = false;
      continue;
    }
    if (pivot != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(pivot).begin());
      std::swap(perm_[k], perm_[pivot]);
    }
    const cplx diag = lu_(k, k);
    const auto pivot_tail = lu_.row(k).subspan(k + 1);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = divide(lu_(i, k), diag);
      lu_(i, k) = l;
      kernels::complex_sub_scaled(lu_.row(i).subspan(k + 1), l, pivot_tail);
    }
  }
}

double ComplexLu::pivot_ratio() const noexcept {
  const std::size_t n = lu_.size();
  if (n == 0) return 1.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = std::abs(lu_(k, k));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo;
}

void ComplexLu::solve_in_place(std::span<cplx> rhs, std::size_t columns) const {
  const std::size_t n = lu_.size();
  auto row = [&](std::size_t i) { return rhs.subspan(i * columns, columns); };
  // apply the row permutation
  std::vector<cplx> permuted(rhs.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(rhs.begin() + perm_[i] * columns, columns, permuted.begin() + i * columns);
  }
  std::copy(permuted.begin(), permuted.end(), rhs.begin());
  // forward substitution with unit lower triangle
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      kernels::complex_sub_scaled(row(i), lu_(i, j), row(j));
    }
  }
  // back substitution
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) {
      kernels::complex_sub_scaled(row(ii), lu_(ii, j), row(j));
    }
    const cplx diag = lu_(ii, ii);
    for (auto& v : row(ii)) v = divide(v, diag);
  }
}

std::vector<cplx> ComplexLu::solve(std::span<const cplx> b) const {
  std::vector<cplx> x(b.begin(), b.end());
  solve_in_place(x, 1);
  return x;
}

std::vector<cplx> ComplexLu::solve_adjoint(std::span<const cplx> b) const {
  // A = P^T L U, so A^H = U^H L^H P and A^H x = b solves U^H z = b, L^H w = z, x = P^T w.
  const std::size_t n = lu_.size();
  std::vector<cplx> z(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = z[i];
    for (std::size_t j = 0; j < i; ++j) s -= std::conj(lu_(j, i)) * z[j];
    z[i] = divide(s, std::conj(lu_(i, i)));
  }
  for (std::size_t ii = n; ii-- > 0;) {
    cplx s = z[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= std::conj(lu_(j, ii)) * z[j];
    z[ii] = s;
  }
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = z[i];
  return x;
}

double ComplexLu::inverse_norm1_estimate() const {
  const std::size_t n = lu_.size();
  if (n == 0) return 0.0;
  std::vector<cplx> x(n, cplx(1.0 / static_cast<double>(n), 0.0));
  double estimate = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const std::vector<cplx> y = solve(x);
    double norm = 0.0;
    for (const auto& v : y) norm += std::abs(v);
    if (iter > 0 && norm <= estimate) break;
    estimate = norm;
    std::vector<cplx> sign(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(y[i]);
      sign[i] = mag > 0.0 ? y[i] / mag : cplx(1.0, 0.0);
    }
    const std::vector<cplx> z = solve_adjoint(sign);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(z[i]) > std::abs(z[arg])) arg = i;
    }
    std::fill(x.begin(), x.end(), cplx(0.0, 0.0));
    x[arg] = 1.0;
  }
  return estimate;
}

double norm1(const ComplexMatrix& a) {
  const std::size_t n = a.size();
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(a(i, j));
    best = std::max(best, col);
  }
  return best;
}

}  // namespace wecfarm
