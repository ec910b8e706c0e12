#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "support.hpp"
#include "wecfarm/error.hpp"
#include "wecfarm/kernels.hpp"
#include "wecfarm/linalg.hpp"
#include "wecfarm/special.hpp"

using namespace wecfarm;

namespace {

std::vector<cplx> random_complex(std::size_t n, Rng& rng) {
  std::vector<cplx> v(n);
  for (auto& z : v) z = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
  return v;
}

std::vector<double> random_real(std::size_t n, Rng& rng, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

ComplexMatrix random_matrix(std::size_t n, Rng& rng) {
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = {uniform(rng, -1, 1), uniform(rng, -1, 1)};
  }
  return a;
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  Eigen::MatrixXcd m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a(i, j);
  }
  return m;
}

double rel_error(std::span<const cplx> x, const Eigen::VectorXcd& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += std::norm(x[i] - y(static_cast<Eigen::Index>(i)));
    den += std::norm(y(static_cast<Eigen::Index>(i)));
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("scalar kernels match naive loops") {
    Rng rng(3);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u}) {
      auto y = random_complex(n, rng), x = random_complex(n, rng);
      const cplx a{0.3, -1.7};
      auto expected = y;
      for (std::size_t k = 0; k < n; ++k) expected[k] -= a * x[k];
      kernels::scalar::complex_sub_scaled(y, a, x);
      for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y[k] - expected[k]) < 1e-15);

      cplx dot{0, 0};
      for (std::size_t k = 0; k < n; ++k) dot += y[k] * x[k];
      CHECK(std::abs(kernels::scalar::complex_dot(y, x) - dot) < 1e-13);

      auto w = random_real(n, rng, 0, 2);
      double wn = 0.0;
      for (std::size_t k = 0; k < n; ++k) wn += w[k] * std::norm(x[k]);
      CHECK(kernels::scalar::weighted_norm_sq(w, x) == doctest::Approx(wn).epsilon(1e-14));

      auto xs = random_real(n, rng, 0, 100), ys = random_real(n, rng, 0, 100);
      std::vector<double> out(n);
      kernels::scalar::distances_from(10.0, 20.0, xs, ys, out);
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(out[k] == doctest::Approx(std::hypot(xs[k] - 10.0, ys[k] - 20.0)).epsilon(1e-15));
      }
      double sf = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          sf += std::max(0.0, 50.0 - std::hypot(xs[i] - xs[j], ys[i] - ys[j]));
        }
      }
      CHECK(kernels::scalar::shortfall_sum(xs, ys, 50.0) == doctest::Approx(sf).epsilon(1e-13));
    }
  }

  TEST_CASE("vector backend is bit-identical to the scalar backend") {
    if (!kernels::avx2_available()) {
      MESSAGE("AVX2 not available on this machine; nothing to compare");
      return;
    }
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = pick(rng, 70);
      auto x = random_complex(n, rng);
      auto y1 = random_complex(n, rng);
      auto y2 = y1;
      const cplx a{uniform(rng, -2, 2), uniform(rng, -2, 2)};
      kernels::scalar::complex_sub_scaled(y1, a, x);
      kernels::avx2::complex_sub_scaled(y2, a, x);
      CHECK(y1 == y2);
      auto w = random_real(n, rng, 0, 3);
      auto xs = random_real(n, rng, 0, 300), ys = random_real(n, rng, 0, 300);
      std::vector<double> o1(n), o2(n);
      kernels::scalar::distances_from(1.5, 2.5, xs, ys, o1);
      kernels::avx2::distances_from(1.5, 2.5, xs, ys, o2);
      CHECK(o1 == o2);
      // Reductions may reassociate; they agree to rounding.
      const auto d1 = kernels::scalar::complex_dot(y1, x), d2 = kernels::avx2::complex_dot(y1, x);
      CHECK(std::abs(d1 - d2) <= 1e-13 * (1.0 + std::abs(d1)));
      const double n1 = kernels::scalar::weighted_norm_sq(w, x), n2 = kernels::avx2::weighted_norm_sq(w, x);
      CHECK(std::abs(n1 - n2) <= 1e-13 * (1.0 + n1));
      const double s1 = kernels::scalar::shortfall_sum(xs, ys, 50.0);
      const double s2 = kernels::avx2::shortfall_sum(xs, ys, 50.0);
      CHECK(std::abs(s1 - s2) <= 1e-12 * (1.0 + s1));
    }
  }

  TEST_CASE("backend selection") {
    const auto before = kernels::active_backend();
    kernels::select_backend(kernels::Backend::scalar);
    CHECK(kernels::active_backend() == kernels::Backend::scalar);
    CHECK(kernels::backend_name(kernels::Backend::scalar) == "scalar");
    if (kernels::avx2_available()) {
      kernels::select_backend(kernels::Backend::avx2);
      CHECK(kernels::active_backend() == kernels::Backend::avx2);
    } else {
      CHECK_THROWS_AS(kernels::select_backend(kernels::Backend::avx2), Error);
    }
    kernels::select_backend(before);
  }

  TEST_CASE("annual power agrees across backends") {
    if (!kernels::avx2_available()) return;
    Rng rng(5);
    const auto ev = testing::perth_evaluator();
    const auto pts = testing::random_points(9, farm_side(9), rng);
    const auto before = kernels::active_backend();
    kernels::select_backend(kernels::Backend::scalar);
    const double a = ev->annual_power(pts);
    kernels::select_backend(kernels::Backend::avx2);
    const double b = ev->annual_power(pts);
    kernels::select_backend(before);
    CHECK(b == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_SUITE("special") {
  TEST_CASE("J0 against the standard library") {
    Rng rng(1);
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double x = i < 10000 ? uniform(rng, 0.0, 30.0) : uniform(rng, 0.0, 2e4);
      worst = std::max(worst, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)));
    }
    CHECK(worst < 1e-12);
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(bessel_j0(-3.7) == bessel_j0(3.7));
    CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-15);
  }
}

TEST_SUITE("linalg") {
  TEST_CASE("LU solve matches an independent dense solver") {
    Rng rng(7);
    for (std::size_t n = 1; n <= 24; ++n) {
      const ComplexMatrix a = random_matrix(n, rng);
      const auto b = random_complex(n, rng);
      ComplexLu lu(a);
      REQUIRE(lu.ok());
      const auto x = lu.solve(b);
      const Eigen::VectorXcd eb = Eigen::Map<const Eigen::VectorXcd>(b.data(), static_cast<Eigen::Index>(n));
      const Eigen::VectorXcd ex = to_eigen(a).partialPivLu().solve(eb);
      CHECK(rel_error(x, ex) < 1e-10);
      const Eigen::VectorXcd ey = to_eigen(a).adjoint().partialPivLu().solve(eb);
      CHECK(rel_error(lu.solve_adjoint(b), ey) < 1e-10);
    }
  }

  TEST_CASE("multiple right-hand sides") {
    Rng rng(8);
    const std::size_t n = 9, m = 5;
    const ComplexMatrix a = random_matrix(n, rng);
    auto block = random_complex(n * m, rng);
    const auto original = block;
    ComplexLu lu(a);
    lu.solve_in_place(block, m);
    for (std::size_t c = 0; c < m; ++c) {
      std::vector<cplx> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = original[i * m + c];
      const auto x = lu.solve(col);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(block[i * m + c] - x[i]) < 1e-12);
    }
  }

  TEST_CASE("inverse norm estimate and singular input") {
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
      const ComplexMatrix a = random_matrix(8, rng);
      const Eigen::MatrixXcd inv = to_eigen(a).inverse();
      const double exact = inv.cwiseAbs().colwise().sum().maxCoeff();
      const double est = ComplexLu(a).inverse_norm1_estimate();
      CHECK(est <= exact * (1 + 1e-10));
      CHECK(est >= exact / 10.0);
    }
    ComplexMatrix singular(3);
    singular(0, 0) = 1.0;
    singular(1, 1) = 1.0;
    CHECK_FALSE(ComplexLu(singular).ok());
  }
}
