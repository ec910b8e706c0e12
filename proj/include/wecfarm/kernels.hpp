#pragma once

// Data-parallel inner loops of the objective and the constraint handling.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active backend is chosen once at startup from CPUID and can be
// overridden with select_backend() or the WECFARM_KERNELS environment variable
// ("scalar" or "avx2"). Element-wise kernels are bit-identical across
// backends; reductions agree to rounding.

#include <complex>
#include <span>
#include <string_view>

namespace wecfarm::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend backend);
bool avx2_available();
Backend active_backend();
// Throws Error(invalid_argument) when the backend is not supported here.
void select_backend(Backend backend);

// y[k] -= a * x[k]
void complex_sub_scaled(std::span<cplx> y, cplx a, std::span<const cplx> x);
// sum_k a[k] * x[k] (no conjugation)
cplx complex_dot(std::span<const cplx> a, std::span<const cplx> x);
// sum_k w[k] * |x[k]|^2
double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x);
// out[k] = hypot-free Euclidean distance from (px, py) to (xs[k], ys[k])
void distances_from(double px, double py, std::span<const double> xs,
                    std::span<const double> ys, std::span<double> out);
// sum over pairs i < j of max(0, min_dist - |p_i - p_j|)
double shortfall_sum(std::span<const double> xs, std::span<const double> ys,
                     double min_dist);

namespace scalar {
void complex_sub_scaled(std::span<cplx> y, cplx a, std::span<const cplx> x);
cplx complex_dot(std::span<const cplx> a, std::span<const cplx> x);
double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x);
void distances_from(double px, double py, std::span<const double> xs,
                    std::span<const double> ys, std::span<double> out);
double shortfall_sum(std::span<const double> xs, std::span<const double> ys,
                     double min_dist);
}  // namespace scalar

namespace avx2 {
// Only callable when avx2_available(); otherwise these throw.
void complex_sub_scaled(std::span<cplx> y, cplx a, std::span<const cplx> x);
cplx complex_dot(std::span<const cplx> a, std::span<const cplx> x);
double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x);
void distances_from(double px, double py, std::span<const double> xs,
                    std::span<const double> ys, std::span<double> out);
double shortfall_sum(std::span<const double> xs, std::span<const double> ys,
                     double min_dist);
}  // namespace avx2

}  // namespace wecfarm::kernels
