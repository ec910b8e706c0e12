#include "wecfarm/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "wecfarm/error.hpp"

namespace wecfarm::kernels {
namespace {

struct Table {
  void (*sub_scaled)(std::span<cplx>, cplx, std::span<const cplx>);
  cplx (*dot)(std::span<const cplx>, std::span<const cplx>);
  double (*norm_sq)(std::span<const double>, std::span<const cplx>);
  void (*distances)(double, double, std::span<const double>, std::span<const double>,
                    std::span<double>);
  double (*shortfall)(std::span<const double>, std::span<const double>, double);
};

constexpr Table kScalarTable{scalar::complex_sub_scaled, scalar::complex_dot,
                             scalar::weighted_norm_sq, scalar::distances_from,
                             scalar::shortfall_sum};

#ifdef WECFARM_HAVE_AVX2_KERNELS
constexpr Table kAvx2Table{avx2::complex_sub_scaled, avx2::complex_dot,
                           avx2::weighted_norm_sq, avx2::distances_from,
                           avx2::shortfall_sum};
#endif

bool detect_avx2() {
#ifdef WECFARM_HAVE_AVX2_KERNELS
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table* table_for(Backend backend) {
#ifdef WECFARM_HAVE_AVX2_KERNELS
  if (backend == Backend::avx2) return &kAvx2Table;
#endif
  (void)backend;
  return &kScalarTable;
}

Backend initial_backend() {
  if (const char* env = std::getenv("WECFARM_KERNELS")) {
    const std::string choice(env);
    if (choice == "scalar") return Backend::scalar;
  }
  return detect_avx2() ? Backend::avx2 : Backend::scalar;
}

struct State {
  std::atomic<Backend> backend{initial_backend()};
  std::atomic<const Table*> table{table_for(backend.load())};
};

State& state() {
  static State s;
  return s;
}

const Table& active() { return *state().table.load(std::memory_order_relaxed); }

void require_avx2() {
  if (!avx2_available()) {
    throw Error(ErrorCode::invalid_argument, "AVX2 kernels are not available on this CPU");
  }
}

}  // namespace

std::string_view backend_name(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_available() {
  static const bool available = detect_avx2();
  return available;
}

Backend active_backend() { return state().backend.load(); }

void select_backend(Backend backend) {
  if (backend == Backend::avx2) require_avx2();
  state().backend.store(backend);
  state().table.store(table_for(backend));
}

void complex_sub_scaled(std::span<cplx> y, cplx a, std::span<const cplx> x) {
  active().sub_scaled(y, a, x);
}
cplx complex_dot(std::span<const cplx> a, std::span<const cplx> x) {
  return active().dot(a, x);
}
double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x) {
  return active().norm_sq(w, x);
}
void distances_from(double px, double py, std::span<const double> xs,
                    std::span<const double> ys, std::span<double> out) {
  active().distances(px, py, xs, ys, out);
}
double shortfall_sum(std::span<const double> xs, std::span<const double> ys,
                     double min_dist) {
  return active().shortfall(xs, ys, min_dist);
}

#ifndef WECFARM_HAVE_AVX2_KERNELS
namespace avx2 {
void complex_sub_scaled(std::span<cplx>, cplx, std::span<const cplx>) { require_avx2(); }
cplx complex_dot(std::span<const cplx>, std::span<const cplx>) {
  require_avx2();
  return {};
}
double weighted_norm_sq(std::span<const double>, std::span<const cplx>) {
  require_avx2();
  return 0.0;
}
void distances_from(double, double, std::span<const double>, std::span<const double>,
                    std::span<double>) {
  require_avx2();
}
double shortfall_sum(std::span<const double>, std::span<const double>, double) {
  require_avx2();
  return 0.0;
}
}  // namespace avx2
#endif

}  // namespace wecfarm::kernels
