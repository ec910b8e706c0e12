#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wecfarm {

using cplx = std::complex<double>;

// Dense row-major square matrix.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T value = T{}) : n_(n), data_(n * n, value) {}

  std::size_t size() const noexcept { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<T> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using RealMatrix = SquareMatrix<double>;
using ComplexMatrix = SquareMatrix<cplx>;

// LU factorisation with partial pivoting of a complex square matrix.
class ComplexLu {
 public:
  ComplexLu() = default;
  explicit ComplexLu(ComplexMatrix a) { factor(std::move(a)); }

  void factor(ComplexMatrix a);

  // False when an exactly zero pivot was met.
  bool ok() const noexcept { return ok_; }
  std::size_t size() const noexcept { return lu_.size(); }

  // max |u_kk| / min |u_kk|; a cheap lower bound on the condition number.
  double pivot_ratio() const noexcept;

  // Solves A X = B in place for a row-major n x m block of right-hand sides.
  void solve_in_place(std::span<cplx> rhs, std::size_t columns) const;
  std::vector<cplx> solve(std::span<const cplx> b) const;
  // Solves A^H x = b.
  std::vector<cplx> solve_adjoint(std::span<const cplx> b) const;

  // Estimate of ||A^-1||_1 (Hager/Higham), a few extra solves.
  double inverse_norm1_estimate() const;

 private:
  ComplexMatrix lu_;
  std::vector<std::size_t> perm_;
  bool ok_ = false;
};

double norm1(const ComplexMatrix& a);

}  // namespace wecfarm
