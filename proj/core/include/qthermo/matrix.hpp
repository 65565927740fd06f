#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace qthermo {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major storage. Sized for the few-level
/// systems this library targets (d <= ~16); no attempt at BLAS dispatch.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim);
  ComplexMatrix(int dim, std::initializer_list<Complex> entries);

  static ComplexMatrix identity(int dim);

  int dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  Complex& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i) * dim_ + j]; }
  const Complex& operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * dim_ + j];
  }

  const std::vector<Complex>& entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

  /// max |M - M^dagger| entrywise.
  double hermiticity_error() const;
  /// max |M M^dagger - 1| entrywise.
  double unitarity_error() const;

  ComplexMatrix hermitized() const;

  std::vector<Complex> column(int j) const;
  void set_column(int j, const std::vector<Complex>& col);

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);
  ComplexMatrix& operator*=(double scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  int dim_ = 0;
  std::vector<Complex> entries_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr[a b] without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// u m u^dagger.
ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& m);
/// u^dagger m u.
ComplexMatrix conjugate_by_adjoint(const ComplexMatrix& u, const ComplexMatrix& m);

ComplexMatrix diagonal_matrix(const std::vector<double>& values);

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* context);

}  // namespace qthermo
