#include "qthermo/matrix.hpp"

#include <cmath>
#include <cstddef>

#include "qthermo/errors.hpp"

namespace qthermo {

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) {
  if (dim < 0) throw InvalidArgument("matrix dimension must be non-negative");
  entries_.assign(static_cast<std::size_t>(dim) * dim, Complex{0.0, 0.0});
}

ComplexMatrix::ComplexMatrix(int dim, std::initializer_list<Complex> entries) : ComplexMatrix(dim) {
  if (entries.size() != entries_.size())
    throw InvalidArgument("initializer list size does not match dim*dim");
  std::size_t k = 0;
  for (const auto& e : entries) entries_[k++] = e;
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += std::norm(e);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  for (const auto& e : entries_)
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
  return true;
}

double ComplexMatrix::hermiticity_error() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

double ComplexMatrix::unitarity_error() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      Complex s{0.0, 0.0};
      for (int k = 0; k < dim_; ++k) s += (*this)(i, k) * std::conj((*this)(j, k));
      if (i == j) s -= 1.0;
      m = std::max(m, std::abs(s));
    }
  }
  return m;
}

ComplexMatrix ComplexMatrix::hermitized() const {
  ComplexMatrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
  return out;
}

std::vector<Complex> ComplexMatrix::column(int j) const {
  std::vector<Complex> col(dim_);
  for (int i = 0; i < dim_; ++i) col[i] = (*this)(i, j);
  return col;
}

void ComplexMatrix::set_column(int j, const std::vector<Complex>& col) {
  if (static_cast<int>(col.size()) != dim_) throw DimensionMismatch("column size mismatch");
  for (int i = 0; i < dim_; ++i) (*this)(i, j) = col[i];
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "operator+=");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "operator-=");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& e : entries_) e *= scale;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double scale) {
  for (auto& e : entries_) e *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "operator*");
  const int d = a.dim();
  ComplexMatrix out(d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (int j = 0; j < d; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "trace_product");
  Complex t{0.0, 0.0};
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) t += a(i, j) * b(j, i);
  return t;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b + b * a;
}

ComplexMatrix conjugate_by(const ComplexMatrix& u, const ComplexMatrix& m) {
  return u * m * u.adjoint();
}

ComplexMatrix conjugate_by_adjoint(const ComplexMatrix& u, const ComplexMatrix& m) {
  return u.adjoint() * m * u;
}

ComplexMatrix diagonal_matrix(const std::vector<double>& values) {
  ComplexMatrix m(static_cast<int>(values.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = values[static_cast<std::size_t>(i)];
  return m;
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* context) {
  if (a.dim() != b.dim())
    throw DimensionMismatch(std::string(context) + ": dimensions " + std::to_string(a.dim()) +
                            " and " + std::to_string(b.dim()) + " differ");
}

}  // namespace qthermo
