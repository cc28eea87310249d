#pragma once

// Exact linear algebra over Integer and Rational matrices.

#include "bott/scalar.hpp"

#include <optional>
#include <vector>

namespace bott {

// Fraction-free (Bareiss) determinant of a square integer matrix.
Integer determinant(const IntMatrix& m);

// Rank over the rationals.
template <typename Scalar>
Eigen::Index rank(const Matrix<Scalar>& m);

// Reduced row echelon form over the rationals; returns pivot columns.
std::vector<Eigen::Index> row_reduce(QMatrix& m);

// Some solution of a*x = b, or nullopt when the system is inconsistent.
std::optional<QVector> solve(const QMatrix& a, const QVector& b);

// Inverse of a square rational matrix, or nullopt when singular.
std::optional<QMatrix> inverse(const QMatrix& a);

// Inverse of a unimodular integer matrix; throws std::domain_error otherwise.
IntMatrix unimodular_inverse(const IntMatrix& a);

// Basis (as columns) of the rational kernel of m.
QMatrix kernel(const QMatrix& m);

struct HermiteForm {
  IntMatrix h;  // row-style HNF, h = u * a
  IntMatrix u;  // unimodular
  std::vector<Eigen::Index> pivots;
};

// Row-style Hermite normal form: h = u*a with h upper staircase, positive
// pivots and entries above each pivot reduced into [0, pivot).
HermiteForm hermite_normal_form(const IntMatrix& a);

// Index of the lattice spanned by the columns of `generators` inside Z^rows,
// or 0 when the columns do not span a full-rank sublattice.
Integer lattice_index(const IntMatrix& generators);

// gcd of the entries is 1.
bool is_primitive(const IntVector& v);

// v divided by the gcd of its entries.
IntVector primitive_part(const IntVector& v);

// Dot product with overflow checks (plain Eigen dot is also checked through
// Integer, this is a convenience for mixed rational use).
template <typename Scalar>
Scalar dot(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  Scalar s = Scalar(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename Scalar>
Eigen::Index rank(const Matrix<Scalar>& m) {
  QMatrix q = to_rational(m);
  return static_cast<Eigen::Index>(row_reduce(q).size());
}

}  // namespace bott
