#include "bott/linalg.hpp"

#include <stdexcept>

namespace bott {

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(std::stoll(text)));
    return Rational(Integer(std::stoll(text.substr(0, slash))), Integer(std::stoll(text.substr(slash + 1))));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("not a rational number: '" + text + "'");
  }
}

IntVector make_vector(std::initializer_list<std::int64_t> values) {
  IntVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (auto x : values) v[i++] = x;
  return v;
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index i = k + 1; i < n; ++i) {
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return 0;
      a.row(k).swap(a.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::vector<Eigen::Index> row_reduce(QMatrix& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index p = -1;
    for (Eigen::Index i = row; i < m.rows(); ++i) {
      if (m(i, col) != Rational(0)) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    m.row(row).swap(m.row(p));
    Rational inv = Rational(1) / m(row, col);
    for (Eigen::Index j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == Rational(0)) continue;
      Rational f = m(i, col);
      for (Eigen::Index j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::optional<QVector> solve(const QMatrix& a, const QVector& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("solve: dimension mismatch");
  QMatrix aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  QVector x = QVector::Constant(a.cols(), Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(static_cast<Eigen::Index>(r), a.cols());
  return x;
}

std::optional<QMatrix> inverse(const QMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const Eigen::Index n = a.rows();
  QMatrix aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = QMatrix::Identity(n, n);
  auto pivots = row_reduce(aug);
  if (static_cast<Eigen::Index>(pivots.size()) < n || (n > 0 && pivots[n - 1] >= n)) return std::nullopt;
  return QMatrix(aug.rightCols(n));
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  auto inv = inverse(to_rational(a));
  if (!inv) throw std::domain_error("matrix is singular");
  IntMatrix out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Rational& x = (*inv)(i, j);
      if (!x.is_integer()) throw std::domain_error("matrix is not unimodular");
      out(i, j) = x.num();
    }
  }
  return out;
}

QMatrix kernel(const QMatrix& m) {
  QMatrix r = m;
  auto pivots = row_reduce(r);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Eigen::Index> free;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (!is_pivot[static_cast<std::size_t>(c)]) free.push_back(c);
  }
  QMatrix basis = QMatrix::Constant(m.cols(), static_cast<Eigen::Index>(free.size()), Rational(0));
  for (std::size_t k = 0; k < free.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    basis(free[k], col) = 1;
    for (std::size_t row = 0; row < pivots.size(); ++row) {
      basis(pivots[row], col) = -r(static_cast<Eigen::Index>(row), free[k]);
    }
  }
  return basis;
}

HermiteForm hermite_normal_form(const IntMatrix& a) {
  HermiteForm out{a, IntMatrix::Identity(a.rows(), a.rows()), {}};
  IntMatrix& h = out.h;
  IntMatrix& u = out.u;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < h.cols() && row < h.rows(); ++col) {
    // Euclid on the column below `row` using unimodular row combinations.
    for (Eigen::Index i = row + 1; i < h.rows(); ++i) {
      if (h(i, col) == 0) continue;
      auto [g, x, y] = extended_gcd(h(row, col), h(i, col));
      Integer p = h(row, col) / g;
      Integer q = h(i, col) / g;
      IntVector hr = h.row(row).transpose(), hi = h.row(i).transpose();
      IntVector ur = u.row(row).transpose(), ui = u.row(i).transpose();
      h.row(row) = (hr * x + hi * y).transpose();
      h.row(i) = (hi * p - hr * q).transpose();
      u.row(row) = (ur * x + ui * y).transpose();
      u.row(i) = (ui * p - ur * q).transpose();
    }
    if (h(row, col) == 0) continue;
    if (h(row, col) < 0) {
      h.row(row) = (-h.row(row)).eval();
      u.row(row) = (-u.row(row)).eval();
    }
    for (Eigen::Index i = 0; i < row; ++i) {
      Integer f = floor_div(h(i, col), h(row, col));
      if (f == 0) continue;
      h.row(i) = (h.row(i) - h.row(row) * f).eval();
      u.row(i) = (u.row(i) - u.row(row) * f).eval();
    }
    out.pivots.push_back(col);
    ++row;
  }
  return out;
}

Integer lattice_index(const IntMatrix& generators) {
  // Column span of g equals row span of g^T.
  HermiteForm hnf = hermite_normal_form(generators.transpose());
  if (static_cast<Eigen::Index>(hnf.pivots.size()) < generators.rows()) return 0;
  Integer index = 1;
  for (std::size_t r = 0; r < hnf.pivots.size(); ++r) index *= hnf.h(static_cast<Eigen::Index>(r), hnf.pivots[r]);
  return index;
}

bool is_primitive(const IntVector& v) {
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v[i]);
  return g == 1;
}

IntVector primitive_part(const IntVector& v) {
  Integer g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v[i]);
  if (g == 0) throw std::domain_error("primitive part of the zero vector");
  return v.unaryExpr([g](Integer x) { return x / g; });
}

}  // namespace bott
