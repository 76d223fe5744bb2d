#include "locus/algebra.hpp"

#include <cmath>

namespace locus {

CMatrix vec(const CMatrix& m) {
  return Eigen::Map<const CMatrix>(m.data(), m.size(), 1);
}

CMatrix unvec(const CMatrix& v, int rows, int cols) {
  return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

CMatrix OperatorAlgebra::span_matrix() const {
  CMatrix s(static_cast<long>(ambient_dim) * ambient_dim, dim());
  for (int i = 0; i < dim(); ++i) s.col(i) = vec(basis[static_cast<size_t>(i)]);
  return s;
}

namespace {

OperatorAlgebra from_span(const CMatrix& span_cols, int n,
                          const std::string& label = "") {
  OperatorAlgebra a;
  a.ambient_dim = n;
  a.label = label;
  a.basis.reserve(static_cast<size_t>(span_cols.cols()));
  for (Eigen::Index i = 0; i < span_cols.cols(); ++i)
    a.basis.push_back(unvec(span_cols.col(i), n, n));
  return a;
}

}  // namespace

OperatorAlgebra generate(const std::vector<CMatrix>& generators,
                         int ambient_dim, double eps) {
  const int n = ambient_dim;
  for (const auto& g : generators)
    if (g.rows() != n || g.cols() != n)
      throw ShapeError("shape: generator size mismatch");

  CMatrix seed(static_cast<long>(n) * n, 1 + 2 * generators.size());
  seed.col(0) = vec(CMatrix::Identity(n, n));
  for (size_t i = 0; i < generators.size(); ++i) {
    seed.col(1 + 2 * static_cast<long>(i)) = vec(generators[i]);
    seed.col(2 + 2 * static_cast<long>(i)) = vec(generators[i].adjoint().eval());
  }
  CMatrix span = column_span(seed, eps);

  const int cap = n * n;
  for (int round = 0; round <= cap; ++round) {
    const Eigen::Index d = span.cols();
    CMatrix enlarged(static_cast<long>(n) * n, d + d * d);
    enlarged.leftCols(d) = span;
    Eigen::Index col = d;
    for (Eigen::Index i = 0; i < d; ++i) {
      CMatrix bi = unvec(span.col(i), n, n);
      for (Eigen::Index j = 0; j < d; ++j)
        enlarged.col(col++) = vec((bi * unvec(span.col(j), n, n)).eval());
    }
    CMatrix next = column_span(enlarged, eps);
    if (next.cols() == d) return from_span(span, n);
    span = next;
    if (round == cap)
      throw std::logic_error("algebra closure failed to stabilize");
  }
  return from_span(span, n);  // unreachable
}

OperatorAlgebra commutant(const OperatorAlgebra& a, double eps) {
  const int n = a.ambient_dim;
  const long n2 = static_cast<long>(n) * n;
  const CMatrix id = CMatrix::Identity(n, n);
  // vec(BX - XB) = (I (x) B - B^T (x) I) vec(X); stack over the basis.
  CMatrix stacked(n2 * a.dim(), n2);
  for (int i = 0; i < a.dim(); ++i) {
    const CMatrix& b = a.basis[static_cast<size_t>(i)];
    stacked.middleRows(n2 * i, n2) =
        kron(id, b) - kron(b.transpose().eval(), id);
  }
  CMatrix kernel = a.dim() == 0 ? CMatrix::Identity(n2, n2)
                                : nullspace(stacked, eps);
  return from_span(kernel, n);
}

OperatorAlgebra double_commutant(const OperatorAlgebra& a, double eps) {
  return commutant(commutant(a, eps), eps);
}

OperatorAlgebra intersect(const OperatorAlgebra& a, const OperatorAlgebra& b,
                          double eps) {
  if (a.ambient_dim != b.ambient_dim)
    throw ShapeError("shape: ambient dimension mismatch");
  const CMatrix sa = a.span_matrix();
  const CMatrix sb = b.span_matrix();
  // x in span(a) cap span(b) iff x = sa u = sb v; solve [sa | -sb] null.
  CMatrix paired(sa.rows(), sa.cols() + sb.cols());
  paired.leftCols(sa.cols()) = sa;
  paired.rightCols(sb.cols()) = -sb;
  CMatrix ker = nullspace(paired, eps);
  CMatrix inter(sa.rows(), ker.cols());
  for (Eigen::Index i = 0; i < ker.cols(); ++i)
    inter.col(i) = sa * ker.col(i).head(sa.cols());
  return from_span(column_span(inter, eps), a.ambient_dim);
}

bool contains(const OperatorAlgebra& a, const CMatrix& x, double eps) {
  if (x.rows() != a.ambient_dim || x.cols() != a.ambient_dim)
    throw ShapeError("shape: element size mismatch");
  const CMatrix v = vec(x);
  const CMatrix s = a.span_matrix();
  const CMatrix resid = v - s * (s.adjoint() * v);
  const double scale = std::max(v.norm(), 1.0);
  return resid.norm() <= eps * scale * 10.0;
}

bool subalgebra_of(const OperatorAlgebra& a, const OperatorAlgebra& b,
                   double eps) {
  if (a.ambient_dim != b.ambient_dim) return false;
  for (const auto& m : a.basis)
    if (!contains(b, m, eps)) return false;
  return true;
}

bool equal_algebras(const OperatorAlgebra& a, const OperatorAlgebra& b,
                    double eps) {
  return a.dim() == b.dim() && subalgebra_of(a, b, eps) &&
         subalgebra_of(b, a, eps);
}

OperatorAlgebra center(const OperatorAlgebra& a, double eps) {
  return intersect(a, commutant(a, eps), eps);
}

AlgebraCheck validate_algebra(const OperatorAlgebra& a, double eps) {
  const int n = a.ambient_dim;
  if (n < 1) return {false, "ambient_dim must be >= 1"};
  if (a.dim() < 1 || a.dim() > n * n)
    return {false, "basis size out of range [1, n^2]"};
  for (const auto& b : a.basis)
    if (b.rows() != n || b.cols() != n)
      return {false, "basis element has wrong shape"};
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      const Complex ip =
          (a.basis[static_cast<size_t>(i)].adjoint() * a.basis[static_cast<size_t>(j)]).trace();
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(ip - want) > eps)
        return {false, "basis not HS-orthonormal"};
    }
  if (!contains(a, CMatrix::Identity(n, n), eps))
    return {false, "algebra is not unital"};
  for (const auto& b : a.basis)
    if (!contains(a, b.adjoint().eval(), eps))
      return {false, "algebra is not adjoint-closed"};
  for (const auto& bi : a.basis)
    for (const auto& bj : a.basis)
      if (!contains(a, (bi * bj).eval(), eps))
        return {false, "algebra is not multiplicatively closed"};
  return {};
}

OperatorAlgebra scalar_algebra(int n, const std::string& label) {
  OperatorAlgebra a;
  a.ambient_dim = n;
  a.label = label;
  a.basis.push_back(CMatrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
  return a;
}

OperatorAlgebra full_algebra(int n, const std::string& label) {
  OperatorAlgebra a;
  a.ambient_dim = n;
  a.label = label;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      a.basis.push_back(e);
    }
  return a;
}

OperatorAlgebra diagonal_algebra(int n, const std::string& label) {
  OperatorAlgebra a;
  a.ambient_dim = n;
  a.label = label;
  for (int i = 0; i < n; ++i) {
    CMatrix e = CMatrix::Zero(n, n);
    e(i, i) = 1.0;
    a.basis.push_back(e);
  }
  return a;
}

}  // namespace locus
