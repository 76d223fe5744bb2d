#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locus/numerics.hpp"

// Finite-dimensional operator algebras over M_n: generation from a set of
// operators, commutant and double commutant, subspace intersection and
// containment. An algebra is stored as a Hilbert-Schmidt-orthonormal basis;
// all algebras here are unital and adjoint-closed (the adjoint closure is
// imposed even on inputs that are not, so double commutants behave in the
// standard von Neumann fashion).

namespace locus {

struct OperatorAlgebra {
  int ambient_dim = 0;
  // HS-orthonormal: trace(B_i^H B_j) = delta_ij. 1 <= size <= n^2.
  std::vector<CMatrix> basis;
  std::string label;

  int dim() const { return static_cast<int>(basis.size()); }
  // Scalars-only algebras are kept, just marked.
  bool degenerate() const { return dim() == 1; }
  // n^2 x dim matrix whose columns are the vectorized basis elements.
  CMatrix span_matrix() const;
};

// Smallest unital, adjoint-closed, multiplicatively closed subspace
// containing the generators. Enlargement rounds are capped at n^2; the cap
// being hit indicates numerical drift and throws.
OperatorAlgebra generate(const std::vector<CMatrix>& generators,
                         int ambient_dim, double eps = kEps);

// {X : XB = BX for every basis element B}.
OperatorAlgebra commutant(const OperatorAlgebra& a, double eps = kEps);

OperatorAlgebra double_commutant(const OperatorAlgebra& a, double eps = kEps);

// Subspace intersection; always contains the identity.
OperatorAlgebra intersect(const OperatorAlgebra& a, const OperatorAlgebra& b,
                          double eps = kEps);

bool contains(const OperatorAlgebra& a, const CMatrix& x, double eps = kEps);

// Equality as subspaces of M_n.
bool equal_algebras(const OperatorAlgebra& a, const OperatorAlgebra& b,
                    double eps = kEps);

// intersect(a, commutant(a)).
OperatorAlgebra center(const OperatorAlgebra& a, double eps = kEps);

// a is contained in b as a subspace.
bool subalgebra_of(const OperatorAlgebra& a, const OperatorAlgebra& b,
                   double eps = kEps);

struct AlgebraCheck {
  bool ok = true;
  std::string issue;  // first failing invariant, empty when ok
};

// Validates: unital, adjoint-closed, multiplicatively closed, basis
// HS-orthonormal.
AlgebraCheck validate_algebra(const OperatorAlgebra& a, double eps = 1e-7);

// Scalars-only algebra span{I/sqrt(n)}.
OperatorAlgebra scalar_algebra(int ambient_dim, const std::string& label = "");

// Full matrix algebra M_n with the HS-normalized matrix-unit basis.
OperatorAlgebra full_algebra(int ambient_dim, const std::string& label = "");

// Diagonal algebra D_n.
OperatorAlgebra diagonal_algebra(int ambient_dim,
                                 const std::string& label = "");

CMatrix vec(const CMatrix& m);
CMatrix unvec(const CMatrix& v, int rows, int cols);

}  // namespace locus
