#include "locus/tps.hpp"

#include <algorithm>
#include <cmath>

namespace locus {

TpsSpec TpsSpec::standard(DimVector dims) {
  TpsSpec t;
  const long n = dims.product();
  t.dims = std::move(dims);
  t.unitary = CMatrix::Identity(n, n);
  for (int i = 0; i < t.dims.factor_count(); ++i)
    t.loci_labels.push_back("q" + std::to_string(i));
  return t;
}

namespace {

void factorization_rec(long n, int min_factor, std::vector<int>& acc,
                       std::vector<DimVector>& out) {
  if (n == 1) {
    out.push_back(DimVector(acc));
    return;
  }
  for (long f = min_factor; f <= n; ++f)
    if (n % f == 0) {
      acc.push_back(static_cast<int>(f));
      factorization_rec(n / f, static_cast<int>(f), acc, out);
      acc.pop_back();
    }
}

}  // namespace

std::vector<DimVector> factorizations(long n) {
  if (n < 2) throw std::invalid_argument("factorizations requires n >= 2");
  std::vector<DimVector> out;
  std::vector<int> acc;
  factorization_rec(n, 2, acc, out);
  std::sort(out.begin(), out.end(), [](const DimVector& a, const DimVector& b) {
    if (a.factor_count() != b.factor_count())
      return a.factor_count() < b.factor_count();
    return a.dims < b.dims;
  });
  return out;
}

BasisPartitionSet svozil_partitions(const DimVector& dims) {
  const long n = dims.product();
  if (n > 4096)
    throw std::invalid_argument("svozil_partitions: dimension too large");
  BasisPartitionSet set;
  set.n = n;
  for (int f = 0; f < dims.factor_count(); ++f) {
    std::vector<std::vector<int>> blocks(static_cast<size_t>(dims[f]));
    for (long idx = 0; idx < n; ++idx) {
      const auto digits = index_to_digits(idx, dims);
      blocks[static_cast<size_t>(digits[static_cast<size_t>(f)])].push_back(
          static_cast<int>(idx));
    }
    set.partitions.push_back(
        Partition::from_blocks(static_cast<int>(n), std::move(blocks)));
  }
  return set;
}

std::vector<CMatrix> hermitian_basis(int d) {
  std::vector<CMatrix> basis;
  basis.push_back(CMatrix::Identity(d, d));
  const Complex i_unit(0.0, 1.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix sym = CMatrix::Zero(d, d);
      sym(j, k) = sym(k, j) = 1.0;
      basis.push_back(sym);
      CMatrix asym = CMatrix::Zero(d, d);
      asym(j, k) = -i_unit;
      asym(k, j) = i_unit;
      basis.push_back(asym);
    }
  for (int l = 1; l < d; ++l) {
    CMatrix diag = CMatrix::Zero(d, d);
    for (int j = 0; j < l; ++j) diag(j, j) = 1.0;
    diag(l, l) = -static_cast<double>(l);
    basis.push_back(diag * std::sqrt(2.0 / (l * (l + 1.0))));
  }
  return basis;
}

OperatorAlgebra local_algebra(const TpsSpec& tps, int locus_index) {
  const int k = tps.factor_count();
  if (locus_index < 0 || locus_index >= k)
    throw std::out_of_range("locus index out of range");
  const long n = tps.ambient_dim();
  long before = 1, after = 1;
  for (int i = 0; i < locus_index; ++i) before *= tps.dims[i];
  for (int i = locus_index + 1; i < k; ++i) after *= tps.dims[i];
  const CMatrix ib = CMatrix::Identity(before, before);
  const CMatrix ia = CMatrix::Identity(after, after);

  OperatorAlgebra a;
  a.ambient_dim = static_cast<int>(n);
  a.label = tps.loci_labels[static_cast<size_t>(locus_index)];
  for (const auto& g : hermitian_basis(tps.dims[locus_index])) {
    CMatrix embedded = kron(kron(ib, g), ia);
    embedded = tps.unitary * embedded * tps.unitary.adjoint();
    const double hs_norm =
        std::sqrt((embedded.adjoint() * embedded).trace().real());
    a.basis.push_back(embedded / hs_norm);
  }
  return a;
}

TpsSpec twist(const TpsSpec& tps, const CMatrix& u) {
  if (u.rows() != tps.ambient_dim() || u.cols() != tps.ambient_dim())
    throw ShapeError("shape: twist unitary size mismatch");
  if (!is_unitary(u)) throw std::invalid_argument("not-unitary");
  TpsSpec out = tps;
  out.unitary = u * tps.unitary;
  return out;
}

QubitReconstruction reconstruct_qubits(const OperatorAlgebra& a) {
  QubitReconstruction out;
  const int dim = a.dim();
  const int side = static_cast<int>(std::llround(std::sqrt(static_cast<double>(dim))));
  if (side * side != dim) {
    out.reason = "not a factor";
    return out;
  }
  if (center(a).dim() != 1) {
    out.reason = "not a factor";
    return out;
  }
  out.factor_side = side;
  if (side < 2) {
    out.reason = "degenerate";
    return out;
  }
  const auto facts = factorizations(side);
  // Finest factorization = prime factors; it is the last after sorting by
  // factor count, and unique there.
  const DimVector primes = facts.back();
  if (primes.factor_count() == 1) {
    out.reason = "prime dimension";
    return out;
  }
  out.tps = TpsSpec::standard(primes);
  out.partitions = svozil_partitions(primes);
  return out;
}

CMatrix bell_change_unitary() {
  CMatrix u = CMatrix::Zero(4, 4);
  const double s = 1.0 / std::sqrt(2.0);
  const Complex is(0.0, 1.0 / std::sqrt(2.0));
  // Columns: Phi+, i*Psi+, Psi-, Phi-. The column order and the phase on
  // Psi+ matter: the textbook order (Phi+, Psi+, Phi-, Psi-) differs from
  // the identity frame only by local rotations (it sends every
  // computational basis state to a product state), and without the phase
  // one Pauli direction per side survives in both frames. This choice
  // leaves only scalars in every intersection with the standard local
  // algebras while still mapping |00> to Phi+.
  u(0, 0) = s; u(3, 0) = s;
  u(1, 1) = is; u(2, 1) = is;
  u(1, 2) = s; u(2, 2) = -s;
  u(0, 3) = s; u(3, 3) = -s;
  return u;
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

}  // namespace locus
