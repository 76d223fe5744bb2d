#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locus/algebra.hpp"
#include "locus/partitions.hpp"

// Tensor product structures: a factorization of the ambient dimension plus
// a global unitary frame. The factor order is canonicalized non-decreasing
// in factorization catalogs; an arbitrary basis choice is recovered through
// the twist unitary (permutation matrices included).

namespace locus {

struct TpsSpec {
  DimVector dims;
  CMatrix unitary;  // side = dims.product(), U^H U = I to 1e-9
  std::vector<std::string> loci_labels;

  // Identity frame with labels "q0", "q1", ...
  static TpsSpec standard(DimVector dims);
  int factor_count() const { return dims.factor_count(); }
  long ambient_dim() const { return dims.product(); }
};

struct BasisPartitionSet {
  long n = 0;
  // One partition of the basis-index set per factor; any choice of one
  // block per partition intersects in exactly one index.
  std::vector<Partition> partitions;
};

// All multiplicative partitions of n into factors >= 2, non-decreasing,
// including the trivial [n]; sorted by factor count then lexicographically.
std::vector<DimVector> factorizations(long n);

// Partition i groups basis indices by their i-th mixed-radix digit.
BasisPartitionSet svozil_partitions(const DimVector& dims);

// U (I (x) ... (x) M_{n_i} (x) ... (x) I) U^H. For each factor the stored
// basis is the HS-normalized Hermitian operator basis (Pauli matrices for
// dimension 2, generalized Gell-Mann above) tensored with identities, so
// witness scans downstream see physically named directions.
OperatorAlgebra local_algebra(const TpsSpec& tps, int locus_index);

// Replace the frame by u * U.
TpsSpec twist(const TpsSpec& tps, const CMatrix& u);

struct QubitReconstruction {
  std::optional<TpsSpec> tps;
  std::optional<BasisPartitionSet> partitions;
  std::string reason;  // set when tps is absent ("prime dimension", ...)
  // Local dimension d when the algebra is a full matrix factor, else 0.
  int factor_side = 0;
};

// If `a` acts as a full matrix algebra M_d (decided by dim(a) = d^2 plus a
// scalar center) with d composite, return the TPS over the locus with the
// prime factorization of d and the attached Svozil partitions.
QubitReconstruction reconstruct_qubits(const OperatorAlgebra& a);

// Hermitian HS-orthogonal operator basis of M_d: identity, then the
// generalized Gell-Mann family (for d=2: I, sigma_x, sigma_y, sigma_z).
std::vector<CMatrix> hermitian_basis(int d);

// The Bell frame used throughout the demos: columns are the Bell vectors
// in the order Phi+, Psi+, Psi-, Phi-. This ordering makes the twisted
// qubits genuinely incompatible with the computational ones; the textbook
// order (Phi+, Psi+, Phi-, Psi-) differs from the identity frame only by
// local rotations and would not twist anything.
CMatrix bell_change_unitary();

bool is_unitary(const CMatrix& u, double tol = 1e-8);

}  // namespace locus
