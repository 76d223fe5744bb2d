#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locus/partitions.hpp"
#include "locus/tps.hpp"

// States as linear functionals on the observable algebra. All product and
// separability checks run in the U-twisted frame of the supplied TpsSpec
// (the state is conjugated by U^H before any reshaping), which is what
// makes virtual subsystems first-class.

namespace locus {

enum class StateKind { QuantumDensity, QuantumPure, ClassicalDiagonal };

struct State {
  CMatrix rho;
  StateKind kind = StateKind::QuantumDensity;
  std::optional<CVector> pure_vector;  // set for QuantumPure
  std::string name;

  static State density(CMatrix rho, std::string name = "");
  static State pure(CVector psi, std::string name = "");

  long dim() const { return rho.rows(); }
};

// diag(p) with kind ClassicalDiagonal; entries >= 0, sum 1 to 1e-9.
State classical_embed(const RVector& p, std::string name = "");

struct StateSet {
  std::vector<State> states;  // non-empty, shared ambient dimension
  std::string name;
};

enum class Verdict { Product, Separable, Entangled, Undetermined };

std::string to_string(Verdict v);

struct SeparabilityVerdict {
  Verdict value = Verdict::Undetermined;
  // Present whenever value is Entangled or Separable: the failing cut and
  // negative partial-transpose eigenvalue, the conclusive PPT regime, or a
  // pointer to an explicit decomposition.
  std::string witness;
  double magnitude = 0.0;  // e.g. the offending eigenvalue or rank defect
};

// trace(rho * a); real up to 1e-10 for Hermitian a.
Complex expect(const State& rho, const CMatrix& a);

// Pure states: Schmidt rank 1 across every cut separating one block of
// sigma from the rest. Mixed states: rho equals the tensor product of its
// block marginals entrywise. Never returns Undetermined.
SeparabilityVerdict is_sigma_product(const State& rho, const TpsSpec& tps,
                                     const Partition& sigma);

// Pure states: separable iff sigma-product. Mixed states: PPT across every
// two-group split of sigma's blocks; a negative eigenvalue certifies
// entanglement; all-pass is conclusive only in the 2x2 / 2x3 regime,
// otherwise Undetermined (the explicit decomposition search below can
// upgrade Undetermined to Separable).
SeparabilityVerdict is_sigma_separable(const State& rho, const TpsSpec& tps,
                                       const Partition& sigma);

struct ProductTerm {
  double weight = 0.0;
  // One density matrix per block of sigma, in the twisted frame, ordered
  // like the canonical block list.
  std::vector<CMatrix> factors;
};

struct Decomposition {
  std::vector<ProductTerm> terms;
  double reconstruction_error = 0.0;  // Frobenius
  // Rebuild the full-space density matrix of one term (or of the mixture)
  // in the original, untwisted frame.
  static CMatrix assemble_term(const ProductTerm& term, const TpsSpec& tps,
                               const Partition& sigma);
  CMatrix assemble(const TpsSpec& tps, const Partition& sigma) const;
};

// Best-effort convex-decomposition search over product states across
// sigma's blocks (fully corrective conditional-gradient with seeded random
// restarts). Success means reconstruction error <= 1e-6; absence of a
// certificate is a valid outcome and never claims entanglement.
std::optional<Decomposition> decompose_separable(const State& rho,
                                                 const TpsSpec& tps,
                                                 const Partition& sigma,
                                                 int budget,
                                                 unsigned seed = 1);

struct PiResult {
  PartitionFamily separable;     // verdicts Product or Separable
  PartitionFamily undetermined;  // surfaced separately, never merged
};

// All partitions of the TPS factor set against which rho is separable.
PiResult pi_of_state(const State& rho, const TpsSpec& tps);

// Named construction helpers used by fixtures and demos.
State bell_phi_plus();
State ghz_state(int qubits);
// (1-lambda) I/4 + lambda |Phi+><Phi+|.
State werner_state(double lambda);
State basis_state(long n, long index, std::string name = "");

}  // namespace locus
