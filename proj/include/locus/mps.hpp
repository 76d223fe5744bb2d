#pragma once

#include <string>
#include <utility>
#include <vector>

#include "locus/algebra.hpp"
#include "locus/states.hpp"
#include "locus/tps.hpp"

// Virtual multipartite structures: labelled collections of unital,
// double-commutant-closed subalgebras. Loci may overlap and need not
// span the whole algebra; scalar-only loci are kept and flagged
// degenerate rather than dropped.

namespace locus {

struct Mps {
  int ambient_dim = 0;
  std::vector<OperatorAlgebra> loci;  // labels unique, stored per algebra
  std::string provenance;
};

struct MpsCatalog {
  int ambient_dim = 0;
  std::vector<Mps> members;
};

struct MpsDiagnostics {
  bool valid = true;
  std::string issue;  // names the first failing locus
};

MpsDiagnostics is_valid_mps(const Mps& candidate, double eps = 1e-7);

// p is coarser than q: every locus of q embeds in some single locus of p
// (grouping q's loci by their target yields the partition in the
// coarse-graining definition; containment of each generator suffices
// because the target is multiplicatively closed).
bool coarser(const Mps& p, const Mps& q, double eps = kEps);

// Least upper bound: all tuple-wise intersections of one locus per member,
// deduplicated by algebra equality; scalar results kept and degenerate.
Mps join(const std::vector<Mps>& members, double eps = kEps);

enum class SepMode { Pairwise, Multiway };

struct RelationResult {
  bool holds = true;
  double max_defect = 0.0;
  std::string witness;  // first violating tuple, human-readable
};

// Mean-value factorization of rho over the loci. Pairwise mode tests every
// ordered pair of distinct loci over their basis elements; multiway mode
// tests one basis element per locus across all loci, both product orders.
// Basis elements are rescaled to unit spectral norm before testing, so
// defects are scale-free; checking on a basis suffices by bilinearity in
// each slot (see tests for the randomized full-element cross-check).
RelationResult separability_relation(const State& rho, const Mps& p,
                                     SepMode mode, double eps_rel = kEpsRel);

// Indices of the catalog members rho is separable against.
std::vector<size_t> pi_over_catalog(const State& rho, const MpsCatalog& catalog,
                                    SepMode mode, double eps_rel = kEpsRel);

struct RecoveredLoci {
  Mps result;
  bool empty_union = false;  // no (state, member) pair qualified
  // Contributing (state name, member provenance/first label) pairs.
  std::vector<std::pair<std::string, std::string>> provenance;
};

// Join of the union over all available states of their qualifying catalog
// members. Empty union falls back to the trivial scalar locus with a
// diagnostic, not an error.
RecoveredLoci recover_loci(const StateSet& available, const MpsCatalog& catalog,
                           SepMode mode, double eps_rel = kEpsRel);

struct LocusReport {
  std::string label;
  int dim = 0;
  bool degenerate = false;
  int center_dim = 0;
  // From reconstruct_qubits: local factor side (0 if not a factor) and the
  // recovered virtual dims (empty if none).
  int factor_side = 0;
  std::vector<int> qubit_dims;
  std::string qubit_reason;
};

struct MpsReport {
  std::vector<LocusReport> loci;
  std::vector<std::vector<bool>> pairwise_commuting;
};

MpsReport mps_report(const Mps& p);

// The MPS whose loci are the local observable algebras of the TPS.
Mps tps_to_mps(const TpsSpec& tps);

// Single full-matrix locus M_n.
Mps trivial_mps(int ambient_dim);

}  // namespace locus
