#pragma once

#include <string>
#include <vector>

#include "locus/mps.hpp"
#include "locus/numerics.hpp"
#include "locus/tps.hpp"

// Classical product structures recovered from sampled distributions: the
// product-correlation defect over block indicators, PCA factor counting,
// and exhaustive/heuristic CPS recovery.

namespace locus {

struct SampleSet {
  long space_size = 0;
  std::vector<RVector> samples;  // each non-negative, sums to 1
  std::string name;

  static SampleSet from_samples(std::vector<RVector> samples,
                                std::string name = "");
};

struct CpsCandidate {
  DimVector dims;
  // Bijection: configuration index -> mixed-radix code under dims.
  std::vector<int> code_of_index;
  double violation = 0.0;
  bool exact = false;  // violation <= exactness threshold

  int digit_of(int index, int factor) const;
  // Partition of the index set by the given factor's digit.
  Partition digit_partition(int factor) const;
  std::string canonical_key() const;  // structure up to digit relabelling
};

// Max over all pairs of distinct factors and all digit-indicator pairs of
// |p(e_i f_j) - p(e_i) p(f_j)|; 0 means exactly product-compatible. The
// trivial single-factor CPS scores 0 vacuously.
double eloccom_defect(const RVector& p, const CpsCandidate& cps);

struct PcaResult {
  int count = 0;
  RVector spectrum;  // covariance eigenvalues, decreasing
};

// Eigenvalue spectrum of the centered sample covariance (1/(N-1)); count
// of eigenvalues > tau * largest, 0 when the largest is <= 1e-12.
PcaResult pca_factor_count(const SampleSet& samples, double tau);

struct CpsRecovery {
  std::vector<CpsCandidate> candidates;  // ascending violation
  std::string reason;  // "prime size" when no nontrivial factorization
};

// Search all nontrivial factorizations of |S|. For |S| <= 9 the index-map
// space is exhausted (all digit-class partition systems, i.e. bijections
// up to per-factor digit relabelling); for 10 <= |S| <= 12 a seeded
// swap-descent heuristic is used per factorization. Larger sizes rejected.
CpsRecovery recover_cps(const SampleSet& samples,
                        double exact_threshold = 1e-6, unsigned seed = 1);

// The abelian MPS induced by the CPS: one locus per factor, spanned by the
// digit-class indicator projectors. Used for the classical/quantum
// consistency checks.
Mps cps_diagonal_mps(const CpsCandidate& cps);

}  // namespace locus
