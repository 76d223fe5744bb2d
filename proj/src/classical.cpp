#include "locus/classical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

namespace locus {

SampleSet SampleSet::from_samples(std::vector<RVector> samples,
                                  std::string name) {
  if (samples.empty()) throw std::invalid_argument("sample set is empty");
  const long n = samples.front().size();
  for (const auto& p : samples) {
    if (p.size() != n) throw ShapeError("shape: sample length mismatch");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p(i) < -1e-12)
        throw std::invalid_argument("sample has a negative entry");
      sum += p(i);
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("sample does not sum to 1");
  }
  SampleSet set;
  set.space_size = n;
  set.samples = std::move(samples);
  set.name = std::move(name);
  return set;
}

int CpsCandidate::digit_of(int index, int factor) const {
  const auto digits = index_to_digits(code_of_index[static_cast<size_t>(index)], dims);
  return digits[static_cast<size_t>(factor)];
}

Partition CpsCandidate::digit_partition(int factor) const {
  const int n = static_cast<int>(code_of_index.size());
  std::vector<std::vector<int>> blocks(static_cast<size_t>(dims[factor]));
  for (int s = 0; s < n; ++s)
    blocks[static_cast<size_t>(digit_of(s, factor))].push_back(s);
  return Partition::from_blocks(n, std::move(blocks));
}

std::string CpsCandidate::canonical_key() const {
  // Partitions carry the structure; digit labels within a factor and the
  // order of equal-size factors do not.
  std::vector<std::pair<int, std::string>> parts;
  for (int f = 0; f < dims.factor_count(); ++f)
    parts.push_back({dims[f], digit_partition(f).to_string()});
  std::sort(parts.begin(), parts.end());
  std::ostringstream key;
  for (const auto& [d, s] : parts) key << d << ":" << s << ";";
  return key.str();
}

double eloccom_defect(const RVector& p, const CpsCandidate& cps) {
  const int n = static_cast<int>(cps.code_of_index.size());
  if (p.size() != n) throw ShapeError("shape: distribution length mismatch");
  const int k = cps.dims.factor_count();
  double worst = 0.0;
  for (int f = 0; f < k; ++f)
    for (int g = f + 1; g < k; ++g) {
      const int df = cps.dims[f], dg = cps.dims[g];
      Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(df, dg);
      for (int s = 0; s < n; ++s)
        joint(cps.digit_of(s, f), cps.digit_of(s, g)) += p(s);
      const Eigen::VectorXd mf = joint.rowwise().sum();
      const Eigen::VectorXd mg = joint.colwise().sum();
      for (int i = 0; i < df; ++i)
        for (int j = 0; j < dg; ++j)
          worst = std::max(worst, std::abs(joint(i, j) - mf(i) * mg(j)));
    }
  return worst;
}

PcaResult pca_factor_count(const SampleSet& samples, double tau) {
  if (samples.samples.size() < 2)
    throw std::invalid_argument("pca needs at least 2 samples");
  if (tau <= 0.0 || tau >= 1.0)
    throw std::invalid_argument("tau must lie in (0,1)");
  const long n = samples.space_size;
  const long cnt = static_cast<long>(samples.samples.size());
  RVector mean = RVector::Zero(n);
  for (const auto& s : samples.samples) mean += s;
  mean /= static_cast<double>(cnt);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : samples.samples) {
    const RVector d = s - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(cnt - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  PcaResult out;
  out.spectrum = es.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < out.spectrum.size(); ++i)
    out.spectrum(i) = std::max(out.spectrum(i), 0.0);
  const double top = out.spectrum(0);
  if (top <= 1e-12) return out;  // count 0
  for (Eigen::Index i = 0; i < out.spectrum.size(); ++i)
    if (out.spectrum(i) > tau * top) ++out.count;
  return out;
}

namespace {

double family_violation(const SampleSet& samples, const CpsCandidate& cand) {
  double worst = 0.0;
  for (const auto& p : samples.samples)
    worst = std::max(worst, eloccom_defect(p, cand));
  return worst;
}

// All structurally distinct index maps for the given dims: every bijection
// index -> code, deduplicated by the digit-class partitions it induces.
// Cached per dims; feasible for n <= 9.
const std::vector<std::vector<int>>& coset_maps(const DimVector& dims) {
  static std::map<std::vector<int>, std::vector<std::vector<int>>> cache;
  auto it = cache.find(dims.dims);
  if (it != cache.end()) return it->second;

  const int n = static_cast<int>(dims.product());
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::unordered_set<std::string> seen;
  std::vector<std::vector<int>> maps;
  CpsCandidate probe;
  probe.dims = dims;
  do {
    probe.code_of_index = perm;
    if (seen.insert(probe.canonical_key()).second) maps.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cache.emplace(dims.dims, std::move(maps)).first->second;
}

std::vector<int> heuristic_map(const SampleSet& samples, const DimVector& dims,
                               unsigned seed) {
  const int n = static_cast<int>(samples.space_size);
  std::mt19937 rng(seed);
  std::vector<int> best(static_cast<size_t>(n));
  std::iota(best.begin(), best.end(), 0);
  double best_score = 1e300;
  CpsCandidate cand;
  cand.dims = dims;
  for (int restart = 0; restart < 8; ++restart) {
    std::vector<int> code(static_cast<size_t>(n));
    std::iota(code.begin(), code.end(), 0);
    if (restart) std::shuffle(code.begin(), code.end(), rng);
    cand.code_of_index = code;
    double score = family_violation(samples, cand);
    // Steepest-descent over pair swaps of the code assignment.
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n && !improved; ++i)
        for (int j = i + 1; j < n; ++j) {
          std::swap(cand.code_of_index[static_cast<size_t>(i)], cand.code_of_index[static_cast<size_t>(j)]);
          const double trial = family_violation(samples, cand);
          if (trial < score - 1e-15) {
            score = trial;
            improved = true;
            break;
          }
          std::swap(cand.code_of_index[static_cast<size_t>(i)], cand.code_of_index[static_cast<size_t>(j)]);
        }
    }
    if (score < best_score) {
      best_score = score;
      best = cand.code_of_index;
    }
  }
  return best;
}

}  // namespace

CpsRecovery recover_cps(const SampleSet& samples, double exact_threshold,
                        unsigned seed) {
  const long n = samples.space_size;
  if (n > 12)
    throw std::invalid_argument("too-large: exhaustive CPS recovery capped at |S| <= 12");
  if (n < 2) throw std::invalid_argument("configuration space too small");

  CpsRecovery out;
  std::vector<DimVector> nontrivial;
  for (const auto& d : factorizations(n))
    if (d.factor_count() > 1) nontrivial.push_back(d);
  if (nontrivial.empty()) {
    out.reason = "prime size";
    return out;
  }

  for (const auto& dims : nontrivial) {
    if (n <= 9) {
      for (const auto& code : coset_maps(dims)) {
        CpsCandidate cand;
        cand.dims = dims;
        cand.code_of_index = code;
        cand.violation = family_violation(samples, cand);
        cand.exact = cand.violation <= exact_threshold;
        out.candidates.push_back(std::move(cand));
      }
    } else {
      CpsCandidate cand;
      cand.dims = dims;
      cand.code_of_index = heuristic_map(samples, dims, seed);
      cand.violation = family_violation(samples, cand);
      cand.exact = cand.violation <= exact_threshold;
      out.candidates.push_back(std::move(cand));
    }
  }
  std::stable_sort(out.candidates.begin(), out.candidates.end(),
                   [](const CpsCandidate& a, const CpsCandidate& b) {
                     return a.violation < b.violation;
                   });
  return out;
}

Mps cps_diagonal_mps(const CpsCandidate& cps) {
  const int n = static_cast<int>(cps.code_of_index.size());
  Mps out;
  out.ambient_dim = n;
  out.provenance = "cps diagonal";
  for (int f = 0; f < cps.dims.factor_count(); ++f) {
    OperatorAlgebra a;
    a.ambient_dim = n;
    a.label = "f" + std::to_string(f);
    const auto part = cps.digit_partition(f);
    for (const auto& block : part.blocks) {
      CMatrix proj = CMatrix::Zero(n, n);
      for (int s : block) proj(s, s) = 1.0;
      a.basis.push_back(proj / std::sqrt(static_cast<double>(block.size())));
    }
    out.loci.push_back(std::move(a));
  }
  return out;
}

}  // namespace locus
