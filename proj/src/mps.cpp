#include "locus/mps.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace locus {

MpsDiagnostics is_valid_mps(const Mps& candidate, double eps) {
  std::set<std::string> labels;
  for (const auto& a : candidate.loci) {
    const std::string who = a.label.empty() ? "<unlabelled>" : a.label;
    if (a.ambient_dim != candidate.ambient_dim)
      return {false, who + ": ambient dimension mismatch"};
    if (!labels.insert(a.label).second)
      return {false, who + ": duplicate locus label"};
    const auto check = validate_algebra(a, eps);
    if (!check.ok) return {false, who + ": " + check.issue};
    if (!equal_algebras(double_commutant(a), a))
      return {false, who + ": not double-commutant closed"};
  }
  return {};
}

bool coarser(const Mps& p, const Mps& q, double eps) {
  if (p.ambient_dim != q.ambient_dim)
    throw ShapeError("shape: ambient dimension mismatch");
  for (const auto& ql : q.loci) {
    bool embedded = false;
    for (const auto& pl : p.loci)
      if (subalgebra_of(ql, pl, eps)) {
        embedded = true;
        break;
      }
    if (!embedded) return false;
  }
  return true;
}

Mps join(const std::vector<Mps>& members, double eps) {
  if (members.empty()) throw std::invalid_argument("empty-join");
  const int n = members.front().ambient_dim;
  for (const auto& m : members)
    if (m.ambient_dim != n) throw ShapeError("shape: ambient dimension mismatch");

  Mps out;
  out.ambient_dim = n;
  std::ostringstream prov;
  prov << "join of " << members.size() << " MPSs";
  out.provenance = prov.str();

  // Odometer over one locus per member.
  std::vector<size_t> pick(members.size(), 0);
  while (true) {
    OperatorAlgebra inter = members[0].loci[pick[0]];
    std::string label = inter.label;
    for (size_t m = 1; m < members.size(); ++m) {
      inter = intersect(inter, members[m].loci[pick[m]], eps);
      label += "^" + members[m].loci[pick[m]].label;
    }
    inter.label = label;
    // Intersections of double-commutant-closed algebras stay closed; treat
    // a failure as numerical drift worth aborting on.
    if (!equal_algebras(double_commutant(inter, eps), inter, 1e-7))
      throw std::logic_error("join produced a non-closed intersection");
    bool duplicate = false;
    for (const auto& existing : out.loci)
      if (equal_algebras(existing, inter, eps)) {
        duplicate = true;
        break;
      }
    if (!duplicate) out.loci.push_back(std::move(inter));

    size_t m = 0;
    for (; m < members.size(); ++m) {
      if (++pick[m] < members[m].loci.size()) break;
      pick[m] = 0;
    }
    if (m == members.size()) break;
  }

  // Cross intersections can land strictly inside a same-member one (e.g.
  // scalars from mismatched picks); those carry no information, so keep
  // only the maximal loci. Duplicates are already gone, so containment
  // with a smaller dimension is strict.
  std::vector<OperatorAlgebra> maximal;
  for (size_t i = 0; i < out.loci.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < out.loci.size() && !dominated; ++j)
      if (i != j && out.loci[i].dim() < out.loci[j].dim() &&
          subalgebra_of(out.loci[i], out.loci[j], eps))
        dominated = true;
    if (!dominated) maximal.push_back(std::move(out.loci[i]));
  }
  out.loci = std::move(maximal);
  return out;
}

namespace {

// Unit-spectral-norm copies of the basis, so defect magnitudes do not
// depend on the Hilbert-Schmidt normalization of the stored basis.
std::vector<CMatrix> scaled_basis(const OperatorAlgebra& a) {
  std::vector<CMatrix> out;
  out.reserve(a.basis.size());
  for (const auto& b : a.basis) {
    const double s = spectral_norm(b);
    out.push_back(s > 0 ? (b / s).eval() : b);
  }
  return out;
}

std::string tuple_witness(const std::vector<std::pair<std::string, int>>& picks,
                          double defect) {
  std::ostringstream out;
  for (size_t i = 0; i < picks.size(); ++i) {
    if (i) out << ", ";
    out << picks[i].first << "[" << picks[i].second << "]";
  }
  out << ": defect " << defect;
  return out.str();
}

}  // namespace

RelationResult separability_relation(const State& rho, const Mps& p,
                                     SepMode mode, double eps_rel) {
  if (rho.dim() != p.ambient_dim)
    throw ShapeError("shape: state does not match MPS ambient dimension");
  if (p.loci.empty()) throw std::invalid_argument("MPS has no loci");

  RelationResult res;
  std::vector<std::vector<CMatrix>> bases;
  bases.reserve(p.loci.size());
  for (const auto& a : p.loci) bases.push_back(scaled_basis(a));

  if (mode == SepMode::Pairwise) {
    for (size_t i = 0; i < p.loci.size(); ++i)
      for (size_t j = 0; j < p.loci.size(); ++j) {
        if (i == j) continue;
        for (size_t bi = 0; bi < bases[i].size(); ++bi)
          for (size_t bj = 0; bj < bases[j].size(); ++bj) {
            const Complex joint = expect(rho, (bases[i][bi] * bases[j][bj]).eval());
            const Complex split = expect(rho, bases[i][bi]) * expect(rho, bases[j][bj]);
            const double defect = std::abs(joint - split);
            if (defect > res.max_defect) res.max_defect = defect;
            if (defect > eps_rel && res.holds) {
              res.holds = false;
              res.witness = tuple_witness({{p.loci[i].label, static_cast<int>(bi)},
                                           {p.loci[j].label, static_cast<int>(bj)}},
                                          defect);
            }
          }
      }
    return res;
  }

  // Multiway: one basis element per locus, both product orderings.
  std::vector<size_t> pick(p.loci.size(), 0);
  const int n = p.ambient_dim;
  while (true) {
    CMatrix fwd = CMatrix::Identity(n, n), rev = CMatrix::Identity(n, n);
    Complex split = 1.0;
    for (size_t i = 0; i < p.loci.size(); ++i) {
      fwd = fwd * bases[i][pick[i]];
      rev = bases[i][pick[i]] * rev;
      split *= expect(rho, bases[i][pick[i]]);
    }
    const double defect = std::max(std::abs(expect(rho, fwd) - split),
                                   std::abs(expect(rho, rev) - split));
    if (defect > res.max_defect) res.max_defect = defect;
    if (defect > eps_rel && res.holds) {
      res.holds = false;
      std::vector<std::pair<std::string, int>> picks;
      for (size_t i = 0; i < p.loci.size(); ++i)
        picks.push_back({p.loci[i].label, static_cast<int>(pick[i])});
      res.witness = tuple_witness(picks, defect);
    }
    size_t i = 0;
    for (; i < p.loci.size(); ++i) {
      if (++pick[i] < bases[i].size()) break;
      pick[i] = 0;
    }
    if (i == p.loci.size()) break;
  }
  return res;
}

std::vector<size_t> pi_over_catalog(const State& rho, const MpsCatalog& catalog,
                                    SepMode mode, double eps_rel) {
  std::vector<size_t> out;
  for (size_t i = 0; i < catalog.members.size(); ++i)
    if (separability_relation(rho, catalog.members[i], mode, eps_rel).holds)
      out.push_back(i);
  return out;
}

RecoveredLoci recover_loci(const StateSet& available, const MpsCatalog& catalog,
                           SepMode mode, double eps_rel) {
  if (available.states.empty())
    throw std::invalid_argument("empty state set");
  if (catalog.members.empty())
    throw std::invalid_argument("empty catalog");

  RecoveredLoci out;
  std::vector<bool> used(catalog.members.size(), false);
  for (const auto& rho : available.states)
    for (size_t idx : pi_over_catalog(rho, catalog, mode, eps_rel)) {
      if (!used[idx])
        out.provenance.push_back(
            {rho.name.empty() ? "<state>" : rho.name,
             catalog.members[idx].provenance.empty()
                 ? "member " + std::to_string(idx)
                 : catalog.members[idx].provenance});
      used[idx] = true;
    }

  std::vector<Mps> qualifying;
  for (size_t i = 0; i < catalog.members.size(); ++i)
    if (used[i]) qualifying.push_back(catalog.members[i]);

  if (qualifying.empty()) {
    out.empty_union = true;
    Mps trivial;
    trivial.ambient_dim = catalog.ambient_dim;
    trivial.provenance = "fallback: no catalog member separates any state";
    trivial.loci.push_back(scalar_algebra(catalog.ambient_dim, "scalar"));
    out.result = std::move(trivial);
    return out;
  }
  out.result = join(qualifying);
  return out;
}

MpsReport mps_report(const Mps& p) {
  MpsReport rep;
  for (const auto& a : p.loci) {
    LocusReport lr;
    lr.label = a.label;
    lr.dim = a.dim();
    lr.degenerate = a.degenerate();
    lr.center_dim = center(a).dim();
    const auto rec = reconstruct_qubits(a);
    lr.factor_side = rec.factor_side;
    lr.qubit_reason = rec.reason;
    if (rec.tps) lr.qubit_dims = rec.tps->dims.dims;
    rep.loci.push_back(std::move(lr));
  }
  const size_t k = p.loci.size();
  rep.pairwise_commuting.assign(k, std::vector<bool>(k, true));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) {
      double worst = 0.0;
      for (const auto& bi : p.loci[i].basis)
        for (const auto& bj : p.loci[j].basis)
          worst = std::max(worst, (bi * bj - bj * bi).cwiseAbs().maxCoeff());
      rep.pairwise_commuting[i][j] = worst <= 1e-9;
    }
  return rep;
}

Mps tps_to_mps(const TpsSpec& tps) {
  Mps out;
  out.ambient_dim = static_cast<int>(tps.ambient_dim());
  std::ostringstream prov;
  prov << "tps dims [";
  for (int i = 0; i < tps.factor_count(); ++i)
    prov << (i ? "," : "") << tps.dims[i];
  prov << "]";
  out.provenance = prov.str();
  for (int i = 0; i < tps.factor_count(); ++i)
    out.loci.push_back(local_algebra(tps, i));
  return out;
}

Mps trivial_mps(int n) {
  Mps out;
  out.ambient_dim = n;
  out.provenance = "trivial";
  auto a = full_algebra(n, "total");
  out.loci.push_back(std::move(a));
  return out;
}

}  // namespace locus
