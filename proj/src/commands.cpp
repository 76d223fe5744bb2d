#include "locus/commands.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "locus/classical.hpp"

namespace locus {

namespace {

using nlohmann::json;

json partition_json(const Partition& p) {
  json blocks = json::array();
  for (const auto& b : p.blocks) blocks.push_back(b);
  return blocks;
}

json locus_report_json(const LocusReport& lr) {
  json j;
  j["label"] = lr.label;
  j["dim"] = lr.dim;
  j["degenerate"] = lr.degenerate;
  j["center_dim"] = lr.center_dim;
  j["factor_side"] = lr.factor_side;
  j["qubit_dims"] = lr.qubit_dims;
  j["qubit_reason"] = lr.qubit_reason;
  return j;
}

std::string finish(const json& body) { return body.dump(2) + "\n"; }

const TpsSpec& require_tps(const ProblemFile& input) {
  if (!input.tps) throw InputError("tps: required by this command");
  return *input.tps;
}

}  // namespace

CommandResult cmd_partitions(const ProblemFile& input, std::ostream& out) {
  const TpsSpec& tps = require_tps(input);
  if (input.states.empty())
    throw InputError("states: at least one state required");
  json body = report_skeleton("partitions", input);
  json results = json::array();
  out << "partitions: " << input.states.size() << " state(s), factors "
      << tps.factor_count() << "\n";
  for (const auto& s : input.states) {
    const PiResult pi = pi_of_state(s, tps);
    const PartitionFamily maximal = maximal_members(pi.separable);
    json r;
    r["state"] = s.name;
    r["pi"] = json::array();
    for (const auto& p : pi.separable.members) r["pi"].push_back(partition_json(p));
    r["maximal"] = json::array();
    for (const auto& p : maximal.members) r["maximal"].push_back(partition_json(p));
    r["undetermined"] = json::array();
    for (const auto& p : pi.undetermined.members) {
      r["undetermined"].push_back(partition_json(p));
      body["diagnostics"].push_back("state " + s.name + ": partition " +
                                    p.to_string() + " undetermined");
    }
    results.push_back(r);
    out << "  " << s.name << ": |Pi| = " << pi.separable.members.size()
        << ", maximal =";
    for (const auto& p : maximal.members) out << " " << p.to_string();
    if (!pi.undetermined.members.empty())
      out << "  (" << pi.undetermined.members.size() << " undetermined)";
    out << "\n";
  }
  body["results"] = results;
  return {finish(body), 0};
}

CommandResult cmd_recover(const ProblemFile& input, std::ostream& out) {
  if (input.states.empty())
    throw InputError("states: at least one state required");
  if (input.catalog.empty())
    throw InputError("catalog: at least one member required");
  StateSet available{input.states, "available"};
  MpsCatalog catalog{static_cast<int>(input.ambient_dim), input.catalog};
  const RecoveredLoci rec =
      recover_loci(available, catalog, input.options.mode, input.options.eps_rel);
  const MpsReport rep = mps_report(rec.result);

  json body = report_skeleton("recover", input);
  json r;
  r["empty_union"] = rec.empty_union;
  r["provenance"] = json::array();
  for (const auto& [state, member] : rec.provenance)
    r["provenance"].push_back({{"state", state}, {"member", member}});
  r["loci"] = json::array();
  for (const auto& lr : rep.loci) r["loci"].push_back(locus_report_json(lr));
  r["pairwise_commuting"] = rep.pairwise_commuting;
  body["results"] = r;
  if (rec.empty_union)
    body["diagnostics"].push_back(
        "empty union: no state qualified against any catalog member; "
        "falling back to the trivial scalar locus");
  for (const auto& lr : rep.loci)
    if (lr.degenerate)
      body["diagnostics"].push_back("locus " + lr.label + " is degenerate");

  out << "recover: " << rep.loci.size() << " locus/loci\n";
  for (const auto& lr : rep.loci) {
    out << "  " << lr.label << ": dim " << lr.dim
        << (lr.degenerate ? " (degenerate)" : "");
    if (lr.factor_side > 0) {
      out << ", full factor M_" << lr.factor_side;
      if (!lr.qubit_dims.empty()) {
        out << ", virtual dims";
        for (int d : lr.qubit_dims) out << " " << d;
      } else if (!lr.qubit_reason.empty()) {
        out << " (" << lr.qubit_reason << ")";
      }
    }
    out << "\n";
  }
  if (rec.empty_union) out << "  warning: empty union, trivial locus\n";
  return {finish(body), 0};
}

CommandResult cmd_tps(const ProblemFile& input, std::ostream& out) {
  json body = report_skeleton("tps", input);
  const auto facts = factorizations(input.ambient_dim);
  json r;
  r["ambient_dim"] = input.ambient_dim;
  r["factorizations"] = json::array();
  out << "tps: n = " << input.ambient_dim << ", " << facts.size()
      << " factorization(s)\n";
  for (const auto& f : facts) {
    json fj;
    fj["dims"] = f.dims;
    fj["svozil_partitions"] = json::array();
    for (const auto& p : svozil_partitions(f).partitions)
      fj["svozil_partitions"].push_back(partition_json(p));
    r["factorizations"].push_back(fj);
    out << "  [";
    for (int i = 0; i < f.factor_count(); ++i)
      out << (i ? "," : "") << f[i];
    out << "]";
    if (f.factor_count() > 1) {
      out << " basis partitions:";
      for (const auto& p : svozil_partitions(f).partitions)
        out << " " << p.to_string();
    }
    out << "\n";
  }
  if (facts.size() == 1 && input.ambient_dim > 1)
    body["diagnostics"].push_back("prime dimension: only the trivial factorization exists");
  body["results"] = r;
  return {finish(body), 0};
}

CommandResult cmd_classical(const ProblemFile& input, std::ostream& out) {
  if (input.samples.empty())
    throw InputError("samples: at least one distribution required");
  SampleSet samples = SampleSet::from_samples(input.samples, "input");
  const PcaResult pca = pca_factor_count(samples, input.options.tau);
  const CpsRecovery rec = recover_cps(samples, 1e-6, input.options.seed);

  json body = report_skeleton("classical", input);
  json r;
  r["pca_factor_count"] = pca.count;
  r["pca_spectrum"] = json::array();
  for (long i = 0; i < pca.spectrum.size(); ++i)
    r["pca_spectrum"].push_back(pca.spectrum(i));
  r["candidates"] = json::array();
  for (const auto& c : rec.candidates) {
    json cj;
    cj["dims"] = c.dims.dims;
    cj["code_of_index"] = c.code_of_index;
    cj["violation"] = c.violation;
    cj["exact"] = c.exact;
    r["candidates"].push_back(cj);
  }
  r["reason"] = rec.reason;
  body["results"] = r;
  if (!rec.reason.empty()) body["diagnostics"].push_back(rec.reason);

  out << "classical: |S| = " << input.ambient_dim << ", PCA factor count "
      << pca.count << "\n";
  if (!rec.reason.empty()) out << "  " << rec.reason << "\n";
  const size_t shown = std::min<size_t>(rec.candidates.size(), 3);
  for (size_t i = 0; i < shown; ++i) {
    const auto& c = rec.candidates[i];
    out << "  candidate [";
    for (int k = 0; k < c.dims.factor_count(); ++k)
      out << (k ? "," : "") << c.dims[k];
    out << "] violation " << c.violation << (c.exact ? " (exact)" : "") << "\n";
  }
  return {finish(body), 0};
}

CommandResult cmd_check(const ProblemFile& input, std::ostream& out) {
  if (input.states.size() != 1)
    throw InputError("states: exactly one state required");
  Mps target;
  if (!input.catalog.empty()) {
    if (input.catalog.size() != 1)
      throw InputError("catalog: exactly one member required");
    target = input.catalog.front();
  } else if (input.tps) {
    target = tps_to_mps(*input.tps);
  } else {
    throw InputError("catalog: one MPS (or a tps) required");
  }
  const State& s = input.states.front();
  const RelationResult rel =
      separability_relation(s, target, input.options.mode, input.options.eps_rel);

  json body = report_skeleton("check", input);
  json r;
  r["state"] = s.name;
  r["mps"] = target.provenance;
  r["holds"] = rel.holds;
  r["max_defect"] = rel.max_defect;
  r["witness"] = rel.witness;
  body["results"] = r;

  out << "check: " << s.name << " vs "
      << (target.provenance.empty() ? "mps" : target.provenance) << ": "
      << (rel.holds ? "holds" : "violated") << " (max defect "
      << rel.max_defect << ")\n";
  if (!rel.holds) out << "  witness: " << rel.witness << "\n";
  return {finish(body), 0};
}

CommandResult run_command(const std::string& name, const ProblemFile& input,
                          std::ostream& out) {
  if (name == "partitions") return cmd_partitions(input, out);
  if (name == "recover") return cmd_recover(input, out);
  if (name == "tps") return cmd_tps(input, out);
  if (name == "classical") return cmd_classical(input, out);
  if (name == "check") return cmd_check(input, out);
  throw InputError("command: unknown command '" + name + "'");
}

}  // namespace locus
