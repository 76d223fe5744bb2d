// End-to-end acceptance gate: one pass/fail line per criterion, nonzero
// exit if any criterion fails. Runs against the installed fixtures and the
// built CLI binary (paths injected at compile time).

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "locus/classical.hpp"
#include "locus/commands.hpp"
#include "locus/mps.hpp"
#include "locus/states.hpp"

using namespace locus;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": "
            << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

CMatrix random_matrix(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

RVector random_dist(int k, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  RVector v(k);
  for (int i = 0; i < k; ++i) v(i) = u(rng);
  return v / v.sum();
}

Mps standard22() { return tps_to_mps(TpsSpec::standard(DimVector({2, 2}))); }

Mps twisted22() {
  return tps_to_mps(
      twist(TpsSpec::standard(DimVector({2, 2})), bell_change_unitary()));
}

// --- 1: operator-algebra suite ---------------------------------------------
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(1);
  bool ok = true;
  std::string detail;
  for (int trial = 0; trial < 50 && ok; ++trial) {
    const int n = 2 + trial % 5;  // 2..6
    std::vector<CMatrix> gens{random_matrix(n, rng)};
    if (trial % 3 == 0) gens.push_back(random_matrix(n, rng));
    const OperatorAlgebra a = generate(gens, n);
    const OperatorAlgebra dc = double_commutant(a);
    if (!subalgebra_of(a, dc, kEps)) {
      ok = false;
      detail = "extensivity failed at trial " + std::to_string(trial);
    } else if (!equal_algebras(double_commutant(dc), dc, kEps)) {
      ok = false;
      detail = "idempotence failed at trial " + std::to_string(trial);
    }
  }
  const CMatrix i2 = CMatrix::Identity(2, 2);
  CMatrix sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  const OperatorAlgebra m2i = generate({kron(sx, i2), kron(sz, i2)}, 4);
  const OperatorAlgebra im2 = generate({kron(i2, sx), kron(i2, sz)}, 4);
  if (ok && !equal_algebras(commutant(m2i), im2, kEps)) {
    ok = false;
    detail = "commutant of the left factor is not the right factor";
  }
  const double elapsed = seconds_since(t0);
  if (ok && elapsed >= 10.0) {
    ok = false;
    detail = "runtime " + std::to_string(elapsed) + "s >= 10s";
  }
  std::ostringstream d;
  d << "50 seeded algebras, " << elapsed << "s";
  report(1, "double-commutant laws and factor commutants", ok,
         ok ? d.str() : detail);
}

// --- 2: Bell-relativity demo ------------------------------------------------
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const State bell = bell_phi_plus();
  const RelationResult vs_std =
      separability_relation(bell, standard22(), SepMode::Pairwise);
  const RelationResult vs_tw =
      separability_relation(bell, twisted22(), SepMode::Pairwise);
  const double elapsed = seconds_since(t0);
  bool ok = !vs_std.holds && std::abs(vs_std.max_defect - 1.0) <= 1e-8 &&
            vs_tw.holds && vs_tw.max_defect <= 1e-8 && elapsed < 1.0;
  std::ostringstream d;
  d << "gap " << vs_std.max_defect << ", twisted defect " << vs_tw.max_defect
    << ", " << elapsed << "s";
  report(2, "Bell state is entangled or product depending on the frame", ok,
         d.str());
}

// --- 3: partition machinery --------------------------------------------------
void criterion_3() {
  bool ok = true;
  std::string detail;
  const size_t bell_numbers[] = {1, 2, 5, 15, 52, 203};
  for (int n = 1; n <= 6; ++n)
    if (enumerate_partitions(n).members.size() != bell_numbers[n - 1]) {
      ok = false;
      detail = "Bell number mismatch at n=" + std::to_string(n);
    }

  const TpsSpec q3 = TpsSpec::standard(DimVector({2, 2, 2}));
  const PiResult ghz = pi_of_state(ghz_state(3), q3);
  if (ok && (ghz.separable.members.size() != 1 ||
             ghz.separable.members[0] != Partition::one_block(3))) {
    ok = false;
    detail = "Pi(GHZ3) is not exactly the one-block partition";
  }

  CVector v = CVector::Zero(8);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);  // |0> (x) |phi+>
  const State zb = State::pure(v, "0xphi+");
  const PiResult pz = pi_of_state(zb, q3);
  const PartitionFamily maximal = maximal_members(pz.separable);
  if (ok && (maximal.members.size() != 1 ||
             maximal.members[0] != Partition::from_blocks(3, {{0}, {1, 2}}))) {
    ok = false;
    detail = "maximal antichain of Pi(|0> (x) |phi+>) is not {0|12}";
  }

  // Brute-force oracle over all 5 partitions using raw Schmidt-rank cuts.
  if (ok) {
    for (const auto& sigma : enumerate_partitions(3).members) {
      bool oracle = true;
      for (const auto& block : sigma.blocks) {
        if (static_cast<int>(block.size()) == q3.factor_count()) continue;
        if (numerical_rank(reshape_cut(v, q3.dims, block)) != 1)
          oracle = false;
      }
      const bool found =
          std::find(pz.separable.members.begin(), pz.separable.members.end(),
                    sigma) != pz.separable.members.end();
      if (oracle != found) {
        ok = false;
        detail = "oracle disagrees at " + sigma.to_string();
      }
    }
  }
  report(3, "partition counts, Pi families, brute-force oracle", ok, detail);
}

// --- 4: PPT soundness regime --------------------------------------------------
void criterion_4() {
  std::mt19937 rng(4);
  const TpsSpec tps = TpsSpec::standard(DimVector({2, 2}));
  const Partition two = Partition::finest(2);
  bool ok = true;
  std::string detail;
  int separable_count = 0, certified = 0;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    CMatrix g = random_matrix(4, rng);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    const State s = State::density(rho);
    const SeparabilityVerdict v = is_sigma_separable(s, tps, two);
    if (v.value == Verdict::Undetermined) {
      ok = false;
      detail = "undetermined verdict at trial " + std::to_string(trial);
      break;
    }
    if (v.value == Verdict::Separable || v.value == Verdict::Product) {
      ++separable_count;
      auto d = decompose_separable(s, tps, two, 40);
      if (!d || (d->assemble(tps, two) - rho).norm() > 1e-6) {
        ok = false;
        detail = "no certificate within 1e-6 at trial " + std::to_string(trial);
        break;
      }
      ++certified;
    }
  }
  std::ostringstream d;
  d << separable_count << " separable, " << certified << " certified";
  report(4, "two-qubit PPT verdicts are conclusive and certified", ok,
         ok ? d.str() : detail);
}

// --- 5: loci recovery ----------------------------------------------------------
void criterion_5() {
  Mps std_mps = standard22();
  std_mps.provenance = "standard";
  Mps tw = twisted22();
  tw.provenance = "twisted";
  Mps triv = trivial_mps(4);
  triv.provenance = "trivial";
  const MpsCatalog cat{4, {std_mps, tw, triv}};

  bool ok = true;
  std::string detail;

  StateSet comp;
  for (long i = 0; i < 4; ++i) comp.states.push_back(basis_state(4, i));
  const RecoveredLoci r1 = recover_loci(comp, cat, SepMode::Pairwise);
  if (r1.result.loci.size() != 2 ||
      !equal_algebras(r1.result.loci[0], std_mps.loci[0], kEps) ||
      !equal_algebras(r1.result.loci[1], std_mps.loci[1], kEps)) {
    ok = false;
    detail = "computational-basis set did not recover the standard loci";
  }

  StateSet bell_only;
  bell_only.states.push_back(bell_phi_plus());
  const RecoveredLoci r2 = recover_loci(bell_only, cat, SepMode::Pairwise);
  if (ok && (r2.result.loci.size() != 2 ||
             !equal_algebras(r2.result.loci[0], tw.loci[0], kEps) ||
             !equal_algebras(r2.result.loci[1], tw.loci[1], kEps))) {
    ok = false;
    detail = "Bell-only set did not recover the twisted loci";
  }

  StateSet both = comp;
  both.states.push_back(bell_phi_plus());
  const RecoveredLoci r3 = recover_loci(both, cat, SepMode::Pairwise);
  if (ok) {
    if (r3.result.loci.empty()) {
      ok = false;
      detail = "union set produced no loci";
    }
    for (const auto& l : r3.result.loci)
      if (!equal_algebras(l, scalar_algebra(4), kEps)) {
        ok = false;
        detail = "union set left a non-scalar locus";
      }
  }
  report(5, "planted-frame loci recovery and breakdown", ok, detail);
}

// --- 6: classical recovery ------------------------------------------------------
void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(6);
  bool ok = true;
  std::string detail;
  for (int family = 0; family < 20 && ok; ++family) {
    std::vector<int> shuffle(9);
    std::iota(shuffle.begin(), shuffle.end(), 0);
    std::shuffle(shuffle.begin(), shuffle.end(), rng);
    std::vector<RVector> samples;
    for (int t = 0; t < 6; ++t) {
      const RVector a = random_dist(3, rng), b = random_dist(3, rng);
      RVector q(9);
      for (int i = 0; i < 9; ++i)
        q(shuffle[static_cast<size_t>(i)]) = a(i / 3) * b(i % 3);
      samples.push_back(q);
    }
    const CpsRecovery rec = recover_cps(SampleSet::from_samples(samples));
    if (rec.candidates.empty() ||
        rec.candidates.front().dims.dims != std::vector<int>{3, 3} ||
        rec.candidates.front().violation > 1e-9) {
      ok = false;
      detail = "planted family " + std::to_string(family) + " not ranked first";
    }
  }
  if (ok) {
    const CpsRecovery prime = recover_cps(SampleSet::from_samples(
        {random_dist(7, rng), random_dist(7, rng)}));
    if (!prime.candidates.empty() || prime.reason != "prime size") {
      ok = false;
      detail = "|S| = 7 did not return \"prime size\"";
    }
  }
  const double elapsed = seconds_since(t0);
  if (ok && elapsed >= 30.0) {
    ok = false;
    detail = "runtime " + std::to_string(elapsed) + "s >= 30s";
  }
  std::ostringstream d;
  d << "20 planted families, " << elapsed << "s";
  report(6, "classical CPS recovery ranks the planted structure first", ok,
         ok ? d.str() : detail);
}

// --- 7: cross-module consistency --------------------------------------------------
void criterion_7() {
  std::mt19937 rng(7);
  bool ok = true;
  std::string detail;
  const std::vector<DimVector> grids = {DimVector({2, 2}), DimVector({2, 3}),
                                        DimVector({3, 3})};
  int done = 0;
  for (int trial = 0; trial < 100 && ok; ++trial) {
    const DimVector& dims = grids[static_cast<size_t>(trial) % grids.size()];
    const long n = dims.product();
    CpsCandidate cps;
    cps.dims = dims;
    cps.code_of_index.resize(static_cast<size_t>(n));
    std::iota(cps.code_of_index.begin(), cps.code_of_index.end(), 0);
    const Mps m = cps_diagonal_mps(cps);

    RVector p;
    if (trial % 2 == 0) {
      const RVector a = random_dist(dims[0], rng), b = random_dist(dims[1], rng);
      p.resize(n);
      for (int i = 0; i < dims[0]; ++i)
        for (int j = 0; j < dims[1]; ++j) p(i * dims[1] + j) = a(i) * b(j);
    } else {
      p = random_dist(static_cast<int>(n), rng);
    }
    const double defect = eloccom_defect(p, cps);
    const bool rel =
        separability_relation(classical_embed(p), m, SepMode::Multiway).holds;
    if ((defect <= kEpsRel) != rel) {
      ok = false;
      std::ostringstream e;
      e << "mismatch at trial " << trial << ": defect " << defect
        << ", relation " << (rel ? "holds" : "fails");
      detail = e.str();
    }
    ++done;
  }
  report(7, "zero local-commutativity defect matches multiway separability",
         ok, ok ? std::to_string(done) + " distributions" : detail);
}

// --- 8: join laws -------------------------------------------------------------------
void criterion_8() {
  std::mt19937 rng(8);
  bool ok = true;
  std::string detail;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_unitary = [&]() {
    CMatrix g(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g(i, j) = Complex(u(rng), u(rng));
    const Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    return q;
  };
  for (int trial = 0; trial < 50 && ok; ++trial) {
    const Mps a = tps_to_mps(
        twist(TpsSpec::standard(DimVector({2, 2})), random_unitary()));
    const Mps b = trial % 2 == 0
                      ? tps_to_mps(twist(TpsSpec::standard(DimVector({2, 2})),
                                         random_unitary()))
                      : trivial_mps(4);

    const Mps jaa = join({a, a});
    if (jaa.loci.size() != a.loci.size()) {
      ok = false;
      detail = "idempotence failed at trial " + std::to_string(trial);
      break;
    }
    const Mps jab = join({a, b});
    const Mps jba = join({b, a});
    if (jab.loci.size() != jba.loci.size()) {
      ok = false;
      detail = "commutativity (size) failed at trial " + std::to_string(trial);
      break;
    }
    for (const auto& la : jab.loci) {
      bool found = false;
      for (const auto& lb : jba.loci)
        if (equal_algebras(la, lb, kEps)) found = true;
      if (!found) {
        ok = false;
        detail = "commutativity failed at trial " + std::to_string(trial);
      }
    }
    if (ok && (!coarser(a, jab, kEps) || !coarser(b, jab, kEps))) {
      ok = false;
      detail = "upper-bound property failed at trial " + std::to_string(trial);
    }
  }
  report(8, "join is idempotent, commutative and an upper bound", ok, detail);
}

// --- 9: CLI determinism ---------------------------------------------------------------
struct CliRun {
  int exit_code = -1;
  std::string output;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(LOCUS_FORGE_BIN) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (size_t got = fread(buf.data(), 1, buf.size(), pipe))
    r.output.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_9() {
  const std::string fx = LOCUS_FIXTURES;
  const struct {
    const char* cmd;
    const char* file;
  } cases[] = {
      {"check", "check_bell_standard.json"},
      {"check", "check_bell_twisted.json"},
      {"partitions", "partitions_ghz3.json"},
      {"partitions", "partitions_product.json"},
      {"tps", "tps_nine.json"},
      {"recover", "recover_catalog.json"},
      {"recover", "recover_empty.json"},
      {"classical", "classical_product33.json"},
      {"classical", "classical_prime7.json"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const std::string out_a = "/tmp/locus_acc_a.json";
    const std::string out_b = "/tmp/locus_acc_b.json";
    const CliRun a = run_cli(std::string(c.cmd) + " --in " + fx + "/" +
                             c.file + " --out " + out_a);
    const CliRun b = run_cli(std::string(c.cmd) + " --in " + fx + "/" +
                             c.file + " --out " + out_b);
    if (a.exit_code != 0 || b.exit_code != 0 ||
        slurp(out_a) != slurp(out_b) || slurp(out_a).empty()) {
      ok = false;
      detail = std::string("non-deterministic or failing: ") + c.file;
    }
    std::remove(out_a.c_str());
    std::remove(out_b.c_str());
    if (!ok) break;
  }
  if (ok) {
    const CliRun bad_field =
        run_cli("check --in " + fx + "/malformed_field.json");
    const CliRun bad_syntax =
        run_cli("check --in " + fx + "/malformed_syntax.json");
    if (bad_field.exit_code != 2 ||
        bad_field.output.find("states[0].data") == std::string::npos ||
        bad_syntax.exit_code != 2) {
      ok = false;
      detail = "malformed fixtures did not exit 2 with a field-precise message";
    }
  }
  report(9, "CLI reports are byte-identical; malformed inputs exit 2", ok,
         detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::cout << g_failures << " criterion/criteria failed\n";
    return 1;
  }
  std::cout << "all 9 acceptance criteria passed\n";
  return 0;
}
