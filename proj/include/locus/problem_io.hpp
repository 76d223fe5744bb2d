#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "locus/classical.hpp"
#include "locus/mps.hpp"
#include "locus/states.hpp"
#include "locus/tps.hpp"

// Problem-file loading and report serialization. The file format is JSON;
// complex numbers are two-element arrays [re, im], matrices row-major
// nested arrays. Named constructors ("ghz(3)", "werner(0.25)",
// "bell_unitary", ...) keep fixtures short. All validation errors throw
// InputError with a message naming the offending field.

namespace locus {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  SepMode mode = SepMode::Pairwise;
  double eps = kEps;
  double eps_rel = kEpsRel;
  double tau = 0.05;
  unsigned seed = 1;
};

struct ProblemFile {
  int schema_version = 1;
  long ambient_dim = 0;
  std::vector<State> states;
  std::optional<TpsSpec> tps;
  std::vector<Mps> catalog;
  std::vector<std::string> catalog_names;
  std::vector<RVector> samples;
  Options options;
  std::string raw_bytes;  // exact file contents, for the digest
};

// Parse and validate; flag values (when set) override the file's options.
ProblemFile load_problem(const std::string& path);

// FNV-1a 64-bit over the raw file bytes, lowercase hex.
std::string input_digest(const std::string& bytes);

// Report body shared by every command: schema_version, command echo,
// input digest, echoed options, version string. Results/diagnostics are
// filled in by the command drivers.
nlohmann::json report_skeleton(const std::string& command,
                               const ProblemFile& input);

}  // namespace locus
