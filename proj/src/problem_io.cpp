#include "locus/problem_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

namespace locus {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw InputError(field + ": " + what);
}

const json& require(const json& parent, const std::string& field,
                    const std::string& path) {
  auto it = parent.find(field);
  if (it == parent.end()) fail(path + field, "missing required field");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Complex parse_complex(const json& j, const std::string& path) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2)
    fail(path, "expected a number or a two-element [re, im] array");
  return Complex(as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]"));
}

CVector parse_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  CVector v(static_cast<long>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<long>(i)) =
        parse_complex(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

RVector parse_real_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  RVector v(static_cast<long>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<long>(i)) =
        as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

CMatrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    fail(path, "expected a non-empty array of rows");
  const size_t rows = j.size();
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(path + "[0]", "expected a non-empty row array");
  CMatrix m(static_cast<long>(rows), static_cast<long>(cols));
  for (size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols)
      fail(rp, "row length differs from row 0");
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<long>(r), static_cast<long>(c)) =
          parse_complex(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

DimVector parse_dims(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    fail(path, "expected a non-empty array of factor dimensions");
  std::vector<int> d;
  for (size_t i = 0; i < j.size(); ++i) {
    const long v = as_integer(j[i], path + "[" + std::to_string(i) + "]");
    if (v < 2) fail(path + "[" + std::to_string(i) + "]", "factor must be >= 2");
    d.push_back(static_cast<int>(v));
  }
  try {
    return DimVector(d);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

// Named constructors of the form "name" or "name(arg)".
struct Ctor {
  std::string name;
  std::vector<std::string> args;
};

Ctor parse_ctor(const std::string& text, const std::string& path) {
  static const std::regex form(R"(^\s*([a-z_]+)\s*(?:\(([^)]*)\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, form))
    fail(path, "unrecognized constructor '" + text + "'");
  Ctor c;
  c.name = m[1];
  if (m[2].matched) {
    std::stringstream ss(m[2]);
    std::string piece;
    while (std::getline(ss, piece, ',')) c.args.push_back(piece);
  }
  return c;
}

double ctor_number(const Ctor& c, size_t i, const std::string& path) {
  if (i >= c.args.size()) fail(path, c.name + " needs argument " + std::to_string(i + 1));
  try {
    return std::stod(c.args[i]);
  } catch (const std::exception&) {
    fail(path, "argument '" + c.args[i] + "' is not a number");
  }
}

State parse_named_state(const std::string& text, const std::string& path) {
  const Ctor c = parse_ctor(text, path);
  if (c.name == "bell_phi_plus") return bell_phi_plus();
  if (c.name == "ghz")
    return ghz_state(static_cast<int>(ctor_number(c, 0, path)));
  if (c.name == "werner") return werner_state(ctor_number(c, 0, path));
  if (c.name == "basis")
    return basis_state(static_cast<long>(ctor_number(c, 0, path)),
                       static_cast<long>(ctor_number(c, 1, path)));
  fail(path, "unknown state constructor '" + c.name + "'");
}

State parse_state(const json& j, long ambient_dim, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  std::string name;
  if (auto it = j.find("name"); it != j.end())
    name = as_string(*it, path + ".name");
  State s;
  if (auto it = j.find("ctor"); it != j.end()) {
    s = parse_named_state(as_string(*it, path + ".ctor"), path + ".ctor");
  } else {
    const std::string kind =
        as_string(require(j, "kind", path + "."), path + ".kind");
    const json& data = require(j, "data", path + ".");
    try {
      if (kind == "pure")
        s = State::pure(parse_vector(data, path + ".data"));
      else if (kind == "density")
        s = State::density(parse_matrix(data, path + ".data"));
      else if (kind == "classical")
        s = classical_embed(parse_real_vector(data, path + ".data"));
      else
        fail(path + ".kind", "expected pure | density | classical | ctor");
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      fail(path + ".data", e.what());
    }
  }
  if (!name.empty()) s.name = name;
  if (s.name.empty()) s.name = "state" + path.substr(path.rfind('['));
  if (s.dim() != ambient_dim)
    fail(path, "state dimension " + std::to_string(s.dim()) +
                   " does not match ambient_dim " + std::to_string(ambient_dim));
  return s;
}

CMatrix parse_unitary(const json& j, long side, const std::string& path) {
  CMatrix u;
  if (j.is_string()) {
    const Ctor c = parse_ctor(j.get<std::string>(), path);
    if (c.name == "identity")
      u = CMatrix::Identity(side, side);
    else if (c.name == "bell_unitary")
      u = bell_change_unitary();
    else
      fail(path, "unknown unitary constructor '" + c.name + "'");
  } else {
    u = parse_matrix(j, path);
  }
  if (u.rows() != side || u.cols() != side)
    fail(path, "unitary side " + std::to_string(u.rows()) +
                   " does not match dimension " + std::to_string(side));
  if (!is_unitary(u)) fail(path, "matrix is not unitary");
  return u;
}

TpsSpec parse_tps(const json& j, long ambient_dim, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const DimVector dims =
      parse_dims(require(j, "dims", path + "."), path + ".dims");
  if (dims.product() != ambient_dim)
    fail(path + ".dims", "product does not match ambient_dim");
  TpsSpec tps = TpsSpec::standard(dims);
  if (auto it = j.find("unitary"); it != j.end())
    tps.unitary = parse_unitary(*it, ambient_dim, path + ".unitary");
  if (auto it = j.find("labels"); it != j.end()) {
    if (!it->is_array() ||
        static_cast<int>(it->size()) != dims.factor_count())
      fail(path + ".labels", "expected one label per factor");
    for (size_t i = 0; i < it->size(); ++i)
      tps.loci_labels[i] =
          as_string((*it)[i], path + ".labels[" + std::to_string(i) + "]");
  }
  return tps;
}

Mps parse_catalog_member(const json& j, long ambient_dim,
                         const std::string& path, std::string* out_name) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind =
      as_string(require(j, "ctor", path + "."), path + ".ctor");
  Mps m;
  if (kind == "trivial") {
    m = trivial_mps(static_cast<int>(ambient_dim));
  } else if (kind == "tps") {
    m = tps_to_mps(parse_tps(j, ambient_dim, path));
  } else {
    fail(path + ".ctor", "expected tps | trivial");
  }
  if (auto it = j.find("name"); it != j.end())
    m.provenance = as_string(*it, path + ".name");
  *out_name = m.provenance;
  return m;
}

Options parse_options(const json& j, const std::string& path) {
  Options o;
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string p = path + "." + it.key();
    if (it.key() == "mode") {
      const std::string mode = as_string(*it, p);
      if (mode == "pairwise")
        o.mode = SepMode::Pairwise;
      else if (mode == "multiway")
        o.mode = SepMode::Multiway;
      else
        fail(p, "expected pairwise | multiway");
    } else if (it.key() == "eps") {
      o.eps = as_number(*it, p);
      if (o.eps <= 0) fail(p, "must be positive");
    } else if (it.key() == "eps_rel") {
      o.eps_rel = as_number(*it, p);
      if (o.eps_rel <= 0) fail(p, "must be positive");
    } else if (it.key() == "tau") {
      o.tau = as_number(*it, p);
      if (o.tau <= 0 || o.tau >= 1) fail(p, "must lie in (0, 1)");
    } else if (it.key() == "seed") {
      o.seed = static_cast<unsigned>(as_integer(*it, p));
    } else {
      fail(p, "unknown option");
    }
  }
  return o;
}

}  // namespace

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();

  ProblemFile pf;
  pf.raw_bytes = buf.str();

  json root;
  try {
    root = json::parse(pf.raw_bytes);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw InputError("top level: expected an object");

  pf.schema_version = static_cast<int>(as_integer(
      require(root, "schema_version", ""), "schema_version"));
  if (pf.schema_version != 1)
    fail("schema_version", "unsupported version (expected 1)");

  pf.ambient_dim = as_integer(require(root, "ambient_dim", ""), "ambient_dim");
  if (pf.ambient_dim < 1) fail("ambient_dim", "must be >= 1");

  if (auto it = root.find("states"); it != root.end()) {
    if (!it->is_array()) fail("states", "expected an array");
    for (size_t i = 0; i < it->size(); ++i)
      pf.states.push_back(parse_state(
          (*it)[i], pf.ambient_dim, "states[" + std::to_string(i) + "]"));
  }

  if (auto it = root.find("tps"); it != root.end())
    pf.tps = parse_tps(*it, pf.ambient_dim, "tps");

  if (auto it = root.find("catalog"); it != root.end()) {
    if (!it->is_array()) fail("catalog", "expected an array");
    for (size_t i = 0; i < it->size(); ++i) {
      std::string name;
      pf.catalog.push_back(parse_catalog_member(
          (*it)[i], pf.ambient_dim, "catalog[" + std::to_string(i) + "]",
          &name));
      if (name.empty()) name = "member" + std::to_string(i);
      pf.catalog_names.push_back(name);
    }
  }

  if (auto it = root.find("samples"); it != root.end()) {
    if (!it->is_array()) fail("samples", "expected an array");
    for (size_t i = 0; i < it->size(); ++i) {
      const std::string p = "samples[" + std::to_string(i) + "]";
      RVector v = parse_real_vector((*it)[i], p);
      if (v.size() != pf.ambient_dim)
        fail(p, "length does not match ambient_dim");
      pf.samples.push_back(std::move(v));
    }
  }

  if (auto it = root.find("options"); it != root.end())
    pf.options = parse_options(*it, "options");

  for (auto it = root.begin(); it != root.end(); ++it) {
    static const std::vector<std::string> known = {
        "schema_version", "ambient_dim", "states", "tps",
        "catalog",        "samples",     "options"};
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      fail(it.key(), "unknown top-level field");
  }
  return pf;
}

std::string input_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(h));
  return out;
}

nlohmann::json report_skeleton(const std::string& command,
                               const ProblemFile& input) {
  json body;
  body["schema_version"] = 1;
  body["version"] = "locus-forge 0.1.0";
  body["command"] = command;
  body["input_digest"] = input_digest(input.raw_bytes);
  body["options"] = {
      {"mode", input.options.mode == SepMode::Pairwise ? "pairwise" : "multiway"},
      {"eps", input.options.eps},
      {"eps_rel", input.options.eps_rel},
      {"tau", input.options.tau},
      {"seed", input.options.seed}};
  body["diagnostics"] = json::array();
  return body;
}

}  // namespace locus
