#include "zgreen/problem_io.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace zgreen {

namespace {

using nlohmann::json;

double env_or(const char* name, double fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == nullptr || *end != '\0' || !(value > 0.0)) {
    throw ParseError(std::string("invalid tolerance override in ") + name);
  }
  return value;
}

int expect_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + " must be an integer");
  return j.get<int>();
}

double expect_finite(const json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + " must be a finite number");
  return j.get<double>();
}

bool expect_bool(const json& j, const std::string& what) {
  if (!j.is_boolean()) throw ParseError(what + " must be a boolean");
  return j.get<bool>();
}

int parse_index_key(const std::string& key, const std::string& what) {
  size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(key, &used);
  } catch (const std::exception&) {
    throw ParseError(what + " key '" + key + "' is not an integer");
  }
  if (used != key.size()) throw ParseError(what + " key '" + key + "' is not an integer");
  return value;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ParseError("unknown key '" + key + "' in " + where);
  }
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, int dim, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ParseError(what + " must be a " + std::to_string(dim) + "-row matrix");
  }
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ParseError(what + " row " + std::to_string(i) + " must have " + std::to_string(dim) +
                       " entries");
    }
    for (int c = 0; c < dim; ++c) {
      m(i, c) = expect_finite(row[static_cast<size_t>(c)], what + " entry");
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vector vector_from_json(const json& j, int dim, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ParseError(what + " must be a " + std::to_string(dim) + "-vector");
  }
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = expect_finite(j[static_cast<size_t>(i)], what + " entry");
  return v;
}

json tolerances_to_json(const Tolerances& t) {
  json j;
  j["gap_tol"] = t.gap_tol;
  j["rank_tol_rel"] = t.rank_tol_rel;
  j["solvability_tol"] = t.solvability_tol;
  j["verify_tol"] = t.verify_tol;
  return j;
}

Tolerances tolerances_from_json(const json& j) {
  Tolerances t = default_tolerances();
  reject_unknown_keys(j, {"gap_tol", "rank_tol_rel", "solvability_tol", "verify_tol"},
                      "tolerances");
  if (j.contains("gap_tol")) t.gap_tol = expect_finite(j["gap_tol"], "gap_tol");
  if (j.contains("rank_tol_rel")) t.rank_tol_rel = expect_finite(j["rank_tol_rel"], "rank_tol_rel");
  if (j.contains("solvability_tol")) {
    t.solvability_tol = expect_finite(j["solvability_tol"], "solvability_tol");
  }
  if (j.contains("verify_tol")) t.verify_tol = expect_finite(j["verify_tol"], "verify_tol");
  return t;
}

json state_to_json(const StateSequence& x) {
  json j;
  j["start"] = x.lo();
  json samples = json::array();
  for (int n = x.lo(); n <= x.hi(); ++n) samples.push_back(vector_to_json(x.at(n)));
  j["samples"] = std::move(samples);
  return j;
}

StateSequence state_from_json(const json& j, int dim, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + " must be an object");
  reject_unknown_keys(j, {"samples", "start"}, what);
  if (!j.contains("start") || !j.contains("samples")) {
    throw ParseError(what + " needs 'start' and 'samples'");
  }
  const int start = expect_int(j["start"], what + ".start");
  const json& samples = j["samples"];
  if (!samples.is_array() || samples.empty()) {
    throw ParseError(what + ".samples must be a non-empty array");
  }
  std::vector<Vector> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(vector_from_json(s, dim, what + " sample"));
  return StateSequence(start, std::move(out));
}

json problem_to_json(const ProblemFile& p) {
  json j;
  j["dim"] = p.seq.dim();
  json forcing = json::object();
  for (const auto& [n, v] : p.forcing.entries()) forcing[std::to_string(n)] = vector_to_json(v);
  j["forcing"] = std::move(forcing);
  j["output_window"] = json::array({p.out_lo, p.out_hi});
  j["tail_minus"] = matrix_to_json(p.seq.tail_minus());
  j["tail_plus"] = matrix_to_json(p.seq.tail_plus());
  j["tolerances"] = tolerances_to_json(p.tol);
  json window = json::object();
  for (int n = p.seq.window_lo(); n < p.seq.window_hi(); ++n) {
    window[std::to_string(n)] = matrix_to_json(p.seq.matrix_at(n));
  }
  j["window"] = std::move(window);
  j["window_hi"] = p.seq.window_hi();
  j["window_lo"] = p.seq.window_lo();
  return j;
}

ProblemFile problem_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("problem must be a JSON object");
  reject_unknown_keys(j,
                      {"dim", "forcing", "output_window", "tail_minus", "tail_plus", "tolerances",
                       "window", "window_hi", "window_lo"},
                      "problem");
  for (const char* key : {"dim", "tail_minus", "tail_plus", "window_hi", "window_lo"}) {
    if (!j.contains(key)) throw ParseError(std::string("problem is missing '") + key + "'");
  }
  const int dim = expect_int(j["dim"], "dim");
  if (dim <= 0) throw ParseError("dim must be positive");
  const int window_lo = expect_int(j["window_lo"], "window_lo");
  const int window_hi = expect_int(j["window_hi"], "window_hi");
  if (window_lo > 0 || window_hi < 0 || window_lo > window_hi) {
    throw ParseError("window bounds must satisfy window_lo <= 0 <= window_hi");
  }

  std::vector<Matrix> window(static_cast<size_t>(window_hi - window_lo));
  std::vector<bool> seen(window.size(), false);
  const json jwindow = j.contains("window") ? j["window"] : json::object();
  if (!jwindow.is_object()) throw ParseError("window must be an object keyed by index");
  for (const auto& [key, value] : jwindow.items()) {
    const int n = parse_index_key(key, "window");
    if (n < window_lo || n >= window_hi) {
      throw ParseError("window key " + key + " outside [window_lo, window_hi)");
    }
    window[static_cast<size_t>(n - window_lo)] = matrix_from_json(value, dim, "window[" + key + "]");
    seen[static_cast<size_t>(n - window_lo)] = true;
  }
  for (size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw ParseError("window is missing index " +
                       std::to_string(window_lo + static_cast<int>(i)));
    }
  }

  std::map<int, Vector> entries;
  const json jforcing = j.contains("forcing") ? j["forcing"] : json::object();
  if (!jforcing.is_object()) throw ParseError("forcing must be an object keyed by index");
  for (const auto& [key, value] : jforcing.items()) {
    entries[parse_index_key(key, "forcing")] = vector_from_json(value, dim, "forcing[" + key + "]");
  }

  int out_lo = -8;
  int out_hi = 8;
  if (j.contains("output_window")) {
    const json& ow = j["output_window"];
    if (!ow.is_array() || ow.size() != 2) throw ParseError("output_window must be [lo, hi]");
    out_lo = expect_int(ow[0], "output_window[0]");
    out_hi = expect_int(ow[1], "output_window[1]");
    if (out_lo > out_hi) throw ParseError("output_window must be nondecreasing");
  }

  Tolerances tol =
      j.contains("tolerances") ? tolerances_from_json(j["tolerances"]) : default_tolerances();

  try {
    OperatorSequence seq(window_lo, std::move(window),
                         matrix_from_json(j["tail_minus"], dim, "tail_minus"),
                         matrix_from_json(j["tail_plus"], dim, "tail_plus"));
    return ProblemFile{std::move(seq), ForcingSequence(dim, std::move(entries)), tol, out_lo,
                       out_hi};
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid problem data: ") + e.what());
  }
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

json parse_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError(std::string("malformed JSON in ") + what);
  return j;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << text;
}

json certificate_to_json(const CertificateRecord& c) {
  json j;
  j["k"] = c.k;
  j["lambda"] = c.lambda;
  j["max_ratio"] = c.max_ratio;
  j["projector"] = matrix_to_json(c.projector);
  j["verified"] = c.verified;
  j["window"] = json::array({c.win_lo, c.win_hi});
  return j;
}

CertificateRecord certificate_from_json(const json& j, int dim, const std::string& what) {
  reject_unknown_keys(j, {"k", "lambda", "max_ratio", "projector", "verified", "window"}, what);
  CertificateRecord c;
  c.k = expect_finite(j.at("k"), what + ".k");
  c.lambda = expect_finite(j.at("lambda"), what + ".lambda");
  c.max_ratio = expect_finite(j.at("max_ratio"), what + ".max_ratio");
  c.projector = matrix_from_json(j.at("projector"), dim, what + ".projector");
  c.verified = expect_bool(j.at("verified"), what + ".verified");
  const json& w = j.at("window");
  if (!w.is_array() || w.size() != 2) throw ParseError(what + ".window must be [lo, hi]");
  c.win_lo = expect_int(w[0], what + ".window[0]");
  c.win_hi = expect_int(w[1], what + ".window[1]");
  return c;
}

json classification_to_json(const Classification& c) {
  json j;
  j["d"] = c.d;
  j["dichotomy_on_z"] = c.dichotomy_on_z;
  j["dim_coker"] = c.dim_coker;
  j["dim_ker"] = c.dim_ker;
  j["index"] = c.index;
  j["r"] = c.r;
  j["trichotomy"] = c.trichotomy;
  return j;
}

Classification classification_from_json(const json& j) {
  reject_unknown_keys(
      j, {"d", "dichotomy_on_z", "dim_coker", "dim_ker", "index", "r", "trichotomy"},
      "classification");
  Classification c;
  c.d = expect_int(j.at("d"), "classification.d");
  c.dichotomy_on_z = expect_bool(j.at("dichotomy_on_z"), "classification.dichotomy_on_z");
  c.dim_coker = expect_int(j.at("dim_coker"), "classification.dim_coker");
  c.dim_ker = expect_int(j.at("dim_ker"), "classification.dim_ker");
  c.index = expect_int(j.at("index"), "classification.index");
  c.r = expect_int(j.at("r"), "classification.r");
  c.trichotomy = expect_bool(j.at("trichotomy"), "classification.trichotomy");
  return c;
}

json solvability_to_json(const SolvabilityReport& s) {
  json j;
  j["d_conditions"] = s.d_conditions;
  j["residual_norm"] = s.residual_norm;
  j["residual_vector"] = vector_to_json(s.residual_vector);
  j["solvable"] = s.solvable;
  return j;
}

SolvabilityReport solvability_from_json(const json& j, int dim) {
  reject_unknown_keys(j, {"d_conditions", "residual_norm", "residual_vector", "solvable"},
                      "solvability");
  SolvabilityReport s;
  s.d_conditions = expect_int(j.at("d_conditions"), "solvability.d_conditions");
  s.residual_norm = expect_finite(j.at("residual_norm"), "solvability.residual_norm");
  s.residual_vector = vector_from_json(j.at("residual_vector"), dim, "solvability.residual_vector");
  s.solvable = expect_bool(j.at("solvable"), "solvability.solvable");
  return s;
}

}  // namespace

Tolerances default_tolerances() {
  Tolerances t;
  t.rank_tol_rel = env_or("ZGREEN_RANK_TOL_REL", t.rank_tol_rel);
  t.gap_tol = env_or("ZGREEN_GAP_TOL", t.gap_tol);
  t.solvability_tol = env_or("ZGREEN_SOLVABILITY_TOL", t.solvability_tol);
  t.verify_tol = env_or("ZGREEN_VERIFY_TOL", t.verify_tol);
  return t;
}

ProblemFile parse_problem(const std::string& text) {
  return problem_from_json(parse_text(text, "problem file"));
}

ProblemFile load_problem(const std::filesystem::path& path) {
  return parse_problem(read_file(path));
}

std::string serialize_problem(const ProblemFile& p) { return dump_canonical(problem_to_json(p)); }

void save_problem(const ProblemFile& p, const std::filesystem::path& path) {
  write_file(path, serialize_problem(p));
}

std::string problem_hash(const ProblemFile& p) {
  const std::string text = serialize_problem(p);
  uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

ResultFile parse_result(const std::string& text) {
  const json j = parse_text(text, "result file");
  if (!j.is_object()) throw ParseError("result must be a JSON object");
  reject_unknown_keys(j,
                      {"basis", "certificates", "classification", "matching_defect", "mode",
                       "problem", "problem_hash", "residuals", "solution", "solvability", "xi"},
                      "result");
  for (const char* key :
       {"certificates", "classification", "mode", "problem", "problem_hash", "xi"}) {
    if (!j.contains(key)) throw ParseError(std::string("result is missing '") + key + "'");
  }
  ProblemFile problem = problem_from_json(j.at("problem"));
  const int dim = problem.seq.dim();

  ResultFile r{.mode = j.at("mode").get<std::string>(),
               .hash = j.at("problem_hash").get<std::string>(),
               .problem = std::move(problem),
               .cert_plus = {},
               .cert_minus = {},
               .classification = classification_from_json(j.at("classification")),
               .solvability = std::nullopt,
               .solution = std::nullopt,
               .basis = {},
               .xi = vector_from_json(j.at("xi"), dim, "xi"),
               .matching_defect = 0.0,
               .residuals = std::nullopt};
  if (r.mode != "analyze" && r.mode != "solve" && r.mode != "quasi") {
    throw ParseError("mode must be analyze, solve or quasi");
  }
  const json& certs = j.at("certificates");
  reject_unknown_keys(certs, {"minus", "plus"}, "certificates");
  r.cert_plus = certificate_from_json(certs.at("plus"), dim, "certificates.plus");
  r.cert_minus = certificate_from_json(certs.at("minus"), dim, "certificates.minus");
  if (j.contains("matching_defect")) {
    r.matching_defect = expect_finite(j["matching_defect"], "matching_defect");
  }
  if (j.contains("solvability")) r.solvability = solvability_from_json(j["solvability"], dim);
  if (j.contains("solution")) r.solution = state_from_json(j["solution"], dim, "solution");
  if (j.contains("basis")) {
    const json& basis = j["basis"];
    if (!basis.is_array()) throw ParseError("basis must be an array");
    for (size_t i = 0; i < basis.size(); ++i) {
      r.basis.push_back(state_from_json(basis[i], dim, "basis[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("residuals")) {
    const json& res = j["residuals"];
    reject_unknown_keys(res, {"condition", "dynamics", "jump"}, "residuals");
    ResidualRecord rec;
    rec.condition = expect_finite(res.at("condition"), "residuals.condition");
    rec.dynamics = expect_finite(res.at("dynamics"), "residuals.dynamics");
    rec.jump = expect_finite(res.at("jump"), "residuals.jump");
    r.residuals = rec;
  }
  return r;
}

ResultFile load_result(const std::filesystem::path& path) { return parse_result(read_file(path)); }

std::string serialize_result(const ResultFile& r) {
  json j;
  if (!r.basis.empty()) {
    json basis = json::array();
    for (const auto& b : r.basis) basis.push_back(state_to_json(b));
    j["basis"] = std::move(basis);
  }
  json certs;
  certs["minus"] = certificate_to_json(r.cert_minus);
  certs["plus"] = certificate_to_json(r.cert_plus);
  j["certificates"] = std::move(certs);
  j["classification"] = classification_to_json(r.classification);
  j["matching_defect"] = r.matching_defect;
  j["mode"] = r.mode;
  j["problem"] = problem_to_json(r.problem);
  j["problem_hash"] = r.hash;
  if (r.residuals) {
    json res;
    res["condition"] = r.residuals->condition;
    res["dynamics"] = r.residuals->dynamics;
    res["jump"] = r.residuals->jump;
    j["residuals"] = std::move(res);
  }
  if (r.solution) j["solution"] = state_to_json(*r.solution);
  if (r.solvability) j["solvability"] = solvability_to_json(*r.solvability);
  j["xi"] = vector_to_json(r.xi);
  return dump_canonical(j);
}

void save_result(const ResultFile& r, const std::filesystem::path& path) {
  write_file(path, serialize_result(r));
}

std::string solution_csv(const StateSequence& x) {
  std::ostringstream os;
  os << "n";
  for (int i = 1; i <= x.dim(); ++i) os << ",x_" << i;
  os << ",norm\n";
  auto fmt = [](double v) { return json(v).dump(); };
  for (int n = x.lo(); n <= x.hi(); ++n) {
    os << n;
    for (int i = 0; i < x.dim(); ++i) os << "," << fmt(x.at(n)(i));
    os << "," << fmt(x.at(n).norm()) << "\n";
  }
  return os.str();
}

ProblemFile demo_problem(const std::string& name) {
  const Tolerances tol = default_tolerances();
  if (name == "saddle") {
    Matrix a(2, 2);
    a << 0.5, 0.0, 0.0, 2.0;
    std::map<int, Vector> forcing;
    forcing[0] = Vector{{1.0, 0.0}};
    return ProblemFile{OperatorSequence::constant(a), ForcingSequence(2, std::move(forcing)), tol,
                       -8, 8};
  }
  if (name == "resonant") {
    Matrix half(1, 1);
    half << 0.5;
    Matrix two(1, 1);
    two << 2.0;
    std::map<int, Vector> forcing;
    forcing[0] = Vector{{1.0}};
    forcing[1] = Vector{{-2.0}};
    return ProblemFile{OperatorSequence(0, {}, half, two),
                       ForcingSequence(1, std::move(forcing)), tol, -8, 8};
  }
  if (name == "trichotomy") {
    Matrix plus(2, 2);
    plus << 0.5, 0.0, 0.0, 0.5;
    Matrix minus(2, 2);
    minus << 0.5, 0.0, 0.0, 2.0;
    std::map<int, Vector> forcing;
    forcing[0] = Vector{{1.0, 1.0}};
    return ProblemFile{OperatorSequence(0, {}, minus, plus),
                       ForcingSequence(2, std::move(forcing)), tol, -8, 8};
  }
  throw UnknownDemo("unknown demo '" + name + "' (expected saddle, resonant or trichotomy)");
}

}  // namespace zgreen
