#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zgreen/dichotomy.hpp"
#include "zgreen/genpinv.hpp"
#include "zgreen/green.hpp"
#include "zgreen/linsys.hpp"

namespace zgreen {

/// A problem instance as stored on disk: operator family, forcing,
/// tolerances, and the window over which solutions are reported.
/// The JSON encoding is canonical — alphabetical keys, shortest
/// round-trip floats, two-space indent — so serialize(parse(s)) == s
/// for files produced by this library.
struct ProblemFile {
  OperatorSequence seq;
  ForcingSequence forcing;
  Tolerances tol;
  int out_lo = 0;
  int out_hi = 0;
};

/// Tolerance defaults, overridable through the environment variables
/// ZGREEN_RANK_TOL_REL, ZGREEN_GAP_TOL, ZGREEN_SOLVABILITY_TOL and
/// ZGREEN_VERIFY_TOL. Problem files may still override per field.
Tolerances default_tolerances();

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::filesystem::path& path);
std::string serialize_problem(const ProblemFile& p);
void save_problem(const ProblemFile& p, const std::filesystem::path& path);

/// FNV-1a 64 hash of the canonical serialization, as "fnv1a64:<hex>".
std::string problem_hash(const ProblemFile& p);

struct CertificateRecord {
  Matrix projector;
  double k = 1.0;
  double lambda = 0.5;
  double max_ratio = 0.0;
  bool verified = false;
  int win_lo = 0;
  int win_hi = 0;
};

struct ResidualRecord {
  double dynamics = 0.0;   // max one-step defect of the stored samples
  double jump = 0.0;       // gluing mismatch at 0
  double condition = 0.0;  // solvability residual norm
};

/// Analysis/solution record: problem echo plus certificates, classification,
/// and (in solve modes) the sampled solution family and its residuals.
struct ResultFile {
  std::string mode;  // "analyze", "solve" or "quasi"
  std::string hash;
  ProblemFile problem;
  CertificateRecord cert_plus;
  CertificateRecord cert_minus;
  Classification classification;
  std::optional<SolvabilityReport> solvability;
  std::optional<StateSequence> solution;
  std::vector<StateSequence> basis;
  Vector xi;
  double matching_defect = 0.0;
  std::optional<ResidualRecord> residuals;
};

ResultFile parse_result(const std::string& text);
ResultFile load_result(const std::filesystem::path& path);
std::string serialize_result(const ResultFile& r);
void save_result(const ResultFile& r, const std::filesystem::path& path);

/// CSV of the solution samples: header "n,x_1,...,x_dim,norm".
std::string solution_csv(const StateSequence& x);

/// The built-in demo problems.
ProblemFile demo_problem(const std::string& name);  // saddle | resonant | trichotomy

}  // namespace zgreen
