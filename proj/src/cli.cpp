#include "zgreen/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include "zgreen/oracle.hpp"
#include "zgreen/problem_io.hpp"

namespace zgreen {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNoDichotomy = 2;
constexpr int kExitUnsolvable = 3;
constexpr int kExitVerification = 4;

struct Analysis {
  GreenContext ctx;
  DichotomyCertificate cert_plus;
  DichotomyCertificate cert_minus;
  VerificationReport rep_plus;
  VerificationReport rep_minus;
};

Analysis analyze_problem(const ProblemFile& p) {
  GreenContext ctx(p.seq, p.tol);
  const int extent_plus = std::max(20, 2 * p.seq.window_hi());
  const int extent_minus = std::max(20, -2 * p.seq.window_lo());
  DichotomyCertificate cp = certify_axis(p.seq, Axis::plus, extent_plus, p.tol.gap_tol);
  DichotomyCertificate cm = certify_axis(p.seq, Axis::minus, extent_minus, p.tol.gap_tol);
  VerificationReport vp = verify_dichotomy(p.seq, cp, 0, extent_plus);
  VerificationReport vm = verify_dichotomy(p.seq, cm, -extent_minus, 0);
  return Analysis{std::move(ctx), std::move(cp), std::move(cm), vp, vm};
}

CertificateRecord to_record(const DichotomyCertificate& c, const VerificationReport& v) {
  return CertificateRecord{c.projector, c.k, c.lambda, v.max_ratio, v.verified, c.window_lo,
                           c.window_hi};
}

ResultFile base_result(const ProblemFile& p, const Analysis& a, const std::string& mode) {
  ResultFile r{.mode = mode,
               .hash = problem_hash(p),
               .problem = p,
               .cert_plus = to_record(a.cert_plus, a.rep_plus),
               .cert_minus = to_record(a.cert_minus, a.rep_minus),
               .classification = a.ctx.classification(),
               .solvability = std::nullopt,
               .solution = std::nullopt,
               .basis = {},
               .xi = Vector::Zero(p.seq.dim()),
               .matching_defect = 0.0,
               .residuals = std::nullopt};
  return r;
}

// Max one-step defect of the stored samples against the forcing. In quasi
// mode the step into n = 0 carries the matching defect and is skipped.
double dynamics_residual(const OperatorSequence& seq, const ForcingSequence& h,
                         const StateSequence& x, bool quasi) {
  const StateSequence lx = difference_operator(seq, x);
  double worst = 0.0;
  for (int n = lx.lo(); n <= lx.hi(); ++n) {
    if (quasi && n == -1) continue;
    worst = std::max(worst, (lx.at(n) - h.at(n)).norm());
  }
  return worst;
}

void report_classification(std::ostream& out, const Classification& c) {
  out << "classification: dim ker = " << c.dim_ker << ", dim coker = " << c.dim_coker
      << ", index = " << c.index << ", r = " << c.r << ", d = " << c.d << "\n";
  out << "flags: trichotomy = " << (c.trichotomy ? "yes" : "no")
      << ", dichotomy on Z = " << (c.dichotomy_on_z ? "yes" : "no") << "\n";
}

void report_certificate(std::ostream& out, const char* axis, const DichotomyCertificate& c,
                        const VerificationReport& v) {
  out << "dichotomy " << axis << ": " << (v.verified ? "verified" : "NOT verified")
      << " on [" << c.window_lo << ", " << c.window_hi << "]  (k = " << c.k
      << ", lambda = " << c.lambda << ", max ratio = " << v.max_ratio << ")\n";
}

void emit_result(const ResultFile& r, const std::string& output_path, std::ostream& out) {
  if (output_path.empty()) {
    out << serialize_result(r);
  } else {
    save_result(r, output_path);
  }
}

ProblemFile load_with_override(const std::string& path, double rank_tol_rel) {
  ProblemFile p = load_problem(path);
  if (rank_tol_rel > 0.0) p.tol.rank_tol_rel = rank_tol_rel;
  return p;
}

int cmd_analyze(const std::string& path, double rank_override, const std::string& output_path,
                std::ostream& out) {
  const ProblemFile p = load_with_override(path, rank_override);
  const Analysis a = analyze_problem(p);
  report_certificate(out, "plus", a.cert_plus, a.rep_plus);
  report_certificate(out, "minus", a.cert_minus, a.rep_minus);
  report_classification(out, a.ctx.classification());
  if (!output_path.empty()) emit_result(base_result(p, a, "analyze"), output_path, out);
  return kExitOk;
}

int cmd_solve(const std::string& path, double rank_override, bool quasi,
              const std::string& output_path, const std::string& csv_path, std::ostream& out) {
  const ProblemFile p = load_with_override(path, rank_override);
  const Analysis a = analyze_problem(p);
  const SolvabilityReport rep = solvability_residual(a.ctx, p.forcing);
  out << "solvability residual = " << rep.residual_norm << " over " << rep.d_conditions
      << " condition(s): " << (rep.solvable ? "solvable" : "not solvable") << "\n";

  BoundedSolutionFamily fam =
      quasi ? quasi_solve(a.ctx, p.forcing, p.out_lo, p.out_hi)
            : solve_bounded(a.ctx, p.forcing, p.out_lo, p.out_hi);
  out << "bounded family: r = " << fam.r << ", samples on [" << p.out_lo << ", " << p.out_hi
      << "]";
  if (quasi) out << ", matching defect = " << fam.matching_defect;
  out << "\n";

  ResultFile r = base_result(p, a, quasi ? "quasi" : "solve");
  r.solvability = rep;
  r.solution = fam.particular;
  r.basis = fam.basis;
  r.xi = fam.xi_particular;
  r.matching_defect = fam.matching_defect;
  ResidualRecord res;
  res.dynamics = dynamics_residual(p.seq, p.forcing, fam.particular, quasi);
  res.jump = matching_jump(a.ctx, p.forcing).norm();
  res.condition = rep.residual_norm;
  r.residuals = res;
  emit_result(r, output_path, out);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw Error("cannot write file: " + csv_path);
    csv << solution_csv(fam.particular);
  }
  return kExitOk;
}

int cmd_verify(const std::string& path, std::ostream& out) {
  const ResultFile r = load_result(path);
  if (!r.solution || !r.residuals) {
    throw ParseError("result file has no solution samples to verify");
  }
  if (problem_hash(r.problem) != r.hash) {
    throw VerificationFailure("problem_hash", "stored hash does not match the embedded problem");
  }
  const ProblemFile& p = r.problem;
  const bool quasi = r.mode == "quasi";
  const GreenContext ctx(p.seq, p.tol);

  const double dyn = dynamics_residual(p.seq, p.forcing, *r.solution, quasi);
  const double jump = matching_jump(ctx, p.forcing).norm();
  const double cond = solvability_residual(ctx, p.forcing).residual_norm;
  const double scale = 1.0 + p.forcing.sup_norm();

  auto reproduced = [&](const char* what, double stored, double recomputed) {
    out << what << ": stored = " << stored << ", recomputed = " << recomputed << "\n";
    if (std::abs(stored - recomputed) > 1e-12) {
      throw VerificationFailure(what, "stored residual is not reproduced");
    }
  };
  reproduced("dynamics", r.residuals->dynamics, dyn);
  reproduced("jump", r.residuals->jump, jump);
  reproduced("condition", r.residuals->condition, cond);

  if (dyn > p.tol.verify_tol * scale) {
    throw VerificationFailure("dynamics", "one-step defect exceeds verify_tol");
  }
  if (!quasi && jump > p.tol.verify_tol * scale) {
    throw VerificationFailure("jump", "gluing mismatch exceeds verify_tol");
  }
  if (!quasi && cond > p.tol.solvability_tol * scale) {
    throw VerificationFailure("condition", "solvability residual exceeds tolerance");
  }
  out << "verification ok\n";
  return kExitOk;
}

int cmd_oracle(const std::string& path, double rank_override, int half_width,
               std::ostream& out) {
  const ProblemFile p = load_with_override(path, rank_override);
  const GreenContext ctx(p.seq, p.tol);
  int n = half_width;
  if (n <= 0) {
    n = 10;
    if (!p.forcing.empty()) {
      n = std::max(n, std::max(std::abs(p.forcing.support_lo()),
                               std::abs(p.forcing.support_hi())) +
                          2);
    }
    n = std::max({n, p.seq.window_hi() + 1, -p.seq.window_lo() + 1});
  }
  const TruncatedProblem tp = TruncatedProblem::build(ctx, p.forcing, n);
  const StateSequence direct = truncated_bounded_solve(tp);
  const BoundedSolutionFamily fam = solve_bounded(ctx, p.forcing, -n, n);
  const double dist = distance_mod_family(fam.particular, direct, fam.basis);
  out << "half width N = " << n << ", distance modulo family = " << dist << "\n";
  if (dist > 1e-6) {
    throw VerificationFailure("oracle", "formula and direct solver disagree");
  }
  out << "oracle agreement ok\n";
  return kExitOk;
}

int cmd_demo(const std::string& name, std::string output_path, std::ostream& out) {
  const ProblemFile p = demo_problem(name);
  if (output_path.empty()) output_path = name + ".json";
  save_problem(p, output_path);
  out << "wrote " << output_path << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"existence, construction and verification of bounded solutions of\n"
               "x_{n+1} = A_n x_n + h_n with exponential dichotomy on both semi-axes"};
  app.name("zgreen");
  app.require_subcommand(1);

  std::string problem_path;
  std::string output_path;
  std::string csv_path;
  std::string demo_name;
  bool quasi = false;
  int half_width = 0;
  double rank_tol_rel = 0.0;

  CLI::App* analyze = app.add_subcommand("analyze", "dichotomy certificates and classification");
  analyze->add_option("file", problem_path, "problem file")->required();
  analyze->add_option("--output", output_path, "write the analysis as a result file");
  analyze->add_option("--rank-tol-rel", rank_tol_rel, "override the relative rank tolerance");

  CLI::App* solve = app.add_subcommand("solve", "construct the bounded solution family");
  solve->add_option("file", problem_path, "problem file")->required();
  solve->add_flag("--quasi", quasi, "least-squares quasisolution when unsolvable");
  solve->add_option("--output", output_path, "write the result file here instead of stdout");
  solve->add_option("--csv", csv_path, "write solution samples as CSV");
  solve->add_option("--rank-tol-rel", rank_tol_rel, "override the relative rank tolerance");

  CLI::App* verify = app.add_subcommand("verify", "re-check a stored result");
  verify->add_option("file", problem_path, "result file")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "compare against the truncated direct solver");
  oracle->add_option("file", problem_path, "problem file")->required();
  oracle->add_option("--half-width", half_width, "truncation half width N");
  oracle->add_option("--rank-tol-rel", rank_tol_rel, "override the relative rank tolerance");

  CLI::App* demo = app.add_subcommand("demo", "write a built-in problem file");
  demo->add_option("name", demo_name, "saddle | resonant | trichotomy")->required();
  demo->add_option("--output", output_path, "target path (default <name>.json)");

  std::vector<std::string> argv_store = args;
  std::vector<char*> argv;
  std::string prog = "zgreen";
  argv.push_back(prog.data());
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (app.got_subcommand(analyze)) {
      return cmd_analyze(problem_path, rank_tol_rel, output_path, out);
    }
    if (app.got_subcommand(solve)) {
      return cmd_solve(problem_path, rank_tol_rel, quasi, output_path, csv_path, out);
    }
    if (app.got_subcommand(verify)) return cmd_verify(problem_path, out);
    if (app.got_subcommand(oracle)) return cmd_oracle(problem_path, rank_tol_rel, half_width, out);
    if (app.got_subcommand(demo)) return cmd_demo(demo_name, output_path, out);
    err << "no command given\n";
    return kExitParse;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n";
    return kExitParse;
  } catch (const UnitCircleEigenvalue& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoDichotomy;
  } catch (const NotSolvable& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnsolvable;
  } catch (const InfeasibleTruncation& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnsolvable;
  } catch (const VerificationFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const UnknownDemo& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  }
}

}  // namespace zgreen
