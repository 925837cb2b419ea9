#pragma once

#include <optional>
#include <vector>

#include "zgreen/dichotomy.hpp"
#include "zgreen/genpinv.hpp"
#include "zgreen/linsys.hpp"
#include "zgreen/semiaxis.hpp"

namespace zgreen {

struct Tolerances {
  double rank_tol_rel = 1e-10;
  double gap_tol = 1e-8;
  double solvability_tol = 1e-8;
  double verify_tol = 1e-8;
};

/// The solvability functional evaluated on a forcing: the finite sum of the
/// condition weights applied to the support, its norm, and the verdict
/// against solvability_tol * (1 + |||h|||).
struct SolvabilityReport {
  Vector residual_vector;
  double residual_norm = 0.0;
  int d_conditions = 0;
  bool solvable = false;
};

struct NotSolvable : Error {
  SolvabilityReport report;
  explicit NotSolvable(SolvabilityReport rep);
};

/// A particular bounded solution together with the homogeneous bounded
/// family: r sequences spanning the solutions of the homogeneous equation
/// that stay bounded on the whole axis. matching_defect is zero for exactly
/// solvable forcings and equals the minimal gluing mismatch otherwise.
struct BoundedSolutionFamily {
  StateSequence particular;
  std::vector<StateSequence> basis;
  int r = 0;
  Vector xi_particular;
  double matching_defect = 0.0;
};

/// Everything the bounded-solution pipeline needs, computed once from the
/// operator family: both dichotomy projectors with their weighted-transition
/// evaluators, the matching operator D = P - (I - Q), its pseudoinverse, and
/// the dimension bookkeeping. Immutable after construction.
class GreenContext {
 public:
  explicit GreenContext(OperatorSequence seq, Tolerances tol = {});

  const OperatorSequence& seq() const { return seq_; }
  const Tolerances& tolerances() const { return tol_; }
  const Matrix& projector_plus() const { return p_; }
  const Matrix& projector_minus() const { return q_; }
  const GeneralizedInverse& matching() const { return gi_; }
  const Classification& classification() const { return cls_; }
  const SemiAxisWeights& weights_plus() const { return wplus_; }
  const SemiAxisWeights& weights_minus() const { return wminus_; }

 private:
  OperatorSequence seq_;
  Tolerances tol_;
  Matrix p_;
  Matrix q_;
  SemiAxisWeights wplus_;
  SemiAxisWeights wminus_;
  GeneralizedInverse gi_;
  Classification cls_;
};

/// Weight matrix applied to h_k in the solvability functional:
/// proj_coker * Q * U(k+1)^{-1}, equal to proj_coker * (I - P) * U(k+1)^{-1}.
/// Evaluated through the semi-axis weights of the side k lies on; the two
/// forms agree because proj_coker annihilates the range of D.
Matrix condition_weight(const GreenContext& ctx, int k);

SolvabilityReport solvability_residual(const GreenContext& ctx, const ForcingSequence& h);

/// Right-hand side g of the matching equation D xi = g.
Vector matching_rhs(const GreenContext& ctx, const ForcingSequence& h);

/// Minimal-norm particular solution xi0 = D^+ g of the matching equation.
/// Throws NotSolvable when proj_coker * g is not zero within tolerance.
Vector solve_matching(const GreenContext& ctx, const Vector& g);

/// General bounded-on-one-semi-axis solution evaluated at n, for the gluing
/// parameter xi. The axis selects the branch; n must lie on it.
Vector semiaxis_solution(const GreenContext& ctx, const Vector& xi,
                         const ForcingSequence& h, int n, Axis axis);

/// Generalized Green's operator sample G[h](n); the forward branch is used
/// at n = 0.
Vector apply_green(const GreenContext& ctx, const ForcingSequence& h, int n);

/// Branch mismatch at the gluing time: (forward branch - backward branch)(0)
/// for xi = D^+ g. Zero exactly when the forcing is solvable.
Vector matching_jump(const GreenContext& ctx, const ForcingSequence& h);

/// Orthonormal basis of range(P * proj_ker): initial values of the bounded
/// homogeneous family. dim x r.
Matrix homogeneous_basis(const GreenContext& ctx);

/// Full pipeline: checks solvability, solves the matching equation, and
/// samples the particular solution and the homogeneous basis sequences over
/// [out_lo, out_hi]. Throws NotSolvable (carrying the report) when the
/// solvability condition fails.
BoundedSolutionFamily solve_bounded(const GreenContext& ctx, const ForcingSequence& h,
                                    int out_lo, int out_hi);

/// Same pipeline with xi0 = D^+ g taken unconditionally: over all pairs of
/// semi-axis-bounded solutions this minimizes the gluing mismatch at 0, so
/// the result is the least-squares quasisolution. Its one-step defect is
/// concentrated at n = -1 and equals matching_defect in norm.
BoundedSolutionFamily quasi_solve(const GreenContext& ctx, const ForcingSequence& h,
                                  int out_lo, int out_hi);

}  // namespace zgreen
