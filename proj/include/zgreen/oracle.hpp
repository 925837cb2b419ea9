#pragma once

#include <vector>

#include "zgreen/green.hpp"
#include "zgreen/linsys.hpp"

namespace zgreen {

/// Truncation of the bounded-solution problem to the window [-N, N]:
/// boundedness on each side is encoded exactly (not asymptotically) by the
/// subspace conditions (I - P_N) x_N = 0 and Q_{-N} x_{-N} = 0, where the
/// boundary projectors are the dichotomy projectors transported to the
/// endpoints. Requires the forcing support inside (-N, N-1) and the operator
/// window inside (-N, N).
struct TruncatedProblem {
  OperatorSequence seq;
  ForcingSequence forcing;
  int half_width = 0;
  Matrix boundary_plus;   // U(N) P U(N)^{-1}
  Matrix boundary_minus;  // U(-N) Q U(-N)^{-1}

  static TruncatedProblem build(const GreenContext& ctx, const ForcingSequence& h,
                                int half_width);
};

/// Direct brute-force solver: stacks the 2N one-step equations and the two
/// boundary rows into one dense system and returns its minimal-norm
/// least-squares solution over [-N, N]. Uses no Green's kernel, matching
/// operator, or series formula. Throws InfeasibleTruncation when the
/// least-squares residual exceeds 1e-6 * (1 + |||h|||), which is the
/// truncated image of an unsolvable instance.
StateSequence truncated_bounded_solve(const TruncatedProblem& p);

/// min over coefficients c of max_n ||x_n - y_n - sum_j c_j basis_j(n)||,
/// with c fitted by least squares on the stacked samples. All sequences must
/// share the index range of x.
double distance_mod_family(const StateSequence& x, const StateSequence& y,
                           const std::vector<StateSequence>& basis);

}  // namespace zgreen
