#include "zgreen/green.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <utility>

namespace zgreen {

namespace {

using Part = SemiAxisWeights::Part;

// Guard for the identity proj_coker * Q == proj_coker * (I - P), which is what
// lets the solvability weights be evaluated on either semi-axis.
void check_weight_identity(const GreenContext& ctx) {
  const Matrix& pk = ctx.matching().proj_coker;
  const Matrix lhs = pk * ctx.projector_minus();
  const Matrix rhs =
      pk * (Matrix::Identity(ctx.seq().dim(), ctx.seq().dim()) - ctx.projector_plus());
  if (spectral_norm(lhs - rhs) > 1e-10 * (1.0 + spectral_norm(lhs))) {
    throw Error("solvability weight forms disagree; projectors are inconsistent");
  }
}

Vector particular_sample(const GreenContext& ctx, const Vector& xi, const ForcingSequence& h,
                         int n) {
  return semiaxis_solution(ctx, xi, h, n, n >= 0 ? Axis::plus : Axis::minus);
}

StateSequence sample_range(int lo, int hi, const std::function<Vector(int)>& f) {
  std::vector<Vector> samples;
  samples.reserve(static_cast<size_t>(hi - lo + 1));
  for (int n = lo; n <= hi; ++n) samples.push_back(f(n));
  return StateSequence(lo, std::move(samples));
}

BoundedSolutionFamily assemble_family(const GreenContext& ctx, const ForcingSequence& h,
                                      int out_lo, int out_hi) {
  if (out_lo > out_hi) throw RangeMismatch("empty output window");
  const Vector g = matching_rhs(ctx, h);
  const Vector xi0 = ctx.matching().d_pinv * g;
  const double defect = (ctx.matching().proj_coker * g).norm();

  StateSequence particular =
      sample_range(out_lo, out_hi, [&](int n) { return particular_sample(ctx, xi0, h, n); });

  const Matrix basis_vectors = homogeneous_basis(ctx);
  const Matrix bounded_map = ctx.projector_plus() * ctx.matching().proj_ker;
  std::vector<StateSequence> basis;
  for (int j = 0; j < basis_vectors.cols(); ++j) {
    // bounded_map acts as the identity on its own range, so this only cleans
    // up the basis vector; the sequence starts at U(n) * b_j.
    const Vector v = bounded_map * basis_vectors.col(j);
    basis.push_back(sample_range(out_lo, out_hi, [&](int n) {
      if (n >= 0) return Vector(ctx.weights_plus().weighted_transition(Part::projector, n, 0) * v);
      return Vector(ctx.weights_minus().weighted_transition(Part::complement, n, 0) * v);
    }));
  }

  BoundedSolutionFamily fam{std::move(particular), std::move(basis),
                            static_cast<int>(basis_vectors.cols()), xi0, defect};
  return fam;
}

}  // namespace

NotSolvable::NotSolvable(SolvabilityReport rep)
    : Error("no bounded solution on the whole axis: solvability residual " +
            std::to_string(rep.residual_norm) + " over " + std::to_string(rep.d_conditions) +
            " condition(s)"),
      report(std::move(rep)) {}

GreenContext::GreenContext(OperatorSequence seq, Tolerances tol)
    : seq_(std::move(seq)),
      tol_(tol),
      p_(dichotomy_projector_plus(seq_, tol.gap_tol)),
      q_(dichotomy_projector_minus(seq_, tol.gap_tol)),
      wplus_(SemiAxisWeights::plus(seq_, p_)),
      wminus_(SemiAxisWeights::minus(seq_, q_)),
      gi_(pseudo_inverse(matching_operator(p_, q_), tol.rank_tol_rel, 1.0)),
      cls_(classify(gi_, p_, q_, tol.rank_tol_rel)) {}

Matrix condition_weight(const GreenContext& ctx, int k) {
  check_weight_identity(ctx);
  const Matrix& pk = ctx.matching().proj_coker;
  if (k >= 0) {
    return pk * ctx.weights_plus().weighted_transition(Part::complement, 0, k + 1);
  }
  return pk * ctx.weights_minus().weighted_transition(Part::projector, 0, k + 1);
}

SolvabilityReport solvability_residual(const GreenContext& ctx, const ForcingSequence& h) {
  if (h.dim() != ctx.seq().dim()) throw ShapeMismatch("forcing dimension mismatch");
  SolvabilityReport rep;
  Vector acc = Vector::Zero(ctx.seq().dim());
  for (const auto& [k, hk] : h.entries()) acc += condition_weight(ctx, k) * hk;
  rep.residual_vector = acc;
  rep.residual_norm = acc.norm();
  rep.d_conditions = ctx.classification().d;
  rep.solvable = rep.residual_norm <= ctx.tolerances().solvability_tol * (1.0 + h.sup_norm());
  return rep;
}

Vector matching_rhs(const GreenContext& ctx, const ForcingSequence& h) {
  if (h.dim() != ctx.seq().dim()) throw ShapeMismatch("forcing dimension mismatch");
  Vector g = Vector::Zero(ctx.seq().dim());
  for (const auto& [k, hk] : h.entries()) {
    if (k >= 0) {
      g += ctx.weights_plus().weighted_transition(Part::complement, 0, k + 1) * hk;
    } else {
      g += ctx.weights_minus().weighted_transition(Part::projector, 0, k + 1) * hk;
    }
  }
  return g;
}

Vector solve_matching(const GreenContext& ctx, const Vector& g) {
  if (g.size() != ctx.seq().dim()) throw ShapeMismatch("right-hand side dimension mismatch");
  const Vector obstruction = ctx.matching().proj_coker * g;
  const double tol = ctx.tolerances().solvability_tol * (1.0 + g.norm());
  if (obstruction.norm() > tol) {
    SolvabilityReport rep;
    rep.residual_vector = obstruction;
    rep.residual_norm = obstruction.norm();
    rep.d_conditions = ctx.classification().d;
    rep.solvable = false;
    throw NotSolvable(std::move(rep));
  }
  return ctx.matching().d_pinv * g;
}

Vector semiaxis_solution(const GreenContext& ctx, const Vector& xi, const ForcingSequence& h,
                         int n, Axis axis) {
  if (xi.size() != ctx.seq().dim()) throw ShapeMismatch("gluing parameter dimension mismatch");
  if (h.dim() != ctx.seq().dim()) throw ShapeMismatch("forcing dimension mismatch");
  if (axis == Axis::plus) {
    if (n < 0) throw WrongAxis("forward branch sampled at negative time");
    const SemiAxisWeights& w = ctx.weights_plus();
    Vector x = w.weighted_transition(Part::projector, n, 0) * xi;
    for (const auto& [k, hk] : h.entries()) {
      if (k < 0) continue;
      if (k < n) {
        x += w.weighted_transition(Part::projector, n, k + 1) * hk;
      } else {
        x -= w.weighted_transition(Part::complement, n, k + 1) * hk;
      }
    }
    return x;
  }
  if (n > 0) throw WrongAxis("backward branch sampled at positive time");
  const SemiAxisWeights& w = ctx.weights_minus();
  Vector x = w.weighted_transition(Part::complement, n, 0) * xi;
  for (const auto& [k, hk] : h.entries()) {
    if (k > -1) continue;
    if (k < n) {
      x += w.weighted_transition(Part::projector, n, k + 1) * hk;
    } else {
      x -= w.weighted_transition(Part::complement, n, k + 1) * hk;
    }
  }
  return x;
}

Vector apply_green(const GreenContext& ctx, const ForcingSequence& h, int n) {
  const Vector xi0 = ctx.matching().d_pinv * matching_rhs(ctx, h);
  return particular_sample(ctx, xi0, h, n);
}

Vector matching_jump(const GreenContext& ctx, const ForcingSequence& h) {
  const Vector xi0 = ctx.matching().d_pinv * matching_rhs(ctx, h);
  return semiaxis_solution(ctx, xi0, h, 0, Axis::plus) -
         semiaxis_solution(ctx, xi0, h, 0, Axis::minus);
}

Matrix homogeneous_basis(const GreenContext& ctx) {
  const Matrix m = ctx.projector_plus() * ctx.matching().proj_ker;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  // unit-scale floor, matching the rank rule used by the classification
  const double tol =
      sv.size() > 0 ? ctx.tolerances().rank_tol_rel * std::max(1.0, sv(0)) : 0.0;
  int r = 0;
  while (r < sv.size() && sv(r) > tol) ++r;
  if (r != ctx.classification().r) {
    throw Error("bounded-family rank disagrees with the classification");
  }
  return svd.matrixU().leftCols(r);
}

BoundedSolutionFamily solve_bounded(const GreenContext& ctx, const ForcingSequence& h,
                                    int out_lo, int out_hi) {
  SolvabilityReport rep = solvability_residual(ctx, h);
  if (!rep.solvable) throw NotSolvable(std::move(rep));
  return assemble_family(ctx, h, out_lo, out_hi);
}

BoundedSolutionFamily quasi_solve(const GreenContext& ctx, const ForcingSequence& h,
                                  int out_lo, int out_hi) {
  return assemble_family(ctx, h, out_lo, out_hi);
}

}  // namespace zgreen
