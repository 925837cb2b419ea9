#include "zgreen/oracle.hpp"

#include <Eigen/QR>
#include <algorithm>

namespace zgreen {

TruncatedProblem TruncatedProblem::build(const GreenContext& ctx, const ForcingSequence& h,
                                         int half_width) {
  const OperatorSequence& seq = ctx.seq();
  if (h.dim() != seq.dim()) throw ShapeMismatch("forcing dimension mismatch");
  const int n = half_width;
  if (n < 1) throw Error("half width must be positive");
  if (!h.empty() && (h.support_lo() <= -n || h.support_hi() >= n - 1)) {
    throw Error("forcing support must lie strictly inside (-N, N-1)");
  }
  if (seq.window_lo() <= -n || seq.window_hi() >= n) {
    throw Error("operator window must lie strictly inside (-N, N)");
  }
  using Part = SemiAxisWeights::Part;
  TruncatedProblem p{seq, h, n,
                     ctx.weights_plus().weighted_transition(Part::projector, n, n),
                     ctx.weights_minus().weighted_transition(Part::projector, -n, -n)};
  return p;
}

StateSequence truncated_bounded_solve(const TruncatedProblem& p) {
  const int n = p.half_width;
  const int dim = p.seq.dim();
  const int cols = (2 * n + 1) * dim;  // unknowns x_{-N..N}, stacked
  const int rows = (2 * n + 2) * dim;  // 2N one-step equations + 2 boundary rows
  Matrix a = Matrix::Zero(rows, cols);
  Vector b = Vector::Zero(rows);

  auto col_of = [&](int t) { return (t + n) * dim; };
  int row = 0;
  for (int t = -n; t < n; ++t, row += dim) {
    a.block(row, col_of(t), dim, dim) = -p.seq.matrix_at(t);
    a.block(row, col_of(t + 1), dim, dim) = Matrix::Identity(dim, dim);
    b.segment(row, dim) = p.forcing.at(t);
  }
  const Matrix eye = Matrix::Identity(dim, dim);
  a.block(row, col_of(n), dim, dim) = eye - p.boundary_plus;
  row += dim;
  a.block(row, col_of(-n), dim, dim) = p.boundary_minus;

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  const Vector x = cod.solve(b);
  const double residual = (a * x - b).norm();
  if (residual > 1e-6 * (1.0 + p.forcing.sup_norm())) {
    throw InfeasibleTruncation(residual);
  }

  std::vector<Vector> samples;
  samples.reserve(static_cast<size_t>(2 * n + 1));
  for (int t = -n; t <= n; ++t) samples.push_back(x.segment(col_of(t), dim));
  return StateSequence(-n, std::move(samples));
}

double distance_mod_family(const StateSequence& x, const StateSequence& y,
                           const std::vector<StateSequence>& basis) {
  if (x.lo() != y.lo() || x.hi() != y.hi() || x.dim() != y.dim()) {
    throw RangeMismatch("sequences must share the index range");
  }
  const int len = x.size();
  const int dim = x.dim();
  Vector diff(len * dim);
  for (int t = x.lo(); t <= x.hi(); ++t) diff.segment((t - x.lo()) * dim, dim) = x.at(t) - y.at(t);

  Vector fitted = diff;
  if (!basis.empty()) {
    Matrix span(len * dim, static_cast<int>(basis.size()));
    for (size_t j = 0; j < basis.size(); ++j) {
      if (basis[j].lo() > x.lo() || basis[j].hi() < x.hi() || basis[j].dim() != dim) {
        throw RangeMismatch("basis sequence does not cover the comparison range");
      }
      for (int t = x.lo(); t <= x.hi(); ++t) {
        span.block((t - x.lo()) * dim, static_cast<int>(j), dim, 1) = basis[j].at(t);
      }
    }
    const Vector c = span.completeOrthogonalDecomposition().solve(diff);
    fitted = diff - span * c;
  }

  double worst = 0.0;
  for (int t = 0; t < len; ++t) worst = std::max(worst, fitted.segment(t * dim, dim).norm());
  return worst;
}

}  // namespace zgreen
