#pragma once

#include <random>
#include <vector>

#include "zgreen/green.hpp"
#include "zgreen/linsys.hpp"

namespace zgreen::testing {

inline Matrix random_orthogonal(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  // fix signs so the distribution is Haar-like; irrelevant for the tests
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  return q;
}

// One eigenvalue away from the unit circle: [0.2, 0.8] stable side,
// [1.25, 5] unstable side.
inline double random_eigenvalue(std::mt19937_64& rng, bool stable) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (stable) return 0.2 + 0.6 * u(rng);
  return 1.25 + 3.75 * u(rng);
}

struct RandomSystemSpec {
  int dim = 3;
  int stable_plus = 1;   // stable eigenvalue count of the forward tail
  int stable_minus = 1;  // stable eigenvalue count of the backward tail
  int window_lo = -2;
  int window_hi = 2;
  double window_scale = 0.1;
};

inline Matrix random_tail(std::mt19937_64& rng, int dim, int stable_count) {
  Vector eigs(dim);
  for (int i = 0; i < dim; ++i) eigs(i) = random_eigenvalue(rng, i < stable_count);
  const Matrix w = random_orthogonal(rng, dim);
  return w * eigs.asDiagonal() * w.transpose();
}

inline OperatorSequence random_system(std::mt19937_64& rng, const RandomSystemSpec& spec) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> window;
  for (int n = spec.window_lo; n < spec.window_hi; ++n) {
    Matrix m = Matrix::Identity(spec.dim, spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
      for (int j = 0; j < spec.dim; ++j) {
        m(i, j) += spec.window_scale * gauss(rng) / std::sqrt(double(spec.dim));
      }
    }
    window.push_back(std::move(m));
  }
  return OperatorSequence(spec.window_lo, std::move(window),
                          random_tail(rng, spec.dim, spec.stable_minus),
                          random_tail(rng, spec.dim, spec.stable_plus));
}

inline ForcingSequence random_forcing(std::mt19937_64& rng, int dim, int lo, int hi) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::map<int, Vector> entries;
  for (int n = lo; n <= hi; ++n) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
    entries[n] = v;
  }
  return ForcingSequence(dim, std::move(entries));
}

// Projects the forcing onto the solvable set by absorbing the solvability
// residual into the entry at the low end of the support; the residual lies in
// the range of the condition weight, so the correction is exact.
inline ForcingSequence make_solvable(const GreenContext& ctx, const ForcingSequence& h) {
  const SolvabilityReport rep = solvability_residual(ctx, h);
  if (rep.residual_norm <= 1e-12 * (1.0 + h.sup_norm())) return h;
  const int k0 = h.support_lo();
  const Matrix weight = condition_weight(ctx, k0);
  const GeneralizedInverse wi = pseudo_inverse(weight, 1e-12, 1.0);
  std::map<int, Vector> entries = h.entries();
  entries[k0] -= wi.d_pinv * rep.residual_vector;
  return ForcingSequence(h.dim(), std::move(entries));
}

// Pushes the forcing off the solvable set so the residual norm is at least
// margin; requires d >= 1.
inline ForcingSequence make_unsolvable(const GreenContext& ctx, const ForcingSequence& h,
                                       double margin) {
  const Matrix weight = condition_weight(ctx, 0);
  Eigen::JacobiSVD<Matrix> svd(weight, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sigma = svd.singularValues()(0);
  if (sigma <= 1e-12) throw Error("system has no solvability condition to violate");
  std::map<int, Vector> entries = h.entries();
  const Vector bump = (2.0 * margin / sigma) * svd.matrixV().col(0);
  entries[0] = (entries.count(0) ? entries[0] : Vector::Zero(h.dim())) + bump;
  return ForcingSequence(h.dim(), std::move(entries));
}

}  // namespace zgreen::testing
