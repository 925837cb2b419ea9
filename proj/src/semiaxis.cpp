#include "zgreen/semiaxis.hpp"

#include <algorithm>

#include "zgreen/errors.hpp"

namespace zgreen {

namespace {

// The commutation tolerance below which the tail-power route is trusted.
constexpr double kCommutationTol = 1e-8;

}  // namespace

SemiAxisWeights::SemiAxisWeights(const OperatorSequence& seq, const Matrix& projector_at_zero,
                                 bool plus_axis)
    : seq_(seq), plus_axis_(plus_axis) {
  const int dim = seq.dim();
  if (projector_at_zero.rows() != dim || projector_at_zero.cols() != dim) {
    throw ShapeMismatch("projector dimension does not match the operator family");
  }
  anchor_ = plus_axis ? seq.window_hi() : seq.window_lo();
  tail_ = plus_axis ? seq.tail_plus() : seq.tail_minus();
  tail_inv_ = seq.matrix_inverse_at(plus_axis ? anchor_ : anchor_ - 1);
  proj_zero_ = projector_at_zero;
  comp_zero_ = Matrix::Identity(dim, dim) - proj_zero_;
  proj_anchor_ = seq.transition(anchor_, 0) * proj_zero_ * seq.transition(0, anchor_);
  comp_anchor_ = Matrix::Identity(dim, dim) - proj_anchor_;
  decay_fwd_ = plus_axis ? Matrix(tail_ * proj_anchor_) : Matrix(proj_anchor_ * tail_);
  decay_bwd_ = plus_axis ? Matrix(comp_anchor_ * tail_inv_) : Matrix(tail_inv_ * comp_anchor_);
  const double comm = spectral_norm(tail_ * proj_anchor_ - proj_anchor_ * tail_);
  tail_compatible_ =
      comm <= kCommutationTol * spectral_norm(tail_) * (1.0 + spectral_norm(proj_anchor_));
}

SemiAxisWeights SemiAxisWeights::plus(const OperatorSequence& seq,
                                      const Matrix& projector_at_zero) {
  return SemiAxisWeights(seq, projector_at_zero, true);
}

SemiAxisWeights SemiAxisWeights::minus(const OperatorSequence& seq,
                                       const Matrix& projector_at_zero) {
  return SemiAxisWeights(seq, projector_at_zero, false);
}

Matrix SemiAxisWeights::naive_weighted_transition(Part part, int n, int m) const {
  const Matrix& pi = part == Part::projector ? proj_zero_ : comp_zero_;
  return seq_.transition(n, 0) * pi * seq_.transition(0, m);
}

Matrix SemiAxisWeights::weighted_transition(Part part, int n, int m) const {
  if (plus_axis_ ? (n < 0 || m < 0) : (n > 0 || m > 0)) {
    throw WrongAxis("weighted transition evaluated off the semi-axis");
  }
  const bool decay_side = part == Part::projector;
  if (decay_side ? n < m : m < n) {
    throw Error("weighted transition evaluated outside its decay regime");
  }
  if (!tail_compatible_) return naive_weighted_transition(part, n, m);

  const int dn = plus_axis_ ? std::max(n - anchor_, 0) : std::max(anchor_ - n, 0);
  const int dm = plus_axis_ ? std::max(m - anchor_, 0) : std::max(anchor_ - m, 0);
  // Tail power carried by the projected one-step factor; commutation with the
  // tail collapses T^{a} Pi T^{b} to factor^|a+b| applied to Pi.
  const int d = (decay_side == plus_axis_) ? dn - dm : dm - dn;
  const Matrix& factor = decay_side ? decay_fwd_ : decay_bwd_;
  Matrix core = decay_side ? proj_anchor_ : comp_anchor_;
  for (int i = 0; i < d; ++i) core = factor * core;

  const bool n_in_window = plus_axis_ ? n < anchor_ : n > anchor_;
  const bool m_in_window = plus_axis_ ? m < anchor_ : m > anchor_;
  if (n_in_window) core = seq_.transition(n, anchor_) * core;
  if (m_in_window) core = core * seq_.transition(anchor_, m);
  return core;
}

}  // namespace zgreen
