#pragma once

#include "zgreen/linsys.hpp"
#include "zgreen/types.hpp"

namespace zgreen {

/// Evaluates the dichotomy-weighted transitions
///
///   U(n) * Pi * U(m)^{-1}        (Part::projector,  needs n >= m)
///   U(n) * (I - Pi) * U(m)^{-1}  (Part::complement, needs m >= n)
///
/// on one semi-axis without forming the exponentially large factors U(n),
/// U(m)^{-1}. Beyond the window the dynamics is the constant tail T, so when
/// the projector transported to the window edge commutes with T the tail part
/// collapses to powers of the spectrally small matrices T*Pi and (I-Pi)*T^{-1};
/// each power stays of the order of the result itself, which keeps the
/// evaluation accurate exactly in the decay regimes the two estimates assert.
///
/// For a projector that does not commute with the tail (a certificate that is
/// simply wrong) the evaluation falls back to plain transition products; those
/// grow exponentially, which is also what the true weighted transition does in
/// that case, so verification still fails loudly.
class SemiAxisWeights {
 public:
  enum class Part { projector, complement };

  /// projector_at_zero is anchored at time 0; it is transported to the window
  /// edge (window_hi for plus, window_lo for minus) internally.
  static SemiAxisWeights plus(const OperatorSequence& seq, const Matrix& projector_at_zero);
  static SemiAxisWeights minus(const OperatorSequence& seq, const Matrix& projector_at_zero);

  /// U(n) Pi U(m)^{-1} or its complement; n, m must lie on the semi-axis and
  /// respect the part's ordering (projector: n >= m, complement: m >= n).
  Matrix weighted_transition(Part part, int n, int m) const;

  const Matrix& projector_at_anchor() const { return proj_anchor_; }
  bool tail_compatible() const { return tail_compatible_; }
  bool is_plus() const { return plus_axis_; }

 private:
  SemiAxisWeights(const OperatorSequence& seq, const Matrix& projector_at_zero, bool plus_axis);

  Matrix naive_weighted_transition(Part part, int n, int m) const;

  OperatorSequence seq_;
  bool plus_axis_ = true;
  int anchor_ = 0;          // window_hi (plus) or window_lo (minus)
  Matrix tail_;             // the constant matrix beyond the anchor
  Matrix tail_inv_;
  Matrix proj_zero_;        // projector as given, anchored at time 0
  Matrix comp_zero_;
  Matrix proj_anchor_;      // projector transported to the anchor time
  Matrix comp_anchor_;      // I - proj_anchor_
  Matrix decay_fwd_;        // T*Pi (plus) or Pi*T (minus): powers decay forward
  Matrix decay_bwd_;        // (I-Pi)*T^{-1} (plus) or T^{-1}*(I-Pi) (minus)
  bool tail_compatible_ = false;
};

}  // namespace zgreen
