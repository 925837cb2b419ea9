#pragma once

#include <map>
#include <vector>

#include "zgreen/errors.hpp"
#include "zgreen/types.hpp"

namespace zgreen {

/// The operator family {A_n} of the difference equation x_{n+1} = A_n x_n + h_n,
/// stored as an explicit window of matrices plus eventually-constant tails:
///
///   A_n = tail_minus            for n <  window_lo
///   A_n = window[n - window_lo] for n in [window_lo, window_hi)
///   A_n = tail_plus             for n >= window_hi
///
/// Every matrix must be invertible; the constructor rejects matrices whose
/// smallest singular value is below inv_tol_rel times the largest.
/// Instances are immutable and safe to share across threads.
class OperatorSequence {
 public:
  OperatorSequence(int window_lo, std::vector<Matrix> window, Matrix tail_minus,
                   Matrix tail_plus, double inv_tol_rel = 1e-12);

  /// Constant family A_n = a for all n (empty window).
  static OperatorSequence constant(Matrix a);

  int dim() const { return dim_; }
  int window_lo() const { return window_lo_; }
  int window_hi() const { return window_hi_; }

  const Matrix& matrix_at(int n) const;
  Matrix matrix_inverse_at(int n) const;
  const Matrix& tail_minus() const { return tail_minus_; }
  const Matrix& tail_plus() const { return tail_plus_; }
  const std::vector<Matrix>& window() const { return window_; }

  /// Transition matrix mapping the state at time n to the state at time m:
  /// the product A_{m-1}...A_n for m > n, identity for m = n, and the
  /// inverse of the reverse product for m < n.
  Matrix transition(int m, int n) const;

  /// transition(n, 0) and its inverse transition(0, n).
  Matrix propagator(int n) const { return transition(n, 0); }
  Matrix propagator_inverse(int n) const { return transition(0, n); }

  /// sup_n ||A_n||, attained on the finitely many distinct matrices.
  double sup_norm() const { return sup_norm_; }

 private:
  int window_lo_ = 0;
  int window_hi_ = 0;
  int dim_ = 0;
  std::vector<Matrix> window_;
  Matrix tail_minus_;
  Matrix tail_plus_;
  std::vector<Matrix> window_inv_;
  Matrix tail_minus_inv_;
  Matrix tail_plus_inv_;
  double sup_norm_ = 0.0;
};

/// Finitely supported forcing {h_n}; every index absent from the map is zero.
class ForcingSequence {
 public:
  explicit ForcingSequence(int dim, std::map<int, Vector> entries = {});

  int dim() const { return dim_; }
  const std::map<int, Vector>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int support_lo() const;  // throws RangeTooShort when empty
  int support_hi() const;
  Vector at(int n) const;

  /// sup_n ||h_n|| (zero for empty support).
  double sup_norm() const;

 private:
  int dim_ = 0;
  std::map<int, Vector> entries_;
};

/// Samples x_n of a state sequence over a contiguous index range.
class StateSequence {
 public:
  StateSequence(int start, std::vector<Vector> samples);

  int dim() const { return dim_; }
  int lo() const { return start_; }
  int hi() const { return start_ + static_cast<int>(samples_.size()) - 1; }
  int size() const { return static_cast<int>(samples_.size()); }
  bool contains(int n) const { return n >= lo() && n <= hi(); }

  const Vector& at(int n) const;
  StateSequence slice(int lo, int hi) const;  // inclusive bounds
  double sup_norm() const;

 private:
  int start_ = 0;
  int dim_ = 0;
  std::vector<Vector> samples_;
};

/// One-step defect (Lx)(n) = x_{n+1} - A_n x_n, defined on the input range
/// shortened by one at the right end. Requires at least two samples.
StateSequence difference_operator(const OperatorSequence& seq, const StateSequence& x);

}  // namespace zgreen
