#include "zgreen/linsys.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <utility>

namespace zgreen {

namespace {

// Inverts after checking the invertibility invariant (smallest singular value
// relative to the largest).
Matrix checked_inverse(const Matrix& a, double inv_tol_rel, const char* what) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= inv_tol_rel * sv(0)) {
    throw InversionFailure(std::string("singular matrix in operator family (") + what + ")");
  }
  return a.partialPivLu().inverse();
}

}  // namespace

OperatorSequence::OperatorSequence(int window_lo, std::vector<Matrix> window,
                                   Matrix tail_minus, Matrix tail_plus, double inv_tol_rel)
    : window_lo_(window_lo),
      window_hi_(window_lo + static_cast<int>(window.size())),
      window_(std::move(window)),
      tail_minus_(std::move(tail_minus)),
      tail_plus_(std::move(tail_plus)) {
  dim_ = static_cast<int>(tail_plus_.rows());
  if (dim_ <= 0) throw ShapeMismatch("operator family needs positive dimension");
  if (window_lo_ > 0 || window_hi_ < 0) {
    throw Error("window must satisfy window_lo <= 0 <= window_hi");
  }
  auto check_shape = [&](const Matrix& m, const char* what) {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw ShapeMismatch(std::string("matrix shape mismatch in operator family (") + what + ")");
    }
  };
  check_shape(tail_plus_, "tail_plus");
  check_shape(tail_minus_, "tail_minus");
  for (const auto& m : window_) check_shape(m, "window");

  tail_minus_inv_ = checked_inverse(tail_minus_, inv_tol_rel, "tail_minus");
  tail_plus_inv_ = checked_inverse(tail_plus_, inv_tol_rel, "tail_plus");
  window_inv_.reserve(window_.size());
  for (const auto& m : window_) window_inv_.push_back(checked_inverse(m, inv_tol_rel, "window"));

  sup_norm_ = std::max(spectral_norm(tail_minus_), spectral_norm(tail_plus_));
  for (const auto& m : window_) sup_norm_ = std::max(sup_norm_, spectral_norm(m));
}

OperatorSequence OperatorSequence::constant(Matrix a) {
  Matrix b = a;
  return OperatorSequence(0, {}, std::move(b), std::move(a));
}

const Matrix& OperatorSequence::matrix_at(int n) const {
  if (n < window_lo_) return tail_minus_;
  if (n >= window_hi_) return tail_plus_;
  return window_[static_cast<size_t>(n - window_lo_)];
}

Matrix OperatorSequence::matrix_inverse_at(int n) const {
  if (n < window_lo_) return tail_minus_inv_;
  if (n >= window_hi_) return tail_plus_inv_;
  return window_inv_[static_cast<size_t>(n - window_lo_)];
}

Matrix OperatorSequence::transition(int m, int n) const {
  Matrix acc = Matrix::Identity(dim_, dim_);
  if (m >= n) {
    // A_{m-1} ... A_n
    for (int j = n; j < m; ++j) acc = matrix_at(j) * acc;
  } else {
    // inverse of A_{n-1} ... A_m, accumulated stepwise
    for (int j = n - 1; j >= m; --j) acc = matrix_inverse_at(j) * acc;
  }
  return acc;
}

ForcingSequence::ForcingSequence(int dim, std::map<int, Vector> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ <= 0) throw ShapeMismatch("forcing needs positive dimension");
  for (const auto& [n, v] : entries_) {
    if (v.size() != dim_) throw ShapeMismatch("forcing entry dimension mismatch");
  }
}

int ForcingSequence::support_lo() const {
  if (entries_.empty()) throw RangeTooShort("empty forcing has no support");
  return entries_.begin()->first;
}

int ForcingSequence::support_hi() const {
  if (entries_.empty()) throw RangeTooShort("empty forcing has no support");
  return entries_.rbegin()->first;
}

Vector ForcingSequence::at(int n) const {
  auto it = entries_.find(n);
  if (it == entries_.end()) return Vector::Zero(dim_);
  return it->second;
}

double ForcingSequence::sup_norm() const {
  double best = 0.0;
  for (const auto& [n, v] : entries_) best = std::max(best, v.norm());
  return best;
}

StateSequence::StateSequence(int start, std::vector<Vector> samples)
    : start_(start), samples_(std::move(samples)) {
  if (samples_.empty()) throw RangeTooShort("state sequence needs at least one sample");
  dim_ = static_cast<int>(samples_.front().size());
  for (const auto& v : samples_) {
    if (v.size() != dim_) throw ShapeMismatch("state sample dimension mismatch");
  }
}

const Vector& StateSequence::at(int n) const {
  if (!contains(n)) throw RangeMismatch("state sequence index out of range");
  return samples_[static_cast<size_t>(n - start_)];
}

StateSequence StateSequence::slice(int lo, int hi) const {
  if (lo > hi || !contains(lo) || !contains(hi)) {
    throw RangeMismatch("slice bounds outside the sampled range");
  }
  std::vector<Vector> out;
  out.reserve(static_cast<size_t>(hi - lo + 1));
  for (int n = lo; n <= hi; ++n) out.push_back(at(n));
  return StateSequence(lo, std::move(out));
}

double StateSequence::sup_norm() const {
  double best = 0.0;
  for (const auto& v : samples_) best = std::max(best, v.norm());
  return best;
}

StateSequence difference_operator(const OperatorSequence& seq, const StateSequence& x) {
  if (x.size() < 2) throw RangeTooShort("difference operator needs at least two samples");
  if (x.dim() != seq.dim()) throw ShapeMismatch("state dimension does not match the family");
  std::vector<Vector> out;
  out.reserve(static_cast<size_t>(x.size() - 1));
  for (int n = x.lo(); n < x.hi(); ++n) {
    out.push_back(x.at(n + 1) - seq.matrix_at(n) * x.at(n));
  }
  return StateSequence(x.lo(), std::move(out));
}

}  // namespace zgreen
