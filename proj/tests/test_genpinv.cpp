#include <doctest.h>

#include <random>

#include "support.hpp"
#include "zgreen/genpinv.hpp"

using namespace zgreen;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// Commuting projector pair sharing the eigenbasis of m: P keeps the columns
// flagged in p_mask, Q those in q_mask. Fully complementary masks make the
// matching operator vanish identically; building Q as I - P keeps that exact
// instead of leaving a rounding-noise matrix.
std::pair<Matrix, Matrix> commuting_pair(const Matrix& m, const std::vector<int>& p_mask,
                                         const std::vector<int>& q_mask) {
  const int dim = static_cast<int>(m.rows());
  Vector pd(dim), qd(dim);
  bool complementary = true;
  for (int i = 0; i < dim; ++i) {
    pd(i) = p_mask[static_cast<size_t>(i)];
    qd(i) = q_mask[static_cast<size_t>(i)];
    complementary = complementary && p_mask[static_cast<size_t>(i)] +
                                             q_mask[static_cast<size_t>(i)] ==
                                         1;
  }
  const Matrix mi = m.inverse();
  const Matrix p = m * pd.asDiagonal() * mi;
  if (complementary) return {p, Matrix::Identity(dim, dim) - p};
  return {p, m * qd.asDiagonal() * mi};
}

}  // namespace

TEST_CASE("matching operator arithmetic") {
  CHECK(spectral_norm(matching_operator(diag2(1, 0), diag2(1, 0)) - diag2(1, -1)) == 0.0);
  Matrix p0 = Matrix::Zero(1, 1);
  Matrix q1 = Matrix::Identity(1, 1);
  CHECK(spectral_norm(matching_operator(p0, q1)) == 0.0);
  const Matrix eye = Matrix::Identity(3, 3);
  CHECK(spectral_norm(matching_operator(eye, eye) - eye) == 0.0);
}

TEST_CASE("matching operator validates inputs") {
  Matrix not_proj(2, 2);
  not_proj << 1.0, 1.0, 1.0, 1.0;  // squares to 2x itself
  CHECK_THROWS_AS(matching_operator(not_proj, Matrix::Identity(2, 2)), NotIdempotent);
  CHECK_THROWS_AS(matching_operator(Matrix::Identity(2, 2), Matrix::Identity(3, 3)),
                  ShapeMismatch);
}

TEST_CASE("pseudo inverse of the canonical matching operators") {
  SUBCASE("invertible") {
    const GeneralizedInverse gi = pseudo_inverse(diag2(1, -1));
    CHECK(spectral_norm(gi.d_pinv - diag2(1, -1)) <= 1e-14);
    CHECK(spectral_norm(gi.proj_ker) <= 1e-14);
    CHECK(spectral_norm(gi.proj_coker) <= 1e-14);
    CHECK(gi.rank == 2);
  }
  SUBCASE("zero operator") {
    const GeneralizedInverse gi = pseudo_inverse(Matrix::Zero(1, 1));
    CHECK(gi.rank == 0);
    CHECK(spectral_norm(gi.d_pinv) == 0.0);
    CHECK(spectral_norm(gi.proj_ker - Matrix::Identity(1, 1)) == 0.0);
    CHECK(spectral_norm(gi.proj_coker - Matrix::Identity(1, 1)) == 0.0);
  }
  SUBCASE("rank one") {
    const GeneralizedInverse gi = pseudo_inverse(diag2(1, 0));
    CHECK(spectral_norm(gi.d_pinv - diag2(1, 0)) <= 1e-14);
    CHECK(spectral_norm(gi.proj_ker - diag2(0, 1)) <= 1e-14);
    CHECK(spectral_norm(gi.proj_coker - diag2(0, 1)) <= 1e-14);
    CHECK(gi.rank == 1);
  }
}

TEST_CASE("Moore-Penrose identities on random matrices") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 5);
    const int inner = 1 + static_cast<int>(rng() % dim);  // rank <= inner
    Matrix b(dim, inner), c(inner, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < inner; ++j) {
        b(i, j) = gauss(rng);
        c(j, i) = gauss(rng);
      }
    }
    const Matrix d = b * c;
    const GeneralizedInverse gi = pseudo_inverse(d);
    const double nd = spectral_norm(d);
    const double npinv = spectral_norm(gi.d_pinv);
    CHECK(spectral_norm(d * gi.d_pinv * d - d) <= 1e-10 * (1.0 + nd));
    CHECK(spectral_norm(gi.d_pinv * d * gi.d_pinv - gi.d_pinv) <= 1e-10 * (1.0 + npinv));
    const Matrix dp = d * gi.d_pinv;
    const Matrix pd = gi.d_pinv * d;
    CHECK(spectral_norm(dp - dp.transpose()) <= 1e-10 * (1.0 + nd * npinv));
    CHECK(spectral_norm(pd - pd.transpose()) <= 1e-10 * (1.0 + nd * npinv));
    // the stored projectors agree with their defining formulas
    const Matrix eye = Matrix::Identity(dim, dim);
    CHECK(spectral_norm(gi.proj_ker - (eye - pd)) <= 1e-10);
    CHECK(spectral_norm(gi.proj_coker - (eye - dp)) <= 1e-10);
    CHECK(idempotency_defect(gi.proj_ker) <= 1e-10);
    CHECK(idempotency_defect(gi.proj_coker) <= 1e-10);
    CHECK(gi.rank == matrix_rank(d));
  }
}

TEST_CASE("classification of the canonical systems") {
  SUBCASE("saddle: invertible matching operator") {
    const Matrix p = diag2(1, 0);
    const GeneralizedInverse gi = pseudo_inverse(matching_operator(p, p));
    const Classification cls = classify(gi, p, p);
    CHECK(cls.dim_ker == 0);
    CHECK(cls.dim_coker == 0);
    CHECK(cls.r == 0);
    CHECK(cls.d == 0);
    CHECK(cls.index == 0);
    CHECK(cls.dichotomy_on_z);
    CHECK(cls.trichotomy);  // PQ = Q holds when P = Q
  }
  SUBCASE("resonant: zero matching operator") {
    const Matrix p = Matrix::Zero(1, 1);
    const Matrix q = Matrix::Identity(1, 1);
    const GeneralizedInverse gi = pseudo_inverse(matching_operator(p, q));
    const Classification cls = classify(gi, p, q);
    CHECK(cls.dim_ker == 1);
    CHECK(cls.dim_coker == 1);
    CHECK(cls.r == 0);
    CHECK(cls.d == 1);
    CHECK_FALSE(cls.trichotomy);  // PQ = 0 != Q
  }
  SUBCASE("trichotomy: half-invertible") {
    const Matrix p = Matrix::Identity(2, 2);
    const Matrix q = diag2(1, 0);
    const GeneralizedInverse gi = pseudo_inverse(matching_operator(p, q));
    CHECK(spectral_norm(gi.d_matrix - diag2(1, 0)) <= 1e-14);
    const Classification cls = classify(gi, p, q);
    CHECK(cls.dim_ker == 1);
    CHECK(cls.r == 1);
    CHECK(cls.d == 0);
    CHECK(cls.trichotomy);
    CHECK_FALSE(cls.dichotomy_on_z);
  }
}

TEST_CASE("commutation reports") {
  const Matrix p = diag2(1, 0);

  SUBCASE("trichotomy pair") {
    const CommutationReport rep = projector_commutation(Matrix::Identity(2, 2), p, 1e-12);
    CHECK(rep.commutator_norm <= 1e-15);
    CHECK(rep.pq_eq_q);
    CHECK_FALSE(rep.pq_eq_p);
  }
  SUBCASE("equal projectors") {
    const CommutationReport rep = projector_commutation(p, p, 1e-12);
    CHECK(rep.commutator_norm == 0.0);
    CHECK(rep.pq_eq_q);
    CHECK(rep.pq_eq_p);
  }
  SUBCASE("non-commuting oblique pair") {
    Matrix q(2, 2);
    q << 1.0, 0.0, 1.0, 0.0;  // projector onto span(1,1) along e2
    CHECK(idempotency_defect(q) <= 1e-15);
    const CommutationReport rep = projector_commutation(p, q, 1e-12);
    CHECK(rep.commutator_norm > 0.5);
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(projector_commutation(p, Matrix::Identity(3, 3), 1e-12), ShapeMismatch);
  }
}

TEST_CASE("tripotent defect") {
  CHECK(tripotent_defect(diag2(1, -1)) == 0.0);
  CHECK(tripotent_defect(Matrix::Zero(1, 1)) == 0.0);

  // symmetric non-commuting pair: P onto e1, Q onto span(1,1)/sqrt(2)
  Matrix q(2, 2);
  q << 0.5, 0.5, 0.5, 0.5;
  const Matrix d = matching_operator(diag2(1, 0), q);
  CHECK(tripotent_defect(d) > 0.3);
}

TEST_CASE("commuting projector pairs: D^3 = D, and D^+ = D in the symmetric case") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 5);
    std::vector<int> pm(static_cast<size_t>(dim)), qm(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      pm[static_cast<size_t>(i)] = static_cast<int>(rng() % 2);
      qm[static_cast<size_t>(i)] = static_cast<int>(rng() % 2);
    }

    // oblique but mildly conditioned common eigenbasis
    Matrix basis = Matrix::Identity(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) basis(i, j) += 0.3 * gauss(rng);
    }
    const auto [p, q] = commuting_pair(basis, pm, qm);
    const Matrix d = matching_operator(p, q, 1e-6);
    CHECK(tripotent_defect(d) <= 1e-10 * (1.0 + spectral_norm(d)));

    const auto [ps, qs] = commuting_pair(testing::random_orthogonal(rng, dim), pm, qm);
    const Matrix ds = matching_operator(ps, qs, 1e-8);
    CHECK(tripotent_defect(ds) <= 1e-10);
    const GeneralizedInverse gi = pseudo_inverse(ds, 1e-10, 1.0);
    CHECK(spectral_norm(gi.d_pinv - ds) <= 1e-10 * (1.0 + spectral_norm(ds)));
  }
}

TEST_CASE("kernel and cokernel interplay with the dichotomy projectors") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    testing::RandomSystemSpec spec;
    spec.dim = 3 + static_cast<int>(rng() % 3);
    spec.stable_plus = static_cast<int>(rng() % (spec.dim + 1));
    spec.stable_minus = static_cast<int>(rng() % (spec.dim + 1));
    const OperatorSequence seq = testing::random_system(rng, spec);
    const Matrix p = dichotomy_projector_plus(seq);
    const Matrix q = dichotomy_projector_minus(seq);
    const GeneralizedInverse gi = pseudo_inverse(matching_operator(p, q, 1e-6));
    const Matrix eye = Matrix::Identity(seq.dim(), seq.dim());

    CHECK(spectral_norm(p * gi.proj_ker - (eye - q) * gi.proj_ker) <= 1e-10);
    CHECK(spectral_norm(gi.proj_coker * q - gi.proj_coker * (eye - p)) <= 1e-10);

    const Classification cls = classify(gi, p, q);
    CHECK(cls.r <= cls.dim_ker);
    CHECK(cls.d <= cls.dim_coker);
    // index formula for the subspace pair: r - d = s_plus - s_minus
    CHECK(cls.r - cls.d == spec.stable_plus - spec.stable_minus);
  }
}
