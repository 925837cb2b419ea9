#include <doctest.h>

#include <random>

#include "support.hpp"
#include "zgreen/dichotomy.hpp"
#include "zgreen/genpinv.hpp"
#include "zgreen/semiaxis.hpp"

using namespace zgreen;

namespace {

OperatorSequence saddle() {
  Matrix a(2, 2);
  a << 0.5, 0.0, 0.0, 2.0;
  return OperatorSequence::constant(a);
}

OperatorSequence resonant() {
  Matrix half(1, 1), two(1, 1);
  half << 0.5;
  two << 2.0;
  return OperatorSequence(0, {}, half, two);
}

}  // namespace

TEST_CASE("unit circle splitting of a diagonal matrix") {
  Matrix t(2, 2);
  t << 0.5, 0.0, 0.0, 2.0;
  const SpectralSplit split = split_unit_circle(t);
  REQUIRE(split.stable_basis.cols() == 1);
  REQUIRE(split.unstable_basis.cols() == 1);
  CHECK(std::abs(std::abs(split.stable_basis(0, 0)) - 1.0) <= 1e-14);
  CHECK(std::abs(std::abs(split.unstable_basis(1, 0)) - 1.0) <= 1e-14);
}

TEST_CASE("splitting keeps the full generalized eigenspace of a defective block") {
  // Jordan block for eigenvalue 2 plus a stable direction: the stable
  // subspace is exactly span(e3) even though 2 has one eigenvector.
  Matrix t = Matrix::Zero(3, 3);
  t(0, 0) = 2.0;
  t(0, 1) = 1.0;
  t(1, 1) = 2.0;
  t(2, 2) = 0.5;
  const SpectralSplit split = split_unit_circle(t);
  REQUIRE(split.stable_basis.cols() == 1);
  REQUIRE(split.unstable_basis.cols() == 2);
  CHECK(std::abs(std::abs(split.stable_basis(2, 0)) - 1.0) <= 1e-12);
  const Matrix p = stable_spectral_projector(t);
  CHECK(spectral_norm(p * p - p) <= 1e-12);
  CHECK(spectral_norm(p * t - t * p) <= 1e-12);
  CHECK(spectral_norm(p - Vector{{0.0, 0.0, 1.0}} * Vector{{0.0, 0.0, 1.0}}.transpose()) <= 1e-12);
}

TEST_CASE("splitting under orthogonal similarity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 4;
    Vector eigs(dim);
    eigs << 0.3, 0.7, 1.6, 4.2;
    const Matrix w = testing::random_orthogonal(rng, dim);
    const Matrix t = w * eigs.asDiagonal() * w.transpose();
    const Matrix p = stable_spectral_projector(t);
    // spectral projector of a symmetric matrix is the orthogonal one
    const Matrix expected = w.leftCols(2) * w.leftCols(2).transpose();
    CHECK(spectral_norm(p - expected) <= 1e-11);
  }
}

TEST_CASE("unit circle eigenvalues are rejected") {
  CHECK_THROWS_AS(split_unit_circle(Matrix::Identity(2, 2)), UnitCircleEigenvalue);
  Matrix rot(2, 2);
  const double th = 0.7;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  CHECK_THROWS_AS(split_unit_circle(rot), UnitCircleEigenvalue);  // |mu| = 1, complex
  Matrix close(1, 1);
  close << 1.0 + 1e-9;
  CHECK_THROWS_AS(split_unit_circle(close, 1e-8), UnitCircleEigenvalue);
}

TEST_CASE("dichotomy projectors of the canonical systems") {
  const OperatorSequence s1 = saddle();
  Matrix p1 = dichotomy_projector_plus(s1);
  Matrix q1 = dichotomy_projector_minus(s1);
  Matrix expected(2, 2);
  expected << 1.0, 0.0, 0.0, 0.0;
  CHECK(spectral_norm(p1 - expected) <= 1e-12);
  CHECK(spectral_norm(q1 - expected) <= 1e-12);

  const OperatorSequence s2 = resonant();
  CHECK(spectral_norm(dichotomy_projector_plus(s2)) <= 1e-14);          // nothing stable forward
  CHECK(spectral_norm(dichotomy_projector_minus(s2) - Matrix::Identity(1, 1)) <= 1e-14);

  const OperatorSequence contracting = OperatorSequence::constant(0.5 * Matrix::Identity(2, 2));
  CHECK(spectral_norm(dichotomy_projector_plus(contracting) - Matrix::Identity(2, 2)) <= 1e-14);

  const OperatorSequence expanding = OperatorSequence::constant(2.0 * Matrix::Identity(2, 2));
  CHECK(spectral_norm(dichotomy_projector_minus(expanding)) <= 1e-14);
}

TEST_CASE("projector invariants on random systems") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    testing::RandomSystemSpec spec;
    spec.dim = 2 + static_cast<int>(rng() % 4);
    spec.stable_plus = static_cast<int>(rng() % (spec.dim + 1));
    spec.stable_minus = static_cast<int>(rng() % (spec.dim + 1));
    const OperatorSequence seq = testing::random_system(rng, spec);
    const Matrix p = dichotomy_projector_plus(seq);

    CHECK(idempotency_defect(p) <= 1e-10);
    CHECK(matrix_rank(p, 1e-9) + matrix_rank(Matrix::Identity(seq.dim(), seq.dim()) - p, 1e-9) ==
          seq.dim());

    // transported to the window edge the projector commutes with the tail
    const Matrix at_hi =
        seq.transition(seq.window_hi(), 0) * p * seq.transition(0, seq.window_hi());
    CHECK(spectral_norm(at_hi * seq.tail_plus() - seq.tail_plus() * at_hi) <= 1e-8);

    const Matrix q = dichotomy_projector_minus(seq);
    CHECK(idempotency_defect(q) <= 1e-10);
    const Matrix at_lo =
        seq.transition(seq.window_lo(), 0) * q * seq.transition(0, seq.window_lo());
    CHECK(spectral_norm(at_lo * seq.tail_minus() - seq.tail_minus() * at_lo) <= 1e-8);
  }
}

TEST_CASE("verify_dichotomy on the saddle") {
  const OperatorSequence s1 = saddle();
  Matrix p(2, 2);
  p << 1.0, 0.0, 0.0, 0.0;

  SUBCASE("exact constants verify with ratio one") {
    const DichotomyCertificate cert{Axis::plus, p, 1.0, 0.5, 0, 12};
    const VerificationReport rep = verify_dichotomy(s1, cert, 0, 12);
    CHECK(rep.verified);
    CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.lambda_fit == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.k_fit == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("lambda too small fails with the exact excess") {
    const DichotomyCertificate cert{Axis::plus, p, 1.0, 0.25, 0, 12};
    const VerificationReport rep = verify_dichotomy(s1, cert, 0, 12);
    CHECK_FALSE(rep.verified);
    // worst pair is the full window gap: (1/2)^12 / (1/4)^12 = 2^12
    CHECK(rep.max_ratio == doctest::Approx(4096.0).epsilon(1e-12));
  }

  SUBCASE("wrong axis is rejected") {
    const DichotomyCertificate cert{Axis::plus, p, 1.0, 0.5, 0, 12};
    CHECK_THROWS_AS(verify_dichotomy(s1, cert, -3, 3), WrongAxis);
  }
}

TEST_CASE("verify_dichotomy certifies the zero projector on the resonant family") {
  const OperatorSequence s2 = resonant();
  const DichotomyCertificate cert{Axis::plus, Matrix::Zero(1, 1), 1.0, 0.5, 0, 10};
  const VerificationReport rep = verify_dichotomy(s2, cert, 0, 10);
  CHECK(rep.verified);
  CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("certify_axis fits the tight constants for the saddle") {
  const OperatorSequence s1 = saddle();
  const DichotomyCertificate cp = certify_axis(s1, Axis::plus, 20);
  CHECK(cp.k == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cp.lambda == doctest::Approx(0.5).epsilon(1e-12));
  const VerificationReport rep = verify_dichotomy(s1, cp, 0, 20);
  CHECK(rep.verified);

  const DichotomyCertificate cm = certify_axis(s1, Axis::minus, 20);
  CHECK(cm.lambda == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(verify_dichotomy(s1, cm, -20, 0).verified);
}

TEST_CASE("fitted certificates verify on random systems") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    testing::RandomSystemSpec spec;
    spec.dim = 3;
    spec.stable_plus = 1 + static_cast<int>(rng() % 2);
    spec.stable_minus = 1 + static_cast<int>(rng() % 2);
    const OperatorSequence seq = testing::random_system(rng, spec);
    const DichotomyCertificate cp = certify_axis(seq, Axis::plus, 12);
    CHECK(cp.k >= 1.0);
    CHECK(cp.lambda > 0.0);
    CHECK(cp.lambda < 1.0);
    CHECK(verify_dichotomy(seq, cp, 0, 12).verified);
    const DichotomyCertificate cm = certify_axis(seq, Axis::minus, 12);
    CHECK(verify_dichotomy(seq, cm, -12, 0).verified);
  }
}

TEST_CASE("homogeneous boundedness along the certified directions") {
  std::mt19937_64 rng(29);
  testing::RandomSystemSpec spec;
  spec.dim = 4;
  spec.stable_plus = 2;
  spec.stable_minus = 2;
  const OperatorSequence seq = testing::random_system(rng, spec);
  const DichotomyCertificate cp = certify_axis(seq, Axis::plus, 30);
  const DichotomyCertificate cm = certify_axis(seq, Axis::minus, 30);
  const SemiAxisWeights wp = SemiAxisWeights::plus(seq, cp.projector);
  const SemiAxisWeights wm = SemiAxisWeights::minus(seq, cm.projector);

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Vector xi(4);
    for (int i = 0; i < 4; ++i) xi(i) = gauss(rng);
    for (int n = 0; n <= 30; ++n) {
      const Vector fwd = wp.weighted_transition(SemiAxisWeights::Part::projector, n, 0) * xi;
      CHECK(fwd.norm() <= cp.k * std::pow(cp.lambda, n) * xi.norm() * (1.0 + 1e-9));
    }
    for (int n = -30; n <= 0; ++n) {
      const Vector bwd = wm.weighted_transition(SemiAxisWeights::Part::complement, n, 0) * xi;
      CHECK(bwd.norm() <= cm.k * xi.norm() * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("a projector misaligned with the tail fails verification loudly") {
  // span((1,1)) along e2 is not invariant under diag(1/2, 2), so the weights
  // fall back to plain transition products and the estimates blow up.
  const OperatorSequence s1 = saddle();
  Matrix wrong(2, 2);
  wrong << 1.0, 0.0, 1.0, 0.0;
  const SemiAxisWeights w = SemiAxisWeights::plus(s1, wrong);
  CHECK_FALSE(w.tail_compatible());
  const DichotomyCertificate cert{Axis::plus, wrong, 1.0, 0.5, 0, 10};
  const VerificationReport rep = verify_dichotomy(s1, cert, 0, 10);
  CHECK_FALSE(rep.verified);
  CHECK(rep.max_ratio > 1e3);
}

TEST_CASE("weighted transitions match naive products inside a short window") {
  std::mt19937_64 rng(31);
  testing::RandomSystemSpec spec;
  spec.dim = 3;
  spec.stable_plus = 2;
  spec.stable_minus = 1;
  const OperatorSequence seq = testing::random_system(rng, spec);
  const Matrix p = dichotomy_projector_plus(seq);
  const SemiAxisWeights w = SemiAxisWeights::plus(seq, p);
  for (int m = 0; m <= 5; ++m) {
    for (int n = m; n <= 5; ++n) {
      const Matrix fast = w.weighted_transition(SemiAxisWeights::Part::projector, n, m);
      const Matrix naive = seq.transition(n, 0) * p * seq.transition(0, m);
      CHECK(spectral_norm(fast - naive) <= 1e-10 * (1.0 + spectral_norm(naive)));
    }
  }
}
