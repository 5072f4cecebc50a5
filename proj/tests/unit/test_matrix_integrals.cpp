#include <gtest/gtest.h>

#include "valint/error.hpp"
#include "valint/generators.hpp"
#include "valint/matrix_integrals.hpp"

using namespace valint;

namespace {

const LocalFieldSpec Q3 = LocalFieldSpec::padic(3, 8);
const ValuedFieldSpec FQ{Q3, 1, 10};

KElem k(long n, long d = 1) { return KElem::from_rational(Q3, mpq_class(n, d)); }

// Indicator of the depth-1 cosets of M_2(Z_3) whose residue matrix is invertible.
StepFunction unit_det_cell() {
  StepFunction g(Q3, 4, 1);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d)
          if ((a * d - b * c) % 3 != 0) g.add_term(BoxN{{Ball(k(a), 1), Ball(k(b), 1), Ball(k(c), 1), Ball(k(d), 1)}}, GammaValue::one(1));
  return g;
}

// Haar integral of u -> g(u) |det u|^-2 by depth-m coset counting.
std::optional<mpq_class> gl_oracle(const StepFunction& g, int m) {
  MatrixCoordinates T{2};
  mpq_class sum = 0;
  mpq_class cell = 1;
  for (int i = 0; i < 4 * m; ++i) cell /= 3;
  BoxN all{std::vector<Ball>(4, Ball::ring_of_integers(Q3))};
  bool ok = true;
  for_each_subbox(all, {m, m, m, m}, [&](const BoxN& b) {
    std::vector<KElem> u;
    for (const auto& ball : b.balls) u.push_back(ball.center());
    GammaValue v = sf_eval(g, u);
    if (v.is_zero()) return;
    KElem det = T.unflatten(u, Q3).det();
    if (det.is_zero() || det.valuation() >= m) {
      ok = false;
      return;
    }
    mpq_class w = 1 / (k_abs(det) * k_abs(det));
    sum += v.as_monomial()->first.re * w * cell;
  });
  if (!ok) return std::nullopt;
  return sum;
}

}  // namespace

TEST(MatrixIntegrals, CoordinateActions) {
  Rng rng(5);
  MatrixCoordinates T{2};
  for (int trial = 0; trial < 20; ++trial) {
    FMatrix x = random_fmatrix(rng, FQ, 2, -1, 1), s = random_fmatrix(rng, FQ, 2, -1, 1);
    EXPECT_TRUE(T.unflatten(r_sigma(s).apply(T.flatten(x)), FQ).agrees_with(x * s));
    EXPECT_TRUE(T.unflatten(l_sigma(s).apply(T.flatten(x)), FQ).agrees_with(s * x));
  }
}

TEST(MatrixIntegrals, CoordinateActionDeterminantLaw) {
  Rng rng(6);
  for (int N : {2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      FMatrix s = random_fmatrix(rng, FQ, N, -2, 2);
      auto ds = det_abs(s).as_monomial();
      auto dr = det_abs(r_sigma(s)).as_monomial();
      auto dl = det_abs(l_sigma(s)).as_monomial();
      ASSERT_TRUE(ds && dr && dl);
      EXPECT_EQ(dr->second, static_cast<std::int64_t>(N) * ds->second);
      EXPECT_EQ(dl->second, static_cast<std::int64_t>(N) * ds->second);
      EXPECT_EQ(det_abs(r_sigma(s)), det_abs(s).pow(N));
      EXPECT_EQ(det_abs(l_sigma(s)), det_abs(s).pow(N));
    }
  }
}

TEST(MatrixIntegrals, LiftOfMatrixRingIntegratesToOne) {
  StepFunction g = sf_indicator(Q3, BoxN{std::vector<Ball>(4, Ball::ring_of_integers(Q3))}, 1);
  FFunction f = lift_mn(FQ, g, 2);
  EXPECT_EQ(mn_integral(f, 2), GammaValue::one(1));
  EXPECT_EQ(repeated_integral(f, {4, 2, 3, 1}), GammaValue::one(1));
  EXPECT_TRUE(mn_integral(lift_mn(FQ, StepFunction(Q3, 4, 1), 2), 2).is_zero());
}

TEST(MatrixIntegrals, UnitDeterminantCell) {
  GLFunction phi = lift_gl(FQ, unit_det_cell(), 2);
  EXPECT_EQ(gl_integral(phi), GammaValue::constant(1, GaussRat(mpq_class(48, 81))));
  EXPECT_EQ(gl_oracle(unit_det_cell(), 1), mpq_class(16, 27));  // 48/81
}

TEST(MatrixIntegrals, WeightOnValuationOneBox) {
  StepFunction g = sf_indicator(Q3, BoxN{{Ball(k(1), 1), Ball(k(0), 2), Ball(k(0), 2), Ball(k(3), 2)}}, 1);
  StepFunction w = gl_weight(g, 2);
  ASSERT_EQ(w.terms().size(), 1u);
  // |det|^-2 = 3^2 on det valuation 1.
  EXPECT_EQ(w.terms()[0].second, GammaValue::constant(1, 9));
  EXPECT_EQ(sf_haar_integral(w), GammaValue::constant(1, GaussRat(gl_oracle(g, 2).value())));
}

TEST(MatrixIntegrals, WeightRejectsSingularSupport) {
  StepFunction g = sf_indicator(Q3, BoxN{std::vector<Ball>(4, Ball::ring_of_integers(Q3))}, 1);
  try {
    gl_weight(g, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDepthLimit);
  }
}

TEST(MatrixIntegrals, WeightMatchesEnumerationOracle) {
  Rng rng(8);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    StepFunction g(Q3, 4, 1);
    int terms = 1 + static_cast<int>(rng.below(2));
    for (int t = 0; t < terms; ++t) {
      BoxN b;
      for (int i = 0; i < 4; ++i) b.balls.push_back(Ball(k(rng.range(0, 8)), static_cast<int>(rng.range(1, 2))));
      g.add_term(b, GammaValue::constant(1, rng.range(1, 3)));
    }
    StepFunction w;
    try {
      w = gl_weight(g, 2);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDepthLimit);
      continue;
    }
    auto oracle = gl_oracle(g, 2);
    if (!oracle) continue;
    EXPECT_EQ(sf_haar_integral(w), GammaValue::constant(1, GaussRat(*oracle))) << g.to_string();
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(MatrixIntegrals, TwoSidedInvariance) {
  Rng rng(9);
  GLFunction phi = lift_gl(FQ, unit_det_cell(), 2);
  GammaValue base = gl_integral(phi);
  for (int trial = 0; trial < 10; ++trial) {
    FMatrix s = random_fmatrix(rng, FQ, 2, -2, 2);
    for (Side side : {Side::kLeft, Side::kRight}) {
      GLFunction psi = gl_translate(phi, s, side);
      EXPECT_EQ(gl_integral(psi), base);
    }
  }
}

TEST(MatrixIntegrals, TranslateByIdentityAndRepeatedIntegral) {
  StepFunction g = sf_indicator(Q3, BoxN{{Ball(k(1), 1), Ball(k(0), 2), Ball(k(0), 2), Ball(k(3), 2)}}, 1);
  GLFunction phi = lift_gl(FQ, g, 2);
  GammaValue base = gl_integral(phi);
  EXPECT_EQ(gl_integral(gl_translate(phi, FMatrix::identity(FQ, 2), Side::kRight)), base);
  FMatrix s(FQ, 2);
  s.at(0, 0) = FElem::monomial(FQ, k(1), GroupElement{1});
  s.at(0, 1) = FElem::from_int(FQ, 2);
  s.at(1, 1) = FElem::monomial(FQ, k(3), GroupElement{-1});
  GLFunction psi = gl_translate(phi, s, Side::kLeft);
  EXPECT_EQ(repeated_integral(psi.ext, {1, 2, 3, 4}), base);
  EXPECT_EQ(repeated_integral(psi.ext, {4, 3, 2, 1}), base);
}
