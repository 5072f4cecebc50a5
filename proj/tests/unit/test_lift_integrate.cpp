#include <gtest/gtest.h>

#include "valint/error.hpp"
#include "valint/generators.hpp"
#include "valint/lift_integrate.hpp"

using namespace valint;

namespace {

const LocalFieldSpec Q3 = LocalFieldSpec::padic(3, 8);
const LocalFieldSpec F2 = LocalFieldSpec::laurent_ff(2, 8);
const ValuedFieldSpec FQ{Q3, 1, 10};

KElem k(long n, long d = 1) { return KElem::from_rational(Q3, mpq_class(n, d)); }
FElem fe(long n) { return FElem::from_int(FQ, n); }
FElem tpow(long e, long c = 1) { return FElem::monomial(FQ, k(c), GroupElement{e}); }
GammaValue X(long e) { return GammaValue::monomial(1, GroupElement{e}); }

StepFunction unit_box(const LocalFieldSpec& spec, int n, int rank = 1) {
  BoxN box;
  for (int i = 0; i < n; ++i) box.balls.push_back(Ball::ring_of_integers(spec));
  return sf_indicator(spec, box, rank);
}

std::vector<FElem> zeros(const ValuedFieldSpec& spec, int n) { return std::vector<FElem>(static_cast<std::size_t>(n), FElem(spec)); }

std::vector<GroupElement> exps(std::vector<long> e) {
  std::vector<GroupElement> out;
  for (long x : e) out.push_back(GroupElement{x});
  return out;
}

FMatrix fmat(std::vector<std::vector<FElem>> rows) {
  FMatrix m(FQ, static_cast<int>(rows.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

}  // namespace

TEST(LiftIntegrate, IndicatorLiftedWithGammaTwo) {
  auto f = ff_from_lift(FQ, lift(FQ, unit_box(Q3, 1), zeros(FQ, 1), exps({2})));
  EXPECT_EQ(repeated_integral(f, {1}), X(2));
  EXPECT_EQ(integral_closed_form(f), X(2));
}

TEST(LiftIntegrate, ComposedWithDiagTOne) {
  auto f = ff_from_lift(FQ, lift(FQ, unit_box(Q3, 2), zeros(FQ, 2), exps({0, 0})));
  auto h = ff_compose(f, fmat({{tpow(1), fe(0)}, {fe(0), fe(1)}}), zeros(FQ, 2));
  EXPECT_EQ(repeated_integral(h, {1, 2}), X(-1));
  EXPECT_EQ(repeated_integral(h, {2, 1}), X(-1));
  EXPECT_EQ(integral_closed_form(h), X(-1));
}

TEST(LiftIntegrate, TwoDimensionalLiftAddsExponents) {
  auto f = ff_from_lift(FQ, lift(FQ, unit_box(Q3, 2), zeros(FQ, 2), exps({1, 2})));
  auto rep = fubini_report(f);
  EXPECT_TRUE(rep.pass) << rep.to_string();
  EXPECT_EQ(rep.value, X(3));
  EXPECT_EQ(rep.to_string(), "FUBINI PASS value=X^3");
}

TEST(LiftIntegrate, LiftedEvalFollowsCoset) {
  auto g = sf_indicator(Q3, BoxN{{Ball(k(1), 1)}}, 1);
  auto t = lift(FQ, g, {fe(2)}, exps({-1}));
  // x = 2 + t^-1 * (1 + 3c) lies in the coset with residue 1 + 3c.
  EXPECT_EQ(lifted_eval(t, {fe(2) + tpow(-1, 4)}), GammaValue::one(1));
  EXPECT_EQ(lifted_eval(t, {fe(2) + tpow(-1, 2)}), GammaValue::zero(1));
  EXPECT_EQ(lifted_eval(t, {fe(2) + tpow(-2, 1)}), GammaValue::zero(1));
  EXPECT_EQ(lifted_eval(t, {fe(2) + tpow(-1, 1) + tpow(5, 2)}), GammaValue::one(1));
}

TEST(LiftIntegrate, SectionsOfLiftsAreLiftsOfSections) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_step_function(rng, Q3, 2, 1, 3, 0, 2);
    std::vector<FElem> a{random_felem(rng, FQ, -1, 1), random_felem(rng, FQ, -1, 1)};
    auto gam = exps({rng.range(-2, 2), rng.range(-2, 2)});
    auto t = lift(FQ, g, a, gam);
    // Fix x_2 inside its coset: the section is the lift of g(., residue).
    KElem v = random_kelem(rng, Q3, 0, 1, 2);
    FElem x2 = a[1] + FElem::constant(FQ, v).shifted(gam[1]);
    auto sec = lift(FQ, sf_section(g, 2, v), {a[0]}, {gam[0]});
    for (int s = 0; s < 10; ++s) {
      FElem x1 = random_felem(rng, FQ, -3, 3, 2);
      EXPECT_EQ(lifted_eval(t, {x1, x2}), lifted_eval(sec, {x1}));
    }
  }
}

TEST(LiftIntegrate, CaseLemmaMatrices) {
  auto S = [](const FElem& a) { return case_lemma_sl2(a, Q3); };
  auto neg = S(tpow(-2, 2));
  EXPECT_EQ(neg.sign, -1);
  EXPECT_EQ(neg.delta0, GroupElement{-2});
  // e = 1/2: [[0, 2], [-1/2, 0]].
  EXPECT_EQ(neg.S.to_string(), "[[0, 2], [-1/2, 0]]");
  auto mid = S(tpow(0, 1) + tpow(3, 1));
  EXPECT_EQ(mid.sign, 0);
  EXPECT_EQ(mid.delta0, GroupElement{0});
  EXPECT_EQ(mid.S.to_string(), "[[0, 1], [-1, 1]]");
  auto pos = S(tpow(1, 1));
  EXPECT_EQ(pos.sign, 1);
  EXPECT_EQ(pos.delta0, GroupElement{0});
  EXPECT_EQ(pos.S.to_string(), "[[1, 0], [-1, 1]]");
  auto nil = S(fe(0));
  EXPECT_EQ(nil.sign, 2);
  EXPECT_EQ(nil.S.to_string(), "[[1, 0], [0, 1]]");
}

TEST(LiftIntegrate, ShearAllThreeCasesIntegrateToOne) {
  for (long e : {-2L, 0L, 3L}) {
    auto f = ff_from_lift(FQ, lift(FQ, unit_box(Q3, 2), zeros(FQ, 2), exps({0, 0})));
    auto h = ff_compose(f, fmat({{fe(1), tpow(e)}, {fe(0), fe(1)}}), zeros(FQ, 2));
    auto rep = fubini_report(h);
    EXPECT_TRUE(rep.pass) << rep.to_string();
    EXPECT_EQ(rep.value, GammaValue::one(1));
  }
}

TEST(LiftIntegrate, ScaleTranslate) {
  auto f = ff_from_lift(FQ, lift(FQ, unit_box(Q3, 1), zeros(FQ, 1), exps({0})));
  auto h = scale_translate(f, {tpow(2, 3)}, {tpow(-4)});
  // |3 t^2|^-1 = 3 X^-2.
  EXPECT_EQ(repeated_integral(h, {1}), GammaValue::monomial(3, GroupElement{-2}));
  EXPECT_EQ(integral_closed_form(h), GammaValue::monomial(3, GroupElement{-2}));
}

TEST(LiftIntegrate, BadOrderIsDimensionError) {
  auto f = ff_from_lift(FQ, lift(FQ, unit_box(Q3, 2), zeros(FQ, 2), exps({0, 0})));
  try {
    repeated_integral(f, {1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimension);
  }
}

TEST(LiftIntegrate, ZeroDimensionalResult) {
  auto f = ff_from_lift(FQ, lift(FQ, sf_scale(GammaValue::constant(1, 5), unit_box(Q3, 1)), zeros(FQ, 1), exps({-1})));
  auto p = partial_integral(f, 1);
  EXPECT_EQ(p.dim(), 0);
  EXPECT_EQ(ff_eval(p, {}), GammaValue::monomial(5, GroupElement{-1}));
}

namespace {

void dual_route(const ValuedFieldSpec& spec, std::uint64_t seed, int trials) {
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    int n = 1 + static_cast<int>(rng.below(3));
    FFunction f = random_ffunction(rng, spec, n, 2);
    for (int r = 1; r <= n; ++r) {
      FFunction P = partial_integral(f, r, Route::kIwasawa);
      FFunction D = partial_integral(f, r, Route::kDirect);
      for (int s = 0; s < 8; ++s) {
        std::vector<FElem> x;
        for (int i = 0; i < n - 1; ++i) x.push_back(random_felem(rng, spec, -3, 3, 2));
        ASSERT_EQ(ff_eval(P, x), ff_eval(D, x)) << "trial " << trial << " r=" << r << " f=" << f.to_string();
      }
    }
    auto rep = fubini_report(f);
    ASSERT_TRUE(rep.pass) << rep.to_string() << " f=" << f.to_string();
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = n - i;
    ASSERT_EQ(repeated_integral(f, order, Route::kDirect), rep.closed_form);
  }
}

}  // namespace

TEST(LiftIntegrate, IwasawaAndDirectRoutesAgreeQ3) { dual_route(FQ, 101, 25); }
TEST(LiftIntegrate, IwasawaAndDirectRoutesAgreeF2) { dual_route(ValuedFieldSpec{F2, 1, 10}, 202, 25); }

TEST(LiftIntegrate, RankTwoSmoke) {
  const ValuedFieldSpec F{Q3, 2, 8};
  auto m = [&](long c, long a, long b) { return FElem::monomial(F, k(c), GroupElement{a, b}); };
  auto f = ff_from_lift(F, lift(F, unit_box(Q3, 2, 2), zeros(F, 2), {GroupElement{1, 0}, GroupElement{0, 2}}));
  FMatrix tau(F, 2);
  tau.at(0, 0) = m(1, 1, -1);
  tau.at(0, 1) = m(2, 0, 0);
  tau.at(1, 1) = m(1, 0, 1);
  auto h = ff_compose(f, tau, {m(1, -1, 0), FElem(F)});
  auto rep = fubini_report(h);
  EXPECT_TRUE(rep.pass) << rep.to_string();
  // X^(1,2) / |t1 t2^-1 * t2| = X1^0*X2^2.
  EXPECT_EQ(rep.value, GammaValue::monomial(1, GroupElement{0, 2}));
  EXPECT_EQ(rep.value.to_string(), "X2^2");
  EXPECT_EQ(repeated_integral(h, {2, 1}, Route::kDirect), rep.value);
}
