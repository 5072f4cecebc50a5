#include <gtest/gtest.h>

#include "valint/error.hpp"
#include "valint/generators.hpp"
#include "valint/step_functions.hpp"

using namespace valint;

namespace {

const LocalFieldSpec Q3 = LocalFieldSpec::padic(3, 8);

KElem k(long n, long d = 1) { return KElem::from_rational(Q3, mpq_class(n, d)); }
Ball ball(long c, int depth) { return Ball(k(c), depth); }
GammaValue gv(long c) { return GammaValue::constant(1, c); }

StepFunction ind(std::vector<Ball> balls) { return sf_indicator(Q3, BoxN{std::move(balls)}, 1); }

KMatrix kmat(std::vector<std::vector<long>> rows) {
  KMatrix m(Q3, static_cast<int>(rows.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) m.at(i, j) = k(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return m;
}

std::vector<KElem> zeros(int n) { return std::vector<KElem>(static_cast<std::size_t>(n), KElem(Q3)); }

}  // namespace

TEST(StepFunctions, EvalIndicator) {
  auto f = ind({ball(0, 0), ball(0, 0)});
  EXPECT_EQ(sf_eval(f, {k(0), k(0)}), gv(1));
  EXPECT_EQ(sf_eval(f, {k(1, 3), k(0)}), gv(0));
}

TEST(StepFunctions, AddNegativeIsZero) {
  auto f = sf_add(ind({ball(0, 0)}), ind({ball(1, 2)}));
  EXPECT_TRUE(sf_canonicalize(sf_add(f, sf_scale(-gv(1), f))).is_zero());
}

TEST(StepFunctions, CanonicalizeMatchesPointwiseOracle) {
  auto f = sf_add(ind({ball(0, 0)}), ind({ball(1, 1)}));
  auto c = sf_canonicalize(f);
  ASSERT_EQ(c.terms().size(), 3u);
  for (long r = 0; r < 3; ++r) {
    EXPECT_EQ(c.terms()[static_cast<std::size_t>(r)].first.balls[0], ball(r, 1));
    EXPECT_EQ(c.terms()[static_cast<std::size_t>(r)].second, sf_eval(f, {k(r)}));
  }
  EXPECT_EQ(c.terms()[1].second, gv(2));
  auto cc = sf_canonicalize(c);
  EXPECT_EQ(cc.to_string(), c.to_string());
  EXPECT_TRUE(sf_canonicalize(StepFunction(Q3, 2, 1)).is_zero());
}

TEST(StepFunctions, HaarIntegral) {
  EXPECT_EQ(sf_haar_integral(ind({ball(0, 0), ball(0, 0)})), gv(1));
  EXPECT_EQ(sf_haar_integral(ind({ball(0, 1), ball(0, 2)})), GammaValue::constant(1, GaussRat(mpq_class(1, 27))));
}

TEST(StepFunctions, HaarIntegralMatchesEnumerationOracle) {
  Rng rng(31);
  for (int i = 0; i < 60; ++i) {
    int n = 1 + static_cast<int>(rng.below(3));
    auto f = random_step_function(rng, Q3, n, 1, 4, -1, 2);
    EXPECT_EQ(sf_haar_integral(f), sf_integral_by_enumeration(f));
  }
}

TEST(StepFunctions, SectionExamples) {
  auto f = ind({ball(0, 0), ball(0, 0)});
  EXPECT_EQ(sf_section(f, 1, k(0)).to_string(), ind({ball(0, 0)}).to_string());
  EXPECT_TRUE(sf_section(f, 1, k(1, 3)).is_zero());
}

TEST(StepFunctions, SectionPointwiseConsistency) {
  Rng rng(32);
  for (int i = 0; i < 40; ++i) {
    auto f = random_step_function(rng, Q3, 2, 1, 3, 0, 2);
    KElem v = random_kelem(rng, Q3, 0, 2, 3);
    int r = 1 + static_cast<int>(rng.below(2));
    auto s = sf_section(f, r, v);
    for (int j = 0; j < 10; ++j) {
      KElem w = random_kelem(rng, Q3, -1, 3, 4);
      std::vector<KElem> full = r == 1 ? std::vector<KElem>{v, w} : std::vector<KElem>{w, v};
      EXPECT_EQ(sf_eval(s, {w}), sf_eval(f, full));
    }
  }
}

TEST(StepFunctions, PartialIntegralExamples) {
  auto f = ind({ball(0, 0), ball(0, 0)});
  EXPECT_EQ(sf_partial_integral(f, 2).to_string(), ind({ball(0, 0)}).to_string());
}

TEST(StepFunctions, PartialIntegralsCommute) {
  Rng rng(33);
  for (int i = 0; i < 30; ++i) {
    auto f = random_step_function(rng, Q3, 3, 1, 4, -1, 2);
    std::vector<GammaValue> values;
    std::vector<int> order = {1, 2, 3};
    do {
      StepFunction g = f;
      std::vector<int> remaining = {1, 2, 3};
      for (int c : order) {
        int pos = static_cast<int>(std::find(remaining.begin(), remaining.end(), c) - remaining.begin());
        g = sf_partial_integral(g, pos + 1);
        remaining.erase(remaining.begin() + pos);
      }
      values.push_back(sf_haar_integral(g));
    } while (std::next_permutation(order.begin(), order.end()));
    for (const auto& v : values) EXPECT_EQ(v, sf_haar_integral(f));
  }
}

TEST(StepFunctions, PullbackIdentity) {
  Rng rng(34);
  auto f = random_step_function(rng, Q3, 2, 1, 3, 0, 2);
  EXPECT_TRUE(sf_equal(sf_affine_pullback(f, KMatrix::identity(Q3, 2), zeros(2)), f));
}

TEST(StepFunctions, PullbackDiagonalScaling) {
  auto f = ind({ball(0, 0), ball(0, 0)});
  auto g = sf_affine_pullback(f, kmat({{3, 0}, {0, 1}}), zeros(2));
  EXPECT_EQ(sf_haar_integral(g), gv(3));
  EXPECT_EQ(sf_haar_integral(sf_affine_pullback_enumerate(f, kmat({{3, 0}, {0, 1}}), zeros(2))), gv(3));
}

TEST(StepFunctions, PullbackCaseMatrixPreservesIntegral) {
  auto f = ind({ball(0, 0), ball(0, 0)});
  EXPECT_EQ(sf_haar_integral(sf_affine_pullback(f, kmat({{0, 1}, {-1, 0}}), zeros(2))), gv(1));
}

TEST(StepFunctions, PullbackRoutesAgreeAndScaleByDet) {
  Rng rng(35);
  for (int i = 0; i < 60; ++i) {
    int n = 1 + static_cast<int>(rng.below(3));
    auto f = random_step_function(rng, Q3, n, 1, 3, 0, 1);
    auto A = random_kmatrix(rng, Q3, n, -1, 1);
    std::vector<KElem> b;
    for (int j = 0; j < n; ++j) b.push_back(random_kelem(rng, Q3, -1, 1, 2));
    auto g = sf_affine_pullback(f, A, b);
    auto h = sf_affine_pullback_enumerate(f, A, b);
    EXPECT_TRUE(sf_equal(g, h));
    auto expected = sf_haar_integral(f) * GammaValue::constant(1, GaussRat(1 / k_abs(A.det())));
    EXPECT_EQ(sf_haar_integral(g), expected);
    for (int j = 0; j < 5; ++j) {
      std::vector<KElem> u;
      for (int c = 0; c < n; ++c) u.push_back(random_kelem(rng, Q3, -2, 2, 4));
      auto image = A.apply(u);
      for (int c = 0; c < n; ++c) image[static_cast<std::size_t>(c)] = image[static_cast<std::size_t>(c)] + b[static_cast<std::size_t>(c)];
      EXPECT_EQ(sf_eval(g, u), sf_eval(f, image));
    }
  }
}

TEST(StepFunctions, TranslationPreservesIntegral) {
  Rng rng(36);
  for (int i = 0; i < 20; ++i) {
    auto f = random_step_function(rng, Q3, 2, 1, 3, 0, 2);
    std::vector<KElem> b = {random_kelem(rng, Q3, -2, 2), random_kelem(rng, Q3, -2, 2)};
    EXPECT_EQ(sf_haar_integral(sf_affine_pullback(f, KMatrix::identity(Q3, 2), b)), sf_haar_integral(f));
  }
}

TEST(StepFunctions, DepthLimitIsEnforced) {
  auto f = ind({ball(0, 0), ball(0, 0)});
  auto old = enumeration_limit();
  set_enumeration_limit(10);
  try {
    (void)sf_affine_pullback_enumerate(f, kmat({{1, 0}, {0, 1}}), {k(0), k(0)});
    (void)sf_canonicalize(sf_add(f, ind({ball(0, 4), ball(0, 0)})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDepthLimit);
  }
  set_enumeration_limit(old);
}

TEST(StepFunctions, LaurentFieldPullback) {
  auto F2 = LocalFieldSpec::laurent_ff(2, 8);
  Rng rng(37);
  for (int i = 0; i < 20; ++i) {
    auto f = random_step_function(rng, F2, 2, 1, 3, 0, 1);
    auto A = random_kmatrix(rng, F2, 2, -1, 1);
    std::vector<KElem> b = {KElem(F2), random_kelem(rng, F2, 0, 1)};
    EXPECT_TRUE(sf_equal(sf_affine_pullback(f, A, b), sf_affine_pullback_enumerate(f, A, b)));
  }
}
