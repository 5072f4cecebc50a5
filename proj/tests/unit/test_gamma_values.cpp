#include <gtest/gtest.h>

#include <random>

#include "valint/error.hpp"
#include "valint/gamma_values.hpp"

using namespace valint;

namespace {

GammaValue X(std::int64_t e) { return gv_monomial(1, GroupElement{e}); }
GammaValue C(long c) { return GammaValue::constant(1, c); }

// Random element of C(Gamma) with small Laurent numerator and denominator.
GammaValue random_gv(std::mt19937_64& rng, int rank) {
  auto poly = [&](bool nonzero) {
    LaurentPoly p(rank);
    do {
      p = LaurentPoly(rank);
      int terms = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < terms; ++i) {
        std::vector<std::int64_t> e(static_cast<size_t>(rank));
        for (auto& x : e) x = static_cast<std::int64_t>(rng() % 5) - 2;
        GaussRat c(mpq_class(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)),
                   mpq_class(static_cast<long>(rng() % 3) - 1));
        p = p + LaurentPoly::monomial(c, GroupElement(e));
      }
    } while (nonzero && p.is_zero());
    return p;
  };
  return GammaValue(poly(false), poly(true));
}

}  // namespace

TEST(GammaValues, MonomialIdentity) {
  EXPECT_EQ(gv_monomial(1, GroupElement{0}).to_string(), "1");
  EXPECT_TRUE(gv_eq(X(2) * X(-2), C(1)));
}

TEST(GammaValues, SingleTermCanonicalForm) {
  auto v = gv_monomial(GaussRat(mpq_class(2, 3)), GroupElement{1, -1});
  EXPECT_EQ(v.to_string(), "2/3*X1^1*X2^-1");
  EXPECT_EQ(v.denominator().terms().size(), 1u);
}

TEST(GammaValues, FieldOperations) {
  EXPECT_TRUE(gv_eq(gv_add(X(1) - C(1), C(1)), X(1)));
  auto one_minus_x = C(1) - X(1);
  EXPECT_TRUE(gv_eq(gv_mul(gv_inv(one_minus_x), one_minus_x), C(1)));
  EXPECT_TRUE(gv_eq(X(1) / X(2), C(1) / X(1)));
}

TEST(GammaValues, InverseOfZeroIsDomainError) {
  try {
    gv_inv(GammaValue::zero(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

TEST(GammaValues, AsMonomial) {
  auto m = gv_as_monomial(gv_monomial(3, GroupElement{2}));
  ASSERT_TRUE(m);
  EXPECT_EQ(m->first, GaussRat(3));
  EXPECT_EQ(m->second, GroupElement{2});
  EXPECT_FALSE(gv_as_monomial(X(1) + C(1)));
  auto h = gv_as_monomial(gv_monomial(GaussRat(mpq_class(1, 2)), GroupElement{-1, 3}));
  ASSERT_TRUE(h);
  EXPECT_EQ(h->second, (GroupElement{-1, 3}));
  // A fraction that reduces to a monomial only after cross-multiplication is
  // still recognized once its denominator is a single term.
  auto q = X(3) / X(1);
  ASSERT_TRUE(gv_as_monomial(q));
  EXPECT_EQ(gv_as_monomial(q)->second, GroupElement{2});
}

TEST(GammaValues, Rendering) {
  EXPECT_EQ((X(-1) + C(2) - X(3)).to_string(), "X^-1 + 2 - X^3");
  EXPECT_EQ(gv_monomial(GaussRat(mpq_class(1, 2), mpq_class(1, 3)), GroupElement{1}).to_string(), "(3/6+2/6*i)*X^1");
  EXPECT_EQ((C(1) / (C(1) - X(1))).to_string(), "(1)/(1 - X^1)");
  EXPECT_EQ(GammaValue::zero(2).to_string(), "0");
}

TEST(GammaValues, CanonicalFormIsIdempotent) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto a = random_gv(rng, 1 + i % 2);
    GammaValue again(a.numerator(), a.denominator());
    EXPECT_EQ(again.numerator(), a.numerator());
    EXPECT_EQ(again.denominator(), a.denominator());
  }
}

TEST(GammaValues, MonomialDecompositionIsMultiplicative) {
  auto a = gv_monomial(GaussRat(mpq_class(2, 5), 1), GroupElement{1, -2});
  auto b = gv_monomial(GaussRat(-3), GroupElement{0, 4});
  auto ab = gv_as_monomial(a * b);
  ASSERT_TRUE(ab);
  EXPECT_EQ(ab->first, GaussRat(mpq_class(2, 5), 1) * GaussRat(-3));
  EXPECT_EQ(ab->second, (GroupElement{1, 2}));
}

TEST(GammaValues, FieldAxiomsOnRandomValues) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    int rank = 1 + i % 2;
    auto a = random_gv(rng, rank), b = random_gv(rng, rank), c = random_gv(rng, rank);
    EXPECT_TRUE(gv_eq((a + b) + c, a + (b + c)));
    EXPECT_TRUE(gv_eq((a * b) * c, a * (b * c)));
    EXPECT_TRUE(gv_eq(a * (b + c), a * b + a * c));
    EXPECT_TRUE(gv_eq(a + b, b + a));
    if (!a.is_zero()) EXPECT_TRUE(gv_eq(a * gv_inv(a), GammaValue::one(rank)));
  }
}
