#include <gtest/gtest.h>

#include "valint/fmatrix.hpp"
#include "valint/rng.hpp"

using namespace valint;

namespace {

ValuedFieldSpec q3t() { return {LocalFieldSpec::padic(3, 8), 1, 10}; }

FElem f(const ValuedFieldSpec& s, long c, std::int64_t e = 0) {
  return FElem::monomial(s, KElem::from_int(s.base, c), GroupElement{e});
}

// Entry = sum of up to two monomials c t^e with e in [-2, 2], c having 3-adic
// valuation in [-1, 1].
FElem random_entry(Rng& rng, const ValuedFieldSpec& s) {
  FElem x(s);
  int terms = static_cast<int>(rng.range(0, 2));
  for (int i = 0; i < terms; ++i) {
    long c = rng.range(1, 2) * (rng.coin() ? 1 : -1);
    mpq_class q(c);
    int kv = static_cast<int>(rng.range(-1, 1));
    if (kv > 0) q *= 3;
    if (kv < 0) q /= 3;
    x = x + FElem::monomial(s, KElem::from_rational(s.base, q), GroupElement{rng.range(-2, 2)});
  }
  return x;
}

FMatrix random_gl(Rng& rng, const ValuedFieldSpec& s, int n) {
  while (true) {
    FMatrix m(s, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = random_entry(rng, s);
    if (!m.det().is_zero()) return m;
  }
}

}  // namespace

TEST(FMatrix, DetAbsExamples) {
  auto s = q3t();
  EXPECT_EQ(det_abs(FMatrix::identity(s, 3)).to_string(), "1");
  auto d = FMatrix::diagonal({f(s, 1, 1), f(s, 3)});
  EXPECT_EQ(det_abs(d).to_string(), "1/3*X^1");
}

TEST(FMatrix, DetAbsIsMultiplicative) {
  Rng rng(1);
  auto s = q3t();
  for (int i = 0; i < 30; ++i) {
    int n = 2 + static_cast<int>(rng.below(2));
    auto a = random_gl(rng, s, n), b = random_gl(rng, s, n);
    EXPECT_TRUE(gv_eq(det_abs(a * b), det_abs(a) * det_abs(b)));
  }
}

TEST(FMatrix, InverseMultipliesBack) {
  Rng rng(2);
  auto s = q3t();
  for (int i = 0; i < 20; ++i) {
    auto a = random_gl(rng, s, 3);
    EXPECT_TRUE((a * a.inverse()).agrees_with(FMatrix::identity(s, 3)));
  }
}

TEST(Iwasawa, IntegralInputIsAbsorbed) {
  auto s = q3t();
  FMatrix tau(s, 2);
  tau.at(0, 0) = f(s, 1);
  tau.at(0, 1) = f(s, 1, 1);
  tau.at(1, 0) = f(s, 2);
  tau.at(1, 1) = f(s, 1);
  auto fac = iwasawa(tau);
  EXPECT_TRUE(fac.A.agrees_with(tau));
  EXPECT_TRUE(fac.U.agrees_with(FMatrix::identity(s, 2)));
  EXPECT_TRUE(fac.Lambda.agrees_with(FMatrix::identity(s, 2)));
}

TEST(Iwasawa, DiagonalT) {
  auto s = q3t();
  auto tau = FMatrix::diagonal({f(s, 1, 1), f(s, 1)});
  auto fac = iwasawa(tau);
  EXPECT_TRUE(fac.A.agrees_with(FMatrix::identity(s, 2)));
  EXPECT_TRUE(fac.U.agrees_with(FMatrix::identity(s, 2)));
  EXPECT_TRUE(fac.Lambda.agrees_with(tau));
}

TEST(Iwasawa, RandomFactorsSatisfyInvariants) {
  Rng rng(3);
  auto s = q3t();
  for (int i = 0; i < 60; ++i) {
    int n = 1 + static_cast<int>(rng.below(4));
    auto tau = random_gl(rng, s, n);
    auto fac = iwasawa(tau);
    EXPECT_TRUE(fac.A.is_integral());
    EXPECT_EQ(f_nu(fac.A.det()), GroupElement{0});
    EXPECT_FALSE(fac.A.residue().det().is_zero());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        if (r > c) EXPECT_TRUE(fac.U.at(r, c).is_exact_zero());
        if (r == c) EXPECT_EQ(fac.U.at(r, c), FElem::from_int(s, 1));
        if (r != c) EXPECT_TRUE(fac.Lambda.at(r, c).is_exact_zero());
      }
    EXPECT_TRUE((fac.A * fac.U * fac.Lambda).agrees_with(tau));
  }
}
