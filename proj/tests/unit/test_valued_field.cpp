#include <gtest/gtest.h>

#include <random>

#include "valint/error.hpp"
#include "valint/valued_field.hpp"

using namespace valint;

namespace {

ValuedFieldSpec rank1(const LocalFieldSpec& base = LocalFieldSpec::padic(3, 8)) { return {base, 1, 10}; }
ValuedFieldSpec rank2() { return {LocalFieldSpec::padic(3, 8), 2, 6}; }

FElem t_pow(const ValuedFieldSpec& s, std::int64_t e) {
  return f_split(s, GroupElement{e});
}

FElem random_f(std::mt19937_64& rng, const ValuedFieldSpec& s) {
  FElem out(s);
  int terms = 1 + static_cast<int>(rng() % 3);
  while (out.is_zero()) {
    for (int i = 0; i < terms; ++i) {
      std::vector<std::int64_t> e(static_cast<size_t>(s.rank));
      for (auto& x : e) x = static_cast<std::int64_t>(rng() % 5) - 2;
      long c = static_cast<long>(rng() % 17) - 8;
      long d = 1 + static_cast<long>(rng() % 2) * 2;  // 1 or 3
      KElem k = s.base.kind == LocalFieldSpec::Kind::kPAdic
                    ? KElem::from_rational(s.base, mpq_class(c, d))
                    : KElem::from_digits(s.base, static_cast<int>(rng() % 3) - 1,
                                         {1, static_cast<std::int64_t>(rng() % 2)}, true);
      out = out + FElem::monomial(s, k, GroupElement(e));
    }
  }
  return out;
}

}  // namespace

TEST(ValuedField, TTimesInverseIsOne) {
  auto s = rank1();
  EXPECT_EQ(f_mul(t_pow(s, 1), f_inv(t_pow(s, 1))), FElem::from_int(s, 1));
}

TEST(ValuedField, GeometricSeriesInverse) {
  auto s = rank1();
  auto x = FElem::from_int(s, 1) - t_pow(s, 1);
  auto inv = f_inv(x);
  ASSERT_TRUE(inv.cutoff());
  EXPECT_EQ(*inv.cutoff(), GroupElement{10});
  for (std::int64_t k = 0; k < 10; ++k) EXPECT_EQ(inv.coefficient(GroupElement{k}), KElem::from_int(s.base, 1));
  auto back = x * inv;
  EXPECT_EQ(back.terms().size(), 1u);
  EXPECT_EQ(back.coefficient(GroupElement{0}), KElem::from_int(s.base, 1));
  EXPECT_EQ(*back.cutoff(), GroupElement{10});
}

TEST(ValuedField, ValuationIsAdditive) {
  std::mt19937_64 rng(21);
  for (auto s : {rank1(), rank2(), rank1(LocalFieldSpec::laurent_ff(2, 8))}) {
    for (int i = 0; i < 200; ++i) {
      auto a = random_f(rng, s), b = random_f(rng, s);
      EXPECT_EQ(f_nu(a * b), f_nu(a) + f_nu(b));
      EXPECT_TRUE(gv_eq(f_abs(a * b), f_abs(a) * f_abs(b)));
    }
  }
}

TEST(ValuedField, SplitValuationAxiomOnGrid) {
  auto s = rank2();
  for (std::int64_t i = -3; i <= 3; ++i)
    for (std::int64_t j = -3; j <= 3; ++j) EXPECT_EQ(f_nu(f_split(s, GroupElement{i, j})), (GroupElement{i, j}));
}

TEST(ValuedField, NuExamples) {
  EXPECT_EQ(f_nu(t_pow(rank1(), 2)), GroupElement{2});
  auto s = rank2();
  EXPECT_EQ(f_nu(f_split(s, GroupElement{1, 0}) * f_inv(f_split(s, GroupElement{0, 1}))), (GroupElement{1, -1}));
}

TEST(ValuedField, ResidueAndIntegrality) {
  auto s = rank1();
  auto x = FElem::from_int(s, 3) + t_pow(s, 1) * FElem::from_int(s, 5);
  EXPECT_TRUE(f_is_integral(x));
  EXPECT_EQ(f_residue(x), KElem::from_int(s.base, 3));
  EXPECT_FALSE(f_is_integral(t_pow(s, -1)));
  try {
    f_residue(t_pow(s, -1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

TEST(ValuedField, AbsExamples) {
  auto s = rank1();
  EXPECT_EQ(f_abs(t_pow(s, 1)).to_string(), "X^1");
  EXPECT_EQ(f_abs(FElem::from_int(s, 3)).to_string(), "1/3");
  EXPECT_EQ(f_abs(FElem::from_int(s, 3) * t_pow(s, -1)).to_string(), "1/3*X^-1");
}

TEST(ValuedField, CosetMembershipMatchesResidueDefinedness) {
  std::mt19937_64 rng(5);
  auto s = rank1();
  for (int i = 0; i < 200; ++i) {
    auto x = random_f(rng, s), a = random_f(rng, s);
    GroupElement g{static_cast<std::int64_t>(rng() % 5) - 2};
    bool member = f_in_coset(x, a, g);
    bool residue_defined = true;
    try {
      (void)f_residue((x - a) * f_split(s, -g));
    } catch (const Error&) {
      residue_defined = false;
    }
    EXPECT_EQ(member, residue_defined);
    // Independent check: every exponent of x - a is >= g.
    auto d = x - a;
    bool all_above = d.is_zero() || !(d.nu() < g);
    EXPECT_EQ(member, all_above);
  }
}

TEST(ValuedField, FieldAxioms) {
  std::mt19937_64 rng(77);
  for (auto s : {rank1(), rank2()}) {
    for (int i = 0; i < 200; ++i) {
      auto a = random_f(rng, s), b = random_f(rng, s), c = random_f(rng, s);
      EXPECT_EQ((a + b) + c, a + (b + c));
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
      EXPECT_EQ(a * b, b * a);
    }
  }
}

TEST(ValuedField, Rendering) {
  auto s = rank1();
  auto x = t_pow(s, -1) * FElem::from_int(s, 2) + FElem::from_int(s, 1);
  EXPECT_EQ(x.to_string(), "t^-1*(2) + t^0*(1)");
  auto y = f_inv(FElem::from_int(s, 1) + t_pow(s, 1));
  EXPECT_EQ(y.cutoff(), GroupElement{10});
}
