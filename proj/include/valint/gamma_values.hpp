#pragma once

// Exact arithmetic in C(Gamma) for Gamma = Z^r: fractions of Laurent
// polynomials in X_1..X_r with Gaussian-rational coefficients.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace valint {

/// An element of Q(i).
struct GaussRat {
  mpq_class re;
  mpq_class im;

  GaussRat() = default;
  GaussRat(long v) : re(v), im(0) {}  // NOLINT(google-explicit-constructor)
  GaussRat(mpq_class r) : re(std::move(r)), im(0) { re.canonicalize(); }  // NOLINT
  GaussRat(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }

  GaussRat operator-() const { return {-re, -im}; }
  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  /// Throws a domain error on division by zero.
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b);
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }

  /// `a/b` when real; `a/b+c/b*i` (common denominator) otherwise.
  std::string to_string() const;
};

/// An element gamma of Z^r; ordered lexicographically, leftmost coordinate
/// most significant.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(std::vector<std::int64_t> exps) : exps_(std::move(exps)) {}
  GroupElement(std::initializer_list<std::int64_t> exps) : exps_(exps) {}

  static GroupElement zero(int rank) {
    return GroupElement(std::vector<std::int64_t>(static_cast<size_t>(rank), 0));
  }
  static GroupElement unit(int rank, int i) {
    auto g = zero(rank);
    g.exps_.at(static_cast<size_t>(i)) = 1;
    return g;
  }

  int rank() const { return static_cast<int>(exps_.size()); }
  std::int64_t operator[](int i) const { return exps_[static_cast<size_t>(i)]; }
  const std::vector<std::int64_t>& exps() const { return exps_; }
  bool is_zero() const;

  GroupElement operator-() const;
  friend GroupElement operator+(const GroupElement& a, const GroupElement& b);
  friend GroupElement operator-(const GroupElement& a, const GroupElement& b);
  friend GroupElement operator*(std::int64_t k, const GroupElement& a);

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
    return a.exps_ <=> b.exps_;
  }

  /// "(1,-2)"
  std::string to_string() const;

 private:
  std::vector<std::int64_t> exps_;
};

/// Finite C-linear combination of monomials X^gamma. No zero coefficients
/// are stored.
class LaurentPoly {
 public:
  using Terms = std::map<GroupElement, GaussRat>;

  LaurentPoly() = default;
  explicit LaurentPoly(int rank) : rank_(rank) {}
  static LaurentPoly monomial(const GaussRat& c, const GroupElement& g);

  int rank() const { return rank_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  LaurentPoly operator-() const;
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly scaled(const GaussRat& c, const GroupElement& shift) const;
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  /// Terms joined by " + " / " - " in ascending lex order of exponents.
  std::string to_string() const;

 private:
  void add_term(const GroupElement& g, const GaussRat& c);

  int rank_ = 0;
  Terms terms_;
};

/// An element of C(Gamma), stored in canonical form: the lex-least term of the
/// denominator is 1*X^0. Equality is decided by cross-multiplication.
class GammaValue {
 public:
  GammaValue() : GammaValue(0) {}
  explicit GammaValue(int rank) : num_(rank), den_(LaurentPoly::monomial(1, GroupElement::zero(rank))) {}
  GammaValue(LaurentPoly num, LaurentPoly den);

  static GammaValue zero(int rank) { return GammaValue(rank); }
  static GammaValue one(int rank) { return monomial(1, GroupElement::zero(rank)); }
  static GammaValue constant(int rank, const GaussRat& c) {
    return monomial(c, GroupElement::zero(rank));
  }
  static GammaValue monomial(const GaussRat& c, const GroupElement& g);

  int rank() const { return num_.rank(); }
  const LaurentPoly& numerator() const { return num_; }
  const LaurentPoly& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  GammaValue operator-() const;
  friend GammaValue operator+(const GammaValue& a, const GammaValue& b);
  friend GammaValue operator-(const GammaValue& a, const GammaValue& b);
  friend GammaValue operator*(const GammaValue& a, const GammaValue& b);
  friend GammaValue operator/(const GammaValue& a, const GammaValue& b);
  GammaValue& operator+=(const GammaValue& b) { return *this = *this + b; }
  GammaValue& operator*=(const GammaValue& b) { return *this = *this * b; }
  GammaValue inverse() const;
  GammaValue pow(std::int64_t k) const;

  /// Mathematical equality (cross-multiplication), not representation equality.
  friend bool operator==(const GammaValue& a, const GammaValue& b);

  /// (c, gamma) when the value is c*X^gamma.
  std::optional<std::pair<GaussRat, GroupElement>> as_monomial() const;

  /// Canonical text: numerator alone when the denominator is 1, otherwise
  /// "(num)/(den)".
  std::string to_string() const;

 private:
  void canonicalize();

  LaurentPoly num_;
  LaurentPoly den_;
};

GammaValue gv_monomial(const GaussRat& c, const GroupElement& g);
GammaValue gv_add(const GammaValue& a, const GammaValue& b);
GammaValue gv_mul(const GammaValue& a, const GammaValue& b);
GammaValue gv_inv(const GammaValue& a);
bool gv_eq(const GammaValue& a, const GammaValue& b);
std::optional<std::pair<GaussRat, GroupElement>> gv_as_monomial(const GammaValue& a);

/// Renders a rational as "a" or "a/b".
std::string rational_to_string(const mpq_class& q);

}  // namespace valint
