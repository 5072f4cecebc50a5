#pragma once

// Univariate polynomials and reduced rational functions over F_p. These are
// the exact representatives for elements of F_p((u)).

#include <cstdint>
#include <string>
#include <vector>

namespace valint {

class FpPoly {
 public:
  FpPoly() = default;
  FpPoly(std::int64_t p, std::vector<std::int64_t> coeffs);
  static FpPoly constant(std::int64_t p, std::int64_t c) { return FpPoly(p, {c}); }
  static FpPoly monomial(std::int64_t p, std::int64_t c, int degree);

  std::int64_t prime() const { return p_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  /// Index of the lowest nonzero coefficient; -1 for the zero polynomial.
  int order() const;
  std::int64_t coeff(int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<size_t>(i)] : 0;
  }
  const std::vector<std::int64_t>& coeffs() const { return c_; }
  std::int64_t leading() const { return c_.empty() ? 0 : c_.back(); }

  FpPoly operator-() const;
  friend FpPoly operator+(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator-(const FpPoly& a, const FpPoly& b);
  friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
  FpPoly scaled(std::int64_t c) const;
  /// Multiply by u^k (k >= 0) or divide exactly by u^-k.
  FpPoly shifted(int k) const;
  /// Keep coefficients of u^0..u^(n-1).
  FpPoly truncated(int n) const;
  void divmod(const FpPoly& d, FpPoly& q, FpPoly& r) const;
  FpPoly monic() const;

  friend bool operator==(const FpPoly&, const FpPoly&) = default;
  friend auto operator<=>(const FpPoly& a, const FpPoly& b) {
    if (auto c = a.c_.size() <=> b.c_.size(); c != 0) return c;
    return a.c_ <=> b.c_;
  }

 private:
  void trim();

  std::int64_t p_ = 2;
  std::vector<std::int64_t> c_;
};

std::int64_t fp_inverse(std::int64_t a, std::int64_t p);
FpPoly fp_gcd(FpPoly a, FpPoly b);

/// Power series a/b mod u^n, requires b(0) != 0.
FpPoly fp_series_div(const FpPoly& a, const FpPoly& b, int n);

/// A reduced fraction num/den in F_p(u) with den monic.
class FpRat {
 public:
  FpRat() = default;
  explicit FpRat(std::int64_t p) : num_(p, {}), den_(FpPoly::constant(p, 1)) {}
  FpRat(FpPoly num, FpPoly den);

  std::int64_t prime() const { return num_.prime(); }
  const FpPoly& num() const { return num_; }
  const FpPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  /// ord_u(num) - ord_u(den); requires nonzero.
  int valuation() const { return num_.order() - den_.order(); }

  FpRat operator-() const { return FpRat(-num_, den_); }
  friend FpRat operator+(const FpRat& a, const FpRat& b);
  friend FpRat operator-(const FpRat& a, const FpRat& b) { return a + (-b); }
  friend FpRat operator*(const FpRat& a, const FpRat& b);
  FpRat inverse() const;
  /// Multiply by u^k.
  FpRat shifted(int k) const;

  friend bool operator==(const FpRat&, const FpRat&) = default;
  friend auto operator<=>(const FpRat& a, const FpRat& b) {
    if (auto c = a.num_ <=> b.num_; c != 0) return c;
    return a.den_ <=> b.den_;
  }

 private:
  FpPoly num_;
  FpPoly den_;
};

}  // namespace valint
