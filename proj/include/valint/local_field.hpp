#pragma once

// The residue field K: Q_p or F_p((u)), with precision tracking, and the
// ball geometry that step functions are built from.

#include <gmpxx.h>

#include <climits>
#include <cstdint>
#include <string>
#include <vector>

#include "valint/fp_poly.hpp"

namespace valint {

struct LocalFieldSpec {
  enum class Kind { kPAdic, kLaurentFF };

  Kind kind = Kind::kPAdic;
  std::int64_t p = 3;
  int default_precision = 8;

  static LocalFieldSpec padic(std::int64_t p, int prec = 8);
  static LocalFieldSpec laurent_ff(std::int64_t p, int prec = 8);

  bool same_field(const LocalFieldSpec& o) const { return kind == o.kind && p == o.p; }
  /// "Q3" or "F2((u))".
  std::string name() const;
};

/// An element of K known modulo pi^precision. The stored representative is
/// exact; when the precision is finite it is the canonical representative
/// (digits below the precision only).
class KElem {
 public:
  static constexpr int kExact = INT_MAX;

  KElem() : KElem(LocalFieldSpec{}) {}
  explicit KElem(const LocalFieldSpec& spec);

  static KElem zero(const LocalFieldSpec& spec) { return KElem(spec); }
  static KElem from_int(const LocalFieldSpec& spec, long v);
  /// For F_p((u)) the denominator must be prime to p.
  static KElem from_rational(const LocalFieldSpec& spec, const mpq_class& q, int precision = kExact);
  static KElem from_fp(const LocalFieldSpec& spec, const FpRat& r, int precision = kExact);
  /// pi^k where pi = p or u.
  static KElem pi_power(const LocalFieldSpec& spec, int k);
  /// sum digits[i] * pi^(v+i); exact, or known to precision v + digits.size().
  static KElem from_digits(const LocalFieldSpec& spec, int v, const std::vector<std::int64_t>& digits,
                           bool exact);

  const LocalFieldSpec& spec() const { return spec_; }
  std::int64_t prime() const { return spec_.p; }
  bool is_padic() const { return spec_.kind == LocalFieldSpec::Kind::kPAdic; }
  bool is_exact() const { return prec_ == kExact; }
  int precision() const { return prec_; }
  /// Zero, or zero to the known precision.
  bool is_zero() const;
  bool is_exact_zero() const { return is_zero() && is_exact(); }

  /// Throws E006 on an exact zero and E010 on a zero-to-precision.
  int valuation() const;
  /// Valuation, or the absolute precision for a zero-to-precision value.
  int valuation_lower_bound() const;
  int relative_precision() const;
  /// p^-v as an exact rational.
  mpq_class abs() const;

  KElem operator-() const;
  friend KElem operator+(const KElem& a, const KElem& b);
  friend KElem operator-(const KElem& a, const KElem& b);
  friend KElem operator*(const KElem& a, const KElem& b);
  friend KElem operator/(const KElem& a, const KElem& b);
  KElem inverse() const;
  /// Forget digits at positions >= n.
  KElem with_precision(int n) const;
  /// Canonical exact representative mod pi^k (E010 if k exceeds precision).
  KElem truncate(int k) const;
  /// Digit at position i (E010 if i >= precision).
  std::int64_t digit(int i) const;

  /// x - y has valuation >= k, decided at available precision (else E010).
  bool congruent(const KElem& y, int k) const;

  const mpq_class& rational() const { return q_; }
  const FpRat& fp() const { return f_; }

  /// Exact Q_p values print as rationals; inexact ones as a digit literal.
  std::string to_string() const;

  /// Representation equality (same representative and precision).
  friend bool operator==(const KElem& a, const KElem& b);
  /// Deterministic total order on representatives.
  friend bool operator<(const KElem& a, const KElem& b);

 private:
  void reduce();
  void check_field(const KElem& o) const;

  LocalFieldSpec spec_;
  int prec_ = kExact;
  mpq_class q_;
  FpRat f_;
};

KElem k_add(const KElem& a, const KElem& b);
KElem k_mul(const KElem& a, const KElem& b);
KElem k_neg(const KElem& a);
KElem k_inv(const KElem& a);
int k_valuation(const KElem& a);
mpq_class k_abs(const KElem& a);

/// center + pi^depth O_K with the center canonical (no digits at positions >= depth).
class Ball {
 public:
  Ball() = default;
  Ball(const KElem& center, int depth);
  static Ball ring_of_integers(const LocalFieldSpec& spec) { return Ball(KElem(spec), 0); }

  const KElem& center() const { return center_; }
  int depth() const { return depth_; }
  const LocalFieldSpec& spec() const { return center_.spec(); }

  bool contains(const KElem& x) const;
  bool contains(const Ball& b) const { return b.depth_ >= depth_ && contains(b.center_); }
  bool intersects(const Ball& b) const { return contains(b) || b.contains(*this); }

  /// "ball(c, k)"
  std::string to_string() const;

  friend bool operator==(const Ball& a, const Ball& b) {
    return a.depth_ == b.depth_ && a.center_ == b.center_;
  }
  friend bool operator<(const Ball& a, const Ball& b) {
    if (a.depth_ != b.depth_) return a.depth_ < b.depth_;
    return a.center_ < b.center_;
  }

 private:
  KElem center_;
  int depth_ = 0;
};

mpq_class ball_measure(const Ball& b);
bool ball_member(const KElem& x, const Ball& b);
/// The p^(m-depth) sub-balls of depth m, ordered by the integer whose base-p
/// digits are the new digits, least significant first.
std::vector<Ball> ball_split(const Ball& b, int m);
/// The sub-ball of depth m containing the ball's center plus N * pi^depth.
Ball ball_child(const Ball& b, int m, std::uint64_t index);

/// Saturating addition for precisions, keeping kExact absorbing.
int prec_add(int a, int b);

}  // namespace valint
