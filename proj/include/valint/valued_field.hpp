#pragma once

// F = K((t_1))...((t_r)) with the split valuation nu: F^x -> Z^r (lex order,
// t_1 most significant), splitting t(gamma) = t^gamma, residue map and the
// C(Gamma)-valued absolute value.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "valint/gamma_values.hpp"
#include "valint/local_field.hpp"

namespace valint {

struct ValuedFieldSpec {
  LocalFieldSpec base;
  int rank = 1;
  /// Number of geometric-series terms kept when inverting a non-monomial.
  int precision = 10;

  /// "t" for rank 1, "t1".."tr" otherwise.
  std::string variable(int i) const;
  std::string name() const;
  bool same_field(const ValuedFieldSpec& o) const {
    return base.same_field(o.base) && rank == o.rank;
  }
};

/// A finite sum of c_g t^g, known modulo t(cutoff) O_F when a cutoff is set.
/// Every nonzero term with exponent below the cutoff is stored; no stored
/// exponent reaches the cutoff.
class FElem {
 public:
  using Terms = std::map<GroupElement, KElem>;

  FElem() = default;
  explicit FElem(const ValuedFieldSpec& spec) : spec_(spec) {}
  FElem(const ValuedFieldSpec& spec, Terms terms, std::optional<GroupElement> cutoff);

  static FElem zero(const ValuedFieldSpec& spec) { return FElem(spec); }
  static FElem constant(const ValuedFieldSpec& spec, const KElem& c);
  static FElem from_int(const ValuedFieldSpec& spec, long v);
  /// c * t^g.
  static FElem monomial(const ValuedFieldSpec& spec, const KElem& c, const GroupElement& g);

  const ValuedFieldSpec& spec() const { return spec_; }
  int rank() const { return spec_.rank; }
  const Terms& terms() const { return terms_; }
  const std::optional<GroupElement>& cutoff() const { return cutoff_; }
  bool is_exact() const;
  /// No known nonzero term (exactly zero, or zero to the cutoff).
  bool is_zero() const { return terms_.empty(); }
  bool is_exact_zero() const { return terms_.empty() && !cutoff_; }

  FElem operator-() const;
  friend FElem operator+(const FElem& a, const FElem& b);
  friend FElem operator-(const FElem& a, const FElem& b);
  friend FElem operator*(const FElem& a, const FElem& b);
  friend FElem operator/(const FElem& a, const FElem& b);
  FElem inverse() const;
  /// Multiply by t^g.
  FElem shifted(const GroupElement& g) const;
  /// Coefficient of t^g (E010 if g is at or above the cutoff).
  KElem coefficient(const GroupElement& g) const;

  /// Lex-least exponent with a nonzero coefficient.
  GroupElement nu() const;
  /// nu for nonzero values, the cutoff for zero-to-cutoff values. E006 on exact zero.
  GroupElement nu_lower_bound() const;
  bool is_integral() const;
  /// Residue of an integral element in K.
  KElem residue() const;
  GammaValue abs() const;
  /// The leading coefficient c with this = c t^nu (1 + higher terms).
  KElem leading_coefficient() const;

  std::string to_string() const;

  /// Representation equality.
  friend bool operator==(const FElem& a, const FElem& b);

 private:
  void normalize();
  void check_field(const FElem& o) const;

  ValuedFieldSpec spec_;
  Terms terms_;
  std::optional<GroupElement> cutoff_;
};

FElem f_add(const FElem& a, const FElem& b);
FElem f_mul(const FElem& a, const FElem& b);
FElem f_inv(const FElem& a);
GroupElement f_nu(const FElem& a);
FElem f_split(const ValuedFieldSpec& spec, const GroupElement& g);
KElem f_residue(const FElem& a);
bool f_is_integral(const FElem& a);
GammaValue f_abs(const FElem& a);

/// x in a + t(gamma) O_F.
bool f_in_coset(const FElem& x, const FElem& a, const GroupElement& gamma);

/// Lex minimum of optional cutoffs (nullopt is +infinity).
std::optional<GroupElement> cutoff_min(const std::optional<GroupElement>& a, const std::optional<GroupElement>& b);

}  // namespace valint
