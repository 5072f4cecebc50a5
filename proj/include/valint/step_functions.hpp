#pragma once

// Step functions on K^n: finite C(Gamma)-weighted sums of box indicators.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "valint/fmatrix.hpp"
#include "valint/gamma_values.hpp"
#include "valint/local_field.hpp"

namespace valint {

/// Product of n balls; n = 0 is the one-point space.
struct BoxN {
  std::vector<Ball> balls;

  int dim() const { return static_cast<int>(balls.size()); }
  bool contains(const std::vector<KElem>& u) const;
  bool contains(const BoxN& b) const;
  bool intersects(const BoxN& b) const;
  mpq_class measure() const;
  /// "ball(c1, k1) x ball(c2, k2)"
  std::string to_string() const;

  friend bool operator==(const BoxN& a, const BoxN& b) { return a.balls == b.balls; }
  friend bool operator<(const BoxN& a, const BoxN& b) {
    return std::lexicographical_compare(a.balls.begin(), a.balls.end(), b.balls.begin(), b.balls.end());
  }
};

class StepFunction {
 public:
  using Term = std::pair<BoxN, GammaValue>;

  StepFunction() = default;
  StepFunction(const LocalFieldSpec& spec, int dim, int rank) : spec_(spec), dim_(dim), rank_(rank) {}

  const LocalFieldSpec& spec() const { return spec_; }
  int dim() const { return dim_; }
  int rank() const { return rank_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Appends without merging; call simplified() to normalize.
  void add_term(BoxN box, GammaValue coeff);
  /// Identical boxes merged, zero coefficients dropped, terms sorted by box.
  StepFunction simplified() const;

  /// "indicator(B1) + (c)*indicator(B2)"; "0" when empty.
  std::string to_string() const;

 private:
  LocalFieldSpec spec_;
  int dim_ = 0;
  int rank_ = 1;
  std::vector<Term> terms_;
};

/// Upper bound on cosets visited by a single pullback or refinement.
std::uint64_t enumeration_limit();
void set_enumeration_limit(std::uint64_t limit);

StepFunction sf_indicator(const LocalFieldSpec& spec, const BoxN& box, int rank);
StepFunction sf_add(const StepFunction& f, const StepFunction& g);
StepFunction sf_sub(const StepFunction& f, const StepFunction& g);
StepFunction sf_scale(const GammaValue& c, const StepFunction& f);
GammaValue sf_eval(const StepFunction& f, const std::vector<KElem>& u);
/// Disjoint boxes refined to the per-coordinate maximal depth, no zero terms.
StepFunction sf_canonicalize(const StepFunction& f);
/// Pointwise equality, decided on the canonical form of f - g.
bool sf_equal(const StepFunction& f, const StepFunction& g);
GammaValue sf_haar_integral(const StepFunction& f);
/// u -> f(u with v inserted at coordinate r); r is 1-based.
StepFunction sf_section(const StepFunction& f, int r, const KElem& v);
/// Integrate out coordinate r (1-based).
StepFunction sf_partial_integral(const StepFunction& f, int r);
/// u -> f(A u + b), by triangular reduction of each box condition.
StepFunction sf_affine_pullback(const StepFunction& f, const KMatrix& A, const std::vector<KElem>& b);
/// Same map, by enumerating depth-m cosets of a bounding box.
StepFunction sf_affine_pullback_enumerate(const StepFunction& f, const KMatrix& A, const std::vector<KElem>& b);

/// Visit every product of sub-balls of the given depths inside box.
void for_each_subbox(const BoxN& box, const std::vector<int>& depths, const std::function<void(const BoxN&)>& visit);

/// Haar integral by counting depth-m cosets: p^(-sum m) * sum of f at
/// coset representatives, with m the per-coordinate maximal depth.
GammaValue sf_integral_by_enumeration(const StepFunction& f);

}  // namespace valint
