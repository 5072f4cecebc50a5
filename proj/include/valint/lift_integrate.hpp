#pragma once

// Lifted functions g^{a,gamma} on F^n, their affine images, and the
// repeated-integral engine.

#include <string>
#include <utility>
#include <vector>

#include "valint/fmatrix.hpp"
#include "valint/step_functions.hpp"

namespace valint {

/// coeff * g^{a,gamma}: equal to coeff * g(rho((x - a) t(-gamma))) on
/// a + t(gamma) O_F^n and 0 elsewhere.
struct LiftedTerm {
  StepFunction g;
  std::vector<FElem> a;
  std::vector<GroupElement> gamma;
  GammaValue coeff;

  int dim() const { return g.dim(); }
};

/// x -> base(tau x + shift).
struct AffineImageTerm {
  LiftedTerm base;
  FMatrix tau;
  std::vector<FElem> shift;
};

class FFunction {
 public:
  FFunction() = default;
  FFunction(const ValuedFieldSpec& spec, int dim) : spec_(spec), dim_(dim) {}

  const ValuedFieldSpec& spec() const { return spec_; }
  int dim() const { return dim_; }
  int rank() const { return spec_.rank; }
  const std::vector<AffineImageTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(AffineImageTerm t);

  std::string to_string() const;

 private:
  ValuedFieldSpec spec_;
  int dim_ = 0;
  std::vector<AffineImageTerm> terms_;
};

LiftedTerm lift(const ValuedFieldSpec& spec, const StepFunction& g, const std::vector<FElem>& a,
                const std::vector<GroupElement>& gamma);
GammaValue lifted_eval(const LiftedTerm& t, const std::vector<FElem>& x);
FFunction ff_from_lift(const ValuedFieldSpec& spec, const LiftedTerm& t);
FFunction ff_add(const FFunction& f, const FFunction& g);
FFunction ff_scale(const GammaValue& c, const FFunction& f);
/// x -> f(tau x + shift).
FFunction ff_compose(const FFunction& f, const FMatrix& tau, const std::vector<FElem>& shift);
GammaValue ff_eval(const FFunction& f, const std::vector<FElem>& x);

/// (int g) X^gamma for a one-dimensional lift.
GammaValue integrate_simple(const LiftedTerm& t);
/// x -> f(alpha x + a), alpha acting coordinatewise.
FFunction scale_translate(const FFunction& f, const std::vector<FElem>& alpha, const std::vector<FElem>& a);

enum class Route {
  /// Iwasawa, absorption of A, scaling, U = PV and the column/SL2 substitution.
  kIwasawa,
  /// One substitution along the line through the integrated coordinate.
  kDirect,
};

/// Integrate out coordinate r (1-based); the result has dimension n - 1.
FFunction partial_integral(const FFunction& f, int r, Route route = Route::kIwasawa);
/// Integrate the coordinates in the given order (a permutation of 1..n,
/// naming original coordinates).
GammaValue repeated_integral(const FFunction& f, const std::vector<int>& order, Route route = Route::kIwasawa);
GammaValue integral_closed_form(const FFunction& f);

/// The SL2 case matrix for y -> g0(x + alpha y, y): S = tau' tau diag(e, 1)
/// and delta0 = min(nu(alpha), 0).
struct Sl2Case {
  KMatrix S;
  GroupElement delta0;
  /// -1, 0 or 1 for nu(alpha) < 0, = 0, > 0; 2 when alpha = 0.
  int sign;
};
Sl2Case case_lemma_sl2(const FElem& alpha, const LocalFieldSpec& base);

struct FubiniReport {
  bool pass = false;
  GammaValue value;
  GammaValue closed_form;
  std::vector<std::pair<std::vector<int>, GammaValue>> orders;
  /// Empty on success, otherwise the first disagreeing order.
  std::string trace;

  /// "FUBINI PASS value=..." or "FUBINI FAIL ...".
  std::string to_string() const;
};
FubiniReport fubini_report(const FFunction& f);

std::string order_to_string(const std::vector<int>& order);

}  // namespace valint
