#include "valint/valued_field.hpp"

#include "valint/error.hpp"

namespace valint {

std::optional<GroupElement> cutoff_min(const std::optional<GroupElement>& a,
                                       const std::optional<GroupElement>& b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

namespace {

std::optional<GroupElement> cutoff_add(const std::optional<GroupElement>& a, const GroupElement& g) {
  if (!a) return std::nullopt;
  return *a + g;
}

std::string monomial_text(const ValuedFieldSpec& spec, const GroupElement& g) {
  std::string out;
  for (int i = 0; i < spec.rank; ++i) {
    if (i) out += "*";
    out += spec.variable(i) + "^" + std::to_string(g[i]);
  }
  return out;
}

}  // namespace

std::string ValuedFieldSpec::variable(int i) const {
  return rank == 1 ? "t" : "t" + std::to_string(i + 1);
}

std::string ValuedFieldSpec::name() const {
  std::string out = base.name();
  for (int i = rank - 1; i >= 0; --i) out += "((" + variable(i) + "))";
  return out;
}

FElem::FElem(const ValuedFieldSpec& spec, Terms terms, std::optional<GroupElement> cutoff)
    : spec_(spec), terms_(std::move(terms)), cutoff_(std::move(cutoff)) {
  normalize();
}

FElem FElem::constant(const ValuedFieldSpec& spec, const KElem& c) {
  return monomial(spec, c, GroupElement::zero(spec.rank));
}

FElem FElem::from_int(const ValuedFieldSpec& spec, long v) {
  return constant(spec, KElem::from_int(spec.base, v));
}

FElem FElem::monomial(const ValuedFieldSpec& spec, const KElem& c, const GroupElement& g) {
  if (g.rank() != spec.rank) fail(ErrorCode::kDimension, "exponent rank does not match the field rank");
  Terms t;
  t.emplace(g, c);
  return FElem(spec, std::move(t), std::nullopt);
}

void FElem::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_exact_zero() || (cutoff_ && !(it->first < *cutoff_))) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

void FElem::check_field(const FElem& o) const {
  if (!spec_.same_field(o.spec_)) fail(ErrorCode::kType, "mixing elements of " + spec_.name() + " and " + o.spec_.name());
}

bool FElem::is_exact() const {
  if (cutoff_) return false;
  for (const auto& [g, c] : terms_)
    if (!c.is_exact()) return false;
  return true;
}

FElem FElem::operator-() const {
  FElem out = *this;
  for (auto& [g, c] : out.terms_) c = -c;
  return out;
}

FElem operator+(const FElem& a, const FElem& b) {
  a.check_field(b);
  FElem out(a.spec_);
  out.cutoff_ = cutoff_min(a.cutoff_, b.cutoff_);
  out.terms_ = a.terms_;
  for (const auto& [g, c] : b.terms_) {
    auto [it, inserted] = out.terms_.try_emplace(g, c);
    if (!inserted) it->second = it->second + c;
  }
  out.normalize();
  return out;
}

FElem operator-(const FElem& a, const FElem& b) { return a + (-b); }

FElem operator*(const FElem& a, const FElem& b) {
  a.check_field(b);
  if (a.is_exact_zero() || b.is_exact_zero()) return FElem(a.spec_);
  GroupElement va = a.nu_lower_bound(), vb = b.nu_lower_bound();
  FElem out(a.spec_);
  out.cutoff_ = cutoff_min(cutoff_min(cutoff_add(b.cutoff_, va), cutoff_add(a.cutoff_, vb)),
                           a.cutoff_ && b.cutoff_ ? std::optional(*a.cutoff_ + *b.cutoff_) : std::nullopt);
  for (const auto& [ga, ca] : a.terms_) {
    for (const auto& [gb, cb] : b.terms_) {
      GroupElement g = ga + gb;
      if (out.cutoff_ && !(g < *out.cutoff_)) continue;
      KElem c = ca * cb;
      auto [it, inserted] = out.terms_.try_emplace(g, c);
      if (!inserted) it->second = it->second + c;
    }
  }
  out.normalize();
  return out;
}

FElem FElem::inverse() const {
  if (is_zero()) fail(ErrorCode::kDomain, "inversion of zero in " + spec_.name());
  GroupElement v0 = nu();
  KElem c0inv = leading_coefficient().inverse();
  FElem unit = (*this * monomial(spec_, c0inv, -v0));
  FElem one = from_int(spec_, 1);
  FElem h = unit - one;
  // The constant term is 1 up to the K-precision already carried by c0inv.
  h.terms_.erase(GroupElement::zero(spec_.rank));
  FElem out = monomial(spec_, c0inv, -v0);
  if (h.is_exact_zero()) return out;
  // 1/(1+h) = sum (-h)^k, kept below min(N * nu(h), known cutoff of h).
  GroupElement bound = static_cast<std::int64_t>(spec_.precision) * h.nu_lower_bound();
  if (h.cutoff_) bound = std::min(bound, *h.cutoff_);
  FElem neg_h = -h;
  neg_h.cutoff_ = cutoff_min(neg_h.cutoff_, bound);
  neg_h.normalize();
  FElem sum = one;
  sum.cutoff_ = bound;
  FElem power = one;
  for (int k = 0; k < spec_.precision + 1 && !power.is_zero(); ++k) {
    power = power * neg_h;
    power.cutoff_ = cutoff_min(power.cutoff_, bound);
    power.normalize();
    sum = sum + power;
  }
  return sum * out;
}

FElem operator/(const FElem& a, const FElem& b) { return a * b.inverse(); }

FElem FElem::shifted(const GroupElement& g) const {
  FElem out(spec_);
  for (const auto& [h, c] : terms_) out.terms_.emplace(h + g, c);
  out.cutoff_ = cutoff_add(cutoff_, g);
  return out;
}

KElem FElem::coefficient(const GroupElement& g) const {
  if (cutoff_ && !(g < *cutoff_))
    precision_exhausted("coefficient of " + monomial_text(spec_, g) + " beyond cutoff " + monomial_text(spec_, *cutoff_));
  auto it = terms_.find(g);
  return it == terms_.end() ? KElem(spec_.base) : it->second;
}

GroupElement FElem::nu() const {
  if (terms_.empty()) {
    if (!cutoff_) fail(ErrorCode::kDomain, "valuation of zero");
    precision_exhausted("valuation of a value that is zero up to " + monomial_text(spec_, *cutoff_));
  }
  const auto& [g, c] = *terms_.begin();
  if (c.is_zero()) precision_exhausted("leading coefficient is zero to precision");
  return g;
}

GroupElement FElem::nu_lower_bound() const {
  if (terms_.empty()) {
    if (!cutoff_) fail(ErrorCode::kDomain, "valuation of zero");
    return *cutoff_;
  }
  return terms_.begin()->first;
}

KElem FElem::leading_coefficient() const { return coefficient(nu()); }

bool FElem::is_integral() const {
  if (is_exact_zero()) return true;
  GroupElement zero = GroupElement::zero(spec_.rank);
  GroupElement lb = nu_lower_bound();
  if (!(lb < zero)) return true;
  return !(nu() < zero);
}

KElem FElem::residue() const {
  if (!is_integral()) fail(ErrorCode::kDomain, "residue of a non-integral element");
  return coefficient(GroupElement::zero(spec_.rank));
}

GammaValue FElem::abs() const {
  if (is_zero()) fail(ErrorCode::kDomain, "absolute value of zero");
  GroupElement v = nu();
  return GammaValue::monomial(GaussRat(k_abs(coefficient(v))), v);
}

std::string FElem::to_string() const {
  std::string out;
  for (const auto& [g, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += monomial_text(spec_, g) + "*(" + c.to_string() + ")";
  }
  if (cutoff_) {
    if (!out.empty()) out += " + ";
    out += "O(" + monomial_text(spec_, *cutoff_) + ")";
  }
  return out.empty() ? "0" : out;
}

bool operator==(const FElem& a, const FElem& b) {
  return a.spec_.same_field(b.spec_) && a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
}

FElem f_add(const FElem& a, const FElem& b) { return a + b; }
FElem f_mul(const FElem& a, const FElem& b) { return a * b; }
FElem f_inv(const FElem& a) { return a.inverse(); }
GroupElement f_nu(const FElem& a) { return a.nu(); }
FElem f_split(const ValuedFieldSpec& spec, const GroupElement& g) {
  return FElem::monomial(spec, KElem::from_int(spec.base, 1), g);
}
KElem f_residue(const FElem& a) { return a.residue(); }
bool f_is_integral(const FElem& a) { return a.is_integral(); }
GammaValue f_abs(const FElem& a) { return a.abs(); }

bool f_in_coset(const FElem& x, const FElem& a, const GroupElement& gamma) {
  return (x - a).shifted(-gamma).is_integral();
}

}  // namespace valint
