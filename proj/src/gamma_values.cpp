#include "valint/gamma_values.hpp"

#include "valint/error.hpp"

namespace valint {

std::string rational_to_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

GaussRat operator/(const GaussRat& a, const GaussRat& b) {
  if (b.is_zero()) fail(ErrorCode::kDomain, "division by zero in Q(i)");
  mpq_class norm = b.re * b.re + b.im * b.im;
  GaussRat conj{b.re / norm, -b.im / norm};
  return a * conj;
}

std::string GaussRat::to_string() const {
  if (is_real()) return rational_to_string(re);
  mpz_class den;
  mpz_lcm(den.get_mpz_t(), re.get_den_mpz_t(), im.get_den_mpz_t());
  mpz_class a = re.get_num() * (den / re.get_den());
  mpz_class c = im.get_num() * (den / im.get_den());
  std::string suffix = den == 1 ? "" : "/" + den.get_str();
  std::string imag = c.get_str() + suffix + "*i";
  if (a == 0) return imag;
  std::string out = a.get_str() + suffix;
  if (c > 0) out += "+";
  return out + imag;
}

bool GroupElement::is_zero() const {
  for (auto e : exps_)
    if (e != 0) return false;
  return true;
}

GroupElement GroupElement::operator-() const {
  auto out = exps_;
  for (auto& e : out) e = -e;
  return GroupElement(std::move(out));
}

GroupElement operator+(const GroupElement& a, const GroupElement& b) {
  if (a.rank() != b.rank()) fail(ErrorCode::kDimension, "value-group rank mismatch");
  auto out = a.exps_;
  for (size_t i = 0; i < out.size(); ++i) out[i] += b.exps_[i];
  return GroupElement(std::move(out));
}

GroupElement operator-(const GroupElement& a, const GroupElement& b) { return a + (-b); }

GroupElement operator*(std::int64_t k, const GroupElement& a) {
  auto out = a.exps_;
  for (auto& e : out) e *= k;
  return GroupElement(std::move(out));
}

std::string GroupElement::to_string() const {
  std::string out = "(";
  for (size_t i = 0; i < exps_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(exps_[i]);
  }
  return out + ")";
}

LaurentPoly LaurentPoly::monomial(const GaussRat& c, const GroupElement& g) {
  LaurentPoly p(g.rank());
  p.add_term(g, c);
  return p;
}

void LaurentPoly::add_term(const GroupElement& g, const GaussRat& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(g, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out(rank_);
  for (const auto& [g, c] : terms_) out.terms_.emplace(g, -c);
  return out;
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.rank_ != b.rank_) fail(ErrorCode::kDimension, "value-group rank mismatch");
  LaurentPoly out = a;
  for (const auto& [g, c] : b.terms_) out.add_term(g, c);
  return out;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.rank_ != b.rank_) fail(ErrorCode::kDimension, "value-group rank mismatch");
  LaurentPoly out(a.rank_);
  for (const auto& [ga, ca] : a.terms_)
    for (const auto& [gb, cb] : b.terms_) out.add_term(ga + gb, ca * cb);
  return out;
}

LaurentPoly LaurentPoly::scaled(const GaussRat& c, const GroupElement& shift) const {
  LaurentPoly out(rank_);
  if (c.is_zero()) return out;
  for (const auto& [g, d] : terms_) out.terms_.emplace(g + shift, d * c);
  return out;
}

namespace {

std::string monomial_string(const GroupElement& g) {
  std::string out;
  for (int i = 0; i < g.rank(); ++i) {
    if (g[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += g.rank() == 1 ? "X" : "X" + std::to_string(i + 1);
    out += "^" + std::to_string(g[i]);
  }
  return out;
}

std::string term_string(const GaussRat& c, const GroupElement& g) {
  std::string mono = monomial_string(g);
  if (mono.empty()) return c.to_string();
  if (c.is_one()) return mono;
  if (c.is_real() && c.re == -1) return "-" + mono;
  if (c.is_real()) return c.to_string() + "*" + mono;
  return "(" + c.to_string() + ")*" + mono;
}

}  // namespace

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [g, c] : terms_) {
    std::string t = term_string(c, g);
    if (first) {
      out = t;
      first = false;
    } else if (t[0] == '-') {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return out;
}

GammaValue::GammaValue(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (num_.rank() != den_.rank()) fail(ErrorCode::kDimension, "value-group rank mismatch");
  if (den_.is_zero()) fail(ErrorCode::kDomain, "zero denominator in C(Gamma)");
  canonicalize();
}

GammaValue GammaValue::monomial(const GaussRat& c, const GroupElement& g) {
  return GammaValue(LaurentPoly::monomial(c, g), LaurentPoly::monomial(1, GroupElement::zero(g.rank())));
}

void GammaValue::canonicalize() {
  const auto& [g0, c0] = *den_.terms().begin();
  if (g0.is_zero() && c0.is_one()) return;
  GaussRat inv = GaussRat(1) / c0;
  GroupElement shift = -g0;
  num_ = num_.scaled(inv, shift);
  den_ = den_.scaled(inv, shift);
}

namespace {

bool den_is_one(const LaurentPoly& den) { return den.terms().size() == 1; }

}  // namespace

GammaValue GammaValue::operator-() const { return GammaValue(-num_, den_); }

GammaValue operator+(const GammaValue& a, const GammaValue& b) {
  if (a.den_ == b.den_) return GammaValue(a.num_ + b.num_, a.den_);
  return GammaValue(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

GammaValue operator-(const GammaValue& a, const GammaValue& b) { return a + (-b); }

GammaValue operator*(const GammaValue& a, const GammaValue& b) {
  if (den_is_one(a.den_) && den_is_one(b.den_)) return GammaValue(a.num_ * b.num_, a.den_);
  return GammaValue(a.num_ * b.num_, a.den_ * b.den_);
}

GammaValue GammaValue::inverse() const {
  if (num_.is_zero()) fail(ErrorCode::kDomain, "inversion of zero in C(Gamma)");
  return GammaValue(den_, num_);
}

GammaValue operator/(const GammaValue& a, const GammaValue& b) { return a * b.inverse(); }

GammaValue GammaValue::pow(std::int64_t k) const {
  GammaValue base = k < 0 ? inverse() : *this;
  if (k < 0) k = -k;
  GammaValue out = one(rank());
  while (k > 0) {
    if (k & 1) out = out * base;
    base = base * base;
    k >>= 1;
  }
  return out;
}

bool operator==(const GammaValue& a, const GammaValue& b) {
  if (a.rank() != b.rank()) return false;
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return a.num_ * b.den_ == b.num_ * a.den_;
}

std::optional<std::pair<GaussRat, GroupElement>> GammaValue::as_monomial() const {
  if (!den_is_one(den_) || num_.terms().size() != 1) return std::nullopt;
  const auto& [g, c] = *num_.terms().begin();
  return std::make_pair(c, g);
}

std::string GammaValue::to_string() const {
  if (den_is_one(den_)) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

GammaValue gv_monomial(const GaussRat& c, const GroupElement& g) { return GammaValue::monomial(c, g); }
GammaValue gv_add(const GammaValue& a, const GammaValue& b) { return a + b; }
GammaValue gv_mul(const GammaValue& a, const GammaValue& b) { return a * b; }
GammaValue gv_inv(const GammaValue& a) { return a.inverse(); }
bool gv_eq(const GammaValue& a, const GammaValue& b) { return a == b; }
std::optional<std::pair<GaussRat, GroupElement>> gv_as_monomial(const GammaValue& a) {
  return a.as_monomial();
}

}  // namespace valint
