#include "valint/local_field.hpp"

#include <algorithm>

#include "valint/error.hpp"
#include "valint/gamma_values.hpp"

namespace valint {

namespace {

int mpz_valuation(const mpz_class& z, std::int64_t p) {
  mpz_class rest;
  mpz_class prime(static_cast<long>(p));
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), z.get_mpz_t(), prime.get_mpz_t()));
}

int padic_valuation(const mpq_class& q, std::int64_t p) {
  return mpz_valuation(q.get_num(), p) - mpz_valuation(q.get_den(), p);
}

mpq_class p_power(std::int64_t p, int k) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return mpq_class(z);
  mpq_class out(1, 1);
  out /= mpq_class(z);
  return out;
}

// Canonical representative of q mod p^k.
mpq_class padic_truncate(const mpq_class& q, std::int64_t p, int k) {
  if (sgn(q) == 0) return q;
  int v = padic_valuation(q, p);
  if (v >= k) return 0;
  mpq_class unit = q / p_power(p, v);
  mpz_class modulus;
  mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - v));
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), unit.get_den_mpz_t(), modulus.get_mpz_t());
  mpz_class n = unit.get_num() * inv;
  mpz_mod(n.get_mpz_t(), n.get_mpz_t(), modulus.get_mpz_t());
  mpq_class out(n);
  out *= p_power(p, v);
  out.canonicalize();
  return out;
}

// Canonical representative of r mod u^k, returned as u^s-denominated fraction.
FpRat fp_truncate(const FpRat& r, int k) {
  if (r.is_zero()) return r;
  int v = r.valuation();
  std::int64_t p = r.prime();
  if (v >= k) return FpRat(p);
  FpPoly a = r.num().shifted(-r.num().order());
  FpPoly b = r.den().shifted(-r.den().order());
  FpPoly s = fp_series_div(a, b, k - v);
  return FpRat(s, FpPoly::constant(p, 1)).shifted(v);
}

// Coefficient of u^i in a fraction whose denominator is a power of u.
std::int64_t fp_coeff(const FpRat& r, int i) {
  int s = r.den().degree();
  return r.num().coeff(i + s);
}

}  // namespace

int prec_add(int a, int b) {
  if (a == KElem::kExact || b == KElem::kExact) return KElem::kExact;
  long s = static_cast<long>(a) + b;
  return static_cast<int>(std::clamp<long>(s, INT_MIN / 2, KElem::kExact - 1));
}

LocalFieldSpec LocalFieldSpec::padic(std::int64_t p, int prec) {
  return LocalFieldSpec{Kind::kPAdic, p, prec};
}

LocalFieldSpec LocalFieldSpec::laurent_ff(std::int64_t p, int prec) {
  return LocalFieldSpec{Kind::kLaurentFF, p, prec};
}

std::string LocalFieldSpec::name() const {
  if (kind == Kind::kPAdic) return "Q" + std::to_string(p);
  return "F" + std::to_string(p) + "((u))";
}

KElem::KElem(const LocalFieldSpec& spec) : spec_(spec), q_(0), f_(spec.p) {}

KElem KElem::from_int(const LocalFieldSpec& spec, long v) { return from_rational(spec, mpq_class(v)); }

KElem KElem::from_rational(const LocalFieldSpec& spec, const mpq_class& q, int precision) {
  KElem out(spec);
  if (spec.kind == LocalFieldSpec::Kind::kPAdic) {
    out.q_ = q;
    out.q_.canonicalize();
  } else {
    mpz_class p(static_cast<long>(spec.p));
    mpz_class num = q.get_num() % p, den = q.get_den() % p;
    if (den == 0) fail(ErrorCode::kDomain, "rational with denominator divisible by p in " + spec.name());
    std::int64_t n = num.get_si(), d = den.get_si();
    out.f_ = FpRat(FpPoly::constant(spec.p, n * fp_inverse(d, spec.p)), FpPoly::constant(spec.p, 1));
  }
  out.prec_ = precision;
  out.reduce();
  return out;
}

KElem KElem::from_fp(const LocalFieldSpec& spec, const FpRat& r, int precision) {
  if (spec.kind != LocalFieldSpec::Kind::kLaurentFF) fail(ErrorCode::kType, "u-expression in a p-adic field");
  KElem out(spec);
  out.f_ = r;
  out.prec_ = precision;
  out.reduce();
  return out;
}

KElem KElem::pi_power(const LocalFieldSpec& spec, int k) {
  KElem out(spec);
  if (spec.kind == LocalFieldSpec::Kind::kPAdic) {
    out.q_ = p_power(spec.p, k);
  } else {
    out.f_ = FpRat(FpPoly::constant(spec.p, 1), FpPoly::constant(spec.p, 1)).shifted(k);
  }
  return out;
}

KElem KElem::from_digits(const LocalFieldSpec& spec, int v, const std::vector<std::int64_t>& digits,
                         bool exact) {
  KElem out(spec);
  for (size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= spec.p) fail(ErrorCode::kDomain, "digit out of range");
    if (digits[i] == 0) continue;
    KElem term = pi_power(spec, v + static_cast<int>(i)) * from_int(spec, static_cast<long>(digits[i]));
    out = out + term;
  }
  out.prec_ = exact ? kExact : v + static_cast<int>(digits.size());
  out.reduce();
  return out;
}

void KElem::reduce() {
  if (prec_ == kExact) return;
  if (is_padic()) {
    q_ = padic_truncate(q_, spec_.p, prec_);
  } else {
    f_ = fp_truncate(f_, prec_);
  }
}

void KElem::check_field(const KElem& o) const {
  if (!spec_.same_field(o.spec_))
    fail(ErrorCode::kType, "mixing elements of " + spec_.name() + " and " + o.spec_.name());
}

bool KElem::is_zero() const { return is_padic() ? sgn(q_) == 0 : f_.is_zero(); }

int KElem::valuation() const {
  if (is_zero()) {
    if (is_exact()) fail(ErrorCode::kDomain, "valuation of zero");
    precision_exhausted("valuation of a value that is zero to precision " + std::to_string(prec_));
  }
  return is_padic() ? padic_valuation(q_, spec_.p) : f_.valuation();
}

int KElem::valuation_lower_bound() const { return is_zero() ? prec_ : valuation(); }

int KElem::relative_precision() const {
  if (is_exact()) return kExact;
  return prec_ - valuation_lower_bound();
}

mpq_class KElem::abs() const {
  if (is_zero()) fail(ErrorCode::kDomain, "absolute value of zero");
  return p_power(spec_.p, -valuation());
}

KElem KElem::operator-() const {
  KElem out = *this;
  if (is_padic()) {
    out.q_ = -q_;
  } else {
    out.f_ = -f_;
  }
  out.reduce();
  return out;
}

KElem operator+(const KElem& a, const KElem& b) {
  a.check_field(b);
  KElem out(a.spec_);
  out.prec_ = std::min(a.prec_, b.prec_);
  if (a.is_padic()) {
    out.q_ = a.q_ + b.q_;
  } else {
    out.f_ = a.f_ + b.f_;
  }
  out.reduce();
  return out;
}

KElem operator-(const KElem& a, const KElem& b) { return a + (-b); }

KElem operator*(const KElem& a, const KElem& b) {
  a.check_field(b);
  KElem out(a.spec_);
  int va = a.valuation_lower_bound(), vb = b.valuation_lower_bound();
  out.prec_ = std::min(prec_add(va, b.prec_), prec_add(vb, a.prec_));
  if (a.is_padic()) {
    out.q_ = a.q_ * b.q_;
  } else {
    out.f_ = a.f_ * b.f_;
  }
  out.reduce();
  return out;
}

KElem KElem::inverse() const {
  if (is_zero()) fail(ErrorCode::kDomain, "inversion of zero in " + spec_.name());
  KElem out(spec_);
  int v = valuation();
  out.prec_ = is_exact() ? kExact : prec_ - 2 * v;
  if (is_padic()) {
    out.q_ = 1 / q_;
  } else {
    out.f_ = f_.inverse();
  }
  out.reduce();
  return out;
}

KElem operator/(const KElem& a, const KElem& b) { return a * b.inverse(); }

KElem KElem::with_precision(int n) const {
  if (n >= prec_) return *this;
  KElem out = *this;
  out.prec_ = n;
  out.reduce();
  return out;
}

KElem KElem::truncate(int k) const {
  if (k > prec_) precision_exhausted("digits up to position " + std::to_string(k) + " requested, known to " + std::to_string(prec_));
  KElem out = with_precision(k);
  out.prec_ = kExact;
  return out;
}

std::int64_t KElem::digit(int i) const {
  KElem t = truncate(i + 1);
  if (t.is_zero()) return 0;
  if (is_padic()) {
    mpq_class scaled = t.q_ / p_power(spec_.p, i);
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    mpz_class prime(static_cast<long>(spec_.p));
    mpz_class d;
    mpz_mod(d.get_mpz_t(), fl.get_mpz_t(), prime.get_mpz_t());
    return d.get_si();
  }
  return fp_coeff(t.f_, i);
}

bool KElem::congruent(const KElem& y, int k) const {
  KElem d = *this - y;
  if (!d.is_zero()) {
    int v = d.valuation();
    if (v < d.prec_) return v >= k;
  }
  if (d.prec_ >= k) return true;
  precision_exhausted("membership at depth " + std::to_string(k) + " undecidable at precision " +
                      std::to_string(d.prec_));
}

std::string KElem::to_string() const {
  if (is_padic()) {
    if (is_exact()) return rational_to_string(q_);
    int v = is_zero() ? prec_ - 1 : valuation();
    std::string out = std::to_string(spec_.p) + "adic: v=" + std::to_string(v) + " digits=[";
    for (int i = v; i < prec_; ++i) out += std::to_string(digit(i)) + ",";
    return out + "...]";
  }
  auto terms = [](const FpRat& r, int shift, bool keep_zero, int lo, int hi) {
    std::string out;
    for (int i = lo; i < hi; ++i) {
      std::int64_t c = r.num().coeff(i + shift);
      if (c == 0 && !keep_zero) continue;
      if (!out.empty()) out += " + ";
      out += "u^" + std::to_string(i) + "*(" + std::to_string(c) + ")";
    }
    return out;
  };
  if (!is_exact()) {
    int v = is_zero() ? prec_ - 1 : valuation();
    return terms(f_, f_.den().degree(), true, v, prec_) + " + ...";
  }
  if (f_.is_zero()) return "0";
  const FpPoly& den = f_.den();
  if (den.order() == den.degree()) return terms(f_, den.degree(), false, -den.degree(), f_.num().degree() - den.degree() + 1);
  FpRat n(f_.num(), FpPoly::constant(spec_.p, 1));
  FpRat d(den, FpPoly::constant(spec_.p, 1));
  return "(" + terms(n, 0, false, 0, n.num().degree() + 1) + ")/(" + terms(d, 0, false, 0, den.degree() + 1) + ")";
}

bool operator==(const KElem& a, const KElem& b) {
  if (!a.spec_.same_field(b.spec_) || a.prec_ != b.prec_) return false;
  return a.is_padic() ? a.q_ == b.q_ : a.f_ == b.f_;
}

bool operator<(const KElem& a, const KElem& b) {
  if (a.spec_.kind != b.spec_.kind) return a.spec_.kind < b.spec_.kind;
  if (a.spec_.p != b.spec_.p) return a.spec_.p < b.spec_.p;
  if (a.is_padic()) {
    if (a.q_ != b.q_) return a.q_ < b.q_;
  } else if (a.f_ != b.f_) {
    return a.f_ < b.f_;
  }
  return a.prec_ < b.prec_;
}

KElem k_add(const KElem& a, const KElem& b) { return a + b; }
KElem k_mul(const KElem& a, const KElem& b) { return a * b; }
KElem k_neg(const KElem& a) { return -a; }
KElem k_inv(const KElem& a) { return a.inverse(); }
int k_valuation(const KElem& a) { return a.valuation(); }
mpq_class k_abs(const KElem& a) { return a.abs(); }

Ball::Ball(const KElem& center, int depth) : center_(center.truncate(depth)), depth_(depth) {}

bool Ball::contains(const KElem& x) const { return x.congruent(center_, depth_); }

std::string Ball::to_string() const {
  return "ball(" + center_.to_string() + ", " + std::to_string(depth_) + ")";
}

mpq_class ball_measure(const Ball& b) { return p_power(b.spec().p, -b.depth()); }

bool ball_member(const KElem& x, const Ball& b) { return b.contains(x); }

Ball ball_child(const Ball& b, int m, std::uint64_t index) {
  const auto& spec = b.spec();
  KElem offset(spec);
  if (spec.kind == LocalFieldSpec::Kind::kPAdic) {
    offset = KElem::from_rational(spec, mpq_class(mpz_class(static_cast<unsigned long>(index))) * p_power(spec.p, b.depth()));
  } else {
    std::vector<std::int64_t> digits;
    for (int j = b.depth(); j < m; ++j) {
      digits.push_back(static_cast<std::int64_t>(index % static_cast<std::uint64_t>(spec.p)));
      index /= static_cast<std::uint64_t>(spec.p);
    }
    offset = KElem::from_digits(spec, b.depth(), digits, true);
  }
  return Ball(b.center() + offset, m);
}

std::vector<Ball> ball_split(const Ball& b, int m) {
  if (m < b.depth()) fail(ErrorCode::kDomain, "ball_split depth below the ball's depth");
  std::uint64_t count = 1;
  for (int j = b.depth(); j < m; ++j) {
    count *= static_cast<std::uint64_t>(b.spec().p);
    if (count > (1u << 24)) fail(ErrorCode::kDepthLimit, "ball split exceeds the enumeration limit");
  }
  std::vector<Ball> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(ball_child(b, m, i));
  return out;
}

}  // namespace valint
