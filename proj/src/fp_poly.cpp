#include "valint/fp_poly.hpp"

#include "valint/error.hpp"

namespace valint {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

}  // namespace

std::int64_t fp_inverse(std::int64_t a, std::int64_t p) {
  a = mod(a, p);
  if (a == 0) fail(ErrorCode::kDomain, "inversion of zero in F_p");
  std::int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t s2 = s0 - q * s1;
    r0 = r1, r1 = r2, s0 = s1, s1 = s2;
  }
  return mod(s0, p);
}

FpPoly::FpPoly(std::int64_t p, std::vector<std::int64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& c : c_) c = mod(c, p_);
  trim();
}

FpPoly FpPoly::monomial(std::int64_t p, std::int64_t c, int degree) {
  std::vector<std::int64_t> v(static_cast<size_t>(degree) + 1, 0);
  v.back() = c;
  return FpPoly(p, std::move(v));
}

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int FpPoly::order() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) return static_cast<int>(i);
  return -1;
}

FpPoly FpPoly::operator-() const {
  FpPoly out = *this;
  for (auto& c : out.c_) c = c == 0 ? 0 : p_ - c;
  return out;
}

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
  FpPoly out;
  out.p_ = a.p_;
  out.c_.assign(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < out.c_.size(); ++i)
    out.c_[i] = (a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i))) % a.p_;
  out.trim();
  return out;
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) { return a + (-b); }

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  FpPoly out;
  out.p_ = a.p_;
  if (a.is_zero() || b.is_zero()) return out;
  out.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) out.c_[i + j] = (out.c_[i + j] + a.c_[i] * b.c_[j]) % a.p_;
  }
  out.trim();
  return out;
}

FpPoly FpPoly::scaled(std::int64_t c) const {
  FpPoly out = *this;
  c = mod(c, p_);
  for (auto& x : out.c_) x = x * c % p_;
  out.trim();
  return out;
}

FpPoly FpPoly::shifted(int k) const {
  if (is_zero()) return *this;
  FpPoly out;
  out.p_ = p_;
  if (k >= 0) {
    out.c_.assign(static_cast<size_t>(k), 0);
    out.c_.insert(out.c_.end(), c_.begin(), c_.end());
  } else {
    if (order() < -k) fail(ErrorCode::kDomain, "inexact division by u");
    out.c_.assign(c_.begin() + (-k), c_.end());
  }
  return out;
}

FpPoly FpPoly::truncated(int n) const {
  FpPoly out = *this;
  if (static_cast<int>(out.c_.size()) > n) out.c_.resize(static_cast<size_t>(std::max(n, 0)));
  out.trim();
  return out;
}

void FpPoly::divmod(const FpPoly& d, FpPoly& q, FpPoly& r) const {
  if (d.is_zero()) fail(ErrorCode::kDomain, "polynomial division by zero");
  q = FpPoly(p_, {});
  r = *this;
  std::int64_t inv = fp_inverse(d.leading(), p_);
  std::vector<std::int64_t> qc;
  if (r.degree() >= d.degree()) qc.assign(static_cast<size_t>(r.degree() - d.degree() + 1), 0);
  while (!r.is_zero() && r.degree() >= d.degree()) {
    int shift = r.degree() - d.degree();
    std::int64_t f = r.leading() * inv % p_;
    qc[static_cast<size_t>(shift)] = f;
    for (int i = 0; i <= d.degree(); ++i) {
      auto& x = r.c_[static_cast<size_t>(i + shift)];
      x = mod(x - f * d.c_[static_cast<size_t>(i)], p_);
    }
    r.trim();
  }
  q = FpPoly(p_, std::move(qc));
}

FpPoly FpPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(fp_inverse(leading(), p_));
}

FpPoly fp_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly q, r;
    a.divmod(b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

FpPoly fp_series_div(const FpPoly& a, const FpPoly& b, int n) {
  std::int64_t p = a.prime();
  if (b.coeff(0) == 0) fail(ErrorCode::kDomain, "series division by a non-unit");
  std::int64_t inv0 = fp_inverse(b.coeff(0), p);
  std::vector<std::int64_t> out(static_cast<size_t>(std::max(n, 0)), 0);
  for (int i = 0; i < n; ++i) {
    std::int64_t s = a.coeff(i);
    for (int j = 1; j <= i && j <= b.degree(); ++j) s -= b.coeff(j) * out[static_cast<size_t>(i - j)] % p;
    out[static_cast<size_t>(i)] = mod(s, p) * inv0 % p;
  }
  return FpPoly(p, std::move(out));
}

FpRat::FpRat(FpPoly num, FpPoly den) {
  if (den.is_zero()) fail(ErrorCode::kDomain, "zero denominator in F_p(u)");
  std::int64_t p = den.prime();
  if (num.is_zero()) {
    num_ = FpPoly(p, {});
    den_ = FpPoly::constant(p, 1);
    return;
  }
  FpPoly g = fp_gcd(num, den);
  FpPoly q, r;
  num.divmod(g, num_, r);
  den.divmod(g, den_, r);
  std::int64_t lead = fp_inverse(den_.leading(), p);
  num_ = num_.scaled(lead);
  den_ = den_.scaled(lead);
}

FpRat operator+(const FpRat& a, const FpRat& b) {
  if (a.den_ == b.den_) return FpRat(a.num_ + b.num_, a.den_);
  return FpRat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

FpRat operator*(const FpRat& a, const FpRat& b) { return FpRat(a.num_ * b.num_, a.den_ * b.den_); }

FpRat FpRat::inverse() const {
  if (is_zero()) fail(ErrorCode::kDomain, "inversion of zero in F_p(u)");
  return FpRat(den_, num_);
}

FpRat FpRat::shifted(int k) const {
  std::int64_t p = prime();
  if (k >= 0) return FpRat(num_.shifted(k), den_);
  return FpRat(num_, den_ * FpPoly::monomial(p, 1, -k));
}

}  // namespace valint
