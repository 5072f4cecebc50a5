#include "valint/lift_integrate.hpp"

#include <algorithm>
#include <numeric>

#include "valint/error.hpp"

namespace valint {

namespace {

using Vec = std::vector<FElem>;

std::size_t at(int i) { return static_cast<std::size_t>(i); }

GammaValue x_power(const GroupElement& g) { return GammaValue::monomial(1, g); }

// coeff * g0(M x + c), where g0 is g lifted at a = 0, gamma = 0.
struct NormalTerm {
  GammaValue coeff;
  StepFunction g;
  FMatrix M;
  Vec c;
};

NormalTerm to_normal(const AffineImageTerm& t) {
  const ValuedFieldSpec& spec = t.tau.spec();
  int n = t.tau.size();
  NormalTerm out{t.base.coeff, t.base.g, FMatrix(spec, n), Vec(at(n), FElem(spec))};
  for (int i = 0; i < n; ++i) {
    GroupElement shift = -t.base.gamma[at(i)];
    for (int j = 0; j < n; ++j) out.M.at(i, j) = t.tau.at(i, j).shifted(shift);
    out.c[at(i)] = (t.shift[at(i)] - t.base.a[at(i)]).shifted(shift);
  }
  return out;
}

AffineImageTerm from_normal(const ValuedFieldSpec& spec, NormalTerm t) {
  int n = t.M.size();
  LiftedTerm base{std::move(t.g), Vec(at(n), FElem(spec)), std::vector<GroupElement>(at(n), GroupElement::zero(spec.rank)),
                  std::move(t.coeff)};
  return AffineImageTerm{std::move(base), std::move(t.M), std::move(t.c)};
}

std::vector<KElem> k_zeros(const LocalFieldSpec& spec, int n) { return std::vector<KElem>(at(n), KElem(spec)); }

template <class T>
std::vector<T> drop(const std::vector<T>& v, int i) {
  std::vector<T> out = v;
  out.erase(out.begin() + i);
  return out;
}

// Direct route: substitute x_r = t(-mu) z - y_j / m_j along the column m of M
// through coordinate r, with j the pivot of least valuation in m.
NormalTerm partial_direct(const NormalTerm& t, int r) {
  const ValuedFieldSpec& spec = t.M.spec();
  int n = t.M.size();
  int j = -1;
  for (int i = 0; i < n; ++i) {
    const FElem& m = t.M.at(i, r);
    if (m.is_zero()) continue;
    if (j < 0 || m.nu() < t.M.at(j, r).nu()) j = i;
  }
  if (j < 0) fail(ErrorCode::kSingular, "column " + std::to_string(r + 1) + " vanishes");
  GroupElement mu = t.M.at(j, r).nu();
  KMatrix S = KMatrix::identity(spec.base, n);
  for (int i = 0; i < n; ++i) S.at(i, j) = t.M.at(i, r).shifted(-mu).residue();
  StepFunction H = sf_partial_integral(sf_affine_pullback(t.g, S, k_zeros(spec.base, n)), j + 1);

  FElem inv_mj = t.M.at(j, r).inverse();
  FMatrix K(spec, n - 1);
  Vec c(at(n - 1), FElem(spec));
  for (int i = 0, ri = 0; i < n; ++i) {
    if (i == j) continue;
    FElem ratio = t.M.at(i, r) * inv_mj;
    for (int l = 0, rl = 0; l < n; ++l) {
      if (l == r) continue;
      K.at(ri, rl++) = t.M.at(i, l) - ratio * t.M.at(j, l);
    }
    c[at(ri)] = t.c[at(i)] - ratio * t.c[at(j)];
    ++ri;
  }
  return NormalTerm{t.coeff * x_power(-mu), std::move(H), std::move(K), std::move(c)};
}

// The SL2 substitution applied to w -> G0(Q w), Q = I + alpha e_r^T, integrated in
// w_r. Returns H, the matrix K on the remaining coordinates and the X-power.
struct ColumnResult {
  StepFunction H;
  FMatrix K;
  GroupElement shift;
};

ColumnResult column_lemma(const StepFunction& G, const Vec& alpha, int r, int n, const ValuedFieldSpec& spec) {
  const LocalFieldSpec& base = spec.base;
  GroupElement zero = GroupElement::zero(spec.rank);
  if (r == 1) {
    Sl2Case cs = case_lemma_sl2(alpha[0], base);
    KMatrix S = KMatrix::identity(base, n);
    for (int i = 0; i < 2; ++i)
      for (int l = 0; l < 2; ++l) S.at(i, l) = cs.S.at(i, l);
    StepFunction H = sf_partial_integral(sf_affine_pullback(G, S, k_zeros(base, n)), 2);
    FMatrix K = FMatrix::identity(spec, n - 1);
    K.at(0, 0) = f_split(spec, -cs.delta0);
    return {std::move(H), std::move(K), -cs.delta0};
  }

  // Pivot on the most negative alpha_i, or on the w_r coordinate itself.
  int j = r;
  GroupElement mu = zero;
  for (int i = 0; i < r; ++i) {
    if (alpha[at(i)].is_zero()) continue;
    GroupElement v = alpha[at(i)].nu();
    if (v < mu) mu = v, j = i;
  }
  Vec m(at(n), FElem(spec));
  for (int i = 0; i < r; ++i) m[at(i)] = alpha[at(i)];
  m[at(r)] = FElem::from_int(spec, 1);
  KMatrix S = KMatrix::identity(base, n);
  for (int i = 0; i <= r; ++i) S.at(i, j) = m[at(i)].shifted(-mu).residue();
  StepFunction H = sf_partial_integral(sf_affine_pullback(G, S, k_zeros(base, n)), j + 1);

  FMatrix K = FMatrix::identity(spec, n - 1);
  if (j != r) {
    // Rows i != j of Qhat - m row_j(Qhat) / m_j, Qhat = I without column r.
    FElem inv_mj = m[at(j)].inverse();
    K = FMatrix(spec, n - 1);
    for (int i = 0, ri = 0; i < n; ++i) {
      if (i == j) continue;
      for (int l = 0, rl = 0; l < n; ++l) {
        if (l == r) continue;
        FElem v = FElem::from_int(spec, i == l ? 1 : 0);
        if (l == j) v = v - m[at(i)] * inv_mj;
        K.at(ri, rl++) = v;
      }
      ++ri;
    }
  }
  return {std::move(H), std::move(K), -mu};
}

NormalTerm partial_iwasawa(const NormalTerm& t, int r) {
  const ValuedFieldSpec& spec = t.M.spec();
  int n = t.M.size();
  IwasawaFactors fac = iwasawa(t.M);
  // g0(A y) = (g o Abar)0(y) for A in GL_n(O_F).
  StepFunction G1 = sf_affine_pullback(t.g, fac.A.residue(), k_zeros(spec.base, n));
  // M x + c = A U Lambda (x + d).
  Vec d = t.M.inverse().apply(t.c);
  GroupElement lambda_r = fac.Lambda.at(r, r).nu();

  // U = P V: P carries alpha (column r above the diagonal) and beta (row r),
  // V leaves w_r alone and acts on the rest by V' = U without row/column r.
  Vec alpha(at(r), FElem(spec));
  for (int i = 0; i < r; ++i) alpha[at(i)] = fac.U.at(i, r);
  Vec beta(at(n), FElem(spec));
  if (r + 1 < n) {
    int k = n - r - 1;
    FMatrix B(spec, k);
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l) B.at(i, l) = fac.U.at(r + 1 + i, r + 1 + l);
    FMatrix Binv = B.inverse();
    for (int l = 0; l < k; ++l) {
      FElem s(spec);
      for (int i = 0; i < k; ++i) s = s + fac.U.at(r, r + 1 + i) * Binv.at(i, l);
      beta[at(r + 1 + l)] = s;
    }
  }
  FMatrix Vp = fac.U.minor(r, r);
  // Translating w_r by beta . w leaves I - alpha beta^T on the (i < r, j > r) block.
  FMatrix L = FMatrix::identity(spec, n - 1);
  for (int i = 0; i < r; ++i)
    for (int l = r + 1; l < n; ++l) L.at(i, l - 1) = -(alpha[at(i)] * beta[at(l)]);

  ColumnResult col = column_lemma(G1, alpha, r, n, spec);
  FMatrix M2 = col.K * L * Vp * fac.Lambda.minor(r, r);
  Vec c2 = M2.apply(drop(d, r));
  GammaValue coeff = t.coeff * x_power(-lambda_r) * x_power(col.shift);
  return NormalTerm{std::move(coeff), std::move(col.H), std::move(M2), std::move(c2)};
}

void check_term(const ValuedFieldSpec& spec, const AffineImageTerm& t, int n) {
  if (t.base.dim() != n || t.tau.size() != n || static_cast<int>(t.shift.size()) != n ||
      static_cast<int>(t.base.a.size()) != n || static_cast<int>(t.base.gamma.size()) != n)
    fail(ErrorCode::kDimension, "term dimension does not match the function dimension");
  if (t.base.coeff.rank() != spec.rank || t.base.g.rank() != spec.rank)
    fail(ErrorCode::kType, "coefficient rank does not match " + spec.name());
}

std::string vec_text(const Vec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].to_string();
  return out + ")";
}

}  // namespace

void FFunction::add_term(AffineImageTerm t) {
  check_term(spec_, t, dim_);
  terms_.push_back(std::move(t));
}

std::string FFunction::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + t.base.coeff.to_string() + ")*lift(" + t.base.g.to_string() + ", a=" + vec_text(t.base.a) + ", gamma=(";
    for (std::size_t i = 0; i < t.base.gamma.size(); ++i) out += (i ? ", " : "") + t.base.gamma[i].to_string();
    out += "))";
    bool plain = t.tau.agrees_with(FMatrix::identity(spec_, dim_)) &&
                 std::all_of(t.shift.begin(), t.shift.end(), [](const FElem& x) { return x.is_exact_zero(); });
    if (!plain) out += " o (tau=" + t.tau.to_string() + ", shift=" + vec_text(t.shift) + ")";
  }
  return out;
}

LiftedTerm lift(const ValuedFieldSpec& spec, const StepFunction& g, const std::vector<FElem>& a,
                const std::vector<GroupElement>& gamma) {
  int n = g.dim();
  if (static_cast<int>(a.size()) != n || static_cast<int>(gamma.size()) != n)
    fail(ErrorCode::kDimension, "lift point and exponents must have " + std::to_string(n) + " coordinates");
  if (!g.spec().same_field(spec.base)) fail(ErrorCode::kType, "step function is not over " + spec.base.name());
  if (g.rank() != spec.rank) fail(ErrorCode::kType, "step function coefficients do not have rank " + std::to_string(spec.rank));
  for (const auto& x : gamma)
    if (x.rank() != spec.rank) fail(ErrorCode::kDimension, "exponent rank does not match the field rank");
  return LiftedTerm{g, a, gamma, GammaValue::one(spec.rank)};
}

GammaValue lifted_eval(const LiftedTerm& t, const std::vector<FElem>& x) {
  int n = t.dim();
  if (static_cast<int>(x.size()) != n) fail(ErrorCode::kDimension, "point has the wrong number of coordinates");
  std::vector<KElem> u;
  for (int i = 0; i < n; ++i) {
    FElem y = (x[at(i)] - t.a[at(i)]).shifted(-t.gamma[at(i)]);
    if (!y.is_integral()) return GammaValue::zero(t.coeff.rank());
    u.push_back(y.residue());
  }
  return t.coeff * sf_eval(t.g, u);
}

FFunction ff_from_lift(const ValuedFieldSpec& spec, const LiftedTerm& t) {
  int n = t.dim();
  FFunction f(spec, n);
  f.add_term(AffineImageTerm{t, FMatrix::identity(spec, n), Vec(at(n), FElem(spec))});
  return f;
}

FFunction ff_add(const FFunction& f, const FFunction& g) {
  if (!f.spec().same_field(g.spec())) fail(ErrorCode::kType, "adding functions on different fields");
  if (f.dim() != g.dim()) fail(ErrorCode::kDimension, "adding functions of different dimensions");
  FFunction out = f;
  for (const auto& t : g.terms()) out.add_term(t);
  return out;
}

FFunction ff_scale(const GammaValue& c, const FFunction& f) {
  FFunction out(f.spec(), f.dim());
  if (c.is_zero()) return out;
  for (auto t : f.terms()) {
    t.base.coeff = c * t.base.coeff;
    out.add_term(std::move(t));
  }
  return out;
}

FFunction ff_compose(const FFunction& f, const FMatrix& tau, const std::vector<FElem>& shift) {
  if (tau.size() != f.dim() || static_cast<int>(shift.size()) != f.dim())
    fail(ErrorCode::kDimension, "composition needs a " + std::to_string(f.dim()) + "x" + std::to_string(f.dim()) + " matrix");
  if (tau.det().is_zero()) fail(ErrorCode::kSingular, "composition with a singular matrix");
  FFunction out(f.spec(), f.dim());
  for (const auto& t : f.terms()) {
    AffineImageTerm u = t;
    u.tau = t.tau * tau;
    u.shift = f_vec_add(t.tau.apply(shift), t.shift);
    out.add_term(std::move(u));
  }
  return out;
}

GammaValue ff_eval(const FFunction& f, const std::vector<FElem>& x) {
  if (static_cast<int>(x.size()) != f.dim()) fail(ErrorCode::kDimension, "point has the wrong number of coordinates");
  GammaValue sum = GammaValue::zero(f.rank());
  for (const auto& t : f.terms()) sum += lifted_eval(t.base, f_vec_add(t.tau.apply(x), t.shift));
  return sum;
}

GammaValue integrate_simple(const LiftedTerm& t) {
  GroupElement total = GroupElement::zero(t.coeff.rank());
  for (const auto& g : t.gamma) total = total + g;
  return t.coeff * sf_haar_integral(t.g) * x_power(total);
}

FFunction scale_translate(const FFunction& f, const std::vector<FElem>& alpha, const std::vector<FElem>& a) {
  if (static_cast<int>(alpha.size()) != f.dim()) fail(ErrorCode::kDimension, "scale vector has the wrong length");
  return ff_compose(f, FMatrix::diagonal(alpha), a);
}

FFunction partial_integral(const FFunction& f, int r, Route route) {
  int n = f.dim();
  if (r < 1 || r > n) fail(ErrorCode::kDimension, "no coordinate " + std::to_string(r) + " in dimension " + std::to_string(n));
  FFunction out(f.spec(), n - 1);
  for (const auto& t : f.terms()) {
    NormalTerm nt = to_normal(t);
    NormalTerm res = route == Route::kIwasawa ? partial_iwasawa(nt, r - 1) : partial_direct(nt, r - 1);
    if (res.g.is_zero()) continue;
    out.add_term(from_normal(f.spec(), std::move(res)));
  }
  return out;
}

GammaValue repeated_integral(const FFunction& f, const std::vector<int>& order, Route route) {
  int n = f.dim();
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> expect(at(n));
  std::iota(expect.begin(), expect.end(), 1);
  if (sorted != expect) fail(ErrorCode::kDimension, "order " + order_to_string(order) + " is not a permutation of 1.." + std::to_string(n));
  std::vector<int> remaining = expect;
  FFunction cur = f;
  for (int c : order) {
    auto it = std::find(remaining.begin(), remaining.end(), c);
    cur = partial_integral(cur, static_cast<int>(it - remaining.begin()) + 1, route);
    remaining.erase(it);
  }
  return ff_eval(cur, {});
}

GammaValue integral_closed_form(const FFunction& f) {
  GammaValue sum = GammaValue::zero(f.rank());
  for (const auto& t : f.terms()) sum += integrate_simple(t.base) / det_abs(t.tau);
  return sum;
}

Sl2Case case_lemma_sl2(const FElem& alpha, const LocalFieldSpec& base) {
  const ValuedFieldSpec& spec = alpha.spec();
  GroupElement zero = GroupElement::zero(spec.rank);
  KElem one = KElem::from_int(base, 1), nil(base);
  KMatrix S = KMatrix::identity(base, 2);
  // alpha known to vanish below a positive cutoff behaves like alpha = 0.
  if (alpha.is_exact_zero() || (alpha.is_zero() && zero < *alpha.cutoff())) return {S, zero, 2};
  GroupElement delta = alpha.nu();
  // alpha = e^-1 t(delta), so ebar is the inverse of the leading coefficient.
  KElem e = alpha.leading_coefficient().inverse();
  KElem einv = e.inverse();
  int sign = delta < zero ? -1 : (delta == zero ? 0 : 1);
  // S = tau' tau diag(ebar, 1) with tau' = diag(ebar^-1, 1).
  if (sign < 0) {
    S.at(0, 0) = nil, S.at(0, 1) = einv, S.at(1, 0) = -e, S.at(1, 1) = nil;
  } else if (sign == 0) {
    S.at(0, 0) = nil, S.at(0, 1) = einv, S.at(1, 0) = -e, S.at(1, 1) = one;
  } else {
    S.at(0, 0) = one, S.at(0, 1) = nil, S.at(1, 0) = -e, S.at(1, 1) = one;
  }
  return {S, std::min(delta, zero), sign};
}

std::string order_to_string(const std::vector<int>& order) {
  std::string out = "(";
  for (std::size_t i = 0; i < order.size(); ++i) out += (i ? "," : "") + std::to_string(order[i]);
  return out + ")";
}

std::string FubiniReport::to_string() const {
  if (pass) return "FUBINI PASS value=" + value.to_string();
  return "FUBINI FAIL " + trace;
}

FubiniReport fubini_report(const FFunction& f) {
  FubiniReport rep;
  rep.closed_form = integral_closed_form(f);
  std::vector<int> order(at(f.dim()));
  std::iota(order.begin(), order.end(), 1);
  rep.pass = true;
  do {
    GammaValue v = repeated_integral(f, order);
    rep.orders.emplace_back(order, v);
    if (rep.pass && !(v == rep.closed_form)) {
      rep.pass = false;
      rep.trace = "order=" + order_to_string(order) + " value=" + v.to_string() + " closed=" + rep.closed_form.to_string();
    }
  } while (std::next_permutation(order.begin(), order.end()));
  rep.value = rep.orders.front().second;
  return rep;
}

}  // namespace valint
