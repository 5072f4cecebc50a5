#include "valint/step_functions.hpp"

#include <atomic>
#include <map>

#include "valint/error.hpp"

namespace valint {

namespace {

std::atomic<std::uint64_t> g_enumeration_limit{1000000};

void check_dim(const StepFunction& f, const StepFunction& g) {
  if (f.dim() != g.dim()) fail(ErrorCode::kDimension, "step functions of different dimension");
  if (!f.spec().same_field(g.spec())) fail(ErrorCode::kType, "step functions over different fields");
}

// p^e, saturating at the enumeration limit + 1.
std::uint64_t coset_count(std::int64_t p, long e) {
  std::uint64_t limit = g_enumeration_limit.load();
  std::uint64_t out = 1;
  for (long i = 0; i < e; ++i) {
    out *= static_cast<std::uint64_t>(p);
    if (out > limit) return limit + 1;
  }
  return out;
}

void guard(std::uint64_t count, const std::string& what) {
  if (count > g_enumeration_limit.load())
    fail(ErrorCode::kDepthLimit, what + " needs more than " + std::to_string(g_enumeration_limit.load()) + " cosets");
}

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  std::uint64_t limit = g_enumeration_limit.load();
  if (a == 0 || b == 0) return 0;
  if (a > (limit + 1) / b + 1) return limit + 1;
  std::uint64_t out = a * b;
  return out > limit ? limit + 1 : out;
}

}  // namespace

std::uint64_t enumeration_limit() { return g_enumeration_limit.load(); }
void set_enumeration_limit(std::uint64_t limit) { g_enumeration_limit.store(limit); }

bool BoxN::contains(const std::vector<KElem>& u) const {
  if (static_cast<int>(u.size()) != dim()) fail(ErrorCode::kDimension, "point dimension does not match box");
  for (std::size_t i = 0; i < balls.size(); ++i)
    if (!balls[i].contains(u[i])) return false;
  return true;
}

bool BoxN::contains(const BoxN& b) const {
  for (std::size_t i = 0; i < balls.size(); ++i)
    if (!balls[i].contains(b.balls[i])) return false;
  return true;
}

bool BoxN::intersects(const BoxN& b) const {
  for (std::size_t i = 0; i < balls.size(); ++i)
    if (!balls[i].intersects(b.balls[i])) return false;
  return true;
}

mpq_class BoxN::measure() const {
  mpq_class out = 1;
  for (const auto& b : balls) out *= ball_measure(b);
  return out;
}

std::string BoxN::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < balls.size(); ++i) out += (i ? " x " : "") + balls[i].to_string();
  return out;
}

void StepFunction::add_term(BoxN box, GammaValue coeff) {
  if (box.dim() != dim_) fail(ErrorCode::kDimension, "box dimension does not match step function");
  if (coeff.rank() != rank_) fail(ErrorCode::kDimension, "coefficient rank does not match step function");
  terms_.emplace_back(std::move(box), std::move(coeff));
}

StepFunction StepFunction::simplified() const {
  std::map<BoxN, GammaValue> acc;
  for (const auto& [box, c] : terms_) {
    auto [it, inserted] = acc.try_emplace(box, c);
    if (!inserted) it->second = it->second + c;
  }
  StepFunction out(spec_, dim_, rank_);
  for (auto& [box, c] : acc)
    if (!c.is_zero()) out.terms_.emplace_back(box, c);
  return out;
}

std::string StepFunction::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& [box, c] = terms_[i];
    if (i) out += " + ";
    if (c != GammaValue::one(rank_)) out += "(" + c.to_string() + ")*";
    out += "indicator(" + box.to_string() + ")";
  }
  return out;
}

StepFunction sf_indicator(const LocalFieldSpec& spec, const BoxN& box, int rank) {
  for (const auto& b : box.balls)
    if (!b.spec().same_field(spec)) fail(ErrorCode::kType, "ball over a different field");
  StepFunction f(spec, box.dim(), rank);
  f.add_term(box, GammaValue::one(rank));
  return f;
}

StepFunction sf_add(const StepFunction& f, const StepFunction& g) {
  check_dim(f, g);
  StepFunction out = f;
  for (const auto& [box, c] : g.terms()) out.add_term(box, c);
  return out.simplified();
}

StepFunction sf_sub(const StepFunction& f, const StepFunction& g) {
  return sf_add(f, sf_scale(-GammaValue::one(g.rank()), g));
}

StepFunction sf_scale(const GammaValue& c, const StepFunction& f) {
  StepFunction out(f.spec(), f.dim(), f.rank());
  for (const auto& [box, d] : f.terms()) out.add_term(box, c * d);
  return out.simplified();
}

GammaValue sf_eval(const StepFunction& f, const std::vector<KElem>& u) {
  GammaValue out = GammaValue::zero(f.rank());
  for (const auto& [box, c] : f.terms())
    if (box.contains(u)) out = out + c;
  return out;
}

void for_each_subbox(const BoxN& box, const std::vector<int>& depths, const std::function<void(const BoxN&)>& visit) {
  const int n = box.dim();
  std::uint64_t total = 1;
  for (int j = 0; j < n; ++j) {
    const Ball& b = box.balls[static_cast<std::size_t>(j)];
    if (depths[static_cast<std::size_t>(j)] < b.depth()) fail(ErrorCode::kDomain, "refinement depth below box depth");
    total = mul_sat(total, coset_count(b.spec().p, depths[static_cast<std::size_t>(j)] - b.depth()));
  }
  guard(total, "box refinement");
  BoxN cur = box;
  std::function<void(int)> rec = [&](int j) {
    if (j == n) {
      visit(cur);
      return;
    }
    const Ball& b = box.balls[static_cast<std::size_t>(j)];
    int m = depths[static_cast<std::size_t>(j)];
    std::uint64_t count = coset_count(b.spec().p, m - b.depth());
    for (std::uint64_t i = 0; i < count; ++i) {
      cur.balls[static_cast<std::size_t>(j)] = ball_child(b, m, i);
      rec(j + 1);
    }
  };
  rec(0);
}

namespace {

std::vector<int> max_depths(const StepFunction& f) {
  std::vector<int> d(static_cast<std::size_t>(f.dim()), INT_MIN);
  for (const auto& [box, c] : f.terms())
    for (int j = 0; j < f.dim(); ++j) d[static_cast<std::size_t>(j)] = std::max(d[static_cast<std::size_t>(j)], box.balls[static_cast<std::size_t>(j)].depth());
  return d;
}

}  // namespace

StepFunction sf_canonicalize(const StepFunction& f) {
  StepFunction s = f.simplified();
  if (s.is_zero()) return s;
  auto depths = max_depths(s);
  std::map<BoxN, GammaValue> acc;
  for (const auto& [box, c] : s.terms()) {
    for_each_subbox(box, depths, [&](const BoxN& sub) {
      auto [it, inserted] = acc.try_emplace(sub, c);
      if (!inserted) it->second = it->second + c;
    });
  }
  StepFunction out(f.spec(), f.dim(), f.rank());
  for (auto& [box, c] : acc)
    if (!c.is_zero()) out.add_term(box, c);
  return out;
}

bool sf_equal(const StepFunction& f, const StepFunction& g) { return sf_canonicalize(sf_sub(f, g)).is_zero(); }

GammaValue sf_haar_integral(const StepFunction& f) {
  GammaValue out = GammaValue::zero(f.rank());
  for (const auto& [box, c] : f.terms()) out = out + c * GammaValue::constant(f.rank(), GaussRat(box.measure()));
  return out;
}

GammaValue sf_integral_by_enumeration(const StepFunction& f) {
  StepFunction s = f.simplified();
  if (s.is_zero()) return GammaValue::zero(f.rank());
  auto depths = max_depths(s);
  std::map<BoxN, bool> cosets;
  for (const auto& [box, c] : s.terms())
    for_each_subbox(box, depths, [&](const BoxN& sub) { cosets.emplace(sub, true); });
  GammaValue sum = GammaValue::zero(f.rank());
  mpq_class cell = 1;
  for (const auto& [sub, unused] : cosets) {
    std::vector<KElem> rep;
    for (const auto& b : sub.balls) rep.push_back(b.center());
    sum = sum + sf_eval(s, rep);
    cell = sub.measure();
  }
  return sum * GammaValue::constant(f.rank(), GaussRat(cell));
}

StepFunction sf_section(const StepFunction& f, int r, const KElem& v) {
  if (r < 1 || r > f.dim()) fail(ErrorCode::kDimension, "section coordinate out of range");
  StepFunction out(f.spec(), f.dim() - 1, f.rank());
  for (const auto& [box, c] : f.terms()) {
    if (!box.balls[static_cast<std::size_t>(r - 1)].contains(v)) continue;
    BoxN rest = box;
    rest.balls.erase(rest.balls.begin() + (r - 1));
    out.add_term(rest, c);
  }
  return out.simplified();
}

StepFunction sf_partial_integral(const StepFunction& f, int r) {
  if (r < 1 || r > f.dim()) fail(ErrorCode::kDimension, "integration coordinate out of range");
  StepFunction out(f.spec(), f.dim() - 1, f.rank());
  for (const auto& [box, c] : f.terms()) {
    BoxN rest = box;
    mpq_class m = ball_measure(box.balls[static_cast<std::size_t>(r - 1)]);
    rest.balls.erase(rest.balls.begin() + (r - 1));
    out.add_term(rest, c * GammaValue::constant(f.rank(), GaussRat(m)));
  }
  return out.simplified();
}

namespace {

void check_pullback_args(const StepFunction& f, const KMatrix& A, const std::vector<KElem>& b) {
  if (A.size() != f.dim() || static_cast<int>(b.size()) != f.dim())
    fail(ErrorCode::kDimension, "pullback matrix or shift does not match the step function dimension");
  if (f.dim() > 0 && !A.spec().same_field(f.spec())) fail(ErrorCode::kType, "pullback matrix over a different field");
}

}  // namespace

StepFunction sf_affine_pullback(const StepFunction& f, const KMatrix& A, const std::vector<KElem>& b) {
  check_pullback_args(f, A, b);
  const int n = f.dim();
  const auto& spec = f.spec();
  StepFunction out(spec, n, f.rank());
  if (n == 0) return f;
  for (const auto& [box, coeff] : f.terms()) {
    // A u + b in box  <=>  W u - w in O^n with W = pi^-k A, w = pi^-k (c - b).
    std::vector<std::vector<KElem>> T(static_cast<std::size_t>(n));
    std::vector<KElem> w(static_cast<std::size_t>(n), KElem(spec));
    for (int i = 0; i < n; ++i) {
      const Ball& ball = box.balls[static_cast<std::size_t>(i)];
      KElem s = KElem::pi_power(spec, -ball.depth());
      for (int j = 0; j < n; ++j) T[static_cast<std::size_t>(i)].push_back(A.at(i, j) * s);
      w[static_cast<std::size_t>(i)] = (ball.center() - b[static_cast<std::size_t>(i)]) * s;
    }
    // Unimodular row reduction to upper triangular form.
    for (int j = 0; j < n; ++j) {
      int pivot = -1;
      int best = 0;
      for (int i = j; i < n; ++i) {
        const KElem& x = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (x.is_exact_zero()) continue;
        int v = x.valuation();
        if (pivot < 0 || v < best) pivot = i, best = v;
      }
      if (pivot < 0) fail(ErrorCode::kSingular, "singular matrix in affine pullback");
      std::swap(T[static_cast<std::size_t>(j)], T[static_cast<std::size_t>(pivot)]);
      std::swap(w[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(pivot)]);
      KElem pinv = T[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)].inverse();
      for (int i = j + 1; i < n; ++i) {
        auto& row = T[static_cast<std::size_t>(i)];
        if (row[static_cast<std::size_t>(j)].is_exact_zero()) continue;
        KElem q = row[static_cast<std::size_t>(j)] * pinv;
        for (int c = j; c < n; ++c) row[static_cast<std::size_t>(c)] = row[static_cast<std::size_t>(c)] - q * T[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
        row[static_cast<std::size_t>(j)] = KElem(spec);
        w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] - q * w[static_cast<std::size_t>(j)];
      }
    }
    // Coordinate j must be known to depth D_j = max_{i<=j} -v(T_ij).
    std::vector<int> D(static_cast<std::size_t>(n)), base(static_cast<std::size_t>(n));
    std::uint64_t total = 1;
    for (int j = 0; j < n; ++j) {
      base[static_cast<std::size_t>(j)] = -T[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)].valuation();
      D[static_cast<std::size_t>(j)] = base[static_cast<std::size_t>(j)];
      for (int i = 0; i < j; ++i) {
        const KElem& x = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (!x.is_zero()) D[static_cast<std::size_t>(j)] = std::max(D[static_cast<std::size_t>(j)], -x.valuation());
      }
      total = mul_sat(total, coset_count(spec.p, D[static_cast<std::size_t>(j)] - base[static_cast<std::size_t>(j)]));
    }
    guard(total, "affine pullback");
    std::vector<Ball> chosen(static_cast<std::size_t>(n));
    std::function<void(int)> rec = [&](int j) {
      if (j < 0) {
        out.add_term(BoxN{chosen}, coeff);
        return;
      }
      const auto& row = T[static_cast<std::size_t>(j)];
      KElem rhs = w[static_cast<std::size_t>(j)];
      for (int l = j + 1; l < n; ++l)
        if (!row[static_cast<std::size_t>(l)].is_exact_zero())
          rhs = rhs - row[static_cast<std::size_t>(l)] * chosen[static_cast<std::size_t>(l)].center();
      Ball allowed(rhs / row[static_cast<std::size_t>(j)], base[static_cast<std::size_t>(j)]);
      int m = D[static_cast<std::size_t>(j)];
      std::uint64_t count = coset_count(spec.p, m - allowed.depth());
      for (std::uint64_t i = 0; i < count; ++i) {
        chosen[static_cast<std::size_t>(j)] = ball_child(allowed, m, i);
        rec(j - 1);
      }
    };
    rec(n - 1);
  }
  return out.simplified();
}

StepFunction sf_affine_pullback_enumerate(const StepFunction& f, const KMatrix& A, const std::vector<KElem>& b) {
  check_pullback_args(f, A, b);
  const int n = f.dim();
  const auto& spec = f.spec();
  if (n == 0) return f;
  KMatrix Ainv = A.inverse();
  StepFunction out(spec, n, f.rank());
  for (const auto& [box, coeff] : f.terms()) {
    std::vector<KElem> shifted;
    for (int l = 0; l < n; ++l) shifted.push_back(box.balls[static_cast<std::size_t>(l)].center() - b[static_cast<std::size_t>(l)]);
    std::vector<KElem> center = Ainv.apply(shifted);
    BoxN bounding;
    std::vector<int> m(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      int d = INT_MAX;
      for (int l = 0; l < n; ++l)
        if (!Ainv.at(j, l).is_zero()) d = std::min(d, Ainv.at(j, l).valuation() + box.balls[static_cast<std::size_t>(l)].depth());
      int mj = INT_MIN;
      for (int i = 0; i < n; ++i)
        if (!A.at(i, j).is_zero()) mj = std::max(mj, box.balls[static_cast<std::size_t>(i)].depth() - A.at(i, j).valuation());
      m[static_cast<std::size_t>(j)] = std::max(mj, d);
      bounding.balls.emplace_back(center[static_cast<std::size_t>(j)], d);
    }
    for_each_subbox(bounding, m, [&](const BoxN& sub) {
      std::vector<KElem> u;
      for (const auto& ball : sub.balls) u.push_back(ball.center());
      std::vector<KElem> image = A.apply(u);
      for (int i = 0; i < n; ++i) image[static_cast<std::size_t>(i)] = image[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(i)];
      if (box.contains(image)) out.add_term(sub, coeff);
    });
  }
  return out.simplified();
}

}  // namespace valint
