#include "valint/matrix_integrals.hpp"

#include <algorithm>
#include <numeric>

#include "valint/error.hpp"

namespace valint {

namespace {

void check_square(const FMatrix& sigma) {
  if (sigma.det().is_zero()) fail(ErrorCode::kSingular, "translation by a singular matrix");
}

// Lower bound for the valuation of entries of a ball.
int ball_floor(const Ball& b) { return b.center().is_zero() ? b.depth() : std::min(b.center().valuation(), b.depth()); }

// Lower bound for v(det(c + e) - det(c)) over the box, c its center.
int det_variation_bound(const BoxN& box, int N) {
  std::vector<int> perm(static_cast<std::size_t>(N));
  std::iota(perm.begin(), perm.end(), 0);
  int best = KElem::kExact;
  do {
    for (int i = 0; i < N; ++i) {
      long s = 0;
      for (int l = 0; l < N; ++l) {
        const Ball& b = box.balls[static_cast<std::size_t>(l * N + perm[static_cast<std::size_t>(l)])];
        s += l == i ? b.depth() : ball_floor(b);
      }
      best = static_cast<int>(std::min<long>(best, s));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

mpq_class det_weight(const KElem& det, int N) {
  mpq_class a = k_abs(det), out = 1;
  for (int i = 0; i < N; ++i) out /= a;
  return out;
}

}  // namespace

std::vector<FElem> MatrixCoordinates::flatten(const FMatrix& x) const {
  if (x.size() != N) fail(ErrorCode::kDimension, "expected a " + std::to_string(N) + "x" + std::to_string(N) + " matrix");
  std::vector<FElem> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out.push_back(x.at(i, j));
  return out;
}

FMatrix MatrixCoordinates::unflatten(const std::vector<FElem>& v, const ValuedFieldSpec& spec) const {
  if (static_cast<int>(v.size()) != n()) fail(ErrorCode::kDimension, "expected " + std::to_string(n()) + " coordinates");
  FMatrix x(spec, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) x.at(i, j) = v[static_cast<std::size_t>(index(i, j))];
  return x;
}

std::vector<KElem> MatrixCoordinates::flatten(const KMatrix& x) const {
  if (x.size() != N) fail(ErrorCode::kDimension, "expected a " + std::to_string(N) + "x" + std::to_string(N) + " matrix");
  std::vector<KElem> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out.push_back(x.at(i, j));
  return out;
}

KMatrix MatrixCoordinates::unflatten(const std::vector<KElem>& v, const LocalFieldSpec& spec) const {
  if (static_cast<int>(v.size()) != n()) fail(ErrorCode::kDimension, "expected " + std::to_string(n()) + " coordinates");
  KMatrix x(spec, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) x.at(i, j) = v[static_cast<std::size_t>(index(i, j))];
  return x;
}

FMatrix r_sigma(const FMatrix& sigma) {
  int N = sigma.size();
  MatrixCoordinates T{N};
  FMatrix out(sigma.spec(), T.n());
  // (x sigma)_ij = sum_k x_ik sigma_kj.
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) out.at(T.index(i, j), T.index(i, k)) = sigma.at(k, j);
  return out;
}

FMatrix l_sigma(const FMatrix& sigma) {
  int N = sigma.size();
  MatrixCoordinates T{N};
  FMatrix out(sigma.spec(), T.n());
  // (sigma x)_ij = sum_k sigma_ik x_kj.
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) out.at(T.index(i, j), T.index(k, j)) = sigma.at(i, k);
  return out;
}

GammaValue mn_integral(const FFunction& f, int N) {
  if (f.dim() != N * N) fail(ErrorCode::kDimension, "function on M_" + std::to_string(N) + " needs " + std::to_string(N * N) + " coordinates");
  return integral_closed_form(f);
}

StepFunction gl_weight(const StepFunction& g, int N, int v_max) {
  if (g.dim() != N * N) fail(ErrorCode::kDimension, "step function on M_" + std::to_string(N) + " needs " + std::to_string(N * N) + " coordinates");
  MatrixCoordinates T{N};
  StepFunction out(g.spec(), g.dim(), g.rank());
  std::uint64_t visited = 0;
  for (const auto& [box, coeff] : g.terms()) {
    std::vector<BoxN> stack{box};
    while (!stack.empty()) {
      BoxN b = std::move(stack.back());
      stack.pop_back();
      if (++visited > enumeration_limit())
        fail(ErrorCode::kDepthLimit, "det refinement exceeded the enumeration limit of " + std::to_string(enumeration_limit()));
      std::vector<KElem> centers;
      for (const auto& ball : b.balls) centers.push_back(ball.center());
      KElem det = T.unflatten(centers, g.spec()).det();
      int bound = det_variation_bound(b, N);
      int v = det.is_zero() ? KElem::kExact : det.valuation();
      if (v < bound) {
        if (v > v_max) fail(ErrorCode::kDepthLimit, "det valuation " + std::to_string(v) + " exceeds v_max " + std::to_string(v_max));
        out.add_term(b, coeff * GammaValue::constant(g.rank(), GaussRat(det_weight(det, N))));
        continue;
      }
      if (v > v_max && bound > v_max)
        fail(ErrorCode::kDepthLimit, "box " + b.to_string() + " meets det valuation above v_max " + std::to_string(v_max));
      std::size_t pick = 0;
      for (std::size_t i = 1; i < b.balls.size(); ++i)
        if (b.balls[i].depth() < b.balls[pick].depth()) pick = i;
      auto children = ball_split(b.balls[pick], b.balls[pick].depth() + 1);
      for (auto it = children.rbegin(); it != children.rend(); ++it) {
        BoxN c = b;
        c.balls[pick] = *it;
        stack.push_back(std::move(c));
      }
    }
  }
  return out.simplified();
}

GammaValue gl_integral(const GLFunction& phi) { return mn_integral(phi.ext, phi.N); }

GLFunction gl_translate(const GLFunction& phi, const FMatrix& sigma, Side side) {
  if (sigma.size() != phi.N) fail(ErrorCode::kDimension, "translation needs a " + std::to_string(phi.N) + "x" + std::to_string(phi.N) + " matrix");
  check_square(sigma);
  const ValuedFieldSpec& spec = phi.ext.spec();
  FMatrix act = side == Side::kRight ? r_sigma(sigma) : l_sigma(sigma);
  std::vector<FElem> zero(static_cast<std::size_t>(phi.N * phi.N), FElem(spec));
  // |det sigma|^N f o act restricts to the translate times |det|^-N.
  GammaValue w = det_abs(sigma).pow(phi.N);
  GLFunction out{phi.N, ff_scale(w, ff_compose(phi.ext, act, zero)), phi.description};
  out.description += side == Side::kRight ? " * sigma" : " (sigma *)";
  return out;
}

FFunction lift_mn(const ValuedFieldSpec& spec, const StepFunction& g, int N) {
  if (g.dim() != N * N) fail(ErrorCode::kDimension, "step function on M_" + std::to_string(N) + " needs " + std::to_string(N * N) + " coordinates");
  int n = N * N;
  return ff_from_lift(spec, lift(spec, g, std::vector<FElem>(static_cast<std::size_t>(n), FElem(spec)),
                                 std::vector<GroupElement>(static_cast<std::size_t>(n), GroupElement::zero(spec.rank))));
}

GLFunction lift_gl(const ValuedFieldSpec& spec, const StepFunction& g, int N, int v_max) {
  return GLFunction{N, lift_mn(spec, gl_weight(g, N, v_max), N), "lift"};
}

}  // namespace valint
