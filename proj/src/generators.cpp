#include "valint/generators.hpp"

namespace valint {

KElem random_kelem(Rng& rng, const LocalFieldSpec& spec, int vmin, int vmax, int digits) {
  int v = static_cast<int>(rng.range(vmin, vmax));
  std::vector<std::int64_t> d(static_cast<std::size_t>(1 + rng.below(static_cast<std::uint64_t>(digits))));
  for (auto& x : d) x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(spec.p)));
  d[0] = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(spec.p - 1)));
  KElem out = KElem::from_digits(spec, v, d, true);
  if (spec.kind == LocalFieldSpec::Kind::kPAdic && rng.coin()) out = -out;
  return out;
}

Ball random_ball(Rng& rng, const LocalFieldSpec& spec, int dmin, int dmax) {
  int depth = static_cast<int>(rng.range(dmin, dmax));
  KElem c = rng.below(4) == 0 ? KElem(spec) : random_kelem(rng, spec, std::min(-1, depth - 1), std::max(depth, 0), 3);
  return Ball(c, depth);
}

StepFunction random_step_function(Rng& rng, const LocalFieldSpec& spec, int dim, int rank, int max_terms,
                                  int dmin, int dmax) {
  StepFunction f(spec, dim, rank);
  int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
  for (int t = 0; t < terms; ++t) {
    BoxN box;
    for (int j = 0; j < dim; ++j) box.balls.push_back(random_ball(rng, spec, dmin, dmax));
    mpq_class c(static_cast<long>(rng.range(1, 5)) * (rng.coin() ? 1 : -1), static_cast<unsigned long>(rng.range(1, 3)));
    c.canonicalize();
    f.add_term(box, GammaValue::constant(rank, GaussRat(c)));
  }
  f = f.simplified();
  if (f.is_zero()) return random_step_function(rng, spec, dim, rank, max_terms, dmin, dmax);
  return f;
}

KMatrix random_kmatrix(Rng& rng, const LocalFieldSpec& spec, int n, int vmin, int vmax) {
  while (true) {
    KMatrix m(spec, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.below(4) != 0) m.at(i, j) = random_kelem(rng, spec, vmin, vmax, 2);
    if (!m.det().is_zero()) return m;
  }
}

GroupElement random_group_element(Rng& rng, int rank, int lo, int hi) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(rank));
  for (auto& x : e) x = rng.range(lo, hi);
  return GroupElement(e);
}

FElem random_felem(Rng& rng, const ValuedFieldSpec& spec, int gmin, int gmax, int terms, bool nonzero) {
  while (true) {
    FElem x(spec);
    int count = static_cast<int>(rng.range(nonzero ? 1 : 0, terms));
    for (int i = 0; i < count; ++i) {
      GroupElement g = random_group_element(rng, spec.rank, gmin, gmax);
      x = x + FElem::monomial(spec, random_kelem(rng, spec.base, -1, 1, 1), g);
    }
    if (!nonzero || !x.is_zero()) return x;
  }
}

FMatrix random_fmatrix(Rng& rng, const ValuedFieldSpec& spec, int n, int gmin, int gmax) {
  while (true) {
    FMatrix m(spec, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = random_felem(rng, spec, gmin, gmax, 2);
    if (!m.det().is_zero()) return m;
  }
}

FFunction random_ffunction(Rng& rng, const ValuedFieldSpec& spec, int n, int max_terms) {
  FFunction f(spec, n);
  int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
  for (int t = 0; t < terms; ++t) {
    StepFunction g = random_step_function(rng, spec.base, n, spec.rank, 2, 0, 2);
    std::vector<FElem> a, s;
    std::vector<GroupElement> gamma;
    for (int i = 0; i < n; ++i) {
      a.push_back(random_felem(rng, spec, -1, 1, 1));
      s.push_back(random_felem(rng, spec, -1, 1, 1));
      gamma.push_back(random_group_element(rng, spec.rank, -2, 2));
    }
    LiftedTerm base = lift(spec, g, a, gamma);
    f.add_term(AffineImageTerm{base, random_fmatrix(rng, spec, n, -1, 1), s});
  }
  return f;
}

}  // namespace valint
