#pragma once

// Deterministic random generators for property tests, acceptance checks and
// the `check random` script statement.

#include <vector>

#include "valint/fmatrix.hpp"
#include "valint/lift_integrate.hpp"
#include "valint/rng.hpp"
#include "valint/step_functions.hpp"

namespace valint {

/// Nonzero exact element with valuation in [vmin, vmax] and up to `digits` digits.
KElem random_kelem(Rng& rng, const LocalFieldSpec& spec, int vmin, int vmax, int digits = 3);
/// Exact ball with depth in [dmin, dmax]; centers have valuation >= -1.
Ball random_ball(Rng& rng, const LocalFieldSpec& spec, int dmin, int dmax);
/// 1..max_terms boxes with small rational (rank-0 exponent) coefficients.
StepFunction random_step_function(Rng& rng, const LocalFieldSpec& spec, int dim, int rank, int max_terms,
                                  int dmin, int dmax);
/// Invertible matrix over K with entry valuations in [vmin, vmax] (or zero).
KMatrix random_kmatrix(Rng& rng, const LocalFieldSpec& spec, int n, int vmin, int vmax);
/// Up to `terms` monomials c t^g with g_1 in [gmin, gmax] and c of K-valuation in [-1, 1].
FElem random_felem(Rng& rng, const ValuedFieldSpec& spec, int gmin, int gmax, int terms = 2, bool nonzero = false);
/// Invertible matrix over F with entries from random_felem.
FMatrix random_fmatrix(Rng& rng, const ValuedFieldSpec& spec, int n, int gmin, int gmax);
GroupElement random_group_element(Rng& rng, int rank, int lo, int hi);
/// Sum of 1..max_terms terms coeff * g^{a,gamma}(tau x + s) with g of depth
/// at most 2, gamma_1 in [-2, 2] and tau from random_fmatrix(-1, 1).
FFunction random_ffunction(Rng& rng, const ValuedFieldSpec& spec, int n, int max_terms);

}  // namespace valint
