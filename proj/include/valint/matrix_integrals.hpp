#pragma once

// Integrals over M_N(F) and GL_N(F) through the row-major coordinates
// M_N(F) = F^(N*N), translation actions and lifts from the residue field.

#include <string>
#include <vector>

#include "valint/lift_integrate.hpp"

namespace valint {

/// Row-major identification: entry (i, j) is coordinate i*N + j.
struct MatrixCoordinates {
  int N = 2;

  int n() const { return N * N; }
  int index(int i, int j) const { return i * N + j; }
  std::vector<FElem> flatten(const FMatrix& x) const;
  FMatrix unflatten(const std::vector<FElem>& v, const ValuedFieldSpec& spec) const;
  std::vector<KElem> flatten(const KMatrix& x) const;
  KMatrix unflatten(const std::vector<KElem>& v, const LocalFieldSpec& spec) const;
};

/// x -> x sigma as an N^2 x N^2 matrix: N diagonal blocks of sigma^T.
FMatrix r_sigma(const FMatrix& sigma);
/// x -> sigma x: sigma tensor I_N.
FMatrix l_sigma(const FMatrix& sigma);

/// Integral over M_N(F) of a function on F^(N^2).
GammaValue mn_integral(const FFunction& f, int N);

/// Default bound on det valuations met by gl_weight.
inline constexpr int kDefaultVmax = 3;

/// u -> g(u) |det u|^-N, refining boxes until |det| is constant on each.
/// E012 when a box meets det valuation above v_max.
StepFunction gl_weight(const StepFunction& g, int N, int v_max = kDefaultVmax);

/// phi on GL_N(F), stored as its extension x -> phi(x) |det x|^-N on F^(N^2).
struct GLFunction {
  int N = 2;
  FFunction ext;
  std::string description;
};

GammaValue gl_integral(const GLFunction& phi);

enum class Side { kLeft, kRight };
/// tau -> phi(tau sigma) for kRight, phi(sigma tau) for kLeft.
GLFunction gl_translate(const GLFunction& phi, const FMatrix& sigma, Side side);

/// g0 on M_N(F): the lift of g at a = 0, gamma = 0.
FFunction lift_mn(const ValuedFieldSpec& spec, const StepFunction& g, int N);
/// g0 on GL_N(F), with g supported in GL_N(K).
GLFunction lift_gl(const ValuedFieldSpec& spec, const StepFunction& g, int N, int v_max = kDefaultVmax);

}  // namespace valint
