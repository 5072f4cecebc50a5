#pragma once

// Square matrices over K and over F, determinants, inverses and the Iwasawa
// decomposition tau = A U Lambda.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "valint/error.hpp"
#include "valint/valued_field.hpp"

namespace valint {

namespace detail {

/// Determinant by cofactor expansion along rows, memoized over the set of
/// columns still available. Uses only ring operations.
template <class T>
T laplace_det(const std::vector<T>& a, int n, const T& zero, const T& one) {
  if (n == 0) return one;
  if (n > 20) fail(ErrorCode::kDimension, "matrix too large for cofactor expansion");
  std::vector<std::optional<T>> memo(std::size_t{1} << n);
  auto rec = [&](auto&& self, std::uint32_t mask) -> T {
    if (mask == 0) return one;
    if (memo[mask]) return *memo[mask];
    int row = n - __builtin_popcount(mask);
    T acc = zero;
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (!(mask & (1u << j))) continue;
      const T& x = a[static_cast<std::size_t>(row * n + j)];
      if (!x.is_exact_zero()) {
        T term = x * self(self, mask & ~(1u << j));
        acc = (pos % 2 == 0) ? acc + term : acc - term;
      }
      ++pos;
    }
    memo[mask] = acc;
    return acc;
  };
  return rec(rec, (1u << n) - 1u);
}

}  // namespace detail

class KMatrix {
 public:
  KMatrix() = default;
  KMatrix(const LocalFieldSpec& spec, int n);
  static KMatrix identity(const LocalFieldSpec& spec, int n);

  int size() const { return n_; }
  const LocalFieldSpec& spec() const { return spec_; }
  KElem& at(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  const KElem& at(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

  friend KMatrix operator*(const KMatrix& a, const KMatrix& b);
  std::vector<KElem> apply(const std::vector<KElem>& v) const;
  KElem det() const;
  /// E011 when singular.
  KMatrix inverse() const;
  KMatrix minor(int row, int col) const;
  std::string to_string() const;

 private:
  LocalFieldSpec spec_;
  int n_ = 0;
  std::vector<KElem> a_;
};

class FMatrix {
 public:
  FMatrix() = default;
  FMatrix(const ValuedFieldSpec& spec, int n);
  static FMatrix identity(const ValuedFieldSpec& spec, int n);
  static FMatrix diagonal(const std::vector<FElem>& d);

  int size() const { return n_; }
  const ValuedFieldSpec& spec() const { return spec_; }
  FElem& at(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
  const FElem& at(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }

  friend FMatrix operator*(const FMatrix& a, const FMatrix& b);
  std::vector<FElem> apply(const std::vector<FElem>& v) const;
  FMatrix transpose() const;
  FElem det() const;
  /// Adjugate over det; E011 when singular to precision.
  FMatrix inverse() const;
  FMatrix minor(int row, int col) const;
  bool is_integral() const;
  /// Entrywise residue of an integral matrix.
  KMatrix residue() const;
  /// Every entry of this - o is zero to its cutoff.
  bool agrees_with(const FMatrix& o) const;
  std::string to_string() const;

 private:
  ValuedFieldSpec spec_;
  int n_ = 0;
  std::vector<FElem> a_;
};

struct IwasawaFactors {
  FMatrix A;
  FMatrix U;
  FMatrix Lambda;
};

/// tau = A U Lambda with A in GL_n(O_F), U unipotent upper triangular and
/// Lambda = diag(t(gamma_i)). Pivot: minimal lex valuation, lowest row on ties.
IwasawaFactors iwasawa(const FMatrix& tau);

GammaValue det_abs(const FMatrix& tau);

std::vector<FElem> f_vec_add(const std::vector<FElem>& a, const std::vector<FElem>& b);
std::vector<FElem> f_vec_sub(const std::vector<FElem>& a, const std::vector<FElem>& b);

}  // namespace valint
