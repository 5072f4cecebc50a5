#include "valint/fmatrix.hpp"

namespace valint {

KMatrix::KMatrix(const LocalFieldSpec& spec, int n)
    : spec_(spec), n_(n), a_(static_cast<std::size_t>(n * n), KElem(spec)) {}

KMatrix KMatrix::identity(const LocalFieldSpec& spec, int n) {
  KMatrix m(spec, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = KElem::from_int(spec, 1);
  return m;
}

KMatrix operator*(const KMatrix& a, const KMatrix& b) {
  if (a.n_ != b.n_) fail(ErrorCode::kDimension, "matrix size mismatch");
  KMatrix out(a.spec_, a.n_);
  for (int i = 0; i < a.n_; ++i)
    for (int k = 0; k < a.n_; ++k) {
      if (a.at(i, k).is_exact_zero()) continue;
      for (int j = 0; j < a.n_; ++j) out.at(i, j) = out.at(i, j) + a.at(i, k) * b.at(k, j);
    }
  return out;
}

std::vector<KElem> KMatrix::apply(const std::vector<KElem>& v) const {
  if (static_cast<int>(v.size()) != n_) fail(ErrorCode::kDimension, "vector length does not match matrix size");
  std::vector<KElem> out(static_cast<std::size_t>(n_), KElem(spec_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)] + at(i, j) * v[static_cast<std::size_t>(j)];
  return out;
}

KElem KMatrix::det() const { return detail::laplace_det(a_, n_, KElem(spec_), KElem::from_int(spec_, 1)); }

KMatrix KMatrix::minor(int row, int col) const {
  KMatrix m(spec_, n_ - 1);
  for (int i = 0, r = 0; i < n_; ++i) {
    if (i == row) continue;
    for (int j = 0, c = 0; j < n_; ++j) {
      if (j == col) continue;
      m.at(r, c++) = at(i, j);
    }
    ++r;
  }
  return m;
}

KMatrix KMatrix::inverse() const {
  KElem d = det();
  if (d.is_zero()) fail(ErrorCode::kSingular, "singular matrix over " + spec_.name());
  KElem dinv = d.inverse();
  KMatrix out(spec_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      KElem c = minor(j, i).det() * dinv;
      out.at(i, j) = (i + j) % 2 == 0 ? c : -c;
    }
  return out;
}

std::string KMatrix::to_string() const {
  std::string out = "[";
  for (int i = 0; i < n_; ++i) {
    out += i ? ", [" : "[";
    for (int j = 0; j < n_; ++j) out += (j ? ", " : "") + at(i, j).to_string();
    out += "]";
  }
  return out + "]";
}

FMatrix::FMatrix(const ValuedFieldSpec& spec, int n)
    : spec_(spec), n_(n), a_(static_cast<std::size_t>(n * n), FElem(spec)) {}

FMatrix FMatrix::identity(const ValuedFieldSpec& spec, int n) {
  FMatrix m(spec, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = FElem::from_int(spec, 1);
  return m;
}

FMatrix FMatrix::diagonal(const std::vector<FElem>& d) {
  if (d.empty()) fail(ErrorCode::kDimension, "empty diagonal");
  FMatrix m(d.front().spec(), static_cast<int>(d.size()));
  for (int i = 0; i < m.n_; ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

FMatrix operator*(const FMatrix& a, const FMatrix& b) {
  if (a.n_ != b.n_) fail(ErrorCode::kDimension, "matrix size mismatch");
  FMatrix out(a.spec_, a.n_);
  for (int i = 0; i < a.n_; ++i)
    for (int k = 0; k < a.n_; ++k) {
      if (a.at(i, k).is_exact_zero()) continue;
      for (int j = 0; j < a.n_; ++j) {
        if (b.at(k, j).is_exact_zero()) continue;
        out.at(i, j) = out.at(i, j) + a.at(i, k) * b.at(k, j);
      }
    }
  return out;
}

std::vector<FElem> FMatrix::apply(const std::vector<FElem>& v) const {
  if (static_cast<int>(v.size()) != n_) fail(ErrorCode::kDimension, "vector length does not match matrix size");
  std::vector<FElem> out(static_cast<std::size_t>(n_), FElem(spec_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (at(i, j).is_exact_zero() || v[static_cast<std::size_t>(j)].is_exact_zero()) continue;
      out[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)] + at(i, j) * v[static_cast<std::size_t>(j)];
    }
  return out;
}

FMatrix FMatrix::transpose() const {
  FMatrix m(spec_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m.at(j, i) = at(i, j);
  return m;
}

FElem FMatrix::det() const { return detail::laplace_det(a_, n_, FElem(spec_), FElem::from_int(spec_, 1)); }

FMatrix FMatrix::minor(int row, int col) const {
  FMatrix m(spec_, n_ - 1);
  for (int i = 0, r = 0; i < n_; ++i) {
    if (i == row) continue;
    for (int j = 0, c = 0; j < n_; ++j) {
      if (j == col) continue;
      m.at(r, c++) = at(i, j);
    }
    ++r;
  }
  return m;
}

FMatrix FMatrix::inverse() const {
  FElem d = det();
  if (d.is_zero()) fail(ErrorCode::kSingular, "singular matrix over " + spec_.name());
  FElem dinv = d.inverse();
  FMatrix out(spec_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      FElem c = minor(j, i).det();
      if (c.is_exact_zero()) continue;
      c = c * dinv;
      out.at(i, j) = (i + j) % 2 == 0 ? c : -c;
    }
  return out;
}

bool FMatrix::is_integral() const {
  for (const auto& x : a_)
    if (!x.is_integral()) return false;
  return true;
}

KMatrix FMatrix::residue() const {
  KMatrix m(spec_.base, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m.at(i, j) = at(i, j).residue();
  return m;
}

bool FMatrix::agrees_with(const FMatrix& o) const {
  if (n_ != o.n_) return false;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    FElem d = a_[k] - o.a_[k];
    for (const auto& [g, c] : d.terms())
      if (!c.is_zero()) return false;
  }
  return true;
}

std::string FMatrix::to_string() const {
  std::string out = "[";
  for (int i = 0; i < n_; ++i) {
    out += i ? ", [" : "[";
    for (int j = 0; j < n_; ++j) out += (j ? ", " : "") + at(i, j).to_string();
    out += "]";
  }
  return out + "]";
}

IwasawaFactors iwasawa(const FMatrix& tau) {
  const int n = tau.size();
  const auto& spec = tau.spec();
  FMatrix B = tau;
  FMatrix A = FMatrix::identity(spec, n);
  for (int j = 0; j < n; ++j) {
    int pivot = -1;
    GroupElement best;
    for (int i = j; i < n; ++i) {
      const FElem& x = B.at(i, j);
      if (x.is_exact_zero()) continue;
      if (x.is_zero()) precision_exhausted("Iwasawa pivot undetermined at cutoff");
      GroupElement v = x.nu();
      if (pivot < 0 || v < best) {
        pivot = i;
        best = v;
      }
    }
    if (pivot < 0) fail(ErrorCode::kSingular, "singular matrix in Iwasawa decomposition");
    if (pivot != j) {
      for (int c = 0; c < n; ++c) {
        std::swap(B.at(j, c), B.at(pivot, c));
        std::swap(A.at(c, j), A.at(c, pivot));
      }
    }
    FElem pinv = B.at(j, j).inverse();
    for (int i = j + 1; i < n; ++i) {
      if (B.at(i, j).is_exact_zero()) continue;
      FElem m = B.at(i, j) * pinv;
      for (int c = j; c < n; ++c) B.at(i, c) = B.at(i, c) - m * B.at(j, c);
      B.at(i, j) = FElem(spec);
      for (int r = 0; r < n; ++r) A.at(r, j) = A.at(r, j) + m * A.at(r, i);
    }
  }
  // B = D U Lambda with D the unit parts of the diagonal.
  std::vector<FElem> lam, dinv;
  FMatrix D(spec, n);
  for (int i = 0; i < n; ++i) {
    GroupElement v = B.at(i, i).nu();
    lam.push_back(f_split(spec, v));
    D.at(i, i) = B.at(i, i).shifted(-v);
    dinv.push_back(D.at(i, i).inverse());
  }
  FMatrix U(spec, n);
  for (int i = 0; i < n; ++i) {
    U.at(i, i) = FElem::from_int(spec, 1);
    for (int j = i + 1; j < n; ++j) {
      if (B.at(i, j).is_exact_zero()) continue;
      U.at(i, j) = (B.at(i, j) * dinv[static_cast<std::size_t>(i)]).shifted(-lam[static_cast<std::size_t>(j)].nu());
    }
  }
  A = A * D;
  if (U.is_integral()) {
    A = A * U;
    U = FMatrix::identity(spec, n);
  }
  return {A, U, FMatrix::diagonal(lam)};
}

GammaValue det_abs(const FMatrix& tau) {
  FElem d = tau.det();
  if (d.is_zero()) fail(ErrorCode::kSingular, "singular matrix");
  return d.abs();
}

std::vector<FElem> f_vec_add(const std::vector<FElem>& a, const std::vector<FElem>& b) {
  if (a.size() != b.size()) fail(ErrorCode::kDimension, "vector length mismatch");
  std::vector<FElem> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

std::vector<FElem> f_vec_sub(const std::vector<FElem>& a, const std::vector<FElem>& b) {
  if (a.size() != b.size()) fail(ErrorCode::kDimension, "vector length mismatch");
  std::vector<FElem> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

}  // namespace valint
