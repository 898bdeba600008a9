#pragma once

// Dense multilinear algebra at a single tangent space.
//
// All index arithmetic is 0-based. Metric-aware operations take the metric
// explicitly; passing the identity gives orthonormal-frame (Frobenius)
// results.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "curvkit/config.hpp"
#include "curvkit/errors.hpp"

namespace curvkit {

namespace detail {

inline void require_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw ArgumentError("tensor dimension " + std::to_string(n) + " outside [1, " +
                        std::to_string(kMaxDim) + "]");
  }
}

inline void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw ArgumentError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                        " vs " + std::to_string(b) + ")");
  }
}

}  // namespace detail

/// Symmetric covariant 2-tensor. Symmetry is exact: construction averages the
/// input with its transpose, which is bitwise symmetric in floating point.
template <typename Scalar>
class SymTensor2 {
 public:
  using Matrix = DimMatrix<Scalar>;

  SymTensor2() = default;

  template <typename Derived>
  explicit SymTensor2(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) throw ArgumentError("SymTensor2: matrix is not square");
    detail::require_dim(static_cast<int>(m.rows()));
    entries_ = (m + m.transpose()) / Scalar(2);
  }

  static SymTensor2 zero(int n) {
    detail::require_dim(n);
    return SymTensor2(Matrix::Zero(n, n));
  }
  static SymTensor2 identity(int n) {
    detail::require_dim(n);
    return SymTensor2(Matrix::Identity(n, n));
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  Scalar operator()(int i, int j) const { return entries_(i, j); }
  const Matrix& matrix() const { return entries_; }

  SymTensor2& operator+=(const SymTensor2& o) {
    detail::require_same_dim(dim(), o.dim(), "SymTensor2 +=");
    entries_ += o.entries_;
    return *this;
  }
  SymTensor2& operator-=(const SymTensor2& o) {
    detail::require_same_dim(dim(), o.dim(), "SymTensor2 -=");
    entries_ -= o.entries_;
    return *this;
  }
  SymTensor2& operator*=(Scalar s) {
    entries_ *= s;
    return *this;
  }

  friend SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return a += b; }
  friend SymTensor2 operator-(SymTensor2 a, const SymTensor2& b) { return a -= b; }
  friend SymTensor2 operator*(Scalar s, SymTensor2 a) { return a *= s; }
  friend SymTensor2 operator*(SymTensor2 a, Scalar s) { return a *= s; }

 private:
  Matrix entries_;
};

/// Algebraic curvature tensor T_{ijkl}; dense n^4 storage, row-major in
/// (i, j, k, l). The symmetries are not enforced on construction so that
/// numerically assembled tensors can be checked with the residual helpers.
template <typename Scalar>
class AlgCurvTensor4 {
 public:
  AlgCurvTensor4() = default;
  explicit AlgCurvTensor4(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n * n), Scalar(0)) {
    detail::require_dim(n);
  }

  static AlgCurvTensor4 zero(int n) { return AlgCurvTensor4(n); }

  int dim() const { return n_; }
  Scalar& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  Scalar operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }
  std::span<const Scalar> data() const { return data_; }
  std::span<Scalar> data() { return data_; }

  AlgCurvTensor4& operator+=(const AlgCurvTensor4& o) {
    detail::require_same_dim(n_, o.n_, "AlgCurvTensor4 +=");
    for (std::size_t a = 0; a < data_.size(); ++a) data_[a] += o.data_[a];
    return *this;
  }
  AlgCurvTensor4& operator-=(const AlgCurvTensor4& o) {
    detail::require_same_dim(n_, o.n_, "AlgCurvTensor4 -=");
    for (std::size_t a = 0; a < data_.size(); ++a) data_[a] -= o.data_[a];
    return *this;
  }
  AlgCurvTensor4& operator*=(Scalar s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend AlgCurvTensor4 operator+(AlgCurvTensor4 a, const AlgCurvTensor4& b) { return a += b; }
  friend AlgCurvTensor4 operator-(AlgCurvTensor4 a, const AlgCurvTensor4& b) { return a -= b; }
  friend AlgCurvTensor4 operator*(Scalar s, AlgCurvTensor4 a) { return a *= s; }
  friend AlgCurvTensor4 operator*(AlgCurvTensor4 a, Scalar s) { return a *= s; }

  Scalar max_abs() const {
    Scalar m(0);
    for (auto v : data_) m = std::max(m, Scalar(std::abs(v)));
    return m;
  }

  /// Largest violation of T_ijkl = -T_jikl = -T_ijlk and T_ijkl = T_klij.
  Scalar symmetry_residual() const {
    Scalar r(0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int l = 0; l < n_; ++l) {
            const Scalar v = (*this)(i, j, k, l);
            r = std::max(r, Scalar(std::abs(v + (*this)(j, i, k, l))));
            r = std::max(r, Scalar(std::abs(v + (*this)(i, j, l, k))));
            r = std::max(r, Scalar(std::abs(v - (*this)(k, l, i, j))));
          }
    return r;
  }

  /// Largest first-Bianchi sum T_ijkl + T_iklj + T_iljk.
  Scalar bianchi_residual() const {
    Scalar r(0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
          for (int l = 0; l < n_; ++l)
            r = std::max(r, Scalar(std::abs((*this)(i, j, k, l) + (*this)(i, k, l, j) +
                                            (*this)(i, l, j, k))));
    return r;
  }

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }

  int n_ = 0;
  std::vector<Scalar> data_;
};

// ---------------------------------------------------------------------------
// Generalized Kronecker delta and alternating sums

/// All permutations of {0..p-1} with their signs, lexicographic order.
struct PermutationTable {
  int size = 0;
  std::vector<std::array<std::uint8_t, kMaxDim>> perms;
  std::vector<int> signs;
};

inline const PermutationTable& permutation_table(int p) {
  static const std::array<PermutationTable, kMaxDim + 1> tables = [] {
    std::array<PermutationTable, kMaxDim + 1> t{};
    for (int q = 0; q <= kMaxDim; ++q) {
      t[q].size = q;
      std::array<std::uint8_t, kMaxDim> perm{};
      for (int a = 0; a < q; ++a) perm[a] = static_cast<std::uint8_t>(a);
      do {
        int inversions = 0;
        for (int a = 0; a < q; ++a)
          for (int b = a + 1; b < q; ++b)
            if (perm[a] > perm[b]) ++inversions;
        t[q].perms.push_back(perm);
        t[q].signs.push_back(inversions % 2 == 0 ? 1 : -1);
      } while (std::next_permutation(perm.begin(), perm.begin() + q));
    }
    return t;
  }();
  if (p < 0 || p > kMaxDim) throw ArgumentError("permutation size out of range");
  return tables[static_cast<std::size_t>(p)];
}

/// epsilon^{upper}_{lower}: 0 on repeated indices or mismatched sets,
/// otherwise the sign of the permutation taking `upper` to `lower`.
inline int gen_kronecker(std::span<const int> upper, std::span<const int> lower, int n) {
  if (upper.size() != lower.size()) throw ArgumentError("gen_kronecker: tuple length mismatch");
  if (upper.empty()) throw ArgumentError("gen_kronecker: empty tuples");
  for (int v : upper)
    if (v < 0 || v >= n) throw ArgumentError("gen_kronecker: upper index out of range");
  for (int v : lower)
    if (v < 0 || v >= n) throw ArgumentError("gen_kronecker: lower index out of range");
  const std::size_t p = upper.size();
  std::vector<int> position(p);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a + 1; b < p; ++b)
      if (upper[a] == upper[b] || lower[a] == lower[b]) return 0;
    std::size_t found = p;
    for (std::size_t b = 0; b < p; ++b)
      if (lower[b] == upper[a]) found = b;
    if (found == p) return 0;
    position[a] = static_cast<int>(found);
  }
  int inversions = 0;
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b)
      if (position[a] > position[b]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

/// Sum over ordered index tuples I, J of length p drawn from [0, n):
///   sum epsilon^{I}_{J} f(I, J).
/// Only tuples with epsilon != 0 are visited: for each p-subset S the loop
/// runs over orderings of S, C(n,p) * (p!)^2 calls in total.
template <typename Result, typename F>
Result alternating_sum(int n, int p, Result acc, F&& f) {
  if (p < 0 || p > n) throw ArgumentError("alternating_sum: order out of range");
  const auto& table = permutation_table(p);
  std::array<int, kMaxDim> subset{}, upper{}, lower{};
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != p) continue;
    int q = 0;
    for (int a = 0; a < n; ++a)
      if (mask & (1u << a)) subset[q++] = a;
    for (std::size_t u = 0; u < table.perms.size(); ++u) {
      for (int a = 0; a < p; ++a) upper[a] = subset[table.perms[u][a]];
      for (std::size_t l = 0; l < table.perms.size(); ++l) {
        for (int a = 0; a < p; ++a) lower[a] = subset[table.perms[l][a]];
        const std::span<const int> iu(upper.data(), p), il(lower.data(), p);
        if (table.signs[u] * table.signs[l] > 0) acc += f(iu, il);
        else acc -= f(iu, il);
      }
    }
  }
  return acc;
}

/// Same as alternating_sum with one extra free leading index on each side:
///   sum over I, J of epsilon^{up I}_{lo J} f(I, J),   |I| = |J| = p.
template <typename Result, typename F>
Result alternating_sum_free(int n, int p, int up, int lo, Result acc, F&& f) {
  if (p < 0 || p + 1 > n) throw ArgumentError("alternating_sum_free: order out of range");
  const auto& table = permutation_table(p);
  std::array<int, kMaxDim> rest_up{}, rest_lo{}, upper{}, lower{};
  const unsigned need = (1u << up) | (1u << lo);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != p + 1 || (mask & need) != need) continue;
    int qu = 0, ql = 0, pos_up = 0, pos_lo = 0, idx = 0;
    for (int a = 0; a < n; ++a) {
      if (!(mask & (1u << a))) continue;
      if (a == up) pos_up = idx;
      else rest_up[qu++] = a;
      if (a == lo) pos_lo = idx;
      else rest_lo[ql++] = a;
      ++idx;
    }
    const int lead = ((pos_up + pos_lo) % 2 == 0) ? 1 : -1;
    for (std::size_t u = 0; u < table.perms.size(); ++u) {
      for (int a = 0; a < p; ++a) upper[a] = rest_up[table.perms[u][a]];
      for (std::size_t l = 0; l < table.perms.size(); ++l) {
        for (int a = 0; a < p; ++a) lower[a] = rest_lo[table.perms[l][a]];
        const std::span<const int> iu(upper.data(), p), il(lower.data(), p);
        if (lead * table.signs[u] * table.signs[l] > 0) acc += f(iu, il);
        else acc -= f(iu, il);
      }
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Products, contractions, norms

/// (alpha ⊙ beta)_{ijkl} = a_ik b_jl + a_jl b_ik - a_il b_jk - a_jk b_il.
template <typename Scalar>
AlgCurvTensor4<Scalar> kulkarni_nomizu(const SymTensor2<Scalar>& alpha, const SymTensor2<Scalar>& beta) {
  detail::require_same_dim(alpha.dim(), beta.dim(), "kulkarni_nomizu");
  const int n = alpha.dim();
  AlgCurvTensor4<Scalar> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) = alpha(i, k) * beta(j, l) + alpha(j, l) * beta(i, k) -
                            alpha(i, l) * beta(j, k) - alpha(j, k) * beta(i, l);
  return out;
}

/// B = (1/2) g ⊙ g, the curvature tensor of unit sectional curvature.
template <typename Scalar>
AlgCurvTensor4<Scalar> unit_curvature_tensor(const SymTensor2<Scalar>& g) {
  const int n = g.dim();
  AlgCurvTensor4<Scalar> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out(i, j, k, l) = g(i, k) * g(j, l) - g(i, l) * g(j, k);
  return out;
}

/// Inverse of a positive definite metric; throws NumericError otherwise.
template <typename Scalar>
DimMatrix<Scalar> metric_inverse(const SymTensor2<Scalar>& g) {
  Eigen::LLT<DimMatrix<Scalar>> llt(g.matrix());
  if (llt.info() != Eigen::Success) throw NumericError("metric is not positive definite");
  const auto& L = llt.matrixL();
  for (int i = 0; i < g.dim(); ++i)
    if (!(L(i, i) > Scalar(0))) throw NumericError("metric is not positive definite");
  return llt.solve(DimMatrix<Scalar>::Identity(g.dim(), g.dim()));
}

/// Applies M to every slot of T: out_{abcd} = M_ai M_bj M_ck M_dl T_ijkl.
template <typename Scalar>
AlgCurvTensor4<Scalar> transform_all_slots(const AlgCurvTensor4<Scalar>& t, const DimMatrix<Scalar>& m) {
  const int n = t.dim();
  AlgCurvTensor4<Scalar> a(n), b(n);
  // one slot at a time: four n^5 passes instead of one n^8 pass
  for (int p = 0; p < n; ++p)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Scalar s(0);
          for (int i = 0; i < n; ++i) s += m(p, i) * t(i, j, k, l);
          a(p, j, k, l) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Scalar s(0);
          for (int j = 0; j < n; ++j) s += m(p, j) * a(i, j, k, l);
          b(i, p, k, l) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < n; ++p)
        for (int l = 0; l < n; ++l) {
          Scalar s(0);
          for (int k = 0; k < n; ++k) s += m(p, k) * b(i, j, k, l);
          a(i, j, p, l) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int p = 0; p < n; ++p) {
          Scalar s(0);
          for (int l = 0; l < n; ++l) s += m(p, l) * a(i, j, k, l);
          b(i, j, k, p) = s;
        }
  return b;
}

/// <T, S>_g = T_ijkl S_abcd g^ia g^jb g^kc g^ld.
template <typename Scalar>
Scalar inner4(const AlgCurvTensor4<Scalar>& t, const AlgCurvTensor4<Scalar>& s, const SymTensor2<Scalar>& g) {
  detail::require_same_dim(t.dim(), s.dim(), "inner4");
  detail::require_same_dim(t.dim(), g.dim(), "inner4 metric");
  const DimMatrix<Scalar> ginv = metric_inverse(g);
  const AlgCurvTensor4<Scalar> raised = transform_all_slots(s, ginv);
  Scalar acc(0);
  const auto a = t.data();
  const auto b = raised.data();
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Squared norm |S|_g^2 = tr(g^-1 S g^-1 S).
template <typename Scalar>
Scalar norm2(const SymTensor2<Scalar>& s, const SymTensor2<Scalar>& g) {
  detail::require_same_dim(s.dim(), g.dim(), "norm2");
  const DimMatrix<Scalar> ginv = metric_inverse(g);
  const DimMatrix<Scalar> m = ginv * s.matrix();
  return (m * m).trace();
}

template <typename Scalar>
Scalar trace(const SymTensor2<Scalar>& s, const SymTensor2<Scalar>& g) {
  detail::require_same_dim(s.dim(), g.dim(), "trace");
  return (metric_inverse(g) * s.matrix()).trace();
}

/// S - (tr_g S / n) g.
template <typename Scalar>
SymTensor2<Scalar> traceless2(const SymTensor2<Scalar>& s, const SymTensor2<Scalar>& g) {
  detail::require_same_dim(s.dim(), g.dim(), "traceless2");
  const Scalar tr = trace(s, g);
  return SymTensor2<Scalar>(s.matrix() - (tr / Scalar(s.dim())) * g.matrix());
}

/// Ric_jl = g^ik R_ijkl.
template <typename Scalar>
SymTensor2<Scalar> ricci_contraction(const AlgCurvTensor4<Scalar>& rm, const DimMatrix<Scalar>& ginv) {
  const int n = rm.dim();
  DimMatrix<Scalar> ric = DimMatrix<Scalar>::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      Scalar s(0);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s += ginv(i, k) * rm(i, j, k, l);
      ric(j, l) = s;
    }
  return SymTensor2<Scalar>(ric);
}

/// Orthogonal splitting Rm = (R / n(n-1)) B + (1/(n-2)) g ⊙ Ric° + W, n >= 3.
template <typename Scalar>
struct CurvatureDecomposition {
  Scalar scalar_curvature;
  SymTensor2<Scalar> ricci;
  SymTensor2<Scalar> traceless_ricci;
  AlgCurvTensor4<Scalar> scalar_part;
  AlgCurvTensor4<Scalar> ricci_part;
  AlgCurvTensor4<Scalar> weyl;
};

template <typename Scalar>
CurvatureDecomposition<Scalar> decompose(const AlgCurvTensor4<Scalar>& rm, const SymTensor2<Scalar>& g) {
  detail::require_same_dim(rm.dim(), g.dim(), "decompose");
  const int n = rm.dim();
  if (n < 3) throw ArgumentError("decompose: Weyl splitting needs n >= 3");
  const DimMatrix<Scalar> ginv = metric_inverse(g);
  SymTensor2<Scalar> ric = ricci_contraction(rm, ginv);
  const Scalar r = (ginv * ric.matrix()).trace();
  SymTensor2<Scalar> ric0(ric.matrix() - (r / Scalar(n)) * g.matrix());
  AlgCurvTensor4<Scalar> sp = unit_curvature_tensor(g) * (r / Scalar(n * (n - 1)));
  AlgCurvTensor4<Scalar> rp = kulkarni_nomizu(g, ric0) * (Scalar(1) / Scalar(n - 2));
  AlgCurvTensor4<Scalar> w = rm - sp - rp;
  return {r, std::move(ric), std::move(ric0), std::move(sp), std::move(rp), std::move(w)};
}

}  // namespace curvkit
