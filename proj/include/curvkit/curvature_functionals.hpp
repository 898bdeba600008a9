#pragma once

// Higher mean curvatures, Newton transformations and Lovelock curvatures.
//
// Everything here works in an orthonormal tangent frame. Second fundamental
// forms are given by their components in an orthonormal normal frame, so
// h(A_ij, A_kl) is the Euclidean dot product of component vectors.

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "curvkit/config.hpp"
#include "curvkit/errors.hpp"
#include "curvkit/tensor_algebra.hpp"

namespace curvkit {

/// Normal-valued symmetric 2-tensor: one symmetric n×n matrix per normal
/// direction. A codim-1 second fundamental form has a single component.
template <typename Scalar>
class VecValuedSym2 {
 public:
  using Matrix = DimMatrix<Scalar>;

  VecValuedSym2() = default;
  explicit VecValuedSym2(std::vector<Matrix> components) {
    if (components.empty()) throw ArgumentError("VecValuedSym2: codimension must be >= 1");
    const auto n = components.front().rows();
    detail::require_dim(static_cast<int>(n));
    for (auto& c : components) {
      if (c.rows() != n || c.cols() != n) throw ArgumentError("VecValuedSym2: inconsistent component shapes");
      c = ((c + c.transpose()) / Scalar(2)).eval();
    }
    components_ = std::move(components);
  }
  static VecValuedSym2 scalar(const Matrix& a) { return VecValuedSym2(std::vector<Matrix>{a}); }

  int dim() const { return static_cast<int>(components_.front().rows()); }
  int codim() const { return static_cast<int>(components_.size()); }
  const Matrix& component(int alpha) const { return components_[static_cast<std::size_t>(alpha)]; }
  const std::vector<Matrix>& components() const { return components_; }

  AmbVector<Scalar> entry(int i, int j) const {
    AmbVector<Scalar> v(codim());
    for (int a = 0; a < codim(); ++a) v(a) = components_[static_cast<std::size_t>(a)](i, j);
    return v;
  }

  /// h(A_ij, A_kl).
  Scalar pair(int i, int j, int k, int l) const {
    Scalar s(0);
    for (const auto& c : components_) s += c(i, j) * c(k, l);
    return s;
  }

  /// Components re-expressed in another orthonormal tangent frame (columns of
  /// `q`) and normal frame (rows of `r` act on the component index).
  VecValuedSym2 rotated(const Matrix& q, const Eigen::MatrixXd& r) const {
    std::vector<Matrix> out(components_.size(), Matrix::Zero(dim(), dim()));
    for (int b = 0; b < codim(); ++b)
      for (int a = 0; a < codim(); ++a)
        out[static_cast<std::size_t>(b)] += Scalar(r(b, a)) * (q.transpose() * components_[static_cast<std::size_t>(a)] * q);
    return VecValuedSym2(std::move(out));
  }

 private:
  std::vector<Matrix> components_;
};

enum class NewtonParity { even, odd, scalar_codim1 };

/// T^r as a (1,1) tensor in an orthonormal frame, one matrix per normal
/// component (a single matrix when r is even or the hypersurface path was
/// used), together with the matching H_r.
template <typename Scalar>
struct NewtonTensor {
  int r = 0;
  int n = 0;
  NewtonParity parity = NewtonParity::even;
  std::vector<DimMatrix<Scalar>> components;
  AmbVector<Scalar> mean;  // H_r, same component layout

  Scalar norm2() const {
    Scalar s(0);
    for (const auto& c : components) s += c.squaredNorm();
    return s;
  }
  AmbVector<Scalar> traces() const {
    AmbVector<Scalar> t(static_cast<int>(components.size()));
    for (std::size_t a = 0; a < components.size(); ++a) t(static_cast<int>(a)) = components[a].trace();
    return t;
  }
};

/// Lovelock curvature R^(k) and generalized Einstein tensor E^(k).
template <typename Scalar>
struct LovelockData {
  int k = 0;
  Scalar rk = Scalar(0);
  DimMatrix<Scalar> ek;
};

namespace detail {

template <typename Scalar>
Scalar factorial(int m) {
  Scalar f(1);
  for (int a = 2; a <= m; ++a) f *= Scalar(a);
  return f;
}

// h(A_ij, A_kl) tabulated over (i*n+j, k*n+l).
template <typename Scalar>
std::vector<Scalar> pair_table(const VecValuedSym2<Scalar>& a) {
  const int n = a.dim();
  const int nn = n * n;
  std::vector<Scalar> t(static_cast<std::size_t>(nn * nn));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t[static_cast<std::size_t>((i * n + j) * nn + k * n + l)] = a.pair(i, j, k, l);
  return t;
}

// Product of the paired factors h(A_{u0 l0}, A_{u1 l1}) h(A_{u2 l2}, A_{u3 l3}) ...
// over the first `pairs` pairs of positions.
template <typename Scalar>
Scalar paired_product(const std::vector<Scalar>& table, int n, int pairs, std::span<const int> up,
                      std::span<const int> lo) {
  const int nn = n * n;
  Scalar prod(1);
  for (int m = 0; m < pairs; ++m) {
    const int a = up[2 * m] * n + lo[2 * m];
    const int b = up[2 * m + 1] * n + lo[2 * m + 1];
    prod *= table[static_cast<std::size_t>(a * nn + b)];
  }
  return prod;
}

}  // namespace detail

/// H_r of a normal-valued second fundamental form by epsilon contraction.
/// Returns a length-1 vector when r is even, otherwise the codim normal
/// components.
template <typename Scalar>
AmbVector<Scalar> mean_curvature(const VecValuedSym2<Scalar>& a, int r) {
  const int n = a.dim();
  if (r < 1 || r > n) throw ArgumentError("mean_curvature: order r=" + std::to_string(r) + " outside [1, n]");
  const auto table = detail::pair_table(a);
  const Scalar inv = Scalar(1) / detail::factorial<Scalar>(r);
  if (r % 2 == 0) {
    const Scalar s = alternating_sum(n, r, Scalar(0), [&](std::span<const int> up, std::span<const int> lo) {
      return detail::paired_product(table, n, r / 2, up, lo);
    });
    AmbVector<Scalar> out(1);
    out(0) = s * inv;
    return out;
  }
  const int q = a.codim();
  AmbVector<Scalar> acc = AmbVector<Scalar>::Zero(q);
  acc = alternating_sum(n, r, acc, [&](std::span<const int> up, std::span<const int> lo) -> AmbVector<Scalar> {
    const Scalar prod = detail::paired_product(table, n, (r - 1) / 2, up, lo);
    return prod * a.entry(up[r - 1], lo[r - 1]);
  });
  return acc * inv;
}

/// T^r by epsilon contraction, 1 <= r <= n-1.
template <typename Scalar>
NewtonTensor<Scalar> newton_transform(const VecValuedSym2<Scalar>& a, int r) {
  const int n = a.dim();
  if (r < 1 || r > n - 1) throw ArgumentError("newton_transform: order r=" + std::to_string(r) + " outside [1, n-1]");
  const auto table = detail::pair_table(a);
  const Scalar inv = Scalar(1) / detail::factorial<Scalar>(r);
  NewtonTensor<Scalar> t;
  t.r = r;
  t.n = n;
  if (r % 2 == 0) {
    t.parity = NewtonParity::even;
    DimMatrix<Scalar> m = DimMatrix<Scalar>::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const Scalar s = alternating_sum_free(n, r, i, j, Scalar(0), [&](std::span<const int> up, std::span<const int> lo) {
          return detail::paired_product(table, n, r / 2, up, lo);
        });
        m(i, j) = m(j, i) = s * inv;
      }
    t.components.push_back(m);
  } else {
    t.parity = NewtonParity::odd;
    const int q = a.codim();
    t.components.assign(static_cast<std::size_t>(q), DimMatrix<Scalar>::Zero(n, n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        AmbVector<Scalar> acc = AmbVector<Scalar>::Zero(q);
        acc = alternating_sum_free(n, r, i, j, acc, [&](std::span<const int> up, std::span<const int> lo) -> AmbVector<Scalar> {
          const Scalar prod = detail::paired_product(table, n, (r - 1) / 2, up, lo);
          return prod * a.entry(up[r - 1], lo[r - 1]);
        });
        for (int al = 0; al < q; ++al) t.components[static_cast<std::size_t>(al)](i, j) = t.components[static_cast<std::size_t>(al)](j, i) = acc(al) * inv;
      }
  }
  t.mean = mean_curvature(a, r);
  return t;
}

/// Elementary symmetric polynomials e_0..e_n of `k`, by expanding
/// prod (1 + k_i x) one factor at a time (no power sums involved).
template <typename Scalar>
std::vector<Scalar> elementary_symmetric_all(std::span<const Scalar> k) {
  std::vector<Scalar> e(k.size() + 1, Scalar(0));
  e[0] = Scalar(1);
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += k[i] * e[j - 1];
  return e;
}

template <typename Scalar>
Scalar elementary_symmetric(std::span<const Scalar> k, int r) {
  if (r < 0 || r > static_cast<int>(k.size())) return Scalar(0);
  return elementary_symmetric_all(k)[static_cast<std::size_t>(r)];
}

/// H_r = sigma_r(k_1..k_n) for a hypersurface.
template <typename Scalar>
Scalar mean_curvature_hypersurface(std::span<const Scalar> principal, int r) {
  if (r < 0 || r > static_cast<int>(principal.size()))
    throw ArgumentError("mean_curvature_hypersurface: order out of range");
  return elementary_symmetric(principal, r);
}

/// Hypersurface T^r from the eigen-decomposition of the (scalar) shape
/// operator: T^r e_i = sigma_r(k with k_i omitted) e_i.
template <typename Scalar>
NewtonTensor<Scalar> newton_transform_hypersurface(const DimMatrix<Scalar>& shape, int r) {
  const int n = static_cast<int>(shape.rows());
  if (r < 1 || r > n - 1) throw ArgumentError("newton_transform_hypersurface: order out of range");
  Eigen::SelfAdjointEigenSolver<DimMatrix<Scalar>> es(shape);
  const DimVector<Scalar> kv = es.eigenvalues();
  std::vector<Scalar> k(kv.data(), kv.data() + n);
  DimVector<Scalar> diag(n);
  std::vector<Scalar> rest;
  for (int i = 0; i < n; ++i) {
    rest.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) rest.push_back(k[static_cast<std::size_t>(j)]);
    diag(i) = elementary_symmetric<Scalar>(rest, r);
  }
  NewtonTensor<Scalar> t;
  t.r = r;
  t.n = n;
  t.parity = NewtonParity::scalar_codim1;
  const DimMatrix<Scalar> q = es.eigenvectors();
  DimMatrix<Scalar> m = q * diag.asDiagonal() * q.transpose();
  t.components.push_back(((m + m.transpose()) / Scalar(2)).eval());
  t.mean = AmbVector<Scalar>(1);
  t.mean(0) = elementary_symmetric<Scalar>(k, r);
  return t;
}

/// T° = T - ((n-r)/n) H_r I, componentwise.
template <typename Scalar>
NewtonTensor<Scalar> traceless_newton(const NewtonTensor<Scalar>& t) {
  NewtonTensor<Scalar> out = t;
  const Scalar c = Scalar(t.n - t.r) / Scalar(t.n);
  for (std::size_t a = 0; a < out.components.size(); ++a)
    out.components[a] -= c * t.mean(static_cast<int>(a)) * DimMatrix<Scalar>::Identity(t.n, t.n);
  return out;
}

/// R^(k) and E^(k) from orthonormal-frame curvature components, 2k < n.
/// R^(1) is the scalar curvature; E^(1) = (R/2) g - Ric (the epsilon
/// contraction fixes this sign, see trace identity tr E^(k) = (n-2k)/2 R^(k)).
template <typename Scalar>
LovelockData<Scalar> lovelock(const AlgCurvTensor4<Scalar>& rm, int k) {
  const int n = rm.dim();
  if (k < 1 || 2 * k >= n) throw ArgumentError("lovelock: need 1 <= k < n/2 (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  const int p = 2 * k;
  auto product = [&](std::span<const int> up, std::span<const int> lo) {
    Scalar prod(1);
    for (int m = 0; m < k; ++m) prod *= rm(up[2 * m], up[2 * m + 1], lo[2 * m], lo[2 * m + 1]);
    return prod;
  };
  LovelockData<Scalar> out;
  out.k = k;
  out.rk = alternating_sum(n, p, Scalar(0), product) / std::pow(Scalar(2), Scalar(k));
  out.ek = DimMatrix<Scalar>::Zero(n, n);
  const Scalar inv = Scalar(1) / std::pow(Scalar(2), Scalar(k + 1));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const Scalar s = alternating_sum_free(n, p, j, i, Scalar(0), product);
      out.ek(i, j) = out.ek(j, i) = s * inv;
    }
  // trace identity as a consistency guard; bound on the sum of |terms|
  using std::abs;
  const Scalar bound = std::pow(rm.max_abs(), Scalar(k)) * detail::factorial<Scalar>(p) * detail::factorial<Scalar>(p) *
                       Scalar(n) * Scalar(n);
  if (abs(out.ek.trace() - Scalar(n - p) / Scalar(2) * out.rk) > Scalar(1e-10) * (bound + Scalar(1e-300)))
    throw NumericError("lovelock: trace identity violated");
  return out;
}

/// Traceless part X - (tr X / n) I of a (1,1) tensor in an orthonormal frame.
template <typename Scalar>
DimMatrix<Scalar> traceless(const DimMatrix<Scalar>& x) {
  const auto n = x.rows();
  return x - (x.trace() / Scalar(n)) * DimMatrix<Scalar>::Identity(n, n);
}

struct PointGeometry;
struct AmbientSpace;

/// Largest entry of E^(k) - ((2k)!/2) T^{2k} (flat ambient) or
/// E^(1) - T^2 - C(n-1,2) c I (curved ambient, k = 1), with curvature from the
/// Gauss equation and T from the second fundamental form.
double einstein_newton_bridge(const PointGeometry& pg, const AmbientSpace& ambient, int k);

}  // namespace curvkit
