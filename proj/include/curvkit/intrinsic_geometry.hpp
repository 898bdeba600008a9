#pragma once

// Curvature of metrics given componentwise on charts, conformal families,
// product metrics and covariant divergences of (1,1) tensor fields.

#include <functional>
#include <string>
#include <vector>

#include "curvkit/charts.hpp"
#include "curvkit/tensor_algebra.hpp"

namespace curvkit {

struct QuadratureGrid;

/// Gamma^k_ij, stored as data[(k * n + i) * n + j].
struct Christoffel {
  int n = 0;
  std::vector<double> data;

  double operator()(int k, int i, int j) const { return data[static_cast<std::size_t>((k * n + i) * n + j)]; }
  double& operator()(int k, int i, int j) { return data[static_cast<std::size_t>((k * n + i) * n + j)]; }
};

Christoffel christoffel(const MetricJet& jet);
Christoffel christoffel(const MetricChart& mc, const Point& u);

/// Largest |nabla_k g_ij| computed with the given symbols.
double metric_compatibility_residual(const MetricJet& jet, const Christoffel& gamma);

/// Coordinate components Rm_ijkl = <R(d_i, d_j) d_l, d_k>, so that Rm_ijij is
/// the sectional curvature. Needs second metric derivatives.
AlgCurvTensor4<double> riemann(const MetricJet& jet);
AlgCurvTensor4<double> riemann(const MetricChart& mc, const Point& u);

/// Orthonormal-frame curvature data at a point of a metric chart.
struct IntrinsicPoint {
  Point u;
  SymTensor2<double> g;
  /// Columns: orthonormal frame in coordinate components (upper triangular).
  Matrixd frame;
  AlgCurvTensor4<double> rm;
  SymTensor2<double> ricci;
  double scalar = 0.0;
};

IntrinsicPoint intrinsic_point(const MetricChart& mc, const Point& u);
/// Same, from an evaluated jet.
IntrinsicPoint intrinsic_point(const MetricJet& jet, const Point& u);

/// Upper-triangular E with E^T g E = I.
Matrixd orthonormal_frame(const Matrixd& g);

/// Coordinate (1,1) components T^i_j of a tensor given in the frame E.
Matrixd mixed_from_orthonormal(const Matrixd& x, const Matrixd& frame, const Matrixd& g);

using ChartScalarFn = std::function<ChartFunctionJet(const Point&)>;

/// g_t = (1 + t f) g_0 on one chart.
struct ConformalFamily {
  MetricChart base;
  ChartScalarFn f;
  double t = 0.0;
};

/// Chart of (1 + t f) g_0 with product-rule derivatives. t = 0 returns the
/// base chart unchanged. Evaluation throws DomainError where 1 + t f <= 0.
MetricChart conformal_metric(const ConformalFamily& family);

/// Applies the family to every chart of `base`, with f an ambient function
/// pulled back through each chart's embedding. When `check` is given, every
/// grid node is tested for 1 + t f > 0 and the first violation is reported.
RiemannianManifold conformal_manifold(const RiemannianManifold& base, const AmbientFunction& f, double t,
                                      const QuadratureGrid* check = nullptr);

/// Block-diagonal metric on the product of two charts.
MetricChart product_chart(const MetricChart& a, const MetricChart& b);
RiemannianManifold product_manifold(const RiemannianManifold& a, const RiemannianManifold& b, std::string name);

/// (1,1) tensor field in coordinate components T^i_j.
using MixedTensorField = std::function<Matrixd(const Point&)>;

/// (div T)_j = d_i T^i_j + Gamma^i_ik T^k_j - Gamma^k_ij T^i_k, with central
/// differences of step h for d_i. Throws BoundaryError when the stencil
/// leaves a non-periodic axis of the chart domain.
Vectord covariant_divergence(const MixedTensorField& field, const MetricChart& mc, const Point& u, double h);

}  // namespace curvkit
