#pragma once

// Chart-level data shared by the geometry, quadrature and spectral modules.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "curvkit/config.hpp"
#include "curvkit/errors.hpp"

namespace curvkit {

/// Rectangular parameter domain with per-axis periodicity.
struct ParameterBox {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> periodic;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Point& u) const;
  static ParameterBox cube(int n, double lo, double hi, bool periodic);
};

/// Position, first and second derivatives of an immersion at one point.
/// `hessian[i * n + j]` holds d^2 F / du^i du^j.
struct ImmersionJet {
  AmbVectord position;
  AmbMatrixd jacobian;
  std::vector<AmbVectord> hessian;

  const AmbVectord& second(int i, int j) const { return hessian[static_cast<std::size_t>(i * jacobian.cols() + j)]; }
};

using ImmersionEval = std::function<ImmersionJet(const Point&)>;
using WeightFn = std::function<double(const Point&)>;

/// Parametrized immersion of an n-dimensional chart into R^m (or into the
/// sphere / hyperboloid model living in R^m).
struct ImmersionChart {
  int n = 0;
  int m = 0;
  ParameterBox domain;
  ImmersionEval eval;
  WeightFn atlas_weight;  // empty means 1
  /// Codim-1 normals are oriented so that <nu, F - center> >= 0, or
  /// <nu, orientation_reference(jet)> >= 0 when that closure is set.
  AmbVectord orientation_center;
  std::function<AmbVectord(const ImmersionJet&)> orientation_reference;

  double weight(const Point& u) const { return atlas_weight ? atlas_weight(u) : 1.0; }
};

enum class AmbientKind { euclidean, sphere, hyperbolic };

/// Space form of constant curvature c. Sphere and hyperbolic ambients are
/// modelled as {|x| = rho} in R^{m} and {<x,x>_L = -rho^2, x_last > 0} in
/// Minkowski space respectively.
struct AmbientSpace {
  AmbientKind kind = AmbientKind::euclidean;
  double c = 0.0;

  static AmbientSpace euclidean() { return {AmbientKind::euclidean, 0.0}; }
  static AmbientSpace sphere(double radius) { return {AmbientKind::sphere, 1.0 / (radius * radius)}; }
  static AmbientSpace hyperbolic(double radius) { return {AmbientKind::hyperbolic, -1.0 / (radius * radius)}; }

  /// Throws ArgumentError unless (kind == euclidean) <=> (c == 0) and the
  /// sign of c matches the kind.
  void validate() const;
  /// Ambient inner product; Lorentzian in the last slot for hyperbolic.
  double inner(const AmbVectord& a, const AmbVectord& b) const;
  /// Extra model dimension (0 for euclidean, 1 for curved).
  int model_codim() const { return kind == AmbientKind::euclidean ? 0 : 1; }
};

std::string to_string(AmbientKind kind);
AmbientKind ambient_kind_from_string(const std::string& s);

/// A closed submanifold given by an atlas of immersion charts whose weights
/// form a partition of unity.
struct Submanifold {
  std::string name;
  int n = 0;
  int m = 0;
  AmbientSpace ambient;
  std::vector<ImmersionChart> atlas;

  /// dim N - n.
  int codim() const { return m - ambient.model_codim() - n; }
};

/// Metric components and their coordinate derivatives. `dg[k]` = d_k g,
/// `ddg[k * n + l]` = d_k d_l g; `ddg` is empty when only first derivatives
/// are available (induced metrics of immersions).
struct MetricJet {
  Matrixd g;
  std::vector<Matrixd> dg;
  std::vector<Matrixd> ddg;

  int dim() const { return static_cast<int>(g.rows()); }
  bool has_second_derivatives() const { return !ddg.empty(); }
  const Matrixd& second(int k, int l) const { return ddg[static_cast<std::size_t>(k * dim() + l)]; }
};

using MetricEval = std::function<MetricJet(const Point&)>;

/// Riemannian metric on a chart. `embedding`, when present, is an isometric
/// or merely smooth map into R^m used to pull back ambient test functions.
struct MetricChart {
  int n = 0;
  ParameterBox domain;
  MetricEval eval;
  WeightFn atlas_weight;
  ImmersionEval embedding;
  int embedding_dim = 0;

  double weight(const Point& u) const { return atlas_weight ? atlas_weight(u) : 1.0; }
};

struct RiemannianManifold {
  std::string name;
  int n = 0;
  std::vector<MetricChart> atlas;
  int embedding_dim = 0;  // 0 when some chart has no embedding
};

/// Value, coordinate gradient and coordinate Hessian of a scalar function.
struct ChartFunctionJet {
  double value = 0.0;
  Vectord grad;
  Matrixd hess;
};

/// Smooth function on ambient R^m with analytic derivatives.
struct AmbientFunction {
  std::string id;
  std::function<double(const AmbVectord&)> value;
  std::function<AmbVectord(const AmbVectord&)> grad;
  std::function<Eigen::MatrixXd(const AmbVectord&)> hess;

  /// Pullback through an embedding jet (chain rule, exact).
  ChartFunctionJet pull_back(const ImmersionJet& jet) const;
};

/// Ambient coordinate x_i (0-based).
AmbientFunction coordinate_function(int i);
/// Product x_i x_j (0-based).
AmbientFunction coordinate_product(int i, int j);
/// Parses "x<i>" (1-based) or "x<i>x<j>" into a function.
AmbientFunction basis_function(const std::string& id);

}  // namespace curvkit
