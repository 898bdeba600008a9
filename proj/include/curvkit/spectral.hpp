#pragma once

// First nonzero Laplace eigenvalue: registry values, Rayleigh upper bounds
// and the Poincare-type inequality for mean-zero functions.
//
// Sign convention: Delta = div grad, so coordinate functions on the unit
// S^n satisfy -Delta x_i = n x_i.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvkit/charts.hpp"
#include "curvkit/quadrature.hpp"

namespace curvkit {

enum class EigenvalueKind { analytic, rayleigh_upper };
std::string to_string(EigenvalueKind kind);

struct EigenvalueEstimate {
  double value = 0.0;
  EigenvalueKind kind = EigenvalueKind::analytic;
  std::string provenance;
};

/// Name -> analytic first eigenvalue.
class LambdaRegistry {
 public:
  /// Built-in closed forms for the catalog's round spheres, flat tori and
  /// products.
  static LambdaRegistry builtin();
  /// JSON object {name: {"lambda": value, "citation": text}}.
  static LambdaRegistry from_json_text(const std::string& text);
  static LambdaRegistry load(const std::string& path);

  void add(const std::string& name, double value, const std::string& citation);
  std::optional<EigenvalueEstimate> find(const std::string& name) const;
  const std::map<std::string, EigenvalueEstimate>& entries() const { return entries_; }

 private:
  std::map<std::string, EigenvalueEstimate> entries_;
};

/// Per-node data needed to differentiate pulled-back ambient functions:
/// position x = F(u), P = dF g^{-1} dF^T and Delta F, stored flat.
class SpectralDomain {
 public:
  SpectralDomain(const Submanifold& sub, const QuadratureGrid& grid);
  SpectralDomain(const RiemannianManifold& mfd, const QuadratureGrid& grid);

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  int embedding_dim() const { return m_; }
  const QuadratureGrid& grid() const { return *grid_; }
  std::size_t size() const { return weights_.size(); }

  Eigen::Map<const Eigen::VectorXd> position(std::size_t i) const;
  Eigen::Map<const Eigen::MatrixXd> projector(std::size_t i) const;
  Eigen::Map<const Eigen::VectorXd> laplacian_of_embedding(std::size_t i) const;

  std::vector<double> values(const AmbientFunction& f) const;
  /// |grad f|^2 at every node.
  std::vector<double> gradient_norm2(const AmbientFunction& f) const;
  /// <grad f, grad h> at every node.
  std::vector<double> gradient_inner(const AmbientFunction& f, const AmbientFunction& h) const;
  std::vector<double> laplacian(const AmbientFunction& f) const;

 private:
  void push_node(const MetricJet& metric, const ImmersionJet& emb, double weight);

  std::string name_;
  int n_ = 0;
  int m_ = 0;
  const QuadratureGrid* grid_ = nullptr;
  std::vector<double> weights_;
  std::vector<double> x_, p_, lap_;
};

/// max over nodes of |Delta f + lambda f|.
double eigenfunction_residual(const SpectralDomain& domain, const AmbientFunction& f, double lambda);

/// Coordinate functions and their pairwise products.
std::vector<AmbientFunction> default_rayleigh_basis(int embedding_dim);

/// Smallest Rayleigh quotient over span(basis) orthogonal to constants.
/// Throws EstimatorError when nothing survives orthogonalization.
EigenvalueEstimate rayleigh_lambda(const SpectralDomain& domain, const std::vector<AmbientFunction>& basis);

/// Registry value when `name` is known, otherwise the Rayleigh upper bound
/// over the default basis.
EigenvalueEstimate lambda1(const std::string& name, const SpectralDomain& domain, const LambdaRegistry& registry);

struct PoincareResult {
  double lhs = 0.0;  // integral of |grad F|^2
  double rhs = 0.0;  // integral of (Delta F)^2
  double lambda = 0.0;
  bool holds = false;
};

/// lhs <= rhs / lambda (1 + 1e-6) for F = f - mean(f). Only analytic
/// eigenvalues are accepted.
PoincareResult poincare_check(const SpectralDomain& domain, const AmbientFunction& f, const EigenvalueEstimate& lambda);

}  // namespace curvkit
