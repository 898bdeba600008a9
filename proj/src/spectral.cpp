#include "curvkit/spectral.hpp"

#include <fstream>
#include <sstream>

#include "curvkit/extrinsic_geometry.hpp"
#include "curvkit/intrinsic_geometry.hpp"
#include "json.hpp"

namespace curvkit {

std::string to_string(EigenvalueKind kind) {
  return kind == EigenvalueKind::analytic ? "analytic" : "rayleigh_upper";
}

LambdaRegistry LambdaRegistry::builtin() {
  LambdaRegistry r;
  for (int n = 1; n <= 6; ++n) {
    const std::string harmonic = "restrictions of linear functions are eigenfunctions with eigenvalue n";
    r.add("S" + std::to_string(n), n, "round unit sphere: " + harmonic);
    r.add("S" + std::to_string(n) + "-stereo", n, "round unit sphere: " + harmonic);
    r.add("S" + std::to_string(n) + "-metric", n, "round unit sphere: " + harmonic);
    r.add("S" + std::to_string(n) + "-stereo-metric", n, "round unit sphere: " + harmonic);
  }
  r.add("T2-flat", 1.0, "flat torus of side 2pi: Fourier mode e^{i u}");
  r.add("T3-flat", 1.0, "flat torus of side 2pi: Fourier mode e^{i u}");
  r.add("S2xS1", 1.0, "product: min(2 for the unit S2, 1 for the unit circle)");
  r.add("S2xS2", 2.0, "product of unit spheres: first eigenvalue of each factor");
  return r;
}

LambdaRegistry LambdaRegistry::from_json_text(const std::string& text) {
  LambdaRegistry r;
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_object()) throw ArgumentError("lambda registry must be a JSON object");
  for (const auto& [name, entry] : doc.items()) {
    if (!entry.contains("lambda")) throw ArgumentError("lambda registry entry '" + name + "' has no lambda");
    r.add(name, entry.at("lambda").get<double>(), entry.value("citation", std::string("registry file")));
  }
  return r;
}

LambdaRegistry LambdaRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open lambda registry '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void LambdaRegistry::add(const std::string& name, double value, const std::string& citation) {
  if (!(value > 0.0)) throw ArgumentError("registry eigenvalue for '" + name + "' must be positive");
  entries_[name] = EigenvalueEstimate{value, EigenvalueKind::analytic, citation};
}

std::optional<EigenvalueEstimate> LambdaRegistry::find(const std::string& name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void SpectralDomain::push_node(const MetricJet& metric, const ImmersionJet& emb, double weight) {
  const int n = metric.dim();
  const Matrixd ginv = metric_inverse(SymTensor2<double>(metric.g));
  const Christoffel G = christoffel(metric);
  const int m = static_cast<int>(emb.position.size());
  Eigen::MatrixXd J = emb.jacobian;
  const Eigen::MatrixXd P = J * Eigen::MatrixXd(ginv) * J.transpose();
  Eigen::VectorXd lap = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd v = emb.second(i, j);
      for (int k = 0; k < n; ++k) v -= G(k, i, j) * J.col(k);
      lap += ginv(i, j) * v;
    }
  weights_.push_back(weight);
  for (int a = 0; a < m; ++a) x_.push_back(emb.position(a));
  for (Eigen::Index a = 0; a < P.size(); ++a) p_.push_back(P.data()[a]);
  for (int a = 0; a < m; ++a) lap_.push_back(lap(a));
}

SpectralDomain::SpectralDomain(const Submanifold& sub, const QuadratureGrid& grid)
    : name_(sub.name), n_(sub.n), m_(sub.m), grid_(&grid) {
  for (const auto& node : grid.nodes) {
    const ImmersionJet jet = sub.atlas[static_cast<std::size_t>(node.chart)].eval(node.u);
    push_node(induced_metric_jet(jet, sub.ambient), jet, node.weight);
  }
}

SpectralDomain::SpectralDomain(const RiemannianManifold& mfd, const QuadratureGrid& grid)
    : name_(mfd.name), n_(mfd.n), m_(mfd.embedding_dim), grid_(&grid) {
  if (m_ <= 0) throw ArgumentError("manifold '" + mfd.name + "' has no embedding for ambient test functions");
  for (const auto& node : grid.nodes) {
    const auto& chart = mfd.atlas[static_cast<std::size_t>(node.chart)];
    push_node(chart.eval(node.u), chart.embedding(node.u), node.weight);
  }
}

Eigen::Map<const Eigen::VectorXd> SpectralDomain::position(std::size_t i) const {
  return {x_.data() + i * static_cast<std::size_t>(m_), m_};
}
Eigen::Map<const Eigen::MatrixXd> SpectralDomain::projector(std::size_t i) const {
  return {p_.data() + i * static_cast<std::size_t>(m_ * m_), m_, m_};
}
Eigen::Map<const Eigen::VectorXd> SpectralDomain::laplacian_of_embedding(std::size_t i) const {
  return {lap_.data() + i * static_cast<std::size_t>(m_), m_};
}

std::vector<double> SpectralDomain::values(const AmbientFunction& f) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = f.value(AmbVectord(position(i)));
  return out;
}

std::vector<double> SpectralDomain::gradient_inner(const AmbientFunction& f, const AmbientFunction& h) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const AmbVectord x(position(i));
    const Eigen::VectorXd gf = f.grad(x), gh = h.grad(x);
    out[i] = gf.dot(projector(i) * gh);
  }
  return out;
}

std::vector<double> SpectralDomain::gradient_norm2(const AmbientFunction& f) const { return gradient_inner(f, f); }

std::vector<double> SpectralDomain::laplacian(const AmbientFunction& f) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    const AmbVectord x(position(i));
    const Eigen::VectorXd gf = f.grad(x);
    out[i] = f.hess(x).cwiseProduct(projector(i)).sum() + gf.dot(laplacian_of_embedding(i));
  }
  return out;
}

double eigenfunction_residual(const SpectralDomain& domain, const AmbientFunction& f, double lambda) {
  const auto v = domain.values(f);
  const auto lap = domain.laplacian(f);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(lap[i] + lambda * v[i]));
  return r;
}

std::vector<AmbientFunction> default_rayleigh_basis(int embedding_dim) {
  std::vector<AmbientFunction> basis;
  for (int i = 0; i < embedding_dim; ++i) basis.push_back(coordinate_function(i));
  for (int i = 0; i < embedding_dim; ++i)
    for (int j = i; j < embedding_dim; ++j) basis.push_back(coordinate_product(i, j));
  return basis;
}

EigenvalueEstimate rayleigh_lambda(const SpectralDomain& domain, const std::vector<AmbientFunction>& basis) {
  const auto& grid = domain.grid();
  const int q = static_cast<int>(basis.size());
  if (q == 0) throw EstimatorError("Rayleigh estimator: empty basis");
  const double area = grid.area();
  std::vector<std::vector<double>> vals;
  for (const auto& f : basis) {
    auto v = domain.values(f);
    const double mean = integrate(grid, v) / area;
    for (auto& x : v) x -= mean;
    vals.push_back(std::move(v));
  }
  Eigen::MatrixXd M(q, q), K(q, q);
  std::vector<double> prod(domain.size());
  for (int a = 0; a < q; ++a)
    for (int b = a; b < q; ++b) {
      for (std::size_t i = 0; i < prod.size(); ++i)
        prod[i] = vals[static_cast<std::size_t>(a)][i] * vals[static_cast<std::size_t>(b)][i];
      M(a, b) = M(b, a) = integrate(grid, prod);
      K(a, b) = K(b, a) = integrate(grid, domain.gradient_inner(basis[static_cast<std::size_t>(a)], basis[static_cast<std::size_t>(b)]));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ms(M);
  const double top = ms.eigenvalues().maxCoeff();
  std::vector<int> keep;
  for (int a = 0; a < q; ++a)
    if (ms.eigenvalues()(a) > 1e-10 * std::max(top, 1e-300)) keep.push_back(a);
  if (keep.empty() || !(top > 0.0)) throw EstimatorError("Rayleigh estimator: basis is constant after removing means");
  Eigen::MatrixXd W(q, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    W.col(static_cast<Eigen::Index>(c)) = ms.eigenvectors().col(keep[c]) / std::sqrt(ms.eigenvalues()(keep[c]));
  const Eigen::MatrixXd Kr = W.transpose() * K * W;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ks(0.5 * (Kr + Kr.transpose()), Eigen::EigenvaluesOnly);
  std::ostringstream os;
  os << "Rayleigh quotient over " << keep.size() << " mean-zero basis functions at resolution " << grid.resolution;
  return {ks.eigenvalues()(0), EigenvalueKind::rayleigh_upper, os.str()};
}

EigenvalueEstimate lambda1(const std::string& name, const SpectralDomain& domain, const LambdaRegistry& registry) {
  if (auto hit = registry.find(name)) return *hit;
  return rayleigh_lambda(domain, default_rayleigh_basis(domain.embedding_dim()));
}

PoincareResult poincare_check(const SpectralDomain& domain, const AmbientFunction& f, const EigenvalueEstimate& lambda) {
  if (lambda.kind != EigenvalueKind::analytic)
    throw InadmissibleError("Poincare check needs an analytic eigenvalue; an upper bound is unsound here");
  const auto& grid = domain.grid();
  PoincareResult r;
  r.lambda = lambda.value;
  r.lhs = integrate(grid, domain.gradient_norm2(f));
  auto lap = domain.laplacian(f);
  for (auto& v : lap) v *= v;
  r.rhs = integrate(grid, lap);
  r.holds = r.lhs <= r.rhs / r.lambda * (1.0 + 1e-6);
  return r;
}

}  // namespace curvkit
