#include "curvkit/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

namespace curvkit {

namespace {

std::atomic<unsigned> g_threads{1};

struct AxisRule {
  std::vector<double> x;
  std::vector<double> w;
};

AxisRule axis_rule(double lo, double hi, bool periodic, int count) {
  AxisRule r;
  if (periodic) {
    const double h = (hi - lo) / count;
    for (int j = 0; j < count; ++j) {
      r.x.push_back(lo + j * h);
      r.w.push_back(h);
    }
    return r;
  }
  const auto gl = gauss_legendre(count);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int j = 0; j < count; ++j) {
    r.x.push_back(mid + half * gl.nodes[static_cast<std::size_t>(j)]);
    r.w.push_back(half * gl.weights[static_cast<std::size_t>(j)]);
  }
  return r;
}

ParameterBox effective_box(const ParameterBox& domain, const GridOptions& options) {
  if (!options.restrict_to) return domain;
  const auto& sub = *options.restrict_to;
  if (sub.dim() != domain.dim()) throw ArgumentError("grid restriction has the wrong dimension");
  ParameterBox box = domain;
  for (std::size_t a = 0; a < box.lower.size(); ++a) {
    box.lower[a] = std::max(domain.lower[a], sub.lower[a]);
    box.upper[a] = std::min(domain.upper[a], sub.upper[a]);
    box.periodic[a] = domain.periodic[a] && sub.periodic[a];
    if (!(box.upper[a] > box.lower[a])) throw ArgumentError("grid restriction is empty");
  }
  return box;
}

// Visits every node of the tensor-product rule on `box`.
template <typename F>
void for_each_box_node(const ParameterBox& box, int resolution, F&& visit) {
  const int n = box.dim();
  std::vector<AxisRule> rules;
  for (int a = 0; a < n; ++a)
    rules.push_back(axis_rule(box.lower[static_cast<std::size_t>(a)], box.upper[static_cast<std::size_t>(a)],
                              box.periodic[static_cast<std::size_t>(a)], resolution));
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Point u(n);
  while (true) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      u(a) = rules[static_cast<std::size_t>(a)].x[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
      w *= rules[static_cast<std::size_t>(a)].w[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
    }
    visit(u, w);
    int a = n - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == resolution) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
}

void require_resolution(int resolution) {
  if (resolution < 8) throw ArgumentError("quadrature resolution must be at least 8 nodes per axis");
}

void check_rejections(const QuadratureGrid& grid, std::size_t considered) {
  if (considered == 0) throw GridError("quadrature grid has no nodes");
  if (static_cast<double>(grid.rejected.size()) > 1e-3 * static_cast<double>(considered)) {
    std::ostringstream os;
    os << grid.rejected.size() << " of " << considered << " quadrature nodes rejected";
    if (!grid.rejected.empty()) os << " (first: chart " << grid.rejected.front().chart << ", " << grid.rejected.front().reason << ")";
    throw GridError(os.str());
  }
}

std::string point_string(const Point& u) {
  std::ostringstream os;
  os << "u = (" << u.transpose() << ")";
  return os.str();
}

}  // namespace

double QuadratureGrid::area() const {
  CompensatedSum s;
  for (const auto& node : nodes) s.add(node.weight);
  return s.value();
}

GaussLegendreRule gauss_legendre(int count) {
  if (count < 1) throw ArgumentError("Gauss-Legendre rule needs at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(count));
  rule.weights.resize(static_cast<std::size_t>(count));
  // Legendre P_count and its derivative by the three-term recurrence
  auto legendre = [count](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= count; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(count - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(count - 1 - i)] = w;
  }
  if (count % 2 == 1) rule.nodes[static_cast<std::size_t>(count / 2)] = 0.0;
  return rule;
}

QuadratureGrid build_grid(const Submanifold& sub, int resolution, const GridOptions& options) {
  require_resolution(resolution);
  QuadratureGrid grid;
  grid.n = sub.n;
  grid.resolution = resolution;
  std::size_t considered = 0;
  for (std::size_t c = 0; c < sub.atlas.size(); ++c) {
    const auto& chart = sub.atlas[c];
    const ParameterBox box = effective_box(chart.domain, options);
    for_each_box_node(box, resolution, [&](const Point& u, double w) {
      const double aw = chart.weight(u);
      if (aw == 0.0) return;
      ++considered;
      const ImmersionJet jet = chart.eval(u);
      const int n = chart.n;
      Matrixd g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) g(i, j) = g(j, i) = sub.ambient.inner(jet.jacobian.col(i), jet.jacobian.col(j));
      Eigen::SelfAdjointEigenSolver<Matrixd> es(g, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(n - 1);
      if (!std::isfinite(lmax) || !(lmax > 0.0) || !(lmin > 1e-16 * lmax)) {
        grid.rejected.push_back({static_cast<int>(c), u, "degenerate immersion at " + point_string(u)});
        return;
      }
      grid.nodes.push_back({static_cast<int>(c), u, w * aw * std::sqrt(g.determinant())});
    });
  }
  check_rejections(grid, considered);
  return grid;
}

QuadratureGrid build_grid(const RiemannianManifold& mfd, int resolution, const GridOptions& options) {
  require_resolution(resolution);
  QuadratureGrid grid;
  grid.n = mfd.n;
  grid.resolution = resolution;
  std::size_t considered = 0;
  for (std::size_t c = 0; c < mfd.atlas.size(); ++c) {
    const auto& chart = mfd.atlas[c];
    const ParameterBox box = effective_box(chart.domain, options);
    for_each_box_node(box, resolution, [&](const Point& u, double w) {
      const double aw = chart.weight(u);
      if (aw == 0.0) return;
      ++considered;
      const MetricJet jet = chart.eval(u);
      Eigen::SelfAdjointEigenSolver<Matrixd> es(jet.g, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(jet.dim() - 1);
      if (!std::isfinite(lmax) || !(lmax > 0.0) || !(lmin > 1e-16 * lmax)) {
        grid.rejected.push_back({static_cast<int>(c), u, "degenerate metric at " + point_string(u)});
        return;
      }
      grid.nodes.push_back({static_cast<int>(c), u, w * aw * std::sqrt(jet.g.determinant())});
    });
  }
  check_rejections(grid, considered);
  return grid;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
  else comp_ += (x - t) + sum_;
  sum_ = t;
}

double integrate(const QuadratureGrid& grid, const std::vector<double>& values) {
  if (values.size() != grid.nodes.size()) throw ArgumentError("integrate: one value per node expected");
  CompensatedSum s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      std::ostringstream os;
      os << "non-finite integrand at node " << i << " (chart " << grid.nodes[i].chart << ", " << point_string(grid.nodes[i].u) << ")";
      throw NumericError(os.str());
    }
    s.add(grid.nodes[i].weight * values[i]);
  }
  return s.value();
}

double integrate(const QuadratureGrid& grid, const std::function<double(const QuadratureNode&)>& f) {
  std::vector<double> values;
  values.reserve(grid.nodes.size());
  for (const auto& node : grid.nodes) values.push_back(f(node));
  return integrate(grid, values);
}

Eigen::VectorXd integrate_vector(const QuadratureGrid& grid, const std::vector<Eigen::VectorXd>& values) {
  if (values.size() != grid.nodes.size()) throw ArgumentError("integrate_vector: one value per node expected");
  if (values.empty()) return {};
  const auto m = values.front().size();
  Eigen::VectorXd out(m);
  std::vector<double> column(values.size());
  for (Eigen::Index a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i].size() != m) throw ArgumentError("integrate_vector: inconsistent component counts");
      column[i] = values[i](a);
    }
    out(a) = integrate(grid, column);
  }
  return out;
}

double l2_deviation(const QuadratureGrid& grid, const std::vector<double>& values, double mean) {
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  return integrate(grid, sq);
}

double l2_deviation(const QuadratureGrid& grid, const std::vector<Eigen::VectorXd>& values, const Eigen::VectorXd& mean) {
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != mean.size()) throw ArgumentError("l2_deviation: component count mismatch");
    sq[i] = (values[i] - mean).squaredNorm();
  }
  return integrate(grid, sq);
}

void set_thread_count(unsigned threads) { g_threads = std::max(1u, threads); }
unsigned thread_count() { return g_threads; }

}  // namespace curvkit
