#pragma once

// Product quadrature over chart atlases with compensated, fixed-order sums.

#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "curvkit/charts.hpp"

namespace curvkit {

struct QuadratureNode {
  int chart = 0;
  Point u;
  /// Rule weight times sqrt(det g) times the chart's atlas weight.
  double weight = 0.0;
};

struct RejectedNode {
  int chart = 0;
  Point u;
  std::string reason;
};

struct QuadratureGrid {
  int n = 0;
  int resolution = 0;
  std::vector<QuadratureNode> nodes;
  std::vector<RejectedNode> rejected;

  std::size_t size() const { return nodes.size(); }
  double area() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int count);

struct GridOptions {
  /// Integrate only over this sub-box of every chart domain.
  std::optional<ParameterBox> restrict_to;
};

/// Tensor-product rule per chart: Gauss-Legendre on bounded axes, the
/// trapezoid rule on periodic axes, `resolution` nodes per axis.
QuadratureGrid build_grid(const Submanifold& sub, int resolution, const GridOptions& options = {});
QuadratureGrid build_grid(const RiemannianManifold& mfd, int resolution, const GridOptions& options = {});

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Weighted sum of per-node values, in node order.
double integrate(const QuadratureGrid& grid, const std::vector<double>& values);
double integrate(const QuadratureGrid& grid, const std::function<double(const QuadratureNode&)>& f);
/// Componentwise variant.
Eigen::VectorXd integrate_vector(const QuadratureGrid& grid, const std::vector<Eigen::VectorXd>& values);

/// Integral of |q - mean|^2 over the grid (q scalar or componentwise).
double l2_deviation(const QuadratureGrid& grid, const std::vector<double>& values, double mean);
double l2_deviation(const QuadratureGrid& grid, const std::vector<Eigen::VectorXd>& values,
                    const Eigen::VectorXd& mean);

/// Worker count used by parallel_map; 1 by default.
void set_thread_count(unsigned threads);
unsigned thread_count();

/// out[i] = f(i) for i < count, chunked over thread_count() workers.
/// Results are stored by index, so reductions over them stay deterministic.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t count, F&& f) {
  std::vector<T> out(count);
  const unsigned workers = std::max(1u, std::min<unsigned>(thread_count(), static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk, hi = std::min(count, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) out[i] = f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace curvkit
