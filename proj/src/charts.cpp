#include "curvkit/charts.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

namespace curvkit {

bool ParameterBox::contains(const Point& u) const {
  if (u.size() != dim()) return false;
  for (int a = 0; a < dim(); ++a) {
    if (periodic[static_cast<std::size_t>(a)]) continue;
    if (u(a) < lower[static_cast<std::size_t>(a)] || u(a) > upper[static_cast<std::size_t>(a)]) return false;
  }
  return true;
}

ParameterBox ParameterBox::cube(int n, double lo, double hi, bool periodic) {
  return {std::vector<double>(static_cast<std::size_t>(n), lo), std::vector<double>(static_cast<std::size_t>(n), hi),
          std::vector<bool>(static_cast<std::size_t>(n), periodic)};
}

void AmbientSpace::validate() const {
  switch (kind) {
    case AmbientKind::euclidean:
      if (c != 0.0) throw ArgumentError("euclidean ambient must have c = 0");
      break;
    case AmbientKind::sphere:
      if (!(c > 0.0)) throw ArgumentError("sphere ambient must have c > 0");
      break;
    case AmbientKind::hyperbolic:
      if (!(c < 0.0)) throw ArgumentError("hyperbolic ambient must have c < 0");
      break;
  }
}

double AmbientSpace::inner(const AmbVectord& a, const AmbVectord& b) const {
  double s = a.dot(b);
  if (kind == AmbientKind::hyperbolic) {
    const auto last = a.size() - 1;
    s -= 2.0 * a(last) * b(last);
  }
  return s;
}

std::string to_string(AmbientKind kind) {
  switch (kind) {
    case AmbientKind::euclidean: return "euclidean";
    case AmbientKind::sphere: return "sphere";
    case AmbientKind::hyperbolic: return "hyperbolic";
  }
  return "?";
}

AmbientKind ambient_kind_from_string(const std::string& s) {
  if (s == "euclidean") return AmbientKind::euclidean;
  if (s == "sphere") return AmbientKind::sphere;
  if (s == "hyperbolic") return AmbientKind::hyperbolic;
  throw ArgumentError("unknown ambient kind '" + s + "'");
}

ChartFunctionJet AmbientFunction::pull_back(const ImmersionJet& jet) const {
  const int n = static_cast<int>(jet.jacobian.cols());
  ChartFunctionJet out;
  out.value = value(jet.position);
  const AmbVectord gr = grad(jet.position);
  const Eigen::MatrixXd h = hess(jet.position);
  out.grad = jet.jacobian.transpose() * gr;
  out.hess = Matrixd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = jet.jacobian.col(i).dot(h * jet.jacobian.col(j)) + gr.dot(jet.second(i, j));
      out.hess(i, j) = out.hess(j, i) = v;
    }
  return out;
}

AmbientFunction coordinate_function(int i) {
  AmbientFunction f;
  f.id = "x" + std::to_string(i + 1);
  f.value = [i](const AmbVectord& x) {
    if (i >= x.size()) throw ArgumentError("coordinate index exceeds embedding dimension");
    return x(i);
  };
  f.grad = [i](const AmbVectord& x) {
    AmbVectord g = AmbVectord::Zero(x.size());
    g(i) = 1.0;
    return g;
  };
  f.hess = [](const AmbVectord& x) { return Eigen::MatrixXd::Zero(x.size(), x.size()).eval(); };
  return f;
}

AmbientFunction coordinate_product(int i, int j) {
  AmbientFunction f;
  f.id = "x" + std::to_string(i + 1) + "x" + std::to_string(j + 1);
  f.value = [i, j](const AmbVectord& x) {
    if (std::max(i, j) >= x.size()) throw ArgumentError("coordinate index exceeds embedding dimension");
    return x(i) * x(j);
  };
  f.grad = [i, j](const AmbVectord& x) {
    AmbVectord g = AmbVectord::Zero(x.size());
    g(i) += x(j);
    g(j) += x(i);
    return g;
  };
  f.hess = [i, j](const AmbVectord& x) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
    h(i, j) += 1.0;
    h(j, i) += 1.0;
    return h;
  };
  return f;
}

AmbientFunction basis_function(const std::string& id) {
  static const std::regex single(R"(x(\d+))");
  static const std::regex pair(R"(x(\d+)x(\d+))");
  std::smatch m;
  if (std::regex_match(id, m, single)) {
    const int i = std::stoi(m[1]) - 1;
    if (i < 0) throw ArgumentError("basis function index is 1-based: '" + id + "'");
    return coordinate_function(i);
  }
  if (std::regex_match(id, m, pair)) {
    const int i = std::stoi(m[1]) - 1;
    const int j = std::stoi(m[2]) - 1;
    if (i < 0 || j < 0) throw ArgumentError("basis function index is 1-based: '" + id + "'");
    return coordinate_product(i, j);
  }
  throw ArgumentError("unknown basis function id '" + id + "' (expected x<i> or x<i>x<j>)");
}

}  // namespace curvkit
