#include "curvkit/analytic_charts.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace curvkit {

namespace {

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Separable products: coef * prod_a f_a(omega_a u_a), f in {sin, cos, sin^2}.

enum class Kind { sin, cos, sin2 };

struct Factor {
  int axis;
  Kind kind;
  double freq = 1.0;
};

struct Term {
  double coef = 1.0;
  std::vector<Factor> factors;
};

struct ScalarJet {
  double value = 0.0;
  Vectord grad;
  Matrixd hess;
};

ScalarJet eval_term(const Term& term, const Point& u) {
  const int n = static_cast<int>(u.size());
  Vectord val = Vectord::Ones(n), d1 = Vectord::Zero(n), d2 = Vectord::Zero(n);
  for (const auto& f : term.factors) {
    const double w = f.freq, x = w * u(f.axis);
    double v = 0.0, a = 0.0, b = 0.0;
    switch (f.kind) {
      case Kind::sin: v = std::sin(x), a = w * std::cos(x), b = -w * w * std::sin(x); break;
      case Kind::cos: v = std::cos(x), a = -w * std::sin(x), b = -w * w * std::cos(x); break;
      case Kind::sin2: v = std::sin(x) * std::sin(x), a = w * std::sin(2 * x), b = 2 * w * w * std::cos(2 * x); break;
    }
    val(f.axis) *= v;
    d1(f.axis) = a;
    d2(f.axis) = b;
  }
  ScalarJet out;
  out.grad = Vectord::Zero(n);
  out.hess = Matrixd::Zero(n, n);
  auto prod_except = [&](int skip1, int skip2) {
    double p = term.coef;
    for (int a = 0; a < n; ++a)
      if (a != skip1 && a != skip2) p *= val(a);
    return p;
  };
  out.value = prod_except(-1, -1);
  for (int b = 0; b < n; ++b) {
    if (d1(b) == 0.0 && d2(b) == 0.0) continue;
    out.grad(b) = d1(b) * prod_except(b, -1);
    out.hess(b, b) = d2(b) * prod_except(b, -1);
    for (int d = b + 1; d < n; ++d) out.hess(b, d) = out.hess(d, b) = d1(b) * d1(d) * prod_except(b, d);
  }
  return out;
}

ImmersionJet eval_components(const std::vector<Term>& comps, const Point& u) {
  const int n = static_cast<int>(u.size());
  const int m = static_cast<int>(comps.size());
  ImmersionJet jet;
  jet.position = AmbVectord(m);
  jet.jacobian = AmbMatrixd(m, n);
  jet.hessian.assign(static_cast<std::size_t>(n * n), AmbVectord::Zero(m));
  for (int c = 0; c < m; ++c) {
    const ScalarJet s = eval_term(comps[static_cast<std::size_t>(c)], u);
    jet.position(c) = s.value;
    jet.jacobian.row(c) = s.grad.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) jet.hessian[static_cast<std::size_t>(i * n + j)](c) = s.hess(i, j);
  }
  return jet;
}

// Unit S^n in polar form: axis n-1 is the azimuth, the rest are polar angles.
// Component c: prod_{a < min(c, n-1)} sin(u_a) times cos(u_c) (c < n) or
// sin(u_{n-1}) (c = n).
std::vector<Term> unit_sphere_terms(int n, int first_axis = 0, double radius = 1.0) {
  std::vector<Term> comps;
  for (int c = 0; c <= n; ++c) {
    Term t;
    t.coef = radius;
    for (int a = 0; a < std::min(c, n - 1); ++a) t.factors.push_back({first_axis + a, Kind::sin});
    if (c < n) t.factors.push_back({first_axis + c, Kind::cos});
    else t.factors.push_back({first_axis + n - 1, Kind::sin});
    comps.push_back(t);
  }
  return comps;
}

ParameterBox polar_box(int n) {
  ParameterBox box;
  for (int a = 0; a < n - 1; ++a) {
    box.lower.push_back(0.0);
    box.upper.push_back(kPi);
    box.periodic.push_back(false);
  }
  box.lower.push_back(0.0);
  box.upper.push_back(2 * kPi);
  box.periodic.push_back(true);
  return box;
}

ParameterBox concat(const ParameterBox& a, const ParameterBox& b) {
  ParameterBox out = a;
  out.lower.insert(out.lower.end(), b.lower.begin(), b.lower.end());
  out.upper.insert(out.upper.end(), b.upper.begin(), b.upper.end());
  out.periodic.insert(out.periodic.end(), b.periodic.begin(), b.periodic.end());
  return out;
}

Term constant_term(double c) { return Term{c, {}}; }

void require_n(int n, int lo, int extra_ambient) {
  if (n < lo || n > kMaxDim || n + 1 + extra_ambient > kMaxAmbient)
    throw ArgumentError("unsupported dimension n = " + std::to_string(n));
}

ImmersionChart separable_chart(int n, std::vector<Term> comps, ParameterBox box) {
  ImmersionChart chart;
  chart.n = n;
  chart.m = static_cast<int>(comps.size());
  chart.domain = std::move(box);
  chart.eval = [comps = std::move(comps)](const Point& u) { return eval_components(comps, u); };
  chart.orientation_center = AmbVectord::Zero(chart.m);
  return chart;
}

// Inverse stereographic projection from the pole with sign `pole` (+1 north).
ImmersionJet stereographic_jet(const Point& y, double pole, double radius) {
  const int n = static_cast<int>(y.size());
  const int m = n + 1;
  const double s = 1.0 + y.squaredNorm();
  const double s2 = s * s, s3 = s2 * s;
  ImmersionJet jet;
  jet.position = AmbVectord(m);
  jet.jacobian = AmbMatrixd::Zero(m, n);
  jet.hessian.assign(static_cast<std::size_t>(n * n), AmbVectord::Zero(m));
  for (int i = 0; i < n; ++i) jet.position(i) = 2.0 * y(i) / s;
  jet.position(n) = pole * (1.0 - 2.0 / s);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jet.jacobian(i, j) = 2.0 * double(i == j) / s - 4.0 * y(i) * y(j) / s2;
  for (int j = 0; j < n; ++j) jet.jacobian(n, j) = pole * 4.0 * y(j) / s2;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      AmbVectord& h = jet.hessian[static_cast<std::size_t>(j * n + k)];
      for (int i = 0; i < n; ++i)
        h(i) = -4.0 * (double(i == j) * y(k) + double(i == k) * y(j) + double(j == k) * y(i)) / s2 +
               16.0 * y(i) * y(j) * y(k) / s3;
      h(n) = pole * (4.0 * double(j == k) / s2 - 16.0 * y(j) * y(k) / s3);
    }
  jet.position *= radius;
  jet.jacobian *= radius;
  for (auto& h : jet.hessian) h *= radius;
  return jet;
}

// Atlas weight of a stereographic chart: 1 deep in the hemisphere opposite
// its projection pole, 0 within height h0 of the pole side.
double stereographic_weight(const Point& y, double h0) {
  const double s = 1.0 + y.squaredNorm();
  const double height = 1.0 - 2.0 / s;  // signed height towards the projection pole
  return 1.0 - smoothstep((height + h0) / (2.0 * h0));
}

ParameterBox stereographic_box(int n, double h0) {
  const double half = std::sqrt((1.0 + h0) / (1.0 - h0));
  return ParameterBox::cube(n, -half, half, false);
}

// Degree-4 forms on R^m as monomial lists.
struct Monomial {
  double coef;
  std::vector<int> exps;
};

std::vector<Monomial> random_quartic(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<Monomial> out;
  std::vector<int> e(static_cast<std::size_t>(m), 0);
  // all exponent vectors with |e| = 4, lexicographic
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m - 1) {
      e[static_cast<std::size_t>(pos)] = left;
      out.push_back({dist(rng), e});
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<std::size_t>(pos)] = k;
      rec(pos + 1, left - k);
    }
  };
  rec(0, 4);
  double total = 0.0;
  for (const auto& mo : out) total += std::abs(mo.coef);
  for (auto& mo : out) mo.coef /= total;
  return out;
}

void eval_form(const std::vector<Monomial>& form, const AmbVectord& x, double& value, AmbVectord& grad,
               Eigen::MatrixXd& hess) {
  const int m = static_cast<int>(x.size());
  value = 0.0;
  grad = AmbVectord::Zero(m);
  hess = Eigen::MatrixXd::Zero(m, m);
  auto ipow = [](double b, int e) {
    double r = 1.0;
    for (int k = 0; k < e; ++k) r *= b;
    return r;
  };
  for (const auto& mo : form) {
    std::vector<double> p(static_cast<std::size_t>(m)), dp(static_cast<std::size_t>(m)), ddp(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
      const int e = mo.exps[static_cast<std::size_t>(a)];
      p[static_cast<std::size_t>(a)] = ipow(x(a), e);
      dp[static_cast<std::size_t>(a)] = e >= 1 ? e * ipow(x(a), e - 1) : 0.0;
      ddp[static_cast<std::size_t>(a)] = e >= 2 ? e * (e - 1) * ipow(x(a), e - 2) : 0.0;
    }
    auto prod_except = [&](int s1, int s2) {
      double r = mo.coef;
      for (int a = 0; a < m; ++a)
        if (a != s1 && a != s2) r *= p[static_cast<std::size_t>(a)];
      return r;
    };
    value += prod_except(-1, -1);
    for (int a = 0; a < m; ++a) {
      grad(a) += dp[static_cast<std::size_t>(a)] * prod_except(a, -1);
      hess(a, a) += ddp[static_cast<std::size_t>(a)] * prod_except(a, -1);
      for (int b = a + 1; b < m; ++b) {
        const double v = dp[static_cast<std::size_t>(a)] * dp[static_cast<std::size_t>(b)] * prod_except(a, b);
        hess(a, b) += v;
        hess(b, a) += v;
      }
    }
  }
}

MetricChart diagonal_metric_chart(int n, std::vector<Term> diag, ParameterBox box) {
  MetricChart chart;
  chart.n = n;
  chart.domain = std::move(box);
  chart.eval = [diag = std::move(diag), n](const Point& u) {
    MetricJet jet;
    jet.g = Matrixd::Zero(n, n);
    jet.dg.assign(static_cast<std::size_t>(n), Matrixd::Zero(n, n));
    jet.ddg.assign(static_cast<std::size_t>(n * n), Matrixd::Zero(n, n));
    for (int a = 0; a < n; ++a) {
      const ScalarJet s = eval_term(diag[static_cast<std::size_t>(a)], u);
      jet.g(a, a) = s.value;
      for (int k = 0; k < n; ++k) {
        jet.dg[static_cast<std::size_t>(k)](a, a) = s.grad(k);
        for (int l = 0; l < n; ++l) jet.ddg[static_cast<std::size_t>(k * n + l)](a, a) = s.hess(k, l);
      }
    }
    return jet;
  };
  return chart;
}

}  // namespace

double smoothstep(double t, int q) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // t^{q+1} sum_k C(q+k, k) C(2q+1, q-k) (-t)^k
  auto binom = [](int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  double s = 0.0, pw = 1.0;
  for (int k = 0; k <= q; ++k) {
    s += binom(q + k, k) * binom(2 * q + 1, q - k) * pw;
    pw *= -t;
  }
  return std::pow(t, q + 1) * s;
}

Submanifold round_sphere(int n, double radius) {
  require_n(n, 1, 0);
  if (!(radius > 0)) throw ArgumentError("sphere radius must be positive");
  Submanifold s;
  std::ostringstream name;
  name << "S" << n;
  if (radius != 1.0) name << "(" << radius << ")";
  s.name = name.str();
  s.n = n;
  s.m = n + 1;
  s.ambient = AmbientSpace::euclidean();
  s.atlas.push_back(separable_chart(n, unit_sphere_terms(n, 0, radius), polar_box(n)));
  return s;
}

Submanifold round_sphere_stereographic(int n, double radius, double h0) {
  require_n(n, 1, 0);
  if (!(h0 > 0.0 && h0 < 1.0)) throw ArgumentError("stereographic switching band must satisfy 0 < h0 < 1");
  Submanifold s;
  s.name = "S" + std::to_string(n) + "-stereo";
  s.n = n;
  s.m = n + 1;
  s.ambient = AmbientSpace::euclidean();
  for (double pole : {1.0, -1.0}) {
    ImmersionChart chart;
    chart.n = n;
    chart.m = n + 1;
    chart.domain = stereographic_box(n, h0);
    chart.eval = [pole, radius](const Point& y) { return stereographic_jet(y, pole, radius); };
    chart.atlas_weight = [h0](const Point& y) { return stereographic_weight(y, h0); };
    chart.orientation_center = AmbVectord::Zero(n + 1);
    s.atlas.push_back(std::move(chart));
  }
  return s;
}

Submanifold ellipsoid(const std::vector<double>& axes) {
  const int n = static_cast<int>(axes.size()) - 1;
  require_n(n, 1, 0);
  for (double a : axes)
    if (!(a > 0)) throw ArgumentError("ellipsoid semi-axes must be positive");
  auto comps = unit_sphere_terms(n);
  for (int c = 0; c <= n; ++c) comps[static_cast<std::size_t>(c)].coef = axes[static_cast<std::size_t>(c)];
  Submanifold s;
  std::ostringstream name;
  name << "ellipsoid(";
  for (std::size_t c = 0; c < axes.size(); ++c) name << (c ? "," : "") << axes[c];
  name << ")";
  s.name = name.str();
  s.n = n;
  s.m = n + 1;
  s.ambient = AmbientSpace::euclidean();
  s.atlas.push_back(separable_chart(n, std::move(comps), polar_box(n)));
  return s;
}

Submanifold quartic_sphere(int n, std::uint64_t seed, double eps) {
  require_n(n, 1, 0);
  const auto form = random_quartic(n + 1, seed);
  const auto sphere = unit_sphere_terms(n);
  Submanifold s;
  std::ostringstream name;
  name << "quartic-S" << n << "(seed=" << seed << ",eps=" << eps << ")";
  s.name = name.str();
  s.n = n;
  s.m = n + 1;
  s.ambient = AmbientSpace::euclidean();
  ImmersionChart chart = separable_chart(n, sphere, polar_box(n));
  chart.eval = [sphere, form, eps, n](const Point& u) {
    const ImmersionJet X = eval_components(sphere, u);
    double q;
    AmbVectord dq;
    Eigen::MatrixXd hq;
    eval_form(form, X.position, q, dq, hq);
    const double rho = 1.0 + eps * q;
    Vectord drho(n);
    for (int i = 0; i < n; ++i) drho(i) = eps * dq.dot(X.jacobian.col(i));
    ImmersionJet F;
    F.position = rho * X.position;
    F.jacobian = AmbMatrixd(n + 1, n);
    for (int i = 0; i < n; ++i) F.jacobian.col(i) = drho(i) * X.position + rho * X.jacobian.col(i);
    F.hessian.resize(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const AmbVectord& xij = X.second(i, j);
        const double rij = eps * (X.jacobian.col(i).dot(hq * X.jacobian.col(j)) + dq.dot(xij));
        F.hessian[static_cast<std::size_t>(i * n + j)] =
            rij * X.position + drho(i) * X.jacobian.col(j) + drho(j) * X.jacobian.col(i) + rho * xij;
      }
    return F;
  };
  s.atlas.push_back(std::move(chart));
  return s;
}

Submanifold product_torus(double a, double b) {
  if (!(a > 0 && b > 0)) throw ArgumentError("torus radii must be positive");
  std::vector<Term> comps = {{a, {{0, Kind::cos}}}, {a, {{0, Kind::sin}}}, {b, {{1, Kind::cos}}}, {b, {{1, Kind::sin}}}};
  Submanifold s;
  std::ostringstream name;
  name << "torus(" << a << "," << b << ")";
  s.name = name.str();
  s.n = 2;
  s.m = 4;
  s.ambient = AmbientSpace::euclidean();
  s.atlas.push_back(separable_chart(2, std::move(comps), ParameterBox::cube(2, 0.0, 2 * kPi, true)));
  return s;
}

namespace {

// a (cos u0, sin u0) x b S^2(u1, u2), plus optional constant tail.
std::vector<Term> circle_sphere_terms(double a, double b) {
  std::vector<Term> comps = {{a, {{0, Kind::cos}}}, {a, {{0, Kind::sin}}}};
  for (auto t : unit_sphere_terms(2, 1, b)) comps.push_back(t);
  return comps;
}

ParameterBox circle_sphere_box() {
  ParameterBox circle{{0.0}, {2 * kPi}, {true}};
  return concat(circle, polar_box(2));
}

}  // namespace

Submanifold circle_times_sphere(double a, double b) {
  if (!(a > 0 && b > 0)) throw ArgumentError("radii must be positive");
  Submanifold s;
  std::ostringstream name;
  name << "S1xS2(" << a << "," << b << ")";
  s.name = name.str();
  s.n = 3;
  s.m = 5;
  s.ambient = AmbientSpace::euclidean();
  s.atlas.push_back(separable_chart(3, circle_sphere_terms(a, b), circle_sphere_box()));
  return s;
}

Submanifold latitude_sphere(int n, double rho) {
  require_n(n, 1, 1);
  if (!(rho > 0 && rho < 1)) throw ArgumentError("latitude sphere radius must lie in (0, 1)");
  auto comps = unit_sphere_terms(n, 0, rho);
  comps.push_back(constant_term(std::sqrt(1.0 - rho * rho)));
  Submanifold s;
  std::ostringstream name;
  name << "latitude-S" << n << "(" << rho << ")";
  s.name = name.str();
  s.n = n;
  s.m = n + 2;
  s.ambient = AmbientSpace::sphere(1.0);
  ImmersionChart chart = separable_chart(n, std::move(comps), polar_box(n));
  chart.orientation_center = AmbVectord::Zero(n + 2);
  chart.orientation_center(n + 1) = 1.0;
  s.atlas.push_back(std::move(chart));
  return s;
}

Submanifold clifford_hypersurface(double a) {
  if (!(a > 0 && a < 1)) throw ArgumentError("Clifford radius must lie in (0, 1)");
  const double b = std::sqrt(1.0 - a * a);
  Submanifold s;
  std::ostringstream name;
  name << "clifford-S1xS2(" << a << ")";
  s.name = name.str();
  s.n = 3;
  s.m = 5;
  s.ambient = AmbientSpace::sphere(1.0);
  ImmersionChart chart = separable_chart(3, circle_sphere_terms(a, b), circle_sphere_box());
  chart.orientation_reference = [a, b](const ImmersionJet& jet) {
    AmbVectord r = jet.position;
    r.head(2) *= b / a;
    r.tail(3) *= -a / b;
    return r;
  };
  s.atlas.push_back(std::move(chart));
  return s;
}

Submanifold hyperbolic_geodesic_sphere(int n, double r) {
  require_n(n, 1, 1);
  if (!(r > 0)) throw ArgumentError("geodesic radius must be positive");
  auto comps = unit_sphere_terms(n, 0, std::sinh(r));
  comps.push_back(constant_term(std::cosh(r)));
  Submanifold s;
  std::ostringstream name;
  name << "H" << n + 1 << "-sphere(" << r << ")";
  s.name = name.str();
  s.n = n;
  s.m = n + 2;
  s.ambient = AmbientSpace::hyperbolic(1.0);
  ImmersionChart chart = separable_chart(n, std::move(comps), polar_box(n));
  chart.orientation_center = AmbVectord::Zero(n + 2);
  chart.orientation_center(n + 1) = 1.0;
  s.atlas.push_back(std::move(chart));
  return s;
}

RiemannianManifold round_sphere_metric(int n, double radius) {
  require_n(n, 1, 0);
  std::vector<Term> diag;
  for (int a = 0; a < n; ++a) {
    Term t;
    t.coef = radius * radius;
    for (int b = 0; b < a; ++b) t.factors.push_back({b, Kind::sin2});
    diag.push_back(t);
  }
  MetricChart chart = diagonal_metric_chart(n, std::move(diag), polar_box(n));
  const auto emb = unit_sphere_terms(n, 0, radius);
  chart.embedding = [emb](const Point& u) { return eval_components(emb, u); };
  chart.embedding_dim = n + 1;
  RiemannianManifold m;
  std::ostringstream name;
  name << "S" << n;
  if (radius != 1.0) name << "(" << radius << ")";
  m.name = name.str();
  m.n = n;
  m.atlas.push_back(std::move(chart));
  m.embedding_dim = n + 1;
  return m;
}

RiemannianManifold round_sphere_metric_stereographic(int n, double radius, double h0) {
  require_n(n, 1, 0);
  RiemannianManifold m;
  m.name = "S" + std::to_string(n) + "-stereo";
  m.n = n;
  m.embedding_dim = n + 1;
  for (double pole : {1.0, -1.0}) {
    MetricChart chart;
    chart.n = n;
    chart.domain = stereographic_box(n, h0);
    chart.eval = [n, radius](const Point& y) {
      const double s = 1.0 + y.squaredNorm();
      const double R2 = radius * radius;
      const double phi = 4.0 * R2 / (s * s);
      MetricJet jet;
      const Matrixd I = Matrixd::Identity(n, n);
      jet.g = phi * I;
      jet.dg.resize(static_cast<std::size_t>(n));
      jet.ddg.resize(static_cast<std::size_t>(n * n));
      for (int k = 0; k < n; ++k) jet.dg[static_cast<std::size_t>(k)] = (-16.0 * R2 * y(k) / (s * s * s)) * I;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          jet.ddg[static_cast<std::size_t>(k * n + l)] =
              (-16.0 * R2 * double(k == l) / (s * s * s) + 96.0 * R2 * y(k) * y(l) / (s * s * s * s)) * I;
      return jet;
    };
    chart.atlas_weight = [h0](const Point& y) { return stereographic_weight(y, h0); };
    chart.embedding = [pole, radius](const Point& y) { return stereographic_jet(y, pole, radius); };
    chart.embedding_dim = n + 1;
    m.atlas.push_back(std::move(chart));
  }
  return m;
}

namespace {

std::vector<Term> circle_embedding_terms(const std::vector<double>& lengths) {
  std::vector<Term> comps;
  for (std::size_t a = 0; a < lengths.size(); ++a) {
    const double w = 2 * kPi / lengths[a];
    const double r = 1.0 / w;
    comps.push_back({r, {{static_cast<int>(a), Kind::cos, w}}});
    comps.push_back({r, {{static_cast<int>(a), Kind::sin, w}}});
  }
  return comps;
}

}  // namespace

RiemannianManifold flat_torus(const std::vector<double>& lengths) {
  const int n = static_cast<int>(lengths.size());
  if (n < 1 || n > kMaxDim || 2 * n > kMaxAmbient) throw ArgumentError("unsupported flat torus dimension");
  ParameterBox box;
  for (double L : lengths) {
    if (!(L > 0)) throw ArgumentError("torus side lengths must be positive");
    box.lower.push_back(0.0);
    box.upper.push_back(L);
    box.periodic.push_back(true);
  }
  MetricChart chart;
  chart.n = n;
  chart.domain = box;
  chart.eval = [n](const Point&) {
    MetricJet jet;
    jet.g = Matrixd::Identity(n, n);
    jet.dg.assign(static_cast<std::size_t>(n), Matrixd::Zero(n, n));
    jet.ddg.assign(static_cast<std::size_t>(n * n), Matrixd::Zero(n, n));
    return jet;
  };
  const auto emb = circle_embedding_terms(lengths);
  chart.embedding = [emb](const Point& u) { return eval_components(emb, u); };
  chart.embedding_dim = 2 * n;
  RiemannianManifold m;
  std::ostringstream name;
  name << "T" << n << "(";
  for (int a = 0; a < n; ++a) name << (a ? "," : "") << lengths[static_cast<std::size_t>(a)];
  name << ")";
  m.name = name.str();
  m.n = n;
  m.atlas.push_back(std::move(chart));
  m.embedding_dim = 2 * n;
  return m;
}

RiemannianManifold circle_metric(double length) {
  RiemannianManifold m = flat_torus({length});
  std::ostringstream name;
  name << "S1(" << length / (2 * kPi) << ")";
  m.name = name.str();
  return m;
}

RiemannianManifold random_trig_metric(int n, std::uint64_t seed, double eps) {
  if (n < 1 || n > kMaxDim || 2 * n > kMaxAmbient) throw ArgumentError("unsupported torus dimension");
  if (!(eps >= 0.0 && eps < 1.0)) throw ArgumentError("trigonometric perturbation needs 0 <= eps < 1");
  struct Mode {
    Vectord k;
    double phase;
    Matrixd s;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> freq(-1, 1);
  std::vector<Mode> modes;
  double total = 0.0;
  for (int q = 0; q < 4; ++q) {
    Mode mode;
    mode.k = Vectord::Zero(n);
    while (mode.k.cwiseAbs().sum() == 0.0)
      for (int a = 0; a < n; ++a) mode.k(a) = freq(rng);
    mode.phase = kPi * unit(rng);
    Matrixd s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) s(i, j) = s(j, i) = unit(rng);
    total += s.operatorNorm();
    mode.s = s;
    modes.push_back(mode);
  }
  for (auto& mode : modes) mode.s /= total;
  MetricChart chart;
  chart.n = n;
  chart.domain = ParameterBox::cube(n, 0.0, 2 * kPi, true);
  chart.eval = [modes, eps, n](const Point& u) {
    MetricJet jet;
    jet.g = Matrixd::Identity(n, n);
    jet.dg.assign(static_cast<std::size_t>(n), Matrixd::Zero(n, n));
    jet.ddg.assign(static_cast<std::size_t>(n * n), Matrixd::Zero(n, n));
    for (const auto& mode : modes) {
      const double x = mode.k.dot(u) + mode.phase;
      const double c = std::cos(x), s = std::sin(x);
      jet.g += eps * c * mode.s;
      for (int k = 0; k < n; ++k) {
        jet.dg[static_cast<std::size_t>(k)] -= eps * s * mode.k(k) * mode.s;
        for (int l = 0; l < n; ++l) jet.ddg[static_cast<std::size_t>(k * n + l)] -= eps * c * mode.k(k) * mode.k(l) * mode.s;
      }
    }
    return jet;
  };
  const auto emb = circle_embedding_terms(std::vector<double>(static_cast<std::size_t>(n), 2 * kPi));
  chart.embedding = [emb](const Point& u) { return eval_components(emb, u); };
  chart.embedding_dim = 2 * n;
  RiemannianManifold m;
  std::ostringstream name;
  name << "trig-T" << n << "(seed=" << seed << ",eps=" << eps << ")";
  m.name = name.str();
  m.n = n;
  m.atlas.push_back(std::move(chart));
  m.embedding_dim = 2 * n;
  return m;
}

}  // namespace curvkit
