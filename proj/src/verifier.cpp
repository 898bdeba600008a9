#include "curvkit/verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "curvkit/analytic_charts.hpp"
#include "curvkit/curvature_functionals.hpp"
#include "curvkit/extrinsic_geometry.hpp"
#include "curvkit/intrinsic_geometry.hpp"
#include "curvkit/quadrature.hpp"

namespace curvkit {

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::thm_main: return "thm_main";
    case Theorem::thm_R_i: return "thm_R_i";
    case Theorem::thm_R_ii: return "thm_R_ii";
    case Theorem::cor_B: return "cor_B";
    case Theorem::gwx: return "gwx";
    case Theorem::thm_main_rephrased: return "thm_main_rephrased";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::equality: return "equality";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

int severity(Verdict v) {
  switch (v) {
    case Verdict::equality: return 0;
    case Verdict::holds: return 1;
    case Verdict::inconclusive: return 2;
    case Verdict::violated: return 3;
  }
  return 3;
}

}  // namespace

Verdict combine(Verdict a, Verdict b) { return severity(a) >= severity(b) ? a : b; }

double constant_for(Theorem t, int n, int order) {
  const double nd = n;
  switch (t) {
    case Theorem::thm_main:
      if (order < 1 || order >= n) throw ArgumentError("thm_main constant needs 1 <= r < n");
      return nd * (nd - 1) / ((nd - order) * (nd - order));
    case Theorem::thm_R_i:
      if (n < 3) throw ArgumentError("thm_R constants need n >= 3");
      return 4 * nd * (nd - 1) / ((nd - 2) * (nd - 2));
    case Theorem::thm_R_ii:
      if (n < 3) throw ArgumentError("thm_R constants need n >= 3");
      return nd * (nd - 1) / (nd - 2);
    case Theorem::cor_B:
      if (n < 3) throw ArgumentError("cor_B constant needs n >= 3");
      return nd / (nd - 2);
    case Theorem::gwx:
      if (order < 1 || 2 * order >= n) throw ArgumentError("gwx constant needs 1 <= k < n/2");
      return 4 * nd * (nd - 1) / ((nd - 2 * order) * (nd - 2 * order));
    case Theorem::thm_main_rephrased: return nd;
  }
  throw ArgumentError("unknown theorem");
}

int default_resolution(int n) {
  if (n <= 2) return 48;
  if (n == 3) return 24;
  if (n == 4) return 12;
  return 8;
}

bool InequalityReport::checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

bool TaxonomyReport::consistent() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Check& c) { return c.passed; });
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kEqualityTol = 1e-10;
constexpr double kViolationSlack = 1e-6;
constexpr double kConvergenceTol = 1e-5;
constexpr double kTaxonomyTol = 1e-8;

struct Source {
  std::string name;
  int n = 0;
  const Submanifold* sub = nullptr;
  const RiemannianManifold* mfd = nullptr;
  AmbientSpace ambient;
  int resolution = 0;
};

Source source_of(const CatalogEntry& e) {
  Source s;
  s.name = e.name;
  s.n = e.n;
  s.sub = e.submanifold.get();
  s.mfd = e.metric.get();
  s.ambient = e.ambient;
  s.resolution = e.resolution;
  return s;
}

struct CurvSample {
  double R = 0, ric0 = 0, dev = 0, weyl2 = 0, rm2 = 0, ricmin = 0, ricabs = 0, chain_excess = 0;
  bool convex = true;
};

struct CurvatureData {
  std::vector<CurvSample> samples;
  double ricci_min = std::numeric_limits<double>::infinity();
  double ricci_scale = 0.0;
  bool convex = true;
  bool convexity_defined = false;
};

struct NewtonSample {
  AmbVectord H;
  AmbVectord trT;
  double t2 = 0, to2 = 0;
};

struct LovelockSample {
  double rk = 0, e2 = 0, eo2 = 0;
};

AlgCurvTensor4<double> node_curvature(const Source& s, const QuadratureNode& q, std::optional<PointGeometry>* pg_out) {
  if (s.sub) {
    const auto& chart = s.sub->atlas[static_cast<std::size_t>(q.chart)];
    PointGeometry pg = point_geometry(chart, q.u, chart.eval(q.u), s.ambient);
    AlgCurvTensor4<double> rm = gauss_riemann(pg, s.ambient);
    if (pg_out) *pg_out = std::move(pg);
    return rm;
  }
  return intrinsic_point(s.mfd->atlas[static_cast<std::size_t>(q.chart)], q.u).rm;
}

CurvSample curvature_sample(const AlgCurvTensor4<double>& rm, int n) {
  CurvSample c;
  Matrixd ric = Matrixd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) ric(j, l) += rm(i, j, i, l);
  ric = ((ric + ric.transpose()) / 2.0).eval();
  c.R = ric.trace();
  c.ric0 = (ric - (c.R / n) * Matrixd::Identity(n, n)).squaredNorm();
  const double a = c.R / (n * (n - 1.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = rm(i, j, k, l);
          const double b = (i == k && j == l ? 1.0 : 0.0) - (i == l && j == k ? 1.0 : 0.0);
          c.rm2 += v * v;
          c.dev += (v - a * b) * (v - a * b);
        }
  if (n >= 3) {
    const auto d = decompose(rm, SymTensor2<double>::identity(n));
    for (double w : d.weyl.data()) c.weyl2 += w * w;
    c.chain_excess = c.ric0 - (n - 2.0) / 4.0 * c.dev;
  }
  Eigen::SelfAdjointEigenSolver<Matrixd> es(ric, Eigen::EigenvaluesOnly);
  c.ricmin = es.eigenvalues()(0);
  c.ricabs = es.eigenvalues().cwiseAbs().maxCoeff();
  return c;
}

CurvatureData curvature_data(const Source& s, const QuadratureGrid& grid) {
  const int n = s.n;
  const bool hyper = s.sub && s.sub->codim() == 1;
  CurvatureData d;
  d.samples = parallel_map<CurvSample>(grid.size(), [&](std::size_t i) {
    std::optional<PointGeometry> pg;
    const auto rm = node_curvature(s, grid.nodes[i], hyper ? &pg : nullptr);
    CurvSample c = curvature_sample(rm, n);
    if (hyper && pg && pg->principal_curvatures) {
      const Vectord& k = *pg->principal_curvatures;
      const double tol = 1e-9 * std::max(1.0, k.cwiseAbs().maxCoeff());
      c.convex = k.minCoeff() >= -tol || k.maxCoeff() <= tol;
    }
    return c;
  });
  d.convexity_defined = hyper;
  for (const auto& c : d.samples) {
    d.ricci_min = std::min(d.ricci_min, c.ricmin);
    d.ricci_scale = std::max(d.ricci_scale, c.ricabs);
    d.convex = d.convex && c.convex;
  }
  return d;
}

std::vector<NewtonSample> newton_data(const Source& s, const QuadratureGrid& grid, int r) {
  const bool codim1 = s.sub->codim() == 1;
  const bool vector_mean = !codim1 && r % 2 == 1;
  return parallel_map<NewtonSample>(grid.size(), [&](std::size_t i) {
    const auto& q = grid.nodes[i];
    const auto& chart = s.sub->atlas[static_cast<std::size_t>(q.chart)];
    const PointGeometry pg = point_geometry(chart, q.u, chart.eval(q.u), s.ambient);
    const NewtonTensor<double> t = codim1 ? newton_transform_hypersurface(pg.A.component(0), r) : newton_transform(pg.A, r);
    const NewtonTensor<double> t0 = traceless_newton(t);
    NewtonSample ns;
    ns.t2 = t.norm2();
    ns.to2 = t0.norm2();
    if (vector_mean) {
      ns.H = pg.to_ambient(t.mean);
      ns.trT = pg.to_ambient(t.traces());
    } else {
      ns.H = t.mean;
      ns.trT = t.traces();
    }
    return ns;
  });
}

std::vector<LovelockSample> lovelock_data(const Source& s, const QuadratureGrid& grid, int k) {
  return parallel_map<LovelockSample>(grid.size(), [&](std::size_t i) {
    const auto rm = node_curvature(s, grid.nodes[i], nullptr);
    const auto lv = lovelock(rm, k);
    LovelockSample ls;
    ls.rk = lv.rk;
    ls.e2 = lv.ek.squaredNorm();
    ls.eo2 = traceless(lv.ek).squaredNorm();
    return ls;
  });
}

double weighted_mean(const QuadratureGrid& grid, const std::vector<double>& v) {
  return integrate(grid, v) / grid.area();
}

template <typename Sample, typename F>
std::vector<double> column(const std::vector<Sample>& samples, F&& f) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = f(samples[i]);
  return out;
}

double rel_diff(double a, double b, double floor) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor, 1e-300}); }

struct SideData {
  int N = 0;
  double lhs = 0, raw = 0, scale = 0;
};

struct Correction {
  double K = 0.0;
  bool user = false;
  std::optional<EigenvalueEstimate> lambda;
};

/// Turns side integrals at (N, 2N) into a report with verdict.
InequalityReport assemble(const std::string& case_name, Theorem th, int n, double constant, double coefficient,
                          const std::array<SideData, 2>& sides, const Correction& corr, const CertificateInfo& cert) {
  InequalityReport rep;
  rep.case_name = case_name;
  rep.theorem = th;
  rep.constant = constant;
  rep.certificate = cert;
  rep.lambda = corr.lambda;
  rep.exploratory = corr.user;
  rep.params["n"] = n;
  bool lambda_blocked = false;
  if (corr.K > 0.0) {
    if (!corr.lambda) {
      lambda_blocked = true;
      rep.notes.push_back("K > 0 and no eigenvalue estimate is available");
    } else {
      rep.correction = 1.0 + coefficient * corr.K / corr.lambda->value;
      if (corr.lambda->kind != EigenvalueKind::analytic) {
        lambda_blocked = true;
        rep.notes.push_back("K > 0 with only a Rayleigh upper bound for lambda; the correction factor is not certified");
      }
    }
  }

  std::array<bool, 2> eq{}, viol{};
  std::array<std::optional<double>, 2> ratios;
  for (int a = 0; a < 2; ++a) {
    const auto& sd = sides[static_cast<std::size_t>(a)];
    const double rhs = constant * rep.correction * sd.raw;
    const double tol = kEqualityTol * sd.scale;
    ResolutionSample rs{sd.N, sd.lhs, sd.raw, rhs, sd.scale};
    rep.resolutions.push_back(rs);
    eq[static_cast<std::size_t>(a)] = std::abs(sd.lhs) <= tol && std::abs(rhs) <= tol;
    if (rhs > tol) {
      ratios[static_cast<std::size_t>(a)] = sd.lhs / rhs;
      viol[static_cast<std::size_t>(a)] = sd.lhs / rhs > 1.0 + kViolationSlack;
    } else {
      viol[static_cast<std::size_t>(a)] = sd.lhs > tol;
    }
  }
  const auto& fine = rep.resolutions[1];
  rep.lhs = fine.lhs;
  rep.rhs_raw = fine.rhs_raw;
  rep.rhs = fine.rhs;
  rep.params["N"] = fine.N;

  const double floor = kEqualityTol * fine.scale;
  rep.converged = rel_diff(sides[0].lhs, sides[1].lhs, 0) <= kConvergenceTol ||
                  std::abs(sides[0].lhs - sides[1].lhs) <= floor;
  rep.converged = rep.converged && (rel_diff(sides[0].raw, sides[1].raw, 0) <= kConvergenceTol ||
                                    std::abs(sides[0].raw - sides[1].raw) * constant <= floor);

  if (eq[0] && eq[1]) {
    rep.verdict = Verdict::equality;
  } else {
    rep.ratio = ratios[1];
    if (viol[0] && viol[1])
      rep.verdict = Verdict::violated;
    else if (viol[0] || viol[1]) {
      rep.verdict = Verdict::inconclusive;
      rep.notes.push_back("violation at one resolution only");
    } else
      rep.verdict = Verdict::holds;
  }
  if (!rep.converged && rep.verdict != Verdict::violated) {
    rep.verdict = combine(rep.verdict, Verdict::inconclusive);
    rep.notes.push_back("relative change between N and 2N exceeds 1e-5");
  }
  if (lambda_blocked && rep.verdict != Verdict::equality) rep.verdict = combine(rep.verdict, Verdict::inconclusive);
  return rep;
}

void add_check(InequalityReport& rep, std::string name, double value, double tol) {
  rep.checks.push_back({std::move(name), value, tol, value <= tol});
  if (value > tol || !std::isfinite(value)) {
    rep.checks.back().passed = false;
    rep.verdict = combine(rep.verdict, Verdict::inconclusive);
    rep.notes.push_back("internal check failed: " + rep.checks.back().name);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

struct Verifier::Impl {
  std::map<std::pair<std::string, int>, std::shared_ptr<QuadratureGrid>> grids;
  std::map<std::pair<std::string, int>, std::shared_ptr<CurvatureData>> curvature;
  std::map<std::tuple<std::string, int, int>, std::shared_ptr<std::vector<NewtonSample>>> newton;
  std::map<std::tuple<std::string, int, int>, std::shared_ptr<std::vector<LovelockSample>>> lovelock;

  const QuadratureGrid& grid(const Source& s, int N) {
    auto& slot = grids[{s.name, N}];
    if (!slot) slot = std::make_shared<QuadratureGrid>(s.sub ? build_grid(*s.sub, N) : build_grid(*s.mfd, N));
    return *slot;
  }
  const CurvatureData& curv(const Source& s, int N) {
    auto& slot = curvature[{s.name, N}];
    if (!slot) slot = std::make_shared<CurvatureData>(curvature_data(s, grid(s, N)));
    return *slot;
  }
  const std::vector<NewtonSample>& newt(const Source& s, int N, int r) {
    auto& slot = newton[{s.name, N, r}];
    if (!slot) slot = std::make_shared<std::vector<NewtonSample>>(newton_data(s, grid(s, N), r));
    return *slot;
  }
  const std::vector<LovelockSample>& love(const Source& s, int N, int k) {
    auto& slot = lovelock[{s.name, N, k}];
    if (!slot) slot = std::make_shared<std::vector<LovelockSample>>(lovelock_data(s, grid(s, N), k));
    return *slot;
  }

  std::array<int, 2> resolutions(const Source& s, const VerifyOptions& o) const {
    const int N = o.resolution > 0 ? o.resolution : s.resolution > 0 ? s.resolution : default_resolution(s.n);
    return {N, 2 * N};
  }

  CertificateInfo certificate(const Source& s, const std::array<int, 2>& res) {
    CertificateInfo c;
    const auto& a = curv(s, res[0]);
    const auto& b = curv(s, res[1]);
    c.ricci_min = std::min(a.ricci_min, b.ricci_min);
    c.K = ricci_lower_bound_parameter(c.ricci_min, std::max(a.ricci_scale, b.ricci_scale), s.n);
    if (a.convexity_defined) c.convex = a.convex && b.convex;
    return c;
  }

  Correction correction(const Source& s, const VerifyOptions& o, CertificateInfo& cert, int N, const LambdaRegistry& reg) {
    Correction corr;
    corr.K = cert.K;
    if (o.user_K) {
      if (*o.user_K < 0.0) throw ArgumentError("K must be >= 0");
      corr.K = cert.K = *o.user_K;
      corr.user = cert.user_supplied = true;
    }
    corr.lambda = reg.find(s.name);
    if (!corr.lambda && corr.K > 0.0) {
      try {
        const auto& g = grid(s, N);
        const SpectralDomain dom = s.sub ? SpectralDomain(*s.sub, g) : SpectralDomain(*s.mfd, g);
        corr.lambda = rayleigh_lambda(dom, default_rayleigh_basis(dom.embedding_dim()));
      } catch (const std::exception&) {
        corr.lambda.reset();
      }
    }
    return corr;
  }

  std::pair<InequalityReport, InequalityReport> thm_R(const Source& s, const VerifyOptions& o, const LambdaRegistry& reg);
};

Verifier::Verifier(LambdaRegistry registry) : registry_(std::move(registry)), impl_(std::make_unique<Impl>()) {}
Verifier::~Verifier() = default;

void Verifier::clear_cache() { impl_ = std::make_unique<Impl>(); }

// ---------------------------------------------------------------------------

std::pair<InequalityReport, InequalityReport> Verifier::verify_thm_main(const CatalogEntry& entry, int r,
                                                                        const VerifyOptions& options) {
  if (!entry.immersed()) throw InadmissibleError("thm_main needs an immersed submanifold; '" + entry.name + "' is a metric");
  const Source s = source_of(entry);
  const int n = s.n;
  if (r < 1 || r > n - 1) throw InadmissibleError("thm_main needs 1 <= r <= n-1 (r=" + std::to_string(r) + ", n=" + std::to_string(n) + ")");
  const int codim = s.sub->codim();
  if (!(r % 2 == 0 || s.ambient.kind == AmbientKind::euclidean || codim == 1))
    throw InadmissibleError("thm_main with odd r in a curved ambient requires codimension 1 (r=" + std::to_string(r) +
                            ", codim=" + std::to_string(codim) + ")");

  const auto res = impl_->resolutions(s, options);
  CertificateInfo cert = impl_->certificate(s, res);
  const Correction corr = impl_->correction(s, options, cert, res[0], registry_);
  const double c = double(n - r) / n;

  std::array<SideData, 2> main_sides, alt_sides;
  double pyth_worst = 0.0;
  for (int a = 0; a < 2; ++a) {
    const int N = res[static_cast<std::size_t>(a)];
    const auto& grid = impl_->grid(s, N);
    const auto& ns = impl_->newt(s, N, r);
    const int dim = static_cast<int>(ns.front().H.size());
    Eigen::VectorXd hbar(dim);
    for (int j = 0; j < dim; ++j) hbar(j) = weighted_mean(grid, column(ns, [j](const NewtonSample& x) { return x.H(j); }));
    std::vector<double> dev(ns.size()), direct(ns.size()), scale(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const auto& x = ns[i];
      dev[i] = (x.H - hbar).squaredNorm();
      direct[i] = x.t2 - 2.0 * c * hbar.dot(x.trT) + c * c * n * hbar.squaredNorm();
      const double pyth = x.to2 + c * c * n * dev[i];
      pyth_worst = std::max(pyth_worst, std::abs(direct[i] - pyth) / std::max(x.t2 + c * c * n * hbar.squaredNorm(), 1e-300));
      scale[i] = x.H.squaredNorm() + x.t2;
    }
    const double S = integrate(grid, scale);
    main_sides[static_cast<std::size_t>(a)] = {N, integrate(grid, dev), integrate(grid, column(ns, [](const NewtonSample& x) { return x.to2; })), S};
    alt_sides[static_cast<std::size_t>(a)] = {N, integrate(grid, direct), main_sides[static_cast<std::size_t>(a)].raw, S};
  }

  InequalityReport main = assemble(entry.name, Theorem::thm_main, n, constant_for(Theorem::thm_main, n, r), n, main_sides, corr, cert);
  InequalityReport alt = assemble(entry.name, Theorem::thm_main_rephrased, n, constant_for(Theorem::thm_main_rephrased, n), n - 1,
                                  alt_sides, corr, cert);
  for (auto* rep : {&main, &alt}) {
    rep->params["r"] = r;
    rep->params["codim"] = codim;
    add_check(*rep, "pointwise Pythagoras |T - c mean(H) I|^2 = |T°|^2 + c^2 n |H - mean(H)|^2", pyth_worst, 1e-10);
  }
  if (main.ratio && alt.ratio && corr.K == 0.0) {
    const double predicted = 1.0 / n + (n - 1.0) / n * *main.ratio;
    add_check(alt, "rephrased ratio = 1/n + (n-1)/n * ratio", std::abs(*alt.ratio - predicted) / predicted, 1e-9);
  }
  if (r == 2 && n >= 3) {
    // R = 2 H_2 + n(n-1) c and E° = T°^2, so both sides match up to the factor 4 on the left.
    const InequalityReport g = verify_gwx(entry, 1, options);
    const double floor = kEqualityTol * g.resolutions[1].scale + 1e-300;
    const double d_lhs = std::abs(g.lhs - 4.0 * main.lhs) / std::max(std::abs(g.lhs), floor);
    const double d_rhs = std::abs(g.rhs_raw - main.rhs_raw) / std::max(std::abs(g.rhs_raw), floor);
    add_check(main, "sides agree with gwx k=1 of the induced metric", std::max(d_lhs, d_rhs), 1e-8);
  }
  return {std::move(main), std::move(alt)};
}

std::pair<InequalityReport, InequalityReport> Verifier::Impl::thm_R(const Source& s, const VerifyOptions& o,
                                                                     const LambdaRegistry& reg) {
  const int n = s.n;
  if (n < 3) throw InadmissibleError("thm_R needs n >= 3 (n=" + std::to_string(n) + ")");
  const auto res = resolutions(s, o);
  CertificateInfo cert = certificate(s, res);
  const Correction corr = correction(s, o, cert, res[0], reg);

  std::array<SideData, 2> si, sii;
  double chain_worst = 0.0;
  double chain_integral_excess = -std::numeric_limits<double>::infinity();
  const double c1 = constant_for(Theorem::thm_R_i, n), c2 = constant_for(Theorem::thm_R_ii, n);
  for (int a = 0; a < 2; ++a) {
    const int N = res[static_cast<std::size_t>(a)];
    const auto& grid = this->grid(s, N);
    const auto& cd = curv(s, N);
    const auto R = column(cd.samples, [](const CurvSample& x) { return x.R; });
    const double rbar = weighted_mean(grid, R);
    const double S = integrate(grid, column(cd.samples, [](const CurvSample& x) { return x.R * x.R + x.rm2; }));
    const double lhs = l2_deviation(grid, R, rbar);
    const double ric0 = integrate(grid, column(cd.samples, [](const CurvSample& x) { return x.ric0; }));
    const double dev = integrate(grid, column(cd.samples, [](const CurvSample& x) { return x.dev; }));
    si[static_cast<std::size_t>(a)] = {N, lhs, ric0, S};
    sii[static_cast<std::size_t>(a)] = {N, lhs, dev, S};
    for (const auto& x : cd.samples) chain_worst = std::max(chain_worst, x.chain_excess / std::max(x.rm2 + x.R * x.R, 1e-300));
    chain_integral_excess = std::max(chain_integral_excess, (c1 * ric0 - c2 * dev) / std::max(S, 1e-300));
  }
  InequalityReport ri = assemble(s.name, Theorem::thm_R_i, n, c1, n, si, corr, cert);
  InequalityReport rii = assemble(s.name, Theorem::thm_R_ii, n, c2, n, sii, corr, cert);
  for (auto* rep : {&ri, &rii}) {
    add_check(*rep, "pointwise |Ric°|^2 <= (n-2)/4 |Rm - R/(n(n-1)) B|^2", chain_worst, 1e-10);
    add_check(*rep, "C1 int |Ric°|^2 <= C2 int |Rm - R/(n(n-1)) B|^2", chain_integral_excess, 1e-10);
  }
  return {std::move(ri), std::move(rii)};
}

std::pair<InequalityReport, InequalityReport> Verifier::verify_thm_R(const CatalogEntry& entry, const VerifyOptions& options) {
  return impl_->thm_R(source_of(entry), options, registry_);
}

InequalityReport Verifier::verify_cor_B(const CatalogEntry& entry, const VerifyOptions& options) {
  const Source s = source_of(entry);
  const int n = s.n;
  if (n < 3) throw InadmissibleError("cor_B needs n >= 3 (n=" + std::to_string(n) + ")");
  const auto res = impl_->resolutions(s, options);
  CertificateInfo cert = impl_->certificate(s, res);
  const Correction corr = impl_->correction(s, options, cert, res[0], registry_);
  const double nn1 = n * (n - 1.0);

  std::array<SideData, 2> sides;
  double pyth_worst = 0.0;
  for (int a = 0; a < 2; ++a) {
    const int N = res[static_cast<std::size_t>(a)];
    const auto& grid = impl_->grid(s, N);
    const auto& cd = impl_->curv(s, N);
    const auto R = column(cd.samples, [](const CurvSample& x) { return x.R; });
    const double rbar = weighted_mean(grid, R);
    const double ab = rbar / nn1;
    std::vector<double> direct(cd.samples.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      const auto& x = cd.samples[i];
      direct[i] = x.rm2 - 4.0 * ab * x.R + 2.0 * nn1 * ab * ab;
      const double pyth = x.dev + 2.0 / nn1 * (x.R - rbar) * (x.R - rbar);
      pyth_worst = std::max(pyth_worst, std::abs(direct[i] - pyth) / std::max(x.rm2 + 2.0 * nn1 * ab * ab, 1e-300));
    }
    const double S = integrate(grid, column(cd.samples, [](const CurvSample& x) { return x.R * x.R + x.rm2; }));
    sides[static_cast<std::size_t>(a)] = {N, integrate(grid, direct),
                                          integrate(grid, column(cd.samples, [](const CurvSample& x) { return x.dev; })), S};
  }
  InequalityReport rep = assemble(entry.name, Theorem::cor_B, n, constant_for(Theorem::cor_B, n), 2, sides, corr, cert);
  add_check(rep, "pointwise Pythagoras |Rm - mean(R) B/(n(n-1))|^2 = |Rm - R B/(n(n-1))|^2 + 2 (R - mean(R))^2/(n(n-1))",
            pyth_worst, 1e-10);
  return rep;
}

InequalityReport Verifier::verify_gwx(const CatalogEntry& entry, int k, const VerifyOptions& options) {
  const Source s = source_of(entry);
  const int n = s.n;
  if (k < 1 || 2 * k >= n) throw InadmissibleError("gwx needs 1 <= k < n/2 (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  const auto res = impl_->resolutions(s, options);
  CertificateInfo cert = impl_->certificate(s, res);
  const Correction corr = impl_->correction(s, options, cert, res[0], registry_);

  std::array<SideData, 2> sides;
  for (int a = 0; a < 2; ++a) {
    const int N = res[static_cast<std::size_t>(a)];
    const auto& grid = impl_->grid(s, N);
    const auto& ls = impl_->love(s, N, k);
    const auto rk = column(ls, [](const LovelockSample& x) { return x.rk; });
    const double S = integrate(grid, column(ls, [](const LovelockSample& x) { return x.rk * x.rk + x.e2; }));
    sides[static_cast<std::size_t>(a)] = {N, l2_deviation(grid, rk, weighted_mean(grid, rk)),
                                          integrate(grid, column(ls, [](const LovelockSample& x) { return x.eo2; })), S};
  }
  InequalityReport rep = assemble(entry.name, Theorem::gwx, n, constant_for(Theorem::gwx, n, k), n, sides, corr, cert);
  rep.params["k"] = k;
  if (k == 1) {
    const auto ri = impl_->thm_R(s, options, registry_).first;
    const double floor = kEqualityTol * rep.resolutions[1].scale;
    const double d_lhs = std::abs(ri.lhs - rep.lhs) / std::max(std::abs(ri.lhs), floor + 1e-300);
    const double d_rhs = std::abs(ri.rhs_raw - rep.rhs_raw) / std::max(std::abs(ri.rhs_raw), floor + 1e-300);
    add_check(rep, "k=1 agrees with thm_R (i)", std::max(d_lhs, d_rhs), 1e-10);
  }
  return rep;
}

// ---------------------------------------------------------------------------

SweepResult Verifier::sharpness_sweep(int n, const std::string& f_id, double t_min, double t_max, int steps,
                                      const VerifyOptions& options) {
  if (n < 3) throw ArgumentError("sharpness sweep needs n >= 3");
  if (steps < 1) throw ArgumentError("sweep needs at least one step");
  if (!(t_max >= t_min)) throw ArgumentError("sweep needs t_max >= t_min");
  const AmbientFunction f = basis_function(f_id);
  const RiemannianManifold base = round_sphere_metric(n, 1.0);
  SweepResult out;
  out.base = "S" + std::to_string(n);
  out.f_id = f.id;
  const double c1 = constant_for(Theorem::thm_R_i, n), c2 = constant_for(Theorem::thm_R_ii, n);
  VerifyOptions opt = options;
  opt.user_K.reset();
  const int N = opt.resolution > 0 ? opt.resolution : default_resolution(n);
  const QuadratureGrid check_grid = build_grid(base, 2 * N);

  for (int step = 0; step < steps; ++step) {
    const double t = steps == 1 ? t_min : t_min + (t_max - t_min) * step / (steps - 1);
    SweepRow row;
    row.t = t;
    RiemannianManifold m = conformal_manifold(base, f, t, &check_grid);
    std::ostringstream name;
    name.precision(17);
    name << out.base << "+sweep(" << f.id << "," << t << ")";
    m.name = name.str();
    Source s;
    s.name = m.name;
    s.n = n;
    s.mfd = &m;
    Impl local;
    auto [ri, rii] = local.thm_R(s, opt, registry_);
    row.ricci_min = ri.certificate.ricci_min;
    const auto& fine = local.curv(s, 2 * N);
    row.weyl_l2 = std::sqrt(integrate(local.grid(s, 2 * N), column(fine.samples, [](const CurvSample& x) { return x.weyl2; })));
    if (!(row.ricci_min > 0.0)) {
      row.excluded = true;
      row.verdict = Verdict::inconclusive;
      out.rows.push_back(row);
      continue;
    }
    row.ratio_i = ri.ratio;
    row.ratio_ii = rii.ratio;
    row.verdict = combine(ri.verdict, rii.verdict);
    if (ri.ratio && rii.ratio) {
      row.identity_residual = std::abs(c1 * ri.rhs_raw - c2 * rii.rhs_raw) / std::max(c1 * ri.rhs_raw, 1e-300);
      if (row.identity_residual > 1e-6) row.verdict = combine(row.verdict, Verdict::inconclusive);
    }
    out.rows.push_back(row);
  }
  std::optional<double> prev;
  for (const auto& row : out.rows) {
    if (row.excluded || !row.ratio_i) continue;
    if (!out.max_ratio || *row.ratio_i > *out.max_ratio) out.max_ratio = row.ratio_i;
    if (prev && *row.ratio_i < *prev) out.monotone = false;
    prev = row.ratio_i;
  }
  return out;
}

// ---------------------------------------------------------------------------

TaxonomyReport Verifier::equality_taxonomy(const CatalogEntry& entry, const VerifyOptions& options) {
  TaxonomyReport tr;
  tr.case_name = entry.name;
  tr.truth = entry.truth;
  const Source s = source_of(entry);
  const int n = s.n;
  const auto res = impl_->resolutions(s, options);
  const int N = res[1];
  const auto& grid = impl_->grid(s, N);
  const auto& cd = impl_->curv(s, N);
  const double S = integrate(grid, column(cd.samples, [](const CurvSample& x) { return x.R * x.R + x.rm2; }));
  const double tol = kTaxonomyTol * std::max(S, 1e-300);
  const auto R = column(cd.samples, [](const CurvSample& x) { return x.R; });
  const double rdev = l2_deviation(grid, R, weighted_mean(grid, R));

  if (n >= 3) {
    tr.computed.einstein = integrate(grid, column(cd.samples, [](const CurvSample& x) { return x.ric0; })) <= tol;
    tr.computed.weyl_free = integrate(grid, column(cd.samples, [](const CurvSample& x) { return x.weyl2; })) <= tol;
  }
  tr.computed.constant_curvature =
      integrate(grid, column(cd.samples, [](const CurvSample& x) { return x.dev; })) <= tol && rdev <= tol;
  if (s.sub) {
    const auto& ns = impl_->newt(s, N, 1);
    const double sc = integrate(grid, column(ns, [](const NewtonSample& x) { return x.t2 + x.H.squaredNorm(); }));
    tr.computed.umbilic = integrate(grid, column(ns, [](const NewtonSample& x) { return x.to2; })) <= kTaxonomyTol * sc;
  }

  auto assert_iff = [&](const std::string& what, const InequalityReport& rep, std::optional<bool> flag) {
    if (!flag) return;
    const bool eq = rep.verdict == Verdict::equality;
    tr.assertions.push_back({what, eq == *flag ? 0.0 : 1.0, 0.0, eq == *flag});
  };
  auto assert_truth = [&](const std::string& what, std::optional<bool> computed, std::optional<bool> truth) {
    if (!computed || !truth) return;
    tr.assertions.push_back({what, *computed == *truth ? 0.0 : 1.0, 0.0, *computed == *truth});
  };

  if (s.sub && n >= 2) {
    auto main = verify_thm_main(entry, 1, options).first;
    assert_iff("thm_main r=1 equality <=> umbilic", main, tr.computed.umbilic);
    tr.reports.push_back(std::move(main));
  }
  if (n >= 3) {
    auto [ri, rii] = verify_thm_R(entry, options);
    assert_iff("thm_R (i) equality <=> Einstein", ri, tr.computed.einstein);
    assert_iff("thm_R (ii) equality <=> constant curvature", rii, tr.computed.constant_curvature);
    auto cb = verify_cor_B(entry, options);
    assert_iff("cor_B equality <=> constant curvature", cb, tr.computed.constant_curvature);
    tr.reports.push_back(std::move(ri));
    tr.reports.push_back(std::move(rii));
    tr.reports.push_back(std::move(cb));
  }
  assert_truth("umbilic flag matches ground truth", tr.computed.umbilic, tr.truth.umbilic);
  assert_truth("Einstein flag matches ground truth", tr.computed.einstein, tr.truth.einstein);
  assert_truth("Weyl-free flag matches ground truth", tr.computed.weyl_free, tr.truth.weyl_free);
  assert_truth("constant-curvature flag matches ground truth", tr.computed.constant_curvature, tr.truth.constant_curvature);
  return tr;
}

}  // namespace curvkit
