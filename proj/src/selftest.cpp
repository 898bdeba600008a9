#include "curvkit/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "curvkit/catalog.hpp"
#include "curvkit/curvature_functionals.hpp"
#include "curvkit/extrinsic_geometry.hpp"
#include "curvkit/quadrature.hpp"
#include "curvkit/spectral.hpp"
#include "curvkit/tensor_algebra.hpp"
#include "curvkit/verifier.hpp"

namespace curvkit {

namespace {

Matrixd random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Matrixd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = d(rng);
  return (m + m.transpose()) / 2.0;
}

AlgCurvTensor4<double> random_curvature(int n, std::mt19937_64& rng) {
  AlgCurvTensor4<double> rm(n);
  for (int t = 0; t < 3; ++t)
    rm += kulkarni_nomizu(SymTensor2<double>(random_symmetric(n, rng)), SymTensor2<double>(random_symmetric(n, rng)));
  return rm;
}

double sum_sq(const AlgCurvTensor4<double>& t) {
  double s = 0;
  for (double v : t.data()) s += v * v;
  return s;
}

SelftestItem run(const std::string& name, const std::function<std::string(bool&)>& body) {
  SelftestItem item{name, false, ""};
  try {
    bool ok = false;
    item.detail = body(ok);
    item.passed = ok;
  } catch (const std::exception& e) {
    item.detail = std::string("exception: ") + e.what();
  }
  return item;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

std::vector<SelftestItem> run_selftest() {
  std::vector<SelftestItem> out;
  std::mt19937_64 rng(20240531);

  out.push_back(run("Kulkarni-Nomizu norm of g and a traceless S", [&](bool& ok) {
    double worst = 0;
    for (int n = 3; n <= 5; ++n)
      for (int t = 0; t < 50; ++t) {
        const Matrixd s = traceless(random_symmetric(n, rng));
        const auto kn = kulkarni_nomizu(SymTensor2<double>::identity(n), SymTensor2<double>(s));
        const double expect = 4.0 * (n - 2) * s.squaredNorm();
        worst = std::max(worst, std::abs(sum_sq(kn) - expect) / expect);
      }
    ok = worst < 1e-11;
    return "max relative error " + fmt(worst);
  }));

  out.push_back(run("curvature decomposition and traceless Ricci chain", [&](bool& ok) {
    double reassembly = 0, chain = -1;
    for (int n = 3; n <= 5; ++n)
      for (int t = 0; t < 50; ++t) {
        const auto rm = random_curvature(n, rng);
        const auto g = SymTensor2<double>::identity(n);
        const auto d = decompose(rm, g);
        reassembly = std::max(reassembly, (d.scalar_part + d.ricci_part + d.weyl - rm).max_abs() / rm.max_abs());
        auto dev = rm - unit_curvature_tensor(g) * (d.scalar_curvature / (n * (n - 1.0)));
        const double lhs = d.traceless_ricci.matrix().squaredNorm();
        chain = std::max(chain, (lhs - (n - 2.0) / 4.0 * sum_sq(dev)) / sum_sq(rm));
      }
    ok = reassembly < 1e-10 && chain <= 1e-11;
    return "reassembly " + fmt(reassembly) + ", worst chain excess " + fmt(chain);
  }));

  out.push_back(run("sigma_r fast path against epsilon contraction", [&](bool& ok) {
    double worst = 0;
    for (int n = 2; n <= 5; ++n)
      for (int r = 1; r < n; ++r)
        for (int t = 0; t < 10; ++t) {
          const Matrixd a = random_symmetric(n, rng);
          const auto slow = newton_transform(VecValuedSym2<double>::scalar(a), r);
          const auto fast = newton_transform_hypersurface(a, r);
          const double scale = std::max(1.0, slow.components[0].norm());
          worst = std::max(worst, (slow.components[0] - fast.components[0]).norm() / scale);
          worst = std::max(worst, std::abs(slow.mean(0) - fast.mean(0)) / std::max(1.0, std::abs(slow.mean(0))));
        }
    ok = worst < 1e-11;
    return "max relative difference " + fmt(worst);
  }));

  const Catalog catalog = Catalog::builtin();

  out.push_back(run("Gauss-Bonnet on ellipsoid-1.3", [&](bool& ok) {
    const auto& e = catalog.at("ellipsoid-1.3");
    const auto grid = build_grid(*e.submanifold, 32);
    const double total = integrate(grid, [&](const QuadratureNode& q) {
      const auto& chart = e.submanifold->atlas[static_cast<std::size_t>(q.chart)];
      const auto pg = point_geometry(chart, q.u, chart.eval(q.u), e.ambient);
      return gauss_riemann(pg, e.ambient)(0, 1, 0, 1);
    });
    const double err = std::abs(total - 4 * M_PI) / (4 * M_PI);
    ok = err < 1e-8;
    return "relative error " + fmt(err);
  }));

  out.push_back(run("Einstein-Newton bridge on ellipsoid3-1.3", [&](bool& ok) {
    const auto& e = catalog.at("ellipsoid3-1.3");
    const auto grid = build_grid(*e.submanifold, 8);
    double worst = 0;
    for (const auto& q : grid.nodes) {
      const auto& chart = e.submanifold->atlas[static_cast<std::size_t>(q.chart)];
      worst = std::max(worst, einstein_newton_bridge(point_geometry(chart, q.u, chart.eval(q.u), e.ambient), e.ambient, 1));
    }
    ok = worst < 1e-9;
    return "max entry residual " + fmt(worst);
  }));

  out.push_back(run("Laplacian of coordinate functions on S2", [&](bool& ok) {
    const auto& e = catalog.at("S2");
    const auto grid = build_grid(*e.submanifold, 16);
    const SpectralDomain dom(*e.submanifold, grid);
    double worst = 0;
    for (int i = 0; i < 3; ++i) worst = std::max(worst, eigenfunction_residual(dom, coordinate_function(i), 2.0));
    ok = worst < 1e-8;
    return "max |Delta x_i + 2 x_i| " + fmt(worst);
  }));

  out.push_back(run("round S3 equality verdicts", [&](bool& ok) {
    Verifier v;
    VerifyOptions o;
    o.resolution = 8;
    const auto& e = catalog.at("S3");
    const auto [ri, rii] = v.verify_thm_R(e, o);
    const auto cb = v.verify_cor_B(e, o);
    const auto tm = v.verify_thm_main(e, 1, o).first;
    ok = ri.verdict == Verdict::equality && rii.verdict == Verdict::equality && cb.verdict == Verdict::equality &&
         tm.verdict == Verdict::equality && ri.checks_pass() && cb.checks_pass() && tm.checks_pass();
    return "verdicts " + to_string(ri.verdict) + ", " + to_string(rii.verdict) + ", " + to_string(cb.verdict) + ", " +
           to_string(tm.verdict);
  }));

  out.push_back(run("ellipsoid-1.3 thm_main r=1 holds", [&](bool& ok) {
    Verifier v;
    VerifyOptions o;
    o.resolution = 32;
    const auto rep = v.verify_thm_main(catalog.at("ellipsoid-1.3"), 1, o).first;
    ok = rep.verdict == Verdict::holds && rep.checks_pass() && rep.certificate.K == 0.0;
    return "ratio " + (rep.ratio ? fmt(*rep.ratio) : std::string("n/a")) + ", verdict " + to_string(rep.verdict);
  }));

  return out;
}

}  // namespace curvkit
