#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "curvkit/analytic_charts.hpp"
#include "curvkit/curvature_functionals.hpp"
#include "curvkit/extrinsic_geometry.hpp"
#include "curvkit/intrinsic_geometry.hpp"
#include "curvkit/quadrature.hpp"

using namespace curvkit;

namespace {

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

}  // namespace

TEST(Christoffel, MetricCompatibility) {
  const auto m = random_trig_metric(3, 3, 0.1);
  const MetricJet j = m.atlas[0].eval(pt({0.3, 1.7, 4.4}));
  EXPECT_LT(metric_compatibility_residual(j, christoffel(j)), 1e-13);
  const auto s = round_sphere_metric(4);
  const MetricJet js = s.atlas[0].eval(pt({0.5, 1.0, 2.0, 3.0}));
  EXPECT_LT(metric_compatibility_residual(js, christoffel(js)), 1e-13);
}

TEST(Riemann, RoundSphereIsConstantCurvature) {
  for (int n = 2; n <= 5; ++n) {
    const double R = 1.7;
    const auto m = round_sphere_metric(n, R);
    Point u(n);
    for (int a = 0; a < n; ++a) u(a) = 0.4 + 0.3 * a;
    const auto ip = intrinsic_point(m.atlas[0], u);
    const auto b = unit_curvature_tensor(SymTensor2<double>::identity(n)) * (1.0 / (R * R));
    EXPECT_LT((ip.rm - b).max_abs(), 1e-12) << n;
    EXPECT_NEAR(ip.scalar, n * (n - 1) / (R * R), 1e-11);
    EXPECT_LT(ip.rm.symmetry_residual(), 1e-13);
    EXPECT_LT(ip.rm.bianchi_residual(), 1e-13);
  }
}

TEST(Riemann, FlatTorusVanishes) {
  const auto t = flat_torus({2 * M_PI, 2 * M_PI, 3.0});
  EXPECT_EQ(intrinsic_point(t.atlas[0], pt({0.1, 0.2, 0.3})).rm.max_abs(), 0.0);
}

TEST(Riemann, RequiresSecondDerivatives) {
  const auto s = ellipsoid({1, 1, 1.2});
  const MetricChart mc = induced_metric_chart(s.atlas[0], s.ambient);
  EXPECT_THROW(riemann(mc, pt({1.0, 1.0})), ArgumentError);
}

TEST(Riemann, RandomMetricSymmetries) {
  const auto m = random_trig_metric(4, 5, 0.1);
  const auto ip = intrinsic_point(m.atlas[0], pt({0.3, 1.7, 4.4, 2.2}));
  EXPECT_LT(ip.rm.symmetry_residual(), 1e-12 * std::max(1.0, ip.rm.max_abs()));
  EXPECT_LT(ip.rm.bianchi_residual(), 1e-12 * std::max(1.0, ip.rm.max_abs()));
}

TEST(ConformalMetric, ScalarCurvatureMatchesClosedForm) {
  // g = phi g0 on the unit S^n with phi = 1 + t x1:
  // R = phi^{-1} (R0 - (n-1) Delta0 log phi - (n-1)(n-2)/4 |grad0 log phi|^2).
  const int n = 4;
  const double t = 0.07;
  const auto base = round_sphere_metric(n);
  const auto m = conformal_manifold(base, coordinate_function(0), t);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> th(0.2, M_PI - 0.2), ph(0.0, 2 * M_PI);
  for (int trial = 0; trial < 30; ++trial) {
    Point u(n);
    for (int a = 0; a < n - 1; ++a) u(a) = th(rng);
    u(n - 1) = ph(rng);
    const double x1 = base.atlas[0].embedding(u).position(0);
    const double phi = 1 + t * x1;
    const double grad2 = t * t * (1 - x1 * x1);
    const double lap_log = -n * t * x1 / phi - grad2 / (phi * phi);
    const double expect = (n * (n - 1) - (n - 1) * lap_log - (n - 1) * (n - 2) / 4.0 * grad2 / (phi * phi)) / phi;
    EXPECT_NEAR(intrinsic_point(m.atlas[0], u).scalar, expect, 1e-11);
  }
}

TEST(ConformalMetric, WeylTensorVanishes) {
  const auto m = conformal_manifold(round_sphere_metric(4), coordinate_product(0, 1), 0.2);
  const auto ip = intrinsic_point(m.atlas[0], pt({0.7, 1.1, 2.0, 5.0}));
  const auto d = decompose(ip.rm, SymTensor2<double>::identity(4));
  EXPECT_LT(d.weyl.max_abs(), 1e-12);
  EXPECT_GT(d.traceless_ricci.matrix().norm(), 1e-3);
}

TEST(ConformalMetric, NonPositiveFactorIsRejected) {
  const auto base = round_sphere_metric(3);
  const auto grid = build_grid(base, 8);
  EXPECT_THROW(conformal_manifold(base, coordinate_function(0), 2.0, &grid), DomainError);
  const auto m = conformal_manifold(base, coordinate_function(0), 2.0);
  EXPECT_THROW(m.atlas[0].eval(pt({M_PI - 0.1, M_PI / 2, M_PI})), DomainError);
  EXPECT_EQ(conformal_manifold(base, coordinate_function(0), 0.0).atlas[0].eval(pt({1, 1, 1})).g,
            base.atlas[0].eval(pt({1, 1, 1})).g);
}

TEST(ProductMetric, SphereTimesCircleRicci) {
  const auto p = product_manifold(round_sphere_metric(2), circle_metric(2 * M_PI), "S2xS1");
  const auto ip = intrinsic_point(p.atlas[0], pt({1.0, 2.0, 3.0}));
  Eigen::SelfAdjointEigenSolver<Matrixd> es(ip.ricci.matrix());
  EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-13);
  EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-13);
  EXPECT_NEAR(es.eigenvalues()(2), 1.0, 1e-13);
  EXPECT_NEAR(ip.scalar, 2.0, 1e-13);
}

TEST(ProductMetric, SphereTimesSphereIsEinsteinWithWeyl) {
  const auto p = product_manifold(round_sphere_metric(2), round_sphere_metric(2), "S2xS2");
  const auto ip = intrinsic_point(p.atlas[0], pt({1.0, 2.0, 0.5, 3.0}));
  const auto d = decompose(ip.rm, SymTensor2<double>::identity(4));
  EXPECT_LT(d.traceless_ricci.matrix().norm(), 1e-13);
  double w2 = 0;
  for (double v : d.weyl.data()) w2 += v * v;
  // |W|^2 = |Rm|^2 - |scalar part|^2 = 8 - 8/3
  EXPECT_NEAR(w2, 16.0 / 3.0, 1e-12);
}

TEST(Divergence, EinsteinTensorIsDivergenceFree) {
  const auto m = random_trig_metric(3, 3, 0.1);
  const MetricChart& mc = m.atlas[0];
  const MixedTensorField e1 = [&](const Point& u) {
    const auto ip = intrinsic_point(mc, u);
    const Matrixd ric = ip.ricci.matrix();
    const Matrixd x = 0.5 * ip.scalar * Matrixd::Identity(3, 3) - ric;
    return mixed_from_orthonormal(x, ip.frame, ip.g.matrix());
  };
  const Point u = pt({0.4, 2.0, 5.0});
  const double r1 = intrinsic_point(mc, u).ricci.matrix().norm();
  const double d1 = covariant_divergence(e1, mc, u, 1e-2).norm();
  const double d2 = covariant_divergence(e1, mc, u, 5e-3).norm();
  EXPECT_LT(d2, 1e-3 * r1);
  EXPECT_GT(std::log2(d1 / d2), 1.9);
}

TEST(Divergence, NewtonTensorOnEllipsoid) {
  const auto s = ellipsoid({1, 1, 1.3});
  const MetricChart mc = induced_metric_chart(s.atlas[0], s.ambient);
  const MixedTensorField t1 = [&](const Point& u) {
    const auto pg = point_geometry(s.atlas[0], u, s.ambient);
    const auto t = newton_transform_hypersurface(pg.A.component(0), 1);
    return mixed_from_orthonormal(t.components[0], pg.frame, pg.g.matrix());
  };
  const Point u = pt({1.1, 0.7});
  const double d1 = covariant_divergence(t1, mc, u, 2e-2).norm();
  const double d2 = covariant_divergence(t1, mc, u, 1e-2).norm();
  EXPECT_LT(d2, 1e-3);
  EXPECT_GT(std::log2(d1 / d2), 1.9);
}

TEST(Divergence, StencilLeavingTheChart) {
  const auto m = round_sphere_metric(2);
  const MixedTensorField id = [](const Point&) { return Matrixd(Matrixd::Identity(2, 2)); };
  EXPECT_THROW(covariant_divergence(id, m.atlas[0], pt({0.01, 1.0}), 0.02), BoundaryError);
  EXPECT_NO_THROW(covariant_divergence(id, m.atlas[0], pt({1.0, 0.001}), 0.02));
  EXPECT_THROW(covariant_divergence(id, m.atlas[0], pt({1.0, 1.0}), 0.0), ArgumentError);
}

TEST(Frames, OrthonormalAndMixedComponents) {
  Matrixd g(2, 2);
  g << 2.0, 0.3, 0.3, 1.5;
  const Matrixd e = orthonormal_frame(g);
  EXPECT_LT((e.transpose() * g * e - Matrixd::Identity(2, 2)).norm(), 1e-14);
  EXPECT_EQ(e(1, 0), 0.0);
  const Matrixd mix = mixed_from_orthonormal(Matrixd::Identity(2, 2), e, g);
  EXPECT_LT((mix - Matrixd::Identity(2, 2)).norm(), 1e-14);
}
