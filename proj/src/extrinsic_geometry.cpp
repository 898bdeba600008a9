#include "curvkit/extrinsic_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvkit/quadrature.hpp"

namespace curvkit {

namespace {

// Ambient-model normal space: orthogonal (in the ambient inner product) to
// the tangent space and, for curved ambients, to the position vector.
// Candidates are the ambient coordinate axes; at every step the axis with
// the largest remaining component is taken, ties broken by index.
std::vector<AmbVectord> normal_frame(const AmbientSpace& ambient, const AmbVectord& position,
                                     const std::vector<AmbVectord>& tangent, int codim) {
  const int m = static_cast<int>(position.size());
  std::vector<AmbVectord> basis;  // ambient-orthonormal, with signs
  std::vector<double> signs;
  for (const auto& t : tangent) {
    basis.push_back(t);
    signs.push_back(1.0);
  }
  if (ambient.kind != AmbientKind::euclidean) {
    const double pp = ambient.inner(position, position);
    basis.push_back(position / std::sqrt(std::abs(pp)));
    signs.push_back(pp > 0 ? 1.0 : -1.0);
  }
  auto project = [&](AmbVectord v) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t b = 0; b < basis.size(); ++b) v -= signs[b] * ambient.inner(v, basis[b]) * basis[b];
    return v;
  };
  std::vector<AmbVectord> normals;
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  for (int alpha = 0; alpha < codim; ++alpha) {
    int best = -1;
    double best_norm = -1.0;
    AmbVectord best_vec;
    for (int a = 0; a < m; ++a) {
      if (used[static_cast<std::size_t>(a)]) continue;
      AmbVectord e = AmbVectord::Zero(m);
      e(a) = 1.0;
      const AmbVectord v = project(e);
      const double nv = ambient.inner(v, v);
      if (nv > best_norm + 1e-12) {
        best = a;
        best_norm = nv;
        best_vec = v;
      }
    }
    if (best < 0 || !(best_norm > 1e-20)) throw DegenerateImmersionError("normal frame construction failed");
    used[static_cast<std::size_t>(best)] = true;
    AmbVectord nu = best_vec / std::sqrt(best_norm);
    nu = project(nu);
    nu /= std::sqrt(ambient.inner(nu, nu));
    basis.push_back(nu);
    signs.push_back(1.0);
    normals.push_back(nu);
  }
  return normals;
}

}  // namespace

AmbVectord PointGeometry::to_ambient(const AmbVector<double>& normal_components) const {
  AmbVectord out = AmbVectord::Zero(position.size());
  for (int a = 0; a < normal_components.size(); ++a) out += normal_components(a) * normal_frame[static_cast<std::size_t>(a)];
  return out;
}

PointGeometry point_geometry(const ImmersionChart& chart, const Point& u, const AmbientSpace& ambient) {
  if (!chart.domain.contains(u)) throw DomainError("parameter point outside the chart domain");
  return point_geometry(chart, u, chart.eval(u), ambient);
}

PointGeometry point_geometry(const ImmersionChart& chart, const Point& u, const ImmersionJet& jet,
                             const AmbientSpace& ambient) {
  const int n = chart.n;
  const int m = chart.m;
  const int codim = m - ambient.model_codim() - n;
  if (codim < 1) throw ArgumentError("immersion has no normal directions");
  if (jet.jacobian.rows() != m || jet.jacobian.cols() != n)
    throw ArgumentError("immersion jet has the wrong shape");

  PointGeometry pg;
  pg.u = u;
  pg.position = jet.position;

  std::vector<AmbVectord> tangent;
  for (int i = 0; i < n; ++i) tangent.push_back(jet.jacobian.col(i));
  Matrixd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g(i, j) = g(j, i) = ambient.inner(tangent[static_cast<std::size_t>(i)], tangent[static_cast<std::size_t>(j)]);

  Eigen::SelfAdjointEigenSolver<Matrixd> eig(g, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0), lmax = eig.eigenvalues()(n - 1);
  if (!(lmax > 0.0) || !(lmin > 1e-16 * lmax))
    throw DegenerateImmersionError("immersion Jacobian is rank deficient at the requested point");

  pg.g = SymTensor2<double>(g);
  pg.ginv = SymTensor2<double>(metric_inverse(pg.g));
  Eigen::LLT<Matrixd> llt(pg.g.matrix());
  const Matrixd L = llt.matrixL();
  pg.frame = L.transpose().triangularView<Eigen::Upper>().solve(Matrixd::Identity(n, n));

  std::vector<AmbVectord> onb_tangent;
  for (int a = 0; a < n; ++a) {
    AmbVectord e = AmbVectord::Zero(m);
    for (int i = 0; i < n; ++i) e += pg.frame(i, a) * tangent[static_cast<std::size_t>(i)];
    onb_tangent.push_back(e);
  }
  pg.normal_frame = normal_frame(ambient, jet.position, onb_tangent, codim);

  if (codim == 1) {
    const AmbVectord d = chart.orientation_reference
                             ? chart.orientation_reference(jet)
                             : AmbVectord(jet.position - (chart.orientation_center.size() == m ? chart.orientation_center
                                                                                               : AmbVectord::Zero(m)));
    if (ambient.inner(pg.normal_frame[0], d) < 0.0) pg.normal_frame[0] = -pg.normal_frame[0];
  }

  std::vector<Matrixd> coord(static_cast<std::size_t>(codim), Matrixd::Zero(n, n));
  for (int al = 0; al < codim; ++al)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = -ambient.inner(jet.second(i, j), pg.normal_frame[static_cast<std::size_t>(al)]);
        coord[static_cast<std::size_t>(al)](i, j) = coord[static_cast<std::size_t>(al)](j, i) = v;
      }
  std::vector<Matrixd> onb(static_cast<std::size_t>(codim));
  for (int al = 0; al < codim; ++al)
    onb[static_cast<std::size_t>(al)] = pg.frame.transpose() * coord[static_cast<std::size_t>(al)] * pg.frame;
  pg.A_coord = VecValuedSym2<double>(std::move(coord));
  pg.A = VecValuedSym2<double>(std::move(onb));

  if (codim == 1) {
    Eigen::SelfAdjointEigenSolver<Matrixd> shape(pg.A.component(0), Eigen::EigenvaluesOnly);
    pg.principal_curvatures = Vectord(shape.eigenvalues());
  }
  return pg;
}

Vectord principal_curvatures(const PointGeometry& pg) {
  if (pg.codim() != 1 || !pg.principal_curvatures)
    throw UnsupportedCodimensionError("principal curvatures need codimension 1 (got " + std::to_string(pg.codim()) + ")");
  return *pg.principal_curvatures;
}

AlgCurvTensor4<double> gauss_riemann(const PointGeometry& pg, const AmbientSpace& ambient) {
  const int n = pg.dim();
  AlgCurvTensor4<double> rm(n);
  const auto& A = pg.A;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = A.pair(i, k, j, l) - A.pair(i, l, j, k);
          if (ambient.c != 0.0) v += ambient.c * (double(i == k && j == l) - double(i == l && j == k));
          rm(i, j, k, l) = v;
        }
  return rm;
}

MetricJet induced_metric_jet(const ImmersionJet& jet, const AmbientSpace& ambient) {
  const int n = static_cast<int>(jet.jacobian.cols());
  MetricJet out;
  out.g = Matrixd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.g(i, j) = out.g(j, i) = ambient.inner(jet.jacobian.col(i), jet.jacobian.col(j));
  out.dg.assign(static_cast<std::size_t>(n), Matrixd(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = ambient.inner(jet.second(k, i), jet.jacobian.col(j)) + ambient.inner(jet.jacobian.col(i), jet.second(k, j));
        out.dg[static_cast<std::size_t>(k)](i, j) = out.dg[static_cast<std::size_t>(k)](j, i) = v;
      }
  return out;
}

MetricChart induced_metric_chart(const ImmersionChart& chart, const AmbientSpace& ambient) {
  MetricChart mc;
  mc.n = chart.n;
  mc.domain = chart.domain;
  mc.atlas_weight = chart.atlas_weight;
  mc.embedding = chart.eval;
  mc.embedding_dim = chart.m;
  const ImmersionEval eval = chart.eval;
  mc.eval = [eval, ambient](const Point& u) { return induced_metric_jet(eval(u), ambient); };
  return mc;
}

double ricci_lower_bound_parameter(double ricci_min, double scale, int n) {
  if (n < 2) throw ArgumentError("Ricci bound needs n >= 2");
  if (ricci_min >= -1e-9 * std::max(scale, 1e-300)) return 0.0;
  return -ricci_min / double(n - 1);
}

RicciCertificate ricci_bound_certificate(const Submanifold& sub, const QuadratureGrid& grid) {
  RicciCertificate cert;
  cert.ricci_min = std::numeric_limits<double>::infinity();
  cert.convexity_defined = sub.codim() == 1;
  cert.convex = cert.convexity_defined;
  const int n = sub.n;
  const Matrixd id = Matrixd::Identity(n, n);
  for (const auto& node : grid.nodes) {
    const auto& chart = sub.atlas[static_cast<std::size_t>(node.chart)];
    const PointGeometry pg = point_geometry(chart, node.u, chart.eval(node.u), sub.ambient);
    const auto ric = ricci_contraction(gauss_riemann(pg, sub.ambient), id);
    Eigen::SelfAdjointEigenSolver<Matrixd> es(ric.matrix(), Eigen::EigenvaluesOnly);
    cert.ricci_min = std::min(cert.ricci_min, es.eigenvalues()(0));
    cert.curvature_scale = std::max(cert.curvature_scale, es.eigenvalues().cwiseAbs().maxCoeff());
    if (cert.convexity_defined) {
      const Vectord k = *pg.principal_curvatures;
      const double kscale = std::max(k.cwiseAbs().maxCoeff(), 1e-300);
      if (k(0) < -1e-9 * kscale) cert.convex = false;
    }
  }
  if (grid.nodes.empty()) cert.ricci_min = 0.0;
  cert.K = ricci_lower_bound_parameter(cert.ricci_min, cert.curvature_scale, n);
  return cert;
}

}  // namespace curvkit
