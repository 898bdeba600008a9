#include "curvkit/intrinsic_geometry.hpp"

#include <cmath>
#include <sstream>

#include "curvkit/quadrature.hpp"

namespace curvkit {

namespace {

void require_jet(const MetricJet& jet, bool second) {
  const int n = jet.dim();
  if (static_cast<int>(jet.dg.size()) != n) throw ArgumentError("metric jet: expected n first-derivative matrices");
  if (second && static_cast<int>(jet.ddg.size()) != n * n)
    throw ArgumentError("metric jet: curvature needs second derivatives of the metric");
}

// d_m Gamma^k_ij stored as [((m * n + k) * n + i) * n + j].
std::vector<double> christoffel_derivative(const MetricJet& jet, const Matrixd& ginv) {
  const int n = jet.dim();
  std::vector<Matrixd> dginv(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) dginv[static_cast<std::size_t>(m)] = -ginv * jet.dg[static_cast<std::size_t>(m)] * ginv;
  std::vector<double> out(static_cast<std::size_t>(n * n * n * n), 0.0);
  auto dg = [&](int k, int i, int j) { return jet.dg[static_cast<std::size_t>(k)](i, j); };
  auto ddg = [&](int m, int k, int i, int j) { return jet.second(m, k)(i, j); };
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            const double first = dg(i, j, l) + dg(j, i, l) - dg(l, i, j);
            const double second = ddg(m, i, j, l) + ddg(m, j, i, l) - ddg(m, l, i, j);
            s += dginv[static_cast<std::size_t>(m)](k, l) * first + ginv(k, l) * second;
          }
          out[static_cast<std::size_t>(((m * n + k) * n + i) * n + j)] = 0.5 * s;
          out[static_cast<std::size_t>(((m * n + k) * n + j) * n + i)] = 0.5 * s;
        }
  return out;
}

}  // namespace

Christoffel christoffel(const MetricJet& jet) {
  require_jet(jet, false);
  const int n = jet.dim();
  const Matrixd ginv = metric_inverse(SymTensor2<double>(jet.g));
  Christoffel gamma{n, std::vector<double>(static_cast<std::size_t>(n * n * n), 0.0)};
  auto dg = [&](int k, int i, int j) { return jet.dg[static_cast<std::size_t>(k)](i, j); };
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        gamma(k, i, j) = gamma(k, j, i) = 0.5 * s;
      }
  return gamma;
}

Christoffel christoffel(const MetricChart& mc, const Point& u) { return christoffel(mc.eval(u)); }

double metric_compatibility_residual(const MetricJet& jet, const Christoffel& gamma) {
  const int n = jet.dim();
  double r = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = jet.dg[static_cast<std::size_t>(k)](i, j);
        for (int p = 0; p < n; ++p) v -= gamma(p, k, i) * jet.g(p, j) + gamma(p, k, j) * jet.g(i, p);
        r = std::max(r, std::abs(v));
      }
  return r;
}

AlgCurvTensor4<double> riemann(const MetricJet& jet) {
  require_jet(jet, true);
  const int n = jet.dim();
  const Matrixd ginv = metric_inverse(SymTensor2<double>(jet.g));
  const Christoffel G = christoffel(jet);
  const std::vector<double> dG = christoffel_derivative(jet, ginv);
  auto dGamma = [&](int m, int k, int i, int j) { return dG[static_cast<std::size_t>(((m * n + k) * n + i) * n + j)]; };
  // R^p_{lij} = d_i G^p_jl - d_j G^p_il + G^p_iq G^q_jl - G^p_jq G^q_il
  AlgCurvTensor4<double> up(n);
  for (int p = 0; p < n; ++p)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = dGamma(i, p, j, l) - dGamma(j, p, i, l);
          for (int q = 0; q < n; ++q) v += G(p, i, q) * G(q, j, l) - G(p, j, q) * G(q, i, l);
          up(p, l, i, j) = v;
        }
  AlgCurvTensor4<double> rm(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int p = 0; p < n; ++p) v += jet.g(k, p) * up(p, l, i, j);
          rm(i, j, k, l) = v;
        }
  return rm;
}

AlgCurvTensor4<double> riemann(const MetricChart& mc, const Point& u) { return riemann(mc.eval(u)); }

Matrixd orthonormal_frame(const Matrixd& g) {
  Eigen::LLT<Matrixd> llt(g);
  if (llt.info() != Eigen::Success) throw NumericError("metric is not positive definite");
  const Matrixd L = llt.matrixL();
  return L.transpose().triangularView<Eigen::Upper>().solve(Matrixd::Identity(g.rows(), g.cols()));
}

Matrixd mixed_from_orthonormal(const Matrixd& x, const Matrixd& frame, const Matrixd& g) {
  return frame * x * (frame.transpose() * g);
}

IntrinsicPoint intrinsic_point(const MetricJet& jet, const Point& u) {
  const int n = jet.dim();
  IntrinsicPoint p;
  p.u = u;
  p.g = SymTensor2<double>(jet.g);
  p.frame = orthonormal_frame(p.g.matrix());
  p.rm = transform_all_slots(riemann(jet), Matrixd(p.frame.transpose()));
  p.ricci = ricci_contraction(p.rm, Matrixd(Matrixd::Identity(n, n)));
  p.scalar = p.ricci.matrix().trace();
  return p;
}

IntrinsicPoint intrinsic_point(const MetricChart& mc, const Point& u) { return intrinsic_point(mc.eval(u), u); }

MetricChart conformal_metric(const ConformalFamily& family) {
  if (family.t == 0.0) return family.base;
  if (!family.f) throw ArgumentError("conformal family needs a function");
  MetricChart out = family.base;
  const MetricEval base_eval = family.base.eval;
  const ChartScalarFn f = family.f;
  const double t = family.t;
  out.eval = [base_eval, f, t](const Point& u) {
    MetricJet b = base_eval(u);
    const ChartFunctionJet fj = f(u);
    const double phi = 1.0 + t * fj.value;
    if (!(phi > 0.0)) {
      std::ostringstream os;
      os << "conformal factor 1 + t f = " << phi << " is not positive at u = (" << u.transpose() << ")";
      throw DomainError(os.str());
    }
    const int n = b.dim();
    MetricJet j;
    j.g = phi * b.g;
    j.dg.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      j.dg[static_cast<std::size_t>(k)] = t * fj.grad(k) * b.g + phi * b.dg[static_cast<std::size_t>(k)];
    if (b.has_second_derivatives()) {
      j.ddg.resize(static_cast<std::size_t>(n * n));
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          j.ddg[static_cast<std::size_t>(k * n + l)] = t * fj.hess(k, l) * b.g + t * fj.grad(k) * b.dg[static_cast<std::size_t>(l)] +
                                                       t * fj.grad(l) * b.dg[static_cast<std::size_t>(k)] + phi * b.second(k, l);
    }
    return j;
  };
  return out;
}

RiemannianManifold conformal_manifold(const RiemannianManifold& base, const AmbientFunction& f, double t,
                                      const QuadratureGrid* check) {
  RiemannianManifold out = base;
  std::ostringstream name;
  name << base.name << "+conformal(" << f.id << ",t=" << t << ")";
  out.name = name.str();
  for (auto& chart : out.atlas) {
    if (!chart.embedding) throw ArgumentError("conformal family: chart has no embedding to pull back '" + f.id + "'");
    const ImmersionEval emb = chart.embedding;
    const AmbientFunction fn = f;
    ChartScalarFn pulled = [emb, fn](const Point& u) { return fn.pull_back(emb(u)); };
    chart = conformal_metric(ConformalFamily{chart, pulled, t});
  }
  if (check) {
    for (const auto& node : check->nodes) {
      const auto& chart = base.atlas[static_cast<std::size_t>(node.chart)];
      const double phi = 1.0 + t * f.value(chart.embedding(node.u).position);
      if (!(phi > 0.0)) {
        std::ostringstream os;
        os << "conformal factor is not positive at chart " << node.chart << ", u = (" << node.u.transpose() << "), 1 + t f = " << phi;
        throw DomainError(os.str());
      }
    }
  }
  return out;
}

MetricChart product_chart(const MetricChart& a, const MetricChart& b) {
  MetricChart out;
  out.n = a.n + b.n;
  if (out.n > kMaxDim) throw ArgumentError("product chart exceeds the supported dimension");
  out.domain = a.domain;
  out.domain.lower.insert(out.domain.lower.end(), b.domain.lower.begin(), b.domain.lower.end());
  out.domain.upper.insert(out.domain.upper.end(), b.domain.upper.begin(), b.domain.upper.end());
  out.domain.periodic.insert(out.domain.periodic.end(), b.domain.periodic.begin(), b.domain.periodic.end());
  const int na = a.n, nb = b.n, n = out.n;
  const MetricEval ea = a.eval, eb = b.eval;
  out.eval = [ea, eb, na, nb, n](const Point& u) {
    const MetricJet ja = ea(u.head(na));
    const MetricJet jb = eb(u.tail(nb));
    MetricJet j;
    j.g = Matrixd::Zero(n, n);
    j.g.topLeftCorner(na, na) = ja.g;
    j.g.bottomRightCorner(nb, nb) = jb.g;
    j.dg.assign(static_cast<std::size_t>(n), Matrixd::Zero(n, n));
    for (int k = 0; k < na; ++k) j.dg[static_cast<std::size_t>(k)].topLeftCorner(na, na) = ja.dg[static_cast<std::size_t>(k)];
    for (int k = 0; k < nb; ++k) j.dg[static_cast<std::size_t>(na + k)].bottomRightCorner(nb, nb) = jb.dg[static_cast<std::size_t>(k)];
    if (ja.has_second_derivatives() && jb.has_second_derivatives()) {
      j.ddg.assign(static_cast<std::size_t>(n * n), Matrixd::Zero(n, n));
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < na; ++l) j.ddg[static_cast<std::size_t>(k * n + l)].topLeftCorner(na, na) = ja.second(k, l);
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l)
          j.ddg[static_cast<std::size_t>((na + k) * n + na + l)].bottomRightCorner(nb, nb) = jb.second(k, l);
    }
    return j;
  };
  const WeightFn wa = a.atlas_weight, wb = b.atlas_weight;
  if (wa || wb) {
    out.atlas_weight = [wa, wb, na, nb](const Point& u) {
      return (wa ? wa(u.head(na)) : 1.0) * (wb ? wb(u.tail(nb)) : 1.0);
    };
  }
  if (a.embedding && b.embedding) {
    const ImmersionEval fa = a.embedding, fb = b.embedding;
    const int ma = a.embedding_dim, mb = b.embedding_dim;
    out.embedding_dim = ma + mb;
    if (out.embedding_dim > kMaxAmbient) throw ArgumentError("product embedding exceeds the supported ambient size");
    out.embedding = [fa, fb, na, nb, ma, mb, n](const Point& u) {
      const ImmersionJet ja = fa(u.head(na));
      const ImmersionJet jb = fb(u.tail(nb));
      ImmersionJet j;
      j.position = AmbVectord(ma + mb);
      j.position << ja.position, jb.position;
      j.jacobian = AmbMatrixd::Zero(ma + mb, n);
      j.jacobian.topLeftCorner(ma, na) = ja.jacobian;
      j.jacobian.bottomRightCorner(mb, nb) = jb.jacobian;
      j.hessian.assign(static_cast<std::size_t>(n * n), AmbVectord::Zero(ma + mb));
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < na; ++l) j.hessian[static_cast<std::size_t>(k * n + l)].head(ma) = ja.second(k, l);
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l) j.hessian[static_cast<std::size_t>((na + k) * n + na + l)].tail(mb) = jb.second(k, l);
      return j;
    };
  }
  return out;
}

RiemannianManifold product_manifold(const RiemannianManifold& a, const RiemannianManifold& b, std::string name) {
  RiemannianManifold out;
  out.name = std::move(name);
  out.n = a.n + b.n;
  for (const auto& ca : a.atlas)
    for (const auto& cb : b.atlas) out.atlas.push_back(product_chart(ca, cb));
  out.embedding_dim = (a.embedding_dim > 0 && b.embedding_dim > 0) ? a.embedding_dim + b.embedding_dim : 0;
  return out;
}

Vectord covariant_divergence(const MixedTensorField& field, const MetricChart& mc, const Point& u, double h) {
  const int n = mc.n;
  if (!(h > 0.0)) throw ArgumentError("covariant_divergence: step must be positive");
  for (int a = 0; a < n; ++a) {
    if (mc.domain.periodic[static_cast<std::size_t>(a)]) continue;
    if (u(a) - h < mc.domain.lower[static_cast<std::size_t>(a)] || u(a) + h > mc.domain.upper[static_cast<std::size_t>(a)]) {
      std::ostringstream os;
      os << "divergence stencil leaves the chart domain on axis " << a << " at u = (" << u.transpose() << "), h = " << h;
      throw BoundaryError(os.str());
    }
  }
  const Christoffel G = christoffel(mc, u);
  const Matrixd T = field(u);
  Vectord div = Vectord::Zero(n);
  for (int i = 0; i < n; ++i) {
    Point up = u, dn = u;
    up(i) += h;
    dn(i) -= h;
    const Matrixd d = (field(up) - field(dn)) / (2.0 * h);
    for (int j = 0; j < n; ++j) div(j) += d(i, j);
  }
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) s += G(i, i, k) * T(k, j) - G(k, i, j) * T(i, k);
    div(j) += s;
  }
  return div;
}

}  // namespace curvkit
