#pragma once

// Pointwise extrinsic geometry of immersed submanifolds of space forms.

#include <optional>
#include <vector>

#include "curvkit/charts.hpp"
#include "curvkit/curvature_functionals.hpp"
#include "curvkit/tensor_algebra.hpp"

namespace curvkit {

struct QuadratureGrid;

/// Everything known about an immersion at one parameter point.
///
/// `frame` holds an orthonormal tangent frame as columns of coordinate
/// components (frame^T g frame = I, upper triangular: Gram-Schmidt of the
/// coordinate vectors in order). `A` is expressed in that frame and in the
/// orthonormal `normal_frame`; `A_coord` in coordinate components.
/// The second fundamental form is A_ij = -<d_i d_j F, nu>, with codim-1
/// normals pointing away from the chart's orientation center, so the unit
/// sphere has all principal curvatures +1.
struct PointGeometry {
  Point u;
  SymTensor2<double> g;
  SymTensor2<double> ginv;
  Matrixd frame;
  VecValuedSym2<double> A;
  VecValuedSym2<double> A_coord;
  std::vector<AmbVectord> normal_frame;
  AmbVectord position;
  std::optional<Vectord> principal_curvatures;  // codim 1 only

  int dim() const { return g.dim(); }
  int codim() const { return A.codim(); }
  /// Maps a normal-frame component vector to ambient coordinates.
  AmbVectord to_ambient(const AmbVector<double>& normal_components) const;
};

/// Induced metric, normal frame and second fundamental form at u.
/// Throws DegenerateImmersionError when the Jacobian loses rank
/// (sigma_min <= 1e-8 sigma_max) and DomainError outside the chart box.
PointGeometry point_geometry(const ImmersionChart& chart, const Point& u,
                             const AmbientSpace& ambient = AmbientSpace::euclidean());

/// Same, from an already evaluated jet.
PointGeometry point_geometry(const ImmersionChart& chart, const Point& u, const ImmersionJet& jet,
                             const AmbientSpace& ambient);

/// Ascending eigenvalues of the shape operator; codim 1 only.
Vectord principal_curvatures(const PointGeometry& pg);

/// Orthonormal-frame curvature from the Gauss equation:
/// Rm_ijkl = c B_ijkl + h(A_ik, A_jl) - h(A_il, A_jk).
AlgCurvTensor4<double> gauss_riemann(const PointGeometry& pg, const AmbientSpace& ambient);

struct RicciCertificate {
  double ricci_min = 0.0;   // smallest Ricci eigenvalue over the grid
  double K = 0.0;           // max(0, -ricci_min / (n-1)) after the noise floor
  bool convex = false;      // codim 1: every sampled shape operator >= 0
  bool convexity_defined = false;
  double curvature_scale = 0.0;  // largest |Ricci eigenvalue| seen
};

/// Scans Ricci eigenvalues (Gauss equation) and, for hypersurfaces, the
/// sign of the shape operator over every grid node.
RicciCertificate ricci_bound_certificate(const Submanifold& sub, const QuadratureGrid& grid);

/// Induced metric and its first derivatives, d_k g_ij = <F_ki, F_j> + <F_i, F_kj>.
MetricJet induced_metric_jet(const ImmersionJet& jet, const AmbientSpace& ambient);
/// Metric chart of the induced metric (first derivatives only), with the
/// immersion itself as embedding.
MetricChart induced_metric_chart(const ImmersionChart& chart, const AmbientSpace& ambient);

/// K from a raw Ricci minimum: values above -1e-9 * scale count as 0.
double ricci_lower_bound_parameter(double ricci_min, double scale, int n);

}  // namespace curvkit
