#include "curvkit/curvature_functionals.hpp"

#include "curvkit/extrinsic_geometry.hpp"

namespace curvkit {

double einstein_newton_bridge(const PointGeometry& pg, const AmbientSpace& ambient, int k) {
  const int n = pg.dim();
  if (k < 1 || 2 * k > n - 1) throw ArgumentError("einstein_newton_bridge: need 1 <= k and 2k <= n-1");
  if (ambient.c != 0.0 && k != 1) throw ArgumentError("einstein_newton_bridge: curved ambient supports k = 1 only");
  const auto rm = gauss_riemann(pg, ambient);
  const auto love = lovelock(rm, k);
  const auto t = newton_transform(pg.A, 2 * k);
  Matrixd expected = 0.5 * detail::factorial<double>(2 * k) * t.components.front();
  if (ambient.c != 0.0) expected += 0.5 * double((n - 1) * (n - 2)) * ambient.c * Matrixd::Identity(n, n);
  return (love.ek - expected).cwiseAbs().maxCoeff();
}

}  // namespace curvkit
