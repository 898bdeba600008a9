#pragma once

// Closed-form charts for the built-in catalog. Every immersion and metric
// here carries exact first and second derivatives.

#include <cstdint>
#include <vector>

#include "curvkit/charts.hpp"

namespace curvkit {

/// Smooth step S(t) of class C^q: 0 for t <= 0, 1 for t >= 1.
double smoothstep(double t, int q = 8);

// ---- immersed submanifolds -------------------------------------------------

/// Round S^n(R) in R^{n+1} on one hyperspherical polar chart
/// (theta_1..theta_{n-1} in (0, pi), phi periodic).
Submanifold round_sphere(int n, double radius = 1.0);
/// Same sphere on the two stereographic charts with a C^8 partition of unity
/// switching over the band |x_{n+1}| < h0.
Submanifold round_sphere_stereographic(int n, double radius = 1.0, double h0 = 0.5);
/// Ellipsoid sum (x_i / a_i)^2 = 1 in R^{n+1}, n = axes.size() - 1.
Submanifold ellipsoid(const std::vector<double>& axes);
/// Radial graph (1 + eps q(x)) x over the unit S^n, q a seeded random quartic
/// form normalized so that the sum of |coefficients| is 1.
Submanifold quartic_sphere(int n, std::uint64_t seed, double eps);
/// S^1(a) x S^1(b) in R^4.
Submanifold product_torus(double a, double b);
/// S^1(a) x S^2(b) in R^5.
Submanifold circle_times_sphere(double a, double b);
/// Small sphere S^n(rho) at height sqrt(1 - rho^2) inside the unit S^{n+1}.
Submanifold latitude_sphere(int n, double rho);
/// S^1(a) x S^2(b) inside the unit S^4, a^2 + b^2 = 1.
Submanifold clifford_hypersurface(double a);
/// Geodesic sphere of radius r in hyperbolic space H^{n+1}(-1), hyperboloid model.
Submanifold hyperbolic_geodesic_sphere(int n, double r);

// ---- intrinsic metrics -----------------------------------------------------

/// Round metric on S^n(R), polar chart, with the standard embedding.
RiemannianManifold round_sphere_metric(int n, double radius = 1.0);
/// Round metric on the two stereographic charts, 4R^2/(1+|y|^2)^2 delta.
RiemannianManifold round_sphere_metric_stereographic(int n, double radius = 1.0, double h0 = 0.5);
/// Flat torus R^n / (L_1 Z x ... x L_n Z), embedded as a product of circles.
RiemannianManifold flat_torus(const std::vector<double>& lengths);
/// Circle of length L as a 1-manifold.
RiemannianManifold circle_metric(double length);
/// delta_ij + eps * sum of seeded trigonometric modes on the 2pi-periodic T^n.
RiemannianManifold random_trig_metric(int n, std::uint64_t seed, double eps);

}  // namespace curvkit
