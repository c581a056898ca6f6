#pragma once

#include <vector>

#include "so21/group.hpp"

namespace so21 {

/**
 * Parameters of the unit-speed geodesic gamma(beta, phi; t) through the
 * identity: beta is the constant geodesic curvature of the hyperboloid
 * projection, phi the initial direction, t the arclength.
 *
 * Canonical domain is phi in [0, 2pi), t >= 0; negative-t queries rewrite
 * as gamma(-beta, phi + pi; -t), which is the same curve point.
 */
struct GeodesicParams {
    double beta = 0.0;
    double phi = 0.0;
    double t = 0.0;
};

/// Rewrite to the canonical domain (t >= 0, phi in [0, 2pi)).
GeodesicParams canonical(GeodesicParams p);

/// Scalars of the closed-form geodesic columns. n = c11 - 1 >= 0 and
/// m^2 + beta^2 n^2 = c11^2 - 1 on evaluated points.
struct GeodesicScalars {
    double m = 0.0;
    double n = 0.0;
};

/// Branch-correct (m, n); continuous across |beta| = 1 (a power series in
/// (1-beta^2)t^2 replaces the hyperbolic/trigonometric forms near the
/// parabolic case to avoid cancellation).
GeodesicScalars mn_scalars(double beta, double t);

/// Evaluate gamma(beta, phi; t) from the explicit column formulas.
GroupElement geodesic_point(double beta, double phi, double t);
GroupElement geodesic_point(const GeodesicParams& p);

/// Same point as the product of two one-parameter subgroups,
/// exp(t(cos phi a + sin phi b - beta c)) exp(t beta c).
GroupElement geodesic_point_product(double beta, double phi, double t);
GroupElement geodesic_point_product(const GeodesicParams& p);

struct TracePoint {
    double t = 0.0;
    GroupElement g;
    HyperboloidPoint base;
};

/// Sample the geodesic on a uniform arclength grid over [0, p.t]
/// (steps+1 points; steps = 1 gives the two endpoints).
std::vector<TracePoint> geodesic_trace(const GeodesicParams& p, int steps);

/**
 * Invert the first column: find phi with gamma(beta, phi; t) = c.
 *
 * Requires c11 > 1 and n(beta, t) = c11 - 1 within tolerance; the linear
 * system has determinant m^2 + beta^2 n^2 = c11^2 - 1 > 0, so phi is
 * unique for the given (beta, t). On the cut locus the second minimizer
 * carries the opposite beta sign; call again with -beta for it.
 *
 * Throws std::domain_error for c11 <= 1 and std::invalid_argument on an
 * inconsistent (beta, t) pair.
 */
double recover_phi(const GroupElement& c, double beta, double t,
                   double tol = 1e-6);

}  // namespace so21
