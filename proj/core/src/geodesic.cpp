#include "so21/geodesic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace so21 {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

GeodesicParams canonical(GeodesicParams p) {
    if (p.t < 0.0) {
        p.t = -p.t;
        p.beta = -p.beta;
        p.phi += std::numbers::pi;
    }
    p.phi = std::fmod(p.phi, kTwoPi);
    if (p.phi < 0.0) p.phi += kTwoPi;
    return p;
}

GeodesicScalars mn_scalars(double beta, double t) {
    const double w = 1.0 - beta * beta;
    const double u = w * t * t;
    if (std::abs(u) < 1e-8) {
        // shared power series of both branches around |beta| = 1
        const double m = t * (1.0 + u / 6.0 + u * u / 120.0 + u * u * u / 5040.0);
        const double n = t * t * (0.5 + u / 24.0 + u * u / 720.0 + u * u * u / 40320.0);
        return {m, n};
    }
    if (w > 0.0) {
        const double r = std::sqrt(w);
        return {std::sinh(t * r) / r, (std::cosh(t * r) - 1.0) / w};
    }
    const double r = std::sqrt(-w);
    return {std::sin(t * r) / r, (1.0 - std::cos(t * r)) / (-w)};
}

GroupElement geodesic_point(double beta, double phi, double t) {
    const auto [m, n] = mn_scalars(beta, t);
    const double bt = beta * t;
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double cb = std::cos(bt), sb = std::sin(bt);
    const double cd = std::cos(bt - phi), sd = std::sin(bt - phi);
    const double q = 1.0 - beta * beta * n;

    GroupElement g;
    g.a = {1.0 + n,             m * cd + beta * n * sd,            beta * n * cd - m * sd,
           m * cp + beta * n * sp,
           n * cd * cp + beta * m * sb + q * cb,
           -n * sd * cp + beta * m * cb - q * sb,
           m * sp - beta * n * cp,
           n * cd * sp - beta * m * cb + q * sb,
           -n * sd * sp + beta * m * sb + q * cb};
    return g;
}

GroupElement geodesic_point(const GeodesicParams& p) {
    return geodesic_point(p.beta, p.phi, p.t);
}

GroupElement geodesic_point_product(double beta, double phi, double t) {
    const AlgebraElement horizontal{t * std::cos(phi), t * std::sin(phi), -t * beta};
    const AlgebraElement vertical{0.0, 0.0, t * beta};
    GroupElement g;
    g.a = mat_exp(realize(horizontal));
    const GroupElement rot = exp_algebra(vertical);
    return multiply_unchecked(g, rot);
}

GroupElement geodesic_point_product(const GeodesicParams& p) {
    return geodesic_point_product(p.beta, p.phi, p.t);
}

std::vector<TracePoint> geodesic_trace(const GeodesicParams& p, int steps) {
    if (steps < 1) throw std::invalid_argument("geodesic_trace: steps must be >= 1");
    const GeodesicParams cp = canonical(p);  // same curve, t-grid ascending
    std::vector<TracePoint> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        const double tk = cp.t * static_cast<double>(k) / static_cast<double>(steps);
        TracePoint pt;
        pt.t = tk;
        pt.g = geodesic_point(cp.beta, cp.phi, tk);
        pt.base = project_base(pt.g);
        out.push_back(pt);
    }
    return out;
}

double recover_phi(const GroupElement& c, double beta, double t, double tol) {
    const double c11 = c.c11();
    if (!(c11 > 1.0))
        throw std::domain_error("recover_phi: requires c11 > 1");
    const auto [m, n] = mn_scalars(beta, t);
    if (std::abs(n - (c11 - 1.0)) > tol * (1.0 + c11))
        throw std::invalid_argument(
            "recover_phi: (beta, t) inconsistent with matrix, n(beta,t) = " +
            std::to_string(n) + " vs c11 - 1 = " + std::to_string(c11 - 1.0));
    const double det = m * m + beta * beta * n * n;  // = c11^2 - 1 > 0
    const double cphi = (m * c.c21() - beta * n * c.c31()) / det;
    const double sphi = (beta * n * c.c21() + m * c.c31()) / det;
    double phi = std::atan2(sphi, cphi);
    if (phi < 0.0) phi += kTwoPi;
    return phi;
}

}  // namespace so21
