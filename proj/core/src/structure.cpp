#include "so21/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace so21 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kJunctionBeta = 1.3416407864998738;  // 3/sqrt(5)

double clamp01(double x) { return std::min(1.0, std::max(-1.0, x)); }

double k_condition_residual(const GroupElement& c) {
    return std::max({std::abs(c.c21() + c.c12()),
                     std::abs(c.c31() + c.c13()),
                     std::abs(c.c23() - c.c32()),
                     std::max(0.0, c.c22() + c.c33())});
}

}  // namespace

double n_index(const GroupElement& c) { return c.c11() - 1.0; }

double eta_angle(const GroupElement& c) {
    // the 1/(1+c11) normalization cancels inside atan2
    return std::atan2(c.c32() - c.c23(), c.c22() + c.c33());
}

double theta_threshold(double c11) {
    return kPi * (std::sqrt(std::max(0.0, (1.0 + c11) / 2.0)) - 1.0);
}

double alpha_threshold(double c11) {
    const double arg = std::sqrt(std::max(0.0, 2.0 / (1.0 + c11)));
    return std::sqrt(std::max(0.0, 2.0 * (c11 - 1.0))) - 2.0 * std::acos(clamp01(arg));
}

double sim_tolerance(const GroupElement& c) {
    return 1e-8 * (1.0 + std::abs(c.c11()));
}

bool is_in_sim(const GroupElement& c, double tol) {
    if (symmetry_residual(c) > tol) return false;
    // exclude the half-turn 1 (+) (-E2): symmetric SO(2) elements are the
    // identity and the half-turn only
    if (c.c11() <= 1.0 + tol && c.c22() + c.c33() < 0.0) return false;
    return true;
}

Decomposition decompose(const GroupElement& c) {
    require_valid(c, kDefaultTol, "decompose");
    Decomposition dec;
    dec.eta = eta_angle(c);
    dec.k1 = rotation(dec.eta);
    dec.s1 = multiply_unchecked(c, inverse(dec.k1));
    dec.s2 = multiply_unchecked(inverse(dec.k1), c);
    return dec;
}

CutLocusMembership in_cut_locus(const GroupElement& c, double tol) {
    if (max_abs_diff(c, GroupElement::identity()) <= tol)
        throw std::domain_error("in_cut_locus: the cut locus of e excludes e");
    if (n_index(c) <= tol) return CutLocusMembership::ConjugateSO2;
    const double scale = 1.0 + c.c11();
    if (std::abs(c.c21() + c.c12()) <= tol * scale &&
        std::abs(c.c31() + c.c13()) <= tol * scale &&
        std::abs(c.c23() - c.c32()) <= tol * scale && c.c22() + c.c33() < 0.0)
        return CutLocusMembership::K;
    return CutLocusMembership::No;
}

double tan_fixed_point(int k) {
    if (k < 1) throw std::invalid_argument("tan_fixed_point: k must be >= 1");
    // h(x) = x cos x - sin x changes sign exactly once in (k pi, k pi + pi/2)
    auto h = [](double x) { return x * std::cos(x) - std::sin(x); };
    double lo = k * kPi + 1e-12;
    double hi = k * kPi + kPi / 2.0 - 1e-12;
    double flo = h(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = h(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double mu_along(double beta, double t) {
    if (t == 0.0) return 1.0;
    const double b2 = beta * beta;
    const double w = 1.0 - b2;
    const double u = w * t * t;
    if (std::abs(u) < 1e-8) {
        const auto [m, n] = mn_scalars(beta, t);
        return m / std::sqrt(n * (n + 2.0));
    }
    if (w > 0.0) {
        const double r = std::sqrt(w);
        const double y = 0.5 * t * r;
        if (y > 350.0) return r / std::tanh(y);
        const double sh = std::sinh(y);
        return r * std::cosh(y) / std::sqrt(sh * sh + w);
    }
    const double r = std::sqrt(-w);
    const double h = 0.5 * t * r;
    const double s = std::sin(h), c = std::cos(h);
    const double sg = (s >= 0.0) ? 1.0 : -1.0;
    return r * sg * c / std::sqrt(s * s - w);
}

double swept_angle(double beta, double t) {
    beta = std::abs(beta);
    return beta * t - 2.0 * std::acos(clamp01(mu_along(beta, t)));
}

double cut_time(double beta) {
    beta = std::abs(beta);
    if (beta == 0.0) return std::numeric_limits<double>::infinity();
    if (!(std::isfinite(beta))) throw std::invalid_argument("cut_time: beta not finite");
    if (beta >= kJunctionBeta) return 2.0 * kPi / std::sqrt(beta * beta - 1.0);

    // first root of swept_angle(t) = pi; strictly inside the horizon:
    // beta*T = pi + 2 arccos(mu) <= 3 pi, and the K hit precedes the
    // projection period for beta > 1
    auto f = [beta](double t) { return swept_angle(beta, t) - kPi; };

    double lo = 0.0, hi = 0.0;
    double horizon = 0.0;
    bool bracketed = false;
    if (beta <= 0.5) {
        // swept_angle <= beta t, so the crossing needs t >= pi/beta, where
        // mu(t) is exponentially close to its limit sqrt(1-beta^2): the
        // fixed point t = (pi + 2 arccos mu(t))/beta converges immediately
        // and a fixed-step scan over (0, 2 pi/beta] would not terminate for
        // tiny beta
        double t = (kPi + 2.0 * std::asin(beta)) / beta;
        for (int it = 0; it < 64; ++it) {
            const double next =
                (kPi + 2.0 * std::acos(clamp01(mu_along(beta, t)))) / beta;
            const bool done = std::abs(next - t) < 1e-12 * next;
            t = next;
            if (done) break;
        }
        horizon = 2.0 * t;
        lo = t;
        hi = t;
        while (f(lo) >= 0.0) lo *= 1.0 - 1e-9;
        while (f(hi) < 0.0) hi *= 1.0 + 1e-9;
        bracketed = true;
    } else {
        horizon = (beta > 1.0) ? 2.0 * kPi / std::sqrt(beta * beta - 1.0)
                               : 2.0 * kPi / beta + 1.0;
        const double step = 1e-2;
        double prev = f(step);
        for (double t = step; t < horizon; t += step) {
            const double t2 = std::min(t + step, horizon);
            const double cur = f(t2);
            if (prev < 0.0 && cur >= 0.0) {
                lo = t;
                hi = t2;
                bracketed = true;
                break;
            }
            prev = cur;
        }
    }
    if (!bracketed)
        throw solver_error("cut_time: no K(e) hit below horizon " +
                           std::to_string(horizon) + " for beta " +
                           std::to_string(beta) + " (residual at horizon " +
                           std::to_string(f(horizon)) + ")");
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::optional<double> first_conjugate_time(double beta) {
    if (beta * beta <= 1.0) return std::nullopt;
    static const double x1 = tan_fixed_point(1);
    return 2.0 * x1 / std::sqrt(beta * beta - 1.0);
}

ConjugateWitness in_conjugate_set(const GroupElement& c, double tol, int max_roots) {
    ConjugateWitness out;
    const double idres = max_abs_diff(c, GroupElement::identity());
    if (idres <= kDefaultTol) return out;  // identity is not conjugate to itself
    if (n_index(c) <= kDefaultTol) {
        out.in_set = true;  // S1(e) = SO(2) - {e}
        return out;
    }
    const double c11 = c.c11();
    const double scale = 1.0 + c11;
    for (int k = 1; k <= max_roots; ++k) {
        const double xk = tan_fixed_point(k);
        // the endpoint c11 pins beta: n = (1 - cos(2 xk)) / (beta^2 - 1)
        const double sinxk = std::sin(xk);
        const double bsq = 1.0 + 2.0 * sinxk * sinxk / (c11 - 1.0);
        const double beta = std::sqrt(bsq);
        const double t = 2.0 * xk / std::sqrt(bsq - 1.0);
        for (const double b : {beta, -beta}) {
            double phi;
            try {
                phi = recover_phi(c, b, t, tol);
            } catch (const std::exception&) {
                continue;
            }
            if (max_abs_diff(geodesic_point(b, phi, t), c) <= tol * scale) {
                out.in_set = true;
                out.witness = GeodesicParams{b, phi, t};
                return out;
            }
        }
    }
    return out;
}

const char* to_string(ElementClass c) {
    switch (c) {
        case ElementClass::Identity: return "Identity";
        case ElementClass::SO2: return "SO2";
        case ElementClass::Sim: return "Sim";
        case ElementClass::CutLocusK: return "CutLocusK";
        case ElementClass::Generic: return "Generic";
    }
    return "?";
}

Classification classify(const GroupElement& c, double tol, bool search_conjugate) {
    require_valid(c, std::max(tol, kDefaultTol), "classify");
    Classification cls;
    cls.eta = eta_angle(c);
    const double c11 = c.c11();
    cls.theta = theta_threshold(c11);
    cls.alpha = alpha_threshold(c11);
    cls.residuals.symmetry = symmetry_residual(c);
    cls.residuals.so2 = n_index(c);
    cls.residuals.cutK = k_condition_residual(c);

    const bool is_identity = max_abs_diff(c, GroupElement::identity()) <= tol;
    if (is_identity) {
        cls.label = ElementClass::Identity;
    } else if (n_index(c) <= tol) {
        cls.label = ElementClass::SO2;
        cls.conjugate_flag = true;
    } else if (is_in_sim(c, std::max(tol, sim_tolerance(c)))) {
        cls.label = ElementClass::Sim;
    } else if (in_cut_locus(c, tol) == CutLocusMembership::K) {
        cls.label = ElementClass::CutLocusK;
    } else {
        cls.label = ElementClass::Generic;
    }
    if (search_conjugate && !is_identity && cls.label != ElementClass::SO2)
        cls.conjugate_flag = in_conjugate_set(c).in_set;
    return cls;
}

}  // namespace so21
