#include "so21/distance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "so21/structure.hpp"

namespace so21 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCaseBand = 1e-9;
constexpr int kScanPoints = 512;

double clamp01(double x) { return std::min(1.0, std::max(-1.0, x)); }

// --- case equations in the compact variable v = sqrt(beta^2-1)/beta ------
//
// beta = 1/sqrt(1-v^2) maps v in (0,1) to beta in (1, inf); the analytic
// beta-brackets become bounded v-brackets even as c11 -> 1. All pieces are
// written in cancellation-free half-angle form.

double beta_of_v(double v) { return 1.0 / std::sqrt(1.0 - v * v); }

// central angle: cos gamma = beta^2 - c11 (beta^2 - 1), via
// sin(gamma/2)^2 = v^2 (c11-1)/(2(1-v^2)) and the exact complement
// cos(gamma/2)^2 = (1+c11)(vII^2 - v^2)/(2(1-v^2)); the split keeps full
// precision at both bracket ends
double gamma_of_v(double v, double c11) {
    const double one_mv2 = 1.0 - v * v;
    const double s2 = v * v * (c11 - 1.0) / (2.0 * one_mv2);
    if (s2 <= 0.5) return 2.0 * std::asin(std::sqrt(std::max(0.0, s2)));
    const double vii2 = 2.0 / (1.0 + c11);
    const double c2 = (1.0 + c11) * std::max(0.0, vii2 - v * v) / (2.0 * one_mv2);
    return kPi - 2.0 * std::asin(std::min(1.0, std::sqrt(c2)));
}

// |mu| = sqrt((vII^2 - v^2)/(1 - v^2)) with vII^2 = 2/(1+c11)
double mu_of_v(double v, double c11) {
    const double vii2 = 2.0 / (1.0 + c11);
    return std::sqrt(std::max(0.0, (vii2 - v * v) / (1.0 - v * v)));
}

// arccos(|mu|(v)), using the exact complement 1 - mu^2 = (1-vII^2)/(1-v^2)
double acos_mu_of_v(double v, double c11) {
    const double vii2 = 2.0 / (1.0 + c11);
    const double mu2 = std::max(0.0, (vii2 - v * v) / (1.0 - v * v));
    if (mu2 <= 0.5) return kPi / 2.0 - std::asin(std::sqrt(mu2));
    return std::asin(std::min(1.0, std::sqrt((1.0 - vii2) / (1.0 - v * v))));
}

double mu_of_beta(double b, double c11) {
    return std::sqrt(std::max(0.0, 1.0 - b * b * (c11 - 1.0) / (1.0 + c11)));
}

// arccos(|mu|(beta)) with the exact complement 1 - mu^2 = b^2 (c11-1)/(1+c11)
double acos_mu_of_beta(double b, double c11) {
    const double r2 = b * b * (c11 - 1.0) / (1.0 + c11);
    if (r2 >= 0.5) return std::acos(clamp01(std::sqrt(std::max(0.0, 1.0 - r2))));
    return std::asin(std::min(1.0, std::sqrt(r2)));
}

// acosh(sqrt((1+c11)/2) |mu|): the argument^2 - 1 = (c11-1)(1-b^2)/2 exactly
double stable_acosh_term(double b, double c11) {
    const double h2 = std::max(0.0, (c11 - 1.0) * (1.0 - b * b) / 2.0);
    const double w = std::sqrt(1.0 + h2);
    return std::log1p(h2 / (w + 1.0) + std::sqrt(h2));
}

double residual_III(double v, double c11, double eta_abs) {
    // arccos(-mu) = pi - arccos(mu)
    return (kTwoPi - gamma_of_v(v, c11)) / v - 2.0 * kPi +
           2.0 * acos_mu_of_v(v, c11) - eta_abs;
}

double residual_IVb(double b, double c11, double eta_abs) {
    const double t1 = b / std::sqrt(1.0 - b * b) * stable_acosh_term(b, c11);
    return 2.0 * (t1 - acos_mu_of_beta(b, c11)) - eta_abs;
}

double residual_IVc(double v, double c11, double eta_abs) {
    return gamma_of_v(v, c11) / v - 2.0 * acos_mu_of_v(v, c11) - eta_abs;
}

// scan for sign changes, bisect each; roots in ascending order
std::vector<double> bracketed_roots(const std::function<double(double)>& f,
                                    double lo, double hi) {
    std::vector<double> roots;
    if (!(hi > lo)) return roots;
    double prev_x = lo;
    double prev_f = f(lo);
    for (int i = 1; i < kScanPoints; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(kScanPoints - 1);
        const double fx = f(x);
        if (prev_f == 0.0) {
            roots.push_back(prev_x);
        } else if ((prev_f < 0.0) != (fx < 0.0)) {
            double a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < 200 && b - a > 1e-16 * std::max(1.0, std::abs(b));
                 ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = f(mid);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = fx;
    }
    if (prev_f == 0.0) roots.push_back(prev_x);
    return roots;
}

[[noreturn]] void no_root(const char* which, double lo, double hi,
                          const std::function<double(double)>& f) {
    throw solver_error(std::string("solve_beta: no sign change for case ") + which +
                       " on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "], residuals " + std::to_string(f(lo)) + " .. " +
                       std::to_string(f(hi)));
}

struct SolveOutcome {
    double beta = 0.0;
    double d = 0.0;
    double gamma = 0.0;
    double mu = 0.0;  // signed
    int candidates = 1;
};

SolveOutcome solve_case(double c11, double eta_abs, CaseLabel label) {
    SolveOutcome out;
    switch (label) {
        case CaseLabel::CaseI_SO2: {
            // 2 pi / v = |eta| + 2 pi has the closed-form root
            const double v = kTwoPi / (eta_abs + kTwoPi);
            out.beta = beta_of_v(v);
            out.d = kTwoPi * std::sqrt(1.0 - v * v) / v;
            out.mu = -1.0;
            return out;
        }
        case CaseLabel::CaseIII_EtaAboveTheta: {
            const double vii = std::sqrt(2.0 / (1.0 + c11));
            const double lo = 0.5 * (1.0 + 1e-12), hi = vii;
            auto f = [&](double v) { return residual_III(v, c11, eta_abs); };
            const auto roots = bracketed_roots(f, lo, hi);
            if (roots.empty()) no_root("III", lo, hi, f);
            out.candidates = static_cast<int>(roots.size());
            double best_d = std::numeric_limits<double>::infinity(), best_v = roots[0];
            for (double v : roots) {
                const double d = (kTwoPi - gamma_of_v(v, c11)) * std::sqrt(1.0 - v * v) / v;
                if (d < best_d) {
                    best_d = d;
                    best_v = v;
                }
            }
            out.beta = beta_of_v(best_v);
            out.gamma = gamma_of_v(best_v, c11);
            out.d = best_d;
            out.mu = -mu_of_v(best_v, c11);
            return out;
        }
        case CaseLabel::CaseIVb_EtaBelowAlpha: {
            const double lo = 1e-12, hi = 1.0 - 1e-12;
            auto f = [&](double b) { return residual_IVb(b, c11, eta_abs); };
            const auto roots = bracketed_roots(f, lo, hi);
            if (roots.empty()) no_root("IVb", lo, hi, f);
            out.candidates = static_cast<int>(roots.size());
            double best_d = std::numeric_limits<double>::infinity(), best_b = roots[0];
            for (double b : roots) {
                const double d =
                    2.0 / std::sqrt(1.0 - b * b) * stable_acosh_term(b, c11);
                if (d < best_d) {
                    best_d = d;
                    best_b = b;
                }
            }
            out.beta = best_b;
            out.d = best_d;
            out.mu = mu_of_beta(best_b, c11);
            return out;
        }
        case CaseLabel::CaseIVc_AlphaToTheta: {
            const double vii = std::sqrt(2.0 / (1.0 + c11));
            const double lo = vii * 1e-9, hi = vii;
            auto f = [&](double v) { return residual_IVc(v, c11, eta_abs); };
            const auto roots = bracketed_roots(f, lo, hi);
            if (roots.empty()) no_root("IVc", lo, hi, f);
            out.candidates = static_cast<int>(roots.size());
            double best_d = std::numeric_limits<double>::infinity(), best_v = roots[0];
            for (double v : roots) {
                const double d = gamma_of_v(v, c11) * std::sqrt(1.0 - v * v) / v;
                if (d < best_d) {
                    best_d = d;
                    best_v = v;
                }
            }
            out.beta = beta_of_v(best_v);
            out.gamma = gamma_of_v(best_v, c11);
            out.d = best_d;
            out.mu = mu_of_v(best_v, c11);
            return out;
        }
        default:
            throw std::invalid_argument(
                "solve_beta: case has a closed form, no root-finding required");
    }
}

}  // namespace

const char* to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::Identity: return "Identity";
        case CaseLabel::Case0_Sim: return "Case0_Sim";
        case CaseLabel::CaseI_SO2: return "CaseI_SO2";
        case CaseLabel::CaseII_EtaEqualsTheta: return "CaseII_EtaEqualsTheta";
        case CaseLabel::CaseIII_EtaAboveTheta: return "CaseIII_EtaAboveTheta";
        case CaseLabel::CaseIVa_Horocycle: return "CaseIVa_Horocycle";
        case CaseLabel::CaseIVb_EtaBelowAlpha: return "CaseIVb_EtaBelowAlpha";
        case CaseLabel::CaseIVc_AlphaToTheta: return "CaseIVc_AlphaToTheta";
    }
    return "?";
}

CaseInfo classify_case(const GroupElement& c, double tol) {
    require_valid(c, std::max(tol, kDefaultTol), "classify_case");
    CaseInfo info;
    const double c11 = c.c11();
    info.eta_abs = std::abs(eta_angle(c));
    info.theta = theta_threshold(c11);
    info.alpha = alpha_threshold(c11);

    if (max_abs_diff(c, GroupElement::identity()) <= tol) {
        info.label = CaseLabel::Identity;
        info.eta_abs = 0.0;
        return info;
    }
    if (n_index(c) <= tol) {
        info.label = CaseLabel::CaseI_SO2;
        return info;
    }
    if (is_in_sim(c, std::max(tol, sim_tolerance(c)))) {
        info.label = CaseLabel::Case0_Sim;
        return info;
    }
    if (std::abs(info.eta_abs - info.theta) <= kCaseBand * (1.0 + info.theta)) {
        info.label = CaseLabel::CaseII_EtaEqualsTheta;
    } else if (info.eta_abs > info.theta) {
        info.label = CaseLabel::CaseIII_EtaAboveTheta;
    } else if (std::abs(info.eta_abs - info.alpha) <= kCaseBand * (1.0 + info.alpha)) {
        info.label = CaseLabel::CaseIVa_Horocycle;
    } else if (info.eta_abs < info.alpha) {
        info.label = CaseLabel::CaseIVb_EtaBelowAlpha;
    } else {
        info.label = CaseLabel::CaseIVc_AlphaToTheta;
    }
    return info;
}

double solve_beta(const GroupElement& c, CaseLabel label) {
    require_valid(c, kDefaultTol, "solve_beta");
    const double eta_abs = std::abs(eta_angle(c));
    return solve_case(c.c11(), eta_abs, label).beta;
}

DistanceResult distance_from_identity(const GroupElement& c) {
    require_valid(c, kDefaultTol, "distance_from_identity");
    const CaseInfo info = classify_case(c);
    const double c11 = c.c11();
    const double eta = eta_angle(c);

    DistanceResult res;
    res.case_label = info.label;
    res.eta_abs = info.eta_abs;

    switch (info.label) {
        case CaseLabel::Identity:
            res.d = 0.0;
            res.beta = 0.0;
            res.mu = 1.0;
            res.eta_abs = 0.0;
            break;
        case CaseLabel::Case0_Sim: {
            res.d = std::acosh(c11);
            res.beta = 0.0;
            res.mu = 1.0;
            const double r = std::sqrt(c11 * c11 - 1.0);
            double phi = std::atan2(c.c13() / r, c.c12() / r);
            if (phi < 0.0) phi += kTwoPi;
            res.geodesics.push_back(GeodesicParams{0.0, phi, res.d});
            break;
        }
        case CaseLabel::CaseI_SO2: {
            const SolveOutcome out = solve_case(c11, info.eta_abs, info.label);
            res.beta = out.beta;
            res.d = out.d;
            res.mu = -1.0;
            // the endpoint rotation(beta t) does not depend on phi; report
            // two representatives of the one-parameter family of minimizers
            if (kPi - info.eta_abs <= 1e-9) {
                res.geodesics.push_back(GeodesicParams{out.beta, 0.0, out.d});
                res.geodesics.push_back(GeodesicParams{-out.beta, 0.0, out.d});
            } else {
                const double bs = std::copysign(out.beta, eta);
                res.geodesics.push_back(GeodesicParams{bs, 0.0, out.d});
                res.geodesics.push_back(GeodesicParams{bs, kPi, out.d});
            }
            break;
        }
        case CaseLabel::CaseII_EtaEqualsTheta: {
            res.beta = std::sqrt((1.0 + c11) / (c11 - 1.0));
            res.d = kPi * std::sqrt((c11 - 1.0) / 2.0);
            res.mu = 0.0;
            break;
        }
        case CaseLabel::CaseIVa_Horocycle: {
            res.beta = 1.0;
            res.d = std::sqrt(2.0 * (c11 - 1.0));
            res.mu = std::sqrt(2.0 / (1.0 + c11));
            break;
        }
        default: {
            const SolveOutcome out = solve_case(c11, info.eta_abs, info.label);
            res.beta = out.beta;
            res.d = out.d;
            res.mu = out.mu;
            res.gamma_angle = out.gamma;
            res.root_candidates = out.candidates;
            break;
        }
    }
    res.psi = std::acos(clamp01(res.mu));

    // minimizing geodesic parameters for the non-SO(2), non-trivial cases
    if (res.geodesics.empty() && info.label != CaseLabel::Identity) {
        const bool at_cut =
            in_cut_locus(c, kDefaultTol) == CutLocusMembership::K;
        if (at_cut) {
            const double phi1 = recover_phi(c, res.beta, res.d);
            const double phi2 = recover_phi(c, -res.beta, res.d);
            res.geodesics.push_back(GeodesicParams{res.beta, phi1, res.d});
            res.geodesics.push_back(GeodesicParams{-res.beta, phi2, res.d});
        } else {
            double bs = std::copysign(res.beta, eta);
            double phi = recover_phi(c, bs, res.d);
            // sign(eta) = sign(beta) along geodesics; keep a fallback in
            // case the recovered column data prefers the mirror branch
            const double r1 = max_abs_diff(geodesic_point(bs, phi, res.d), c);
            if (r1 > 1e-9 * (1.0 + c11)) {
                const double phi_m = recover_phi(c, -bs, res.d);
                if (max_abs_diff(geodesic_point(-bs, phi_m, res.d), c) < r1) {
                    bs = -bs;
                    phi = phi_m;
                }
            }
            res.geodesics.push_back(GeodesicParams{bs, phi, res.d});
        }
    }

    // diagnostics
    res.residuals.master_identity =
        std::abs(res.beta * res.d -
                 (res.eta_abs + 2.0 * std::acos(clamp01(res.mu))));
    if (info.label == CaseLabel::Identity || info.label == CaseLabel::Case0_Sim)
        res.residuals.master_identity = 0.0;
    double fwd = 0.0;
    for (const auto& g : res.geodesics)
        fwd = std::max(fwd, max_abs_diff(geodesic_point(g), c));
    res.residuals.forward_reconstruction = fwd;
    return res;
}

DistanceResult distance(const GroupElement& g, const GroupElement& h) {
    require_valid(g, kDefaultTol, "distance: first argument");
    require_valid(h, kDefaultTol, "distance: second argument");
    return distance_from_identity(multiply(inverse(g), h));
}

std::vector<GeodesicParams> minimizing_geodesics(const GroupElement& c) {
    if (max_abs_diff(c, GroupElement::identity()) <= kDefaultTol)
        throw std::domain_error("minimizing_geodesics: identity input");
    return distance_from_identity(c).geodesics;
}

}  // namespace so21
