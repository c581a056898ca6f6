#pragma once

#include <optional>

#include "so21/geodesic.hpp"
#include "so21/group.hpp"

namespace so21 {

/// n(C) = c11 - 1; zero exactly on the SO(2) subgroup.
double n_index(const GroupElement& c);

/**
 * Rotation angle of the SO(2) factor in the unique decomposition
 * C = s1 k1 with s1 symmetric: cos eta = (c22+c33)/(1+c11),
 * sin eta = (c32-c23)/(1+c11). Principal value in (-pi, pi].
 */
double eta_angle(const GroupElement& c);

/// Threshold theta = pi (sqrt((1+c11)/2) - 1) separating the circle regime.
double theta_threshold(double c11);

/// Threshold alpha = sqrt(2(c11-1)) - 2 arccos sqrt(2/(1+c11)) (horocycle).
double alpha_threshold(double c11);

/// Symmetry tolerance scaled with the entry growth, 1e-8 * (1 + c11).
double sim_tolerance(const GroupElement& c);

/// Membership in Sim: symmetric and not the half-turn 1 (+) (-E2).
/// The identity belongs to Sim (t = 0 case).
bool is_in_sim(const GroupElement& c, double tol);

/// Unique factorization C = s1 k1 = k1 s2 with s1, s2 symmetric and
/// k1 = rotation(eta).
struct Decomposition {
    GroupElement s1;
    GroupElement k1;
    GroupElement s2;
    double eta = 0.0;
};

Decomposition decompose(const GroupElement& c);

enum class CutLocusMembership { No, K, ConjugateSO2 };

/**
 * Cut locus test for the identity. ConjugateSO2 when C lies in
 * SO(2) - {e}; K when c21 = -c12, c31 = -c13, c23 = c32 and
 * c22 + c33 < 0 (equivalently eta = pi). Throws std::domain_error for
 * the identity itself.
 */
CutLocusMembership in_cut_locus(const GroupElement& c, double tol = kDefaultTol);

struct ConjugateWitness {
    bool in_set = false;
    std::optional<GeodesicParams> witness;  // empty on the SO(2) branch
};

/**
 * Conjugate set membership. SO(2) - {e} is the first conjugate set; other
 * conjugate points lie on geodesics with beta^2 > 1 at parameter values
 * where tan x = x for x = t sqrt(beta^2-1)/2. For those the candidate
 * beta is pinned by c11 per root, so the search runs over the first
 * max_roots fixed points; points generated by later roots are reported as
 * not found (resolution limit).
 */
ConjugateWitness in_conjugate_set(const GroupElement& c, double tol = 1e-6,
                                  int max_roots = 8);

/// k-th positive fixed point of tan x = x (k=1 lies in (pi, 3pi/2)).
double tan_fixed_point(int k = 1);

/**
 * mu(t) = m / sqrt(c11^2 - 1) along gamma(beta, ., t), in a
 * cancellation-free half-angle form that stays finite for all t.
 */
double mu_along(double beta, double t);

/// Unwrapped decomposition angle |eta| along gamma(|beta|, ., t) within the
/// first projection period: |beta| t - 2 arccos(mu_along).
double swept_angle(double beta, double t);

/**
 * Cut time T(beta): the geodesic gamma(beta, phi; .) is a noncontinuable
 * shortest arc on [0, T]. Closed form 2 pi / sqrt(beta^2 - 1) for
 * |beta| >= 3/sqrt(5); for 0 < |beta| < 3/sqrt(5) the first root of
 * swept_angle(t) = pi (the K(e) hit), by scan and bisection. Returns
 * +infinity for beta = 0. Independent of phi.
 */
double cut_time(double beta);

/// First conjugate time 2 x1 / sqrt(beta^2 - 1) on the tan x = x branch;
/// empty when beta^2 <= 1.
std::optional<double> first_conjugate_time(double beta);

enum class ElementClass { Identity, SO2, Sim, CutLocusK, Generic };

const char* to_string(ElementClass c);

struct ClassificationResiduals {
    double symmetry = 0.0;  ///< max |c_ij - c_ji|
    double cutK = 0.0;      ///< max residual of the four K(e) conditions
    double so2 = 0.0;       ///< n(C) = c11 - 1
};

struct Classification {
    ElementClass label = ElementClass::Identity;
    bool conjugate_flag = false;
    double eta = 0.0;
    double theta = 0.0;
    double alpha = 0.0;
    ClassificationResiduals residuals;
};

/**
 * Structural classification of one element. conjugate_flag reports the
 * SO(2) branch of S(e) by default; with search_conjugate it also runs
 * the tan x = x witness search.
 */
Classification classify(const GroupElement& c, double tol = kDefaultTol,
                        bool search_conjugate = false);

}  // namespace so21
