#pragma once

#include <vector>

#include "so21/geodesic.hpp"
#include "so21/group.hpp"

namespace so21 {

/// Branches of the closed-form distance case analysis. Exactly one per
/// input under the tolerance bands of classify_case.
enum class CaseLabel {
    Identity,
    Case0_Sim,
    CaseI_SO2,
    CaseII_EtaEqualsTheta,
    CaseIII_EtaAboveTheta,
    CaseIVa_Horocycle,
    CaseIVb_EtaBelowAlpha,
    CaseIVc_AlphaToTheta,
};

const char* to_string(CaseLabel label);

struct CaseInfo {
    CaseLabel label = CaseLabel::Identity;
    double eta_abs = 0.0;  ///< |eta| in [0, pi]
    double theta = 0.0;
    double alpha = 0.0;
};

/// Route C to its distance case by |eta| against theta and alpha.
/// Boundary routing uses a band of 1e-9 (1 + threshold).
CaseInfo classify_case(const GroupElement& c, double tol = kDefaultTol);

struct DistanceResiduals {
    double master_identity = 0.0;        ///< | |beta| d - |eta| - 2 arccos mu |
    double forward_reconstruction = 0.0; ///< max over returned geodesics of
                                         ///< max|gamma(g) - C|
};

struct DistanceResult {
    double d = 0.0;             ///< sub-Riemannian distance to the identity
    CaseLabel case_label = CaseLabel::Identity;
    double beta = 0.0;          ///< solved |beta| (0 for Sim)
    double mu = 1.0;            ///< signed mu = m / sqrt(c11^2-1)
    double eta_abs = 0.0;
    double gamma_angle = 0.0;   ///< central angle, cases III and IVc only
    double psi = 0.0;           ///< arccos(mu), diagnostic
    std::vector<GeodesicParams> geodesics;  ///< 1 generically, 2 on the cut locus
    DistanceResiduals residuals;
    int root_candidates = 1;    ///< sign changes seen by the bracketed solver
};

/**
 * Solve the active case's transcendental equation for |beta|.
 * Only the root-finding cases are accepted (I, III, IVb, IVc); the
 * closed-form cases (0, II, IVa) bypass this operation. The residual of
 * the case equation at the returned beta is below 1e-10. Throws
 * solver_error when no bracketed sign change exists.
 */
double solve_beta(const GroupElement& c, CaseLabel label);

/// Distance d(e, C) with the minimizing geodesic parameters recovered.
DistanceResult distance_from_identity(const GroupElement& c);

/// d(g, h) = d(e, g^{-1} h) by left invariance; geodesics are reported in
/// identity-based coordinates (left translate by g at the call site).
DistanceResult distance(const GroupElement& g, const GroupElement& h);

/// Minimizing geodesic parameters only: one entry generically, exactly two
/// on the cut locus. Throws std::domain_error for the identity.
std::vector<GeodesicParams> minimizing_geodesics(const GroupElement& c);

}  // namespace so21
