#pragma once

#include <optional>
#include <vector>

#include "so21/geodesic.hpp"
#include "so21/group.hpp"

namespace so21 {

/// Shooting grid over (beta, phi, t) in [-beta_max, beta_max] x [0, 2pi) x
/// [0, t_max]. Steps are point counts per axis (>= 2). Refinement rounds
/// re-grid a shrinking box around the best candidate.
struct GridSpec {
    double beta_max = 3.0;
    int beta_steps = 41;
    int phi_steps = 64;
    int t_steps = 321;
    double t_max = 9.0;
    int refine_rounds = 3;
};

/// Validates the GridSpec invariants (beta_max >= 3, steps >= 2, t_max > 0).
void require_valid(const GridSpec& grid);

struct OracleHit {
    GeodesicParams params;
    double residual = 0.0;  ///< max |gamma(params) - C|
};

struct OracleReport {
    double t_min = 0.0;          ///< best shooting time; +inf when no hit
    GeodesicParams best_params;  ///< best hit, or best near-miss when t_min = inf
    double match_residual = 0.0;
    double analytic_d = 0.0;     ///< filled by verify_distance
    double gap = 0.0;            ///< t_min - analytic_d
    bool hit_found = false;
    bool consistent = false;     ///< |gap| <= tol (verify_distance only)
    /// hits near the minimal time: raw coarse-grid hits plus the converged
    /// refinement chains (distinct entries at a cut point expose the two
    /// minimizer families)
    std::vector<OracleHit> near_hits;
    std::vector<GeodesicParams> analytic_geodesics;  ///< verify_distance only
};

/**
 * Brute-force upper bound on d(e, C): scan the forward map over the grid,
 * record the minimal t whose endpoint matches C entrywise within hit_tol,
 * then refine shrinking boxes refine_rounds times around the best candidate
 * of every (t-bucket, sign beta) cell, each chain finished by a damped
 * Gauss-Newton descent. Deterministic: ties break lexicographically by
 * (t, beta, phi). Returns a no-hit report (t_min = +inf) instead of
 * throwing when nothing matches at the final resolution. threads = 0 picks
 * hardware concurrency.
 */
OracleReport shoot_min_time(const GroupElement& c, const GridSpec& grid,
                            double hit_tol = 1e-3, int threads = 1);

/**
 * Runs shoot_min_time and distance_from_identity, reports both and flags
 * consistency |t_min - d| <= tol. Discrepancies are reported (consistent =
 * false, both parameter sets present), never thrown.
 */
OracleReport verify_distance(const GroupElement& c, const GridSpec& grid,
                             double tol = 1e-3, double hit_tol = 1e-3,
                             int threads = 1);

}  // namespace so21
