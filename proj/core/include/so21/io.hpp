#pragma once

#include <string>
#include <vector>

#include "so21/distance.hpp"
#include "so21/geodesic.hpp"
#include "so21/group.hpp"
#include "so21/oracle.hpp"
#include "so21/structure.hpp"

namespace so21 {

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/**
 * Parse a matrix from a named constructor ("identity", "rotation w",
 * "boost t", "geodesic beta phi t"), a JSON array of 9 row-major numbers,
 * or 9 whitespace-separated numbers. Throws std::invalid_argument with the
 * failing position on malformed input; the result is not validated.
 */
GroupElement parse_matrix(const std::string& text);

/// {"matrix": [c11..c33], "residuals": {...}, "accepted": bool}
std::string matrix_json(const GroupElement& c, double tol = kDefaultTol);

/// Distance result: d, case, beta, mu, eta_abs, gamma_angle, psi,
/// geodesics, residuals.
std::string distance_json(const DistanceResult& r);

std::string classification_json(const Classification& c);

std::string decomposition_json(const Decomposition& d);

std::string oracle_json(const OracleReport& r);

/// CSV batch report, one row per verified target:
/// index,t_min,match_residual,analytic_d,gap,hit_found,consistent
std::string oracle_csv(const std::vector<OracleReport>& reports);

/// CSV trace: header t,c11,...,c33,hx,hy,ht, one row per sample.
std::string trace_csv(const std::vector<TracePoint>& trace);

/// JSON array mirroring the CSV fields.
std::string trace_json(const std::vector<TracePoint>& trace);

}  // namespace so21
