#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace so21 {

/// Thrown when a matrix fails the group membership checks.
class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a transcendental solve cannot bracket or refine a root.
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Element of the shortened Lorentz group SO0(2,1), stored as a row-major
 * 3x3 matrix. Entries are exposed with the 1-based names c11..c33 used
 * throughout the library.
 *
 * A valid element satisfies C^{-1} = I C^T I with I = diag(-1,1,1),
 * det(C) = 1 and c11 >= 1; use validate() to check numerically.
 */
struct GroupElement {
    std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double& at(int r, int c) { return a[static_cast<std::size_t>(3 * r + c)]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(3 * r + c)]; }

    double c11() const { return a[0]; }
    double c12() const { return a[1]; }
    double c13() const { return a[2]; }
    double c21() const { return a[3]; }
    double c22() const { return a[4]; }
    double c23() const { return a[5]; }
    double c31() const { return a[6]; }
    double c32() const { return a[7]; }
    double c33() const { return a[8]; }

    static GroupElement identity() { return GroupElement{}; }
};

/// Lie algebra element x_a*a + x_b*b + x_c*c in the so(2,1) basis where
/// a, b span the horizontal distribution and c generates SO(2).
struct AlgebraElement {
    double xa = 0.0;
    double xb = 0.0;
    double xc = 0.0;
};

/// Point (t,x,y) on the upper hyperboloid -t^2 + x^2 + y^2 = -1, t >= 1.
struct HyperboloidPoint {
    double t = 1.0;
    double x = 0.0;
    double y = 0.0;
};

/// Residuals of the group membership conditions for one matrix.
struct ValidationReport {
    double pseudo_orthogonality = 0.0;  ///< max entry of |C (I C^T I) - E|
    double det_minus_one = 0.0;         ///< |det(C) - 1|
    double c11_floor = 0.0;             ///< max(0, 1 - c11)
    bool finite = true;
    bool accepted = false;
    std::string reason;

    double max_residual() const;
};

inline constexpr double kDefaultTol = 1e-9;

/// Basis matrices of so(2,1) realized as GroupElement-shaped arrays
/// (not group elements; convenience for bracket/exponential tests).
std::array<double, 9> basis_a();
std::array<double, 9> basis_b();
std::array<double, 9> basis_c();

/// Realize x_a*a + x_b*b + x_c*c as a 3x3 matrix.
std::array<double, 9> realize(const AlgebraElement& x);

/// Lie bracket in coordinates: [a,b] = -c, [b,c] = a, [c,a] = b.
AlgebraElement lie_bracket(const AlgebraElement& x, const AlgebraElement& y);

/// Check the three group membership residuals.
/// Acceptance compares each raw residual against tol*(1+|c11|)^2; residuals
/// of exact elements grow like c11^2 * eps, so the scale keeps the default
/// tolerance meaningful for large boosts.
ValidationReport validate(const GroupElement& m, double tol = kDefaultTol);

/// validate() that throws validation_error instead of reporting.
void require_valid(const GroupElement& m, double tol = kDefaultTol,
                   const char* what = "matrix");

/// Group inverse C^{-1} = I C^T I (no arithmetic beyond sign flips).
GroupElement inverse(const GroupElement& c);

/// Matrix product, revalidated; throws validation_error on numeric drift.
GroupElement multiply(const GroupElement& lhs, const GroupElement& rhs);

/// Raw matrix product without revalidation.
GroupElement multiply_unchecked(const GroupElement& lhs, const GroupElement& rhs);

/// Rotation subgroup element 1 (+) R(omega); c32 = sin(omega).
GroupElement rotation(double omega);

/// One-parameter boost exp(t*a).
GroupElement boost(double t);

/// Matrix exponential of a realized algebra element
/// (scaling-and-squaring, accurate to ~1e-13 relative for norms <= 10).
GroupElement exp_algebra(const AlgebraElement& x);

/// Generic 3x3 exponential used by exp_algebra; exposed for the geodesic
/// product formula.
std::array<double, 9> mat_exp(const std::array<double, 9>& x);

/// First column of C = image of the base point (1,0,0) on the hyperboloid.
HyperboloidPoint project_base(const GroupElement& c);

/// max |a_ij - b_ij|
double max_abs_diff(const GroupElement& lhs, const GroupElement& rhs);

/// max |c_ij - c_ji|
double symmetry_residual(const GroupElement& c);

}  // namespace so21
