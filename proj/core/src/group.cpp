#include "so21/group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace so21 {

namespace {

std::array<double, 9> matmul(const std::array<double, 9>& x,
                             const std::array<double, 9>& y) {
    std::array<double, 9> r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += x[3 * i + k] * y[3 * k + j];
            r[3 * i + j] = s;
        }
    return r;
}

double det3(const std::array<double, 9>& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) -
           m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

}  // namespace

double ValidationReport::max_residual() const {
    return std::max({pseudo_orthogonality, det_minus_one, c11_floor});
}

std::array<double, 9> basis_a() { return {0, 1, 0, 1, 0, 0, 0, 0, 0}; }
std::array<double, 9> basis_b() { return {0, 0, 1, 0, 0, 0, 1, 0, 0}; }
std::array<double, 9> basis_c() { return {0, 0, 0, 0, 0, -1, 0, 1, 0}; }

std::array<double, 9> realize(const AlgebraElement& x) {
    return {0,    x.xa, x.xb,
            x.xa, 0,    -x.xc,
            x.xb, x.xc, 0};
}

AlgebraElement lie_bracket(const AlgebraElement& x, const AlgebraElement& y) {
    return AlgebraElement{
        x.xb * y.xc - x.xc * y.xb,   // [b,c] = a
        x.xc * y.xa - x.xa * y.xc,   // [c,a] = b
        x.xb * y.xa - x.xa * y.xb};  // [a,b] = -c
}

ValidationReport validate(const GroupElement& m, double tol) {
    ValidationReport rep;
    for (double v : m.a)
        if (!std::isfinite(v)) {
            rep.finite = false;
            rep.accepted = false;
            rep.reason = "non-finite entry";
            rep.pseudo_orthogonality = rep.det_minus_one = rep.c11_floor =
                std::numeric_limits<double>::infinity();
            return rep;
        }

    const GroupElement inv = inverse(m);
    const std::array<double, 9> prod = matmul(m.a, inv.a);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            worst = std::max(worst, std::abs(prod[3 * i + j] - (i == j ? 1.0 : 0.0)));
    rep.pseudo_orthogonality = worst;
    rep.det_minus_one = std::abs(det3(m.a) - 1.0);
    rep.c11_floor = std::max(0.0, 1.0 - m.c11());

    const double scale = (1.0 + std::abs(m.c11())) * (1.0 + std::abs(m.c11()));
    rep.accepted = rep.max_residual() <= tol * scale;
    if (!rep.accepted) rep.reason = "membership residual above tolerance";
    return rep;
}

void require_valid(const GroupElement& m, double tol, const char* what) {
    const ValidationReport rep = validate(m, tol);
    if (!rep.accepted)
        throw validation_error(std::string(what) + ": not in SO0(2,1), " +
                               (rep.reason.empty() ? "residual too large" : rep.reason) +
                               " (max residual " + std::to_string(rep.max_residual()) + ")");
}

GroupElement inverse(const GroupElement& c) {
    GroupElement r;
    r.a = {c.c11(), -c.c21(), -c.c31(),
           -c.c12(), c.c22(), c.c32(),
           -c.c13(), c.c23(), c.c33()};
    return r;
}

GroupElement multiply_unchecked(const GroupElement& lhs, const GroupElement& rhs) {
    GroupElement r;
    r.a = matmul(lhs.a, rhs.a);
    return r;
}

GroupElement multiply(const GroupElement& lhs, const GroupElement& rhs) {
    GroupElement r = multiply_unchecked(lhs, rhs);
    const ValidationReport rep = validate(r, kDefaultTol);
    if (!rep.accepted)
        throw validation_error("product drifted out of SO0(2,1) (residual " +
                               std::to_string(rep.max_residual()) + ")");
    return r;
}

GroupElement rotation(double omega) {
    const double c = std::cos(omega), s = std::sin(omega);
    GroupElement r;
    r.a = {1, 0, 0,
           0, c, -s,
           0, s, c};
    return r;
}

GroupElement boost(double t) {
    const double ch = std::cosh(t), sh = std::sinh(t);
    GroupElement r;
    r.a = {ch, sh, 0,
           sh, ch, 0,
           0, 0, 1};
    return r;
}

std::array<double, 9> mat_exp(const std::array<double, 9>& x) {
    double norm = 0.0;  // max row sum
    for (int i = 0; i < 3; ++i)
        norm = std::max(norm, std::abs(x[3 * i]) + std::abs(x[3 * i + 1]) +
                                  std::abs(x[3 * i + 2]));
    int squarings = 0;
    if (norm > 0.25) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
        squarings = std::max(squarings, 0);
    }
    const double scale = std::ldexp(1.0, -squarings);
    std::array<double, 9> xs{};
    for (int i = 0; i < 9; ++i) xs[i] = x[i] * scale;

    std::array<double, 9> result{1, 0, 0, 0, 1, 0, 0, 0, 1};
    std::array<double, 9> term{1, 0, 0, 0, 1, 0, 0, 0, 1};
    for (int k = 1; k <= 30; ++k) {
        term = matmul(term, xs);
        double tmax = 0.0;
        for (int i = 0; i < 9; ++i) {
            term[i] /= k;
            result[i] += term[i];
            tmax = std::max(tmax, std::abs(term[i]));
        }
        if (tmax < 1e-300 || tmax < 1e-18 * std::abs(result[0])) break;
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

GroupElement exp_algebra(const AlgebraElement& x) {
    GroupElement r;
    r.a = mat_exp(realize(x));
    return r;
}

HyperboloidPoint project_base(const GroupElement& c) {
    return HyperboloidPoint{c.c11(), c.c21(), c.c31()};
}

double max_abs_diff(const GroupElement& lhs, const GroupElement& rhs) {
    double worst = 0.0;
    for (int i = 0; i < 9; ++i)
        worst = std::max(worst, std::abs(lhs.a[static_cast<std::size_t>(i)] -
                                         rhs.a[static_cast<std::size_t>(i)]));
    return worst;
}

double symmetry_residual(const GroupElement& c) {
    return std::max({std::abs(c.c12() - c.c21()),
                     std::abs(c.c13() - c.c31()),
                     std::abs(c.c23() - c.c32())});
}

}  // namespace so21
