#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "so21/distance.hpp"
#include "so21/structure.hpp"

using namespace so21;

namespace {

constexpr double kPi = std::numbers::pi;

double clamp01(double x) { return std::min(1.0, std::max(-1.0, x)); }

// sample below the cut time; |beta| in [0.05, 3], t <= min(0.9 T, 8)
GroupElement sample_below_cut(std::mt19937_64& rng, double* t_out = nullptr,
                              double* beta_out = nullptr) {
    std::uniform_real_distribution<double> ub(-3.0, 3.0), up(0.0, 2.0 * kPi),
        uu(0.05, 1.0);
    double beta = ub(rng);
    if (std::abs(beta) < 0.05) beta = std::copysign(0.05, beta == 0.0 ? 1.0 : beta);
    const double horizon = std::min(0.9 * cut_time(beta), 8.0);
    const double t = uu(rng) * horizon;
    if (t_out) *t_out = t;
    if (beta_out) *beta_out = beta;
    return geodesic_point(beta, up(rng), t);
}

}  // namespace

TEST_CASE("classify_case routes the constructed samples") {
    CHECK(classify_case(GroupElement::identity()).label == CaseLabel::Identity);
    CHECK(classify_case(boost(1.0)).label == CaseLabel::Case0_Sim);
    CHECK(classify_case(rotation(2.0)).label == CaseLabel::CaseI_SO2);

    const GroupElement anchor =
        geodesic_point(2.0 / std::sqrt(3.0), 0.0, kPi * std::sqrt(3.0));
    const CaseInfo ii = classify_case(anchor);
    CHECK(ii.label == CaseLabel::CaseII_EtaEqualsTheta);
    CHECK(anchor.c11() == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(ii.eta_abs == doctest::Approx(kPi).epsilon(1e-12));

    CHECK(classify_case(geodesic_point(0.5, 0.3, 1.0)).label ==
          CaseLabel::CaseIVb_EtaBelowAlpha);
    CHECK(classify_case(geodesic_point(1.0, 0.3, 2.0)).label ==
          CaseLabel::CaseIVa_Horocycle);
    CHECK(classify_case(geodesic_point(1.25, 0.5, 4.5)).label ==
          CaseLabel::CaseIII_EtaAboveTheta);
    CHECK(classify_case(geodesic_point(1.05, 1.0, 3.0)).label ==
          CaseLabel::CaseIVc_AlphaToTheta);
}

TEST_CASE("solve_beta") {
    SUBCASE("rotation(pi) solves to 3/sqrt(5) with vanishing mbp residual") {
        const double beta = solve_beta(rotation(kPi), CaseLabel::CaseI_SO2);
        CHECK(beta == doctest::Approx(3.0 / std::sqrt(5.0)).epsilon(1e-12));
        const double res =
            2.0 * beta * kPi / std::sqrt(beta * beta - 1.0) - (kPi + 2.0 * kPi);
        CHECK(std::abs(res) < 1e-10);
    }
    SUBCASE("forward-generated IVb sample recovers its beta") {
        const GroupElement c = geodesic_point(0.5, 0.3, 1.0);
        CHECK(solve_beta(c, CaseLabel::CaseIVb_EtaBelowAlpha) ==
              doctest::Approx(0.5).epsilon(1e-8));
    }
    SUBCASE("the III and IVc residuals vanish at the case II boundary") {
        // c11 = 7, |eta| = pi, beta = 2/sqrt(3), i.e. v = 1/2:
        // III: (2pi - gamma)/v - 2 arccos(-|mu|) - |eta| with gamma = pi, mu = 0
        const double c11 = 7.0, v = 0.5;
        const double singam =
            v * std::sqrt((c11 - 1.0) / (2.0 * (1.0 - v * v)));
        const double gamma = 2.0 * std::asin(std::min(1.0, singam));
        CHECK(gamma == doctest::Approx(kPi).epsilon(1e-12));
        const double mu = std::sqrt(std::max(0.0, (2.0 / (1.0 + c11) - v * v) /
                                                      (1.0 - v * v)));
        const double res_iii =
            (2.0 * kPi - gamma) / v - 2.0 * std::acos(-mu) - kPi;
        const double res_ivc = gamma / v - 2.0 * std::acos(mu) - kPi;
        CHECK(std::abs(res_iii) < 1e-10);
        CHECK(std::abs(res_ivc) < 1e-10);
    }
    SUBCASE("closed-form cases refuse root finding") {
        CHECK_THROWS_AS(solve_beta(boost(1.0), CaseLabel::Case0_Sim),
                        std::invalid_argument);
    }
    SUBCASE("an unbracketable equation reports a solver failure") {
        // |eta| > theta here, so the IVc residual has no sign change
        const GroupElement c = geodesic_point(1.25, 0.5, 4.5);
        CHECK_THROWS_AS(solve_beta(c, CaseLabel::CaseIVc_AlphaToTheta),
                        solver_error);
    }
}

TEST_CASE("distance_from_identity anchors") {
    SUBCASE("Sim: d = arcosh(c11)") {
        const DistanceResult r = distance_from_identity(boost(1.0));
        CHECK(r.case_label == CaseLabel::Case0_Sim);
        CHECK(r.d == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.beta == 0.0);
        CHECK(r.mu == 1.0);
        REQUIRE(r.geodesics.size() == 1);
        CHECK(r.geodesics[0].t == r.d);
        CHECK(r.residuals.forward_reconstruction < 1e-12);
    }
    SUBCASE("case II anchor: c11 = 7 at distance pi sqrt(3)") {
        const GroupElement c =
            geodesic_point(2.0 / std::sqrt(3.0), 0.0, kPi * std::sqrt(3.0));
        const DistanceResult r = distance_from_identity(c);
        CHECK(r.case_label == CaseLabel::CaseII_EtaEqualsTheta);
        CHECK(r.d == doctest::Approx(kPi * std::sqrt(3.0)).epsilon(1e-12));
        CHECK(r.beta == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
        CHECK(r.mu == 0.0);
        CHECK(r.psi == doctest::Approx(kPi / 2.0));
    }
    SUBCASE("rotation(pi): d = pi sqrt(5) at beta = 3/sqrt(5)") {
        const DistanceResult r = distance_from_identity(rotation(kPi));
        CHECK(r.case_label == CaseLabel::CaseI_SO2);
        CHECK(r.d == doctest::Approx(kPi * std::sqrt(5.0)).epsilon(1e-12));
        CHECK(r.beta == doctest::Approx(3.0 / std::sqrt(5.0)).epsilon(1e-12));
        CHECK(r.mu == -1.0);
        REQUIRE(r.geodesics.size() == 2);
    }
    SUBCASE("identity: zero distance, no geodesics") {
        const DistanceResult r = distance_from_identity(GroupElement::identity());
        CHECK(r.d == 0.0);
        CHECK(r.case_label == CaseLabel::Identity);
        CHECK(r.geodesics.empty());
    }
}

TEST_CASE("pair distance and left invariance") {
    std::mt19937_64 rng(41);
    const GroupElement g = sample_below_cut(rng);
    CHECK(distance(g, g).d == 0.0);
    CHECK(distance(g, multiply(g, boost(1.0))).d ==
          doctest::Approx(1.0).epsilon(1e-9));

    for (int i = 0; i < 30; ++i) {
        const GroupElement x = sample_below_cut(rng);
        const GroupElement y = sample_below_cut(rng);
        const double base = distance(x, y).d;
        const GroupElement k = rotation(0.3);
        const double moved = distance(multiply(k, x), multiply(k, y)).d;
        CHECK(moved == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("round trip: distance recovers the arclength below the cut time") {
    std::mt19937_64 rng(42);
    bool saw[8] = {};
    for (int i = 0; i < 400; ++i) {
        double t = 0.0, beta = 0.0;
        const GroupElement c = sample_below_cut(rng, &t, &beta);
        const DistanceResult r = distance_from_identity(c);
        saw[static_cast<int>(r.case_label)] = true;
        CHECK(std::abs(r.d - t) < 1e-6);
        REQUIRE(!r.geodesics.empty());
        for (const auto& g : r.geodesics) {
            CHECK(g.t == r.d);
            CHECK(max_abs_diff(geodesic_point(g), c) < 1e-6);
        }
        CHECK(r.residuals.master_identity < 1e-8);
    }
    CHECK(saw[static_cast<int>(CaseLabel::CaseIII_EtaAboveTheta)]);
    CHECK(saw[static_cast<int>(CaseLabel::CaseIVb_EtaBelowAlpha)]);
    CHECK(saw[static_cast<int>(CaseLabel::CaseIVc_AlphaToTheta)]);
}

TEST_CASE("geodesics are paths: d <= t even beyond the cut time") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> ub(-3.0, 3.0), up(0.0, 2.0 * kPi),
        ut(0.0, 8.0);
    for (int i = 0; i < 150; ++i) {
        double beta = ub(rng);
        if (std::abs(beta) < 0.05) beta = 0.05;
        const double t = ut(rng);
        const DistanceResult r =
            distance_from_identity(geodesic_point(beta, up(rng), t));
        CHECK(r.d <= t + 1e-9);
    }
}

TEST_CASE("metric symmetry and SO(2) conjugation invariance") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> uw(-kPi, kPi);
    for (int i = 0; i < 80; ++i) {
        const GroupElement c = sample_below_cut(rng);
        const double d = distance_from_identity(c).d;
        CHECK(distance_from_identity(inverse(c)).d == doctest::Approx(d).epsilon(1e-8));
        const GroupElement k = rotation(uw(rng));
        const GroupElement conj = multiply(multiply(k, c), inverse(k));
        CHECK(distance_from_identity(conj).d == doctest::Approx(d).epsilon(1e-8));
    }
}

TEST_CASE("triangle inequality on random triples") {
    std::mt19937_64 rng(45);
    for (int i = 0; i < 60; ++i) {
        const GroupElement x = sample_below_cut(rng);
        const GroupElement y = sample_below_cut(rng);
        const GroupElement z = sample_below_cut(rng);
        const double dxy = distance(x, y).d;
        const double dyz = distance(y, z).d;
        const double dxz = distance(x, z).d;
        CHECK(dxz <= dxy + dyz + 1e-8);
    }
}

TEST_CASE("solved beta lands in the case brackets") {
    std::mt19937_64 rng(46);
    for (int i = 0; i < 200; ++i) {
        const GroupElement c = sample_below_cut(rng);
        const DistanceResult r = distance_from_identity(c);
        const double c11 = c.c11();
        const double bii = std::sqrt((1.0 + c11) / (c11 - 1.0));
        if (r.beta > 0.0 && r.case_label != CaseLabel::CaseI_SO2) {
            const double mu_expected = std::sqrt(
                std::max(0.0, 1.0 - r.beta * r.beta * (c11 - 1.0) / (1.0 + c11)));
            CHECK(std::abs(std::abs(r.mu) - mu_expected) < 1e-8);
        }
        switch (r.case_label) {
            case CaseLabel::CaseIII_EtaAboveTheta:
                CHECK(r.beta > 2.0 / std::sqrt(3.0));
                CHECK(r.beta < bii);
                CHECK(r.gamma_angle >= 0.0);
                CHECK(r.gamma_angle < kPi);
                break;
            case CaseLabel::CaseIVb_EtaBelowAlpha:
                CHECK(r.beta > 0.0);
                CHECK(r.beta < 1.0);
                break;
            case CaseLabel::CaseIVc_AlphaToTheta:
                CHECK(r.beta > 1.0);
                CHECK(r.beta < bii);
                CHECK(r.gamma_angle > 0.0);
                CHECK(r.gamma_angle < kPi);
                break;
            case CaseLabel::CaseI_SO2:
                CHECK(r.beta >= 3.0 / std::sqrt(5.0) - 1e-12);
                break;
            default:
                break;
        }
    }
}

TEST_CASE("minimizing geodesics on and off the cut locus") {
    SUBCASE("interior Sim point has exactly one") {
        const auto gs = minimizing_geodesics(boost(1.0));
        REQUIRE(gs.size() == 1);
        CHECK(gs[0].beta == 0.0);
        CHECK(gs[0].phi == doctest::Approx(0.0));
        CHECK(gs[0].t == doctest::Approx(1.0));
    }
    SUBCASE("SO(2) cut point has two representatives") {
        const auto gs = minimizing_geodesics(rotation(kPi / 2.0));
        REQUIRE(gs.size() == 2);
        for (const auto& g : gs)
            CHECK(max_abs_diff(geodesic_point(g), rotation(kPi / 2.0)) < 1e-9);
        CHECK((gs[0].beta != gs[1].beta || gs[0].phi != gs[1].phi));
    }
    SUBCASE("K(e) cut point has two, with opposite beta signs") {
        const GroupElement c = multiply(boost(1.0), rotation(kPi));
        const DistanceResult r = distance_from_identity(c);
        REQUIRE(r.geodesics.size() == 2);
        CHECK(r.geodesics[0].beta == doctest::Approx(-r.geodesics[1].beta));
        for (const auto& g : r.geodesics) {
            CHECK(g.t == r.d);
            CHECK(max_abs_diff(geodesic_point(g), c) < 1e-6);
        }
        CHECK(std::abs(r.geodesics[0].phi - r.geodesics[1].phi) > 1e-3);
    }
    SUBCASE("identity is rejected") {
        CHECK_THROWS_AS(minimizing_geodesics(GroupElement::identity()),
                        std::domain_error);
    }
}

TEST_CASE("the cut time separates minimizing from non-minimizing segments") {
    // d = t just below T(beta), d strictly below t just past it
    for (double beta : {0.3, 0.6, 1.0, 1.25, 1.5, 2.0, 2.8}) {
        const double T = cut_time(beta);
        const double t_below = 0.99 * T;
        CHECK(distance_from_identity(geodesic_point(beta, 0.4, t_below)).d ==
              doctest::Approx(t_below).epsilon(1e-9));
        const double t_past = 1.05 * T;
        const double d_past =
            distance_from_identity(geodesic_point(beta, 0.4, t_past)).d;
        CHECK(d_past < t_past - 1e-3);
    }
}

TEST_CASE("solver invariants hold on arbitrary composed elements") {
    // elements built as geodesic endpoints right-multiplied by rotations,
    // covering the group beyond single below-cut endpoints
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> ub(-5.0, 5.0), up(0.0, 2.0 * kPi),
        ut(0.0, 5.0), uw(-kPi, kPi);
    for (int i = 0; i < 200; ++i) {
        const GroupElement c = multiply(geodesic_point(ub(rng), up(rng), ut(rng)),
                                        rotation(uw(rng)));
        const DistanceResult r = distance_from_identity(c);
        const double scale = 1.0 + c.c11();
        CHECK(r.d >= 0.0);
        CHECK(r.residuals.master_identity < 1e-8 * scale);
        if (r.case_label != CaseLabel::Identity) {
            REQUIRE(!r.geodesics.empty());
            CHECK(r.residuals.forward_reconstruction < 1e-6 * scale);
        }
    }
}

TEST_CASE("case II boundary: III and IVc converge to the closed form") {
    // Construct elements with fixed c11 and |eta| = theta +- delta by
    // bisecting beta; t is the first (IVc side) or second (III side)
    // c11-crossing of the geodesic. d has a sqrt cusp in |eta| at the
    // boundary, so the attainable agreement at delta is O(sqrt(delta)).
    const double c11 = 3.0;
    const double d_ii = kPi * std::sqrt((c11 - 1.0) / 2.0);
    const double theta = theta_threshold(c11);

    auto eta_of = [&](double beta, bool second_branch) {
        const double r = std::sqrt(beta * beta - 1.0);
        const double x = std::acos(clamp01(1.0 - (c11 - 1.0) * (beta * beta - 1.0)));
        const double t = (second_branch ? 2.0 * kPi - x : x) / r;
        return std::pair<double, double>(std::abs(eta_angle(geodesic_point(beta, 0.4, t))), t);
    };
    auto bisect_eta = [&](double target, bool second_branch) {
        double lo = 1.0 + 1e-9, hi = std::sqrt((1.0 + c11) / (c11 - 1.0)) - 1e-12;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            const bool below = eta_of(mid, second_branch).first < target;
            // |eta| grows with beta on the first branch, falls on the second
            if (below == !second_branch)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    for (double delta : {1e-6, 1e-9}) {
        const double tol = (delta == 1e-6) ? 5e-3 : 1e-4;
        {
            const double b = bisect_eta(theta - delta, false);
            const auto [eta, t] = eta_of(b, false);
            const DistanceResult r =
                distance_from_identity(geodesic_point(b, 0.4, t));
            CHECK(r.case_label == CaseLabel::CaseIVc_AlphaToTheta);
            CHECK(std::abs(r.d - d_ii) < tol);
        }
        {
            const double b = bisect_eta(theta + delta, true);
            const auto [eta, t] = eta_of(b, true);
            const DistanceResult r =
                distance_from_identity(geodesic_point(b, 0.4, t));
            CHECK(r.case_label == CaseLabel::CaseIII_EtaAboveTheta);
            CHECK(std::abs(r.d - d_ii) < tol);
        }
    }
}
