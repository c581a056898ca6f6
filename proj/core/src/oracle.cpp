#include "so21/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "so21/distance.hpp"

namespace so21 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Candidate {
    double t = kInf;
    double beta = 0.0;
    double phi = 0.0;
    double residual = kInf;
    bool valid = false;
};

// lexicographic (t, beta, phi): deterministic reduction order for hits
bool hit_less(const Candidate& a, const Candidate& b) {
    if (!a.valid || !b.valid) return a.valid;
    if (a.t != b.t) return a.t < b.t;
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.phi < b.phi;
}

bool miss_less(const Candidate& a, const Candidate& b) {
    if (!a.valid || !b.valid) return a.valid;
    if (a.residual != b.residual) return a.residual < b.residual;
    if (a.t != b.t) return a.t < b.t;
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.phi < b.phi;
}

struct Box {
    double beta_lo, beta_hi;
    double phi_lo, phi_hi;
    double t_lo, t_hi;
    int nb, np, nt;
};

double grid_value(double lo, double hi, int i, int n) {
    if (n <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

constexpr int kTimeBuckets = 24;

struct ScanResult {
    Candidate best_hit;
    Candidate best_miss;
    std::vector<OracleHit> hits;  // only collected when requested
    // champions[bucket] for beta >= 0, champions[kTimeBuckets + bucket] for
    // beta < 0: the two minimizer families at a cut point differ by the sign
    // of beta, so both seed a refinement chain
    std::vector<Candidate> bucket_champions;
};

// phi is scanned over [phi_lo, phi_hi); the matrix entries only need
// cos/sin of phi and of (beta t - phi), so the inner phi loop is
// trigonometry-free given the per-(beta,t) scalars. With track_buckets the
// best near-miss is kept per t-bucket, seeding one refinement chain each so
// that low-t basins are not shadowed by a better-matching high-t one.
ScanResult scan_box(const GroupElement& target, const Box& box, double hit_tol,
                    bool collect_hits, bool track_buckets, int threads) {
    const int nb = box.nb;
    std::vector<double> cp(static_cast<std::size_t>(box.np)),
        sp(static_cast<std::size_t>(box.np)),
        phiv(static_cast<std::size_t>(box.np));
    for (int j = 0; j < box.np; ++j) {
        // half-open [lo, hi): endpoint identified with the start by 2pi
        const double phi = box.phi_lo + (box.phi_hi - box.phi_lo) *
                                            static_cast<double>(j) /
                                            static_cast<double>(box.np);
        phiv[static_cast<std::size_t>(j)] = phi;
        cp[static_cast<std::size_t>(j)] = std::cos(phi);
        sp[static_cast<std::size_t>(j)] = std::sin(phi);
    }

    auto scan_beta_range = [&](int ib_lo, int ib_hi, ScanResult& out) {
        if (track_buckets)
            out.bucket_champions.resize(2 * kTimeBuckets);
        for (int ib = ib_lo; ib < ib_hi; ++ib) {
            const double beta = grid_value(box.beta_lo, box.beta_hi, ib, box.nb);
            for (int it = 0; it < box.nt; ++it) {
                const double t = grid_value(box.t_lo, box.t_hi, it, box.nt);
                int bidx = 0;
                if (track_buckets) {
                    bidx = static_cast<int>(kTimeBuckets * (t - box.t_lo) /
                                            (box.t_hi - box.t_lo));
                    bidx = std::min(bidx, kTimeBuckets - 1);
                    if (beta < 0.0) bidx += kTimeBuckets;
                }
                const auto [m, n] = mn_scalars(beta, t);
                // c11 is phi-independent: prune mismatching (beta, t) slices
                const double col1res = std::abs(1.0 + n - target.c11());
                double keep =
                    std::max(hit_tol,
                             out.best_miss.valid ? out.best_miss.residual : kInf);
                if (track_buckets) {
                    const Candidate& champ =
                        out.bucket_champions[static_cast<std::size_t>(bidx)];
                    keep = std::max(
                        std::max(hit_tol, champ.valid ? champ.residual : kInf),
                        keep);
                }
                if (col1res > keep) continue;
                const double bt = beta * t;
                const double cb = std::cos(bt), sb = std::sin(bt);
                const double q = 1.0 - beta * beta * n;
                for (int j = 0; j < box.np; ++j) {
                    const double cphi = cp[static_cast<std::size_t>(j)];
                    const double sphi = sp[static_cast<std::size_t>(j)];
                    const double cd = cb * cphi + sb * sphi;  // cos(bt - phi)
                    const double sd = sb * cphi - cb * sphi;  // sin(bt - phi)
                    double r = col1res;
                    r = std::max(r, std::abs(m * cd + beta * n * sd - target.c12()));
                    r = std::max(r, std::abs(beta * n * cd - m * sd - target.c13()));
                    r = std::max(r, std::abs(m * cphi + beta * n * sphi - target.c21()));
                    r = std::max(r, std::abs(n * cd * cphi + beta * m * sb + q * cb -
                                             target.c22()));
                    r = std::max(r, std::abs(-n * sd * cphi + beta * m * cb - q * sb -
                                             target.c23()));
                    r = std::max(r, std::abs(m * sphi - beta * n * cphi - target.c31()));
                    r = std::max(r, std::abs(n * cd * sphi - beta * m * cb + q * sb -
                                             target.c32()));
                    r = std::max(r, std::abs(-n * sd * sphi + beta * m * sb + q * cb -
                                             target.c33()));
                    Candidate cand{t, beta, phiv[static_cast<std::size_t>(j)], r, true};
                    if (r <= hit_tol) {
                        if (hit_less(cand, out.best_hit)) out.best_hit = cand;
                        if (collect_hits && out.hits.size() < 4096)
                            out.hits.push_back(OracleHit{
                                GeodesicParams{cand.beta, cand.phi, cand.t}, r});
                    }
                    if (miss_less(cand, out.best_miss)) out.best_miss = cand;
                    if (track_buckets) {
                        Candidate& champ =
                            out.bucket_champions[static_cast<std::size_t>(bidx)];
                        if (miss_less(cand, champ)) champ = cand;
                    }
                }
            }
        }
    };

    int nthreads = threads;
    if (nthreads <= 0)
        nthreads = static_cast<int>(
            std::max(1u, std::thread::hardware_concurrency()));
    nthreads = std::min(nthreads, nb);

    if (nthreads <= 1) {
        ScanResult out;
        scan_beta_range(0, nb, out);
        return out;
    }

    std::vector<ScanResult> partial(static_cast<std::size_t>(nthreads));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int w = 0; w < nthreads; ++w) {
        const int lo = nb * w / nthreads;
        const int hi = nb * (w + 1) / nthreads;
        pool.emplace_back([&, lo, hi, w] {
            scan_beta_range(lo, hi, partial[static_cast<std::size_t>(w)]);
        });
    }
    for (auto& th : pool) th.join();

    // merge in worker order; comparisons are value-based so the result does
    // not depend on thread scheduling
    ScanResult out;
    if (track_buckets) out.bucket_champions.resize(2 * kTimeBuckets);
    for (auto& p : partial) {
        if (hit_less(p.best_hit, out.best_hit)) out.best_hit = p.best_hit;
        if (miss_less(p.best_miss, out.best_miss)) out.best_miss = p.best_miss;
        for (std::size_t b = 0; b < p.bucket_champions.size(); ++b)
            if (miss_less(p.bucket_champions[b], out.bucket_champions[b]))
                out.bucket_champions[b] = p.bucket_champions[b];
        for (auto& h : p.hits)
            if (out.hits.size() < 4096) out.hits.push_back(h);
    }
    return out;
}

int make_odd(int n) { return (n % 2 == 0) ? n + 1 : n; }

// Damped Gauss-Newton descent of the matching residual: the asymptotic tail
// of the grid refinement. A converged hit is an exact representation point
// gamma(beta, phi; t) = C, so its time cannot undercut the true distance;
// this keeps loose matrix-proximity hits from shaving t along the fiber
// direction (where the sub-Riemannian ball scales like sqrt(residual)).
Candidate polish(const GroupElement& target, const Candidate& start,
                 double beta_max, double t_max) {
    std::array<double, 3> p{start.beta, start.phi, start.t};
    std::array<double, 9> resid{};
    auto eval = [&](const std::array<double, 3>& q, std::array<double, 9>& rv) {
        const GroupElement g = geodesic_point(q[0], q[1], q[2]);
        double s = 0.0;
        for (std::size_t i = 0; i < 9; ++i) {
            rv[i] = g.a[i] - target.a[i];
            s += rv[i] * rv[i];
        }
        return s;
    };
    double f = eval(p, resid);
    double lambda = 1e-8;
    for (int iter = 0; iter < 60 && f > 1e-28; ++iter) {
        double jac[9][3];
        for (int j = 0; j < 3; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(p[j]));
            std::array<double, 3> hi = p, lo = p;
            hi[j] += h;
            lo[j] -= h;
            const GroupElement gp = geodesic_point(hi[0], hi[1], hi[2]);
            const GroupElement gm = geodesic_point(lo[0], lo[1], lo[2]);
            for (std::size_t i = 0; i < 9; ++i)
                jac[i][j] = (gp.a[i] - gm.a[i]) / (2.0 * h);
        }
        double jtj[3][3] = {};
        double jtr[3] = {};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b)
                for (int i = 0; i < 9; ++i) jtj[a][b] += jac[i][a] * jac[i][b];
            for (int i = 0; i < 9; ++i)
                jtr[a] += jac[i][a] * resid[static_cast<std::size_t>(i)];
        }
        bool accepted = false;
        for (int attempt = 0; attempt < 8 && !accepted; ++attempt) {
            double m[3][4];
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) m[a][b] = jtj[a][b];
                m[a][a] += lambda * (1.0 + jtj[a][a]);
                m[a][3] = -jtr[a];
            }
            // gaussian elimination with partial pivoting
            bool singular = false;
            for (int col = 0; col < 3 && !singular; ++col) {
                int piv = col;
                for (int row = col + 1; row < 3; ++row)
                    if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
                if (std::abs(m[piv][col]) < 1e-300) {
                    singular = true;
                    break;
                }
                if (piv != col)
                    for (int k = col; k < 4; ++k) std::swap(m[piv][k], m[col][k]);
                for (int row = col + 1; row < 3; ++row) {
                    const double fac = m[row][col] / m[col][col];
                    for (int k = col; k < 4; ++k) m[row][k] -= fac * m[col][k];
                }
            }
            if (singular) {
                lambda *= 10.0;
                continue;
            }
            std::array<double, 3> delta{};
            for (int row = 2; row >= 0; --row) {
                double s = m[row][3];
                for (int k = row + 1; k < 3; ++k) s -= m[row][k] * delta[static_cast<std::size_t>(k)];
                delta[static_cast<std::size_t>(row)] = s / m[row][row];
            }
            std::array<double, 3> q{
                std::clamp(p[0] + delta[0], -beta_max, beta_max),
                p[1] + delta[1],
                std::clamp(p[2] + delta[2], 0.0, t_max)};
            std::array<double, 9> resid2{};
            const double f2 = eval(q, resid2);
            if (f2 < f) {
                p = q;
                f = f2;
                resid = resid2;
                lambda = std::max(1e-12, lambda * 0.25);
                accepted = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted) break;
    }
    double rmax = 0.0;
    for (double v : resid) rmax = std::max(rmax, std::abs(v));
    return Candidate{p[2], p[0], p[1], rmax, true};
}

}  // namespace

void require_valid(const GridSpec& grid) {
    if (!(grid.beta_max >= 3.0))
        throw std::invalid_argument("GridSpec: beta_max must be >= 3");
    if (grid.beta_steps < 2 || grid.phi_steps < 2 || grid.t_steps < 2)
        throw std::invalid_argument("GridSpec: all steps must be >= 2");
    if (!(grid.t_max > 0.0))
        throw std::invalid_argument("GridSpec: t_max must be positive");
    if (grid.refine_rounds < 0)
        throw std::invalid_argument("GridSpec: refine_rounds must be >= 0");
}

OracleReport shoot_min_time(const GroupElement& c, const GridSpec& grid,
                            double hit_tol, int threads) {
    require_valid(c, kDefaultTol, "shoot_min_time");
    require_valid(grid);

    const Box coarse{-grid.beta_max, grid.beta_max, 0.0, kTwoPi, 0.0,
                     grid.t_max,      grid.beta_steps, grid.phi_steps,
                     grid.t_steps};

    OracleReport report;
    ScanResult first = scan_box(c, coarse, hit_tol, true, true, threads);
    Candidate best_hit = first.best_hit;
    Candidate best_miss = first.best_miss;

    // near-minimal coarse hits, by (t, beta, phi)
    std::sort(first.hits.begin(), first.hits.end(),
              [](const OracleHit& a, const OracleHit& b) {
                  if (a.params.t != b.params.t) return a.params.t < b.params.t;
                  if (a.params.beta != b.params.beta)
                      return a.params.beta < b.params.beta;
                  return a.params.phi < b.params.phi;
              });
    if (!first.hits.empty()) {
        const double dt0 = grid.t_max / (grid.t_steps - 1);
        const double window = first.hits.front().params.t + 2.0 * dt0 + 1e-12;
        for (const auto& h : first.hits) {
            if (h.params.t > window) break;
            report.near_hits.push_back(h);
            if (report.near_hits.size() >= 128) break;
        }
    }

    // one refinement chain per populated (t-bucket, sign beta) champion, so a
    // shorter arc is found even when a longer one matches the target more
    // closely at coarse resolution (e.g. segments extended past the cut time),
    // and both minimizer families of a cut point are explored
    std::vector<Candidate> chain_hits;
    for (const Candidate& seed : first.bucket_champions) {
        if (!seed.valid) continue;
        Candidate center = seed;
        Box box = coarse;
        for (int round = 0; round < grid.refine_rounds; ++round) {
            const double db = (box.beta_hi - box.beta_lo) / (box.nb - 1);
            const double dp = (box.phi_hi - box.phi_lo) / box.np;
            const double dt = (box.t_hi - box.t_lo) / (box.nt - 1);
            box.beta_lo = std::max(-grid.beta_max, center.beta - 1.5 * db);
            box.beta_hi = std::min(grid.beta_max, center.beta + 1.5 * db);
            box.phi_lo = center.phi - 1.5 * dp;
            box.phi_hi = center.phi + 1.5 * dp;
            box.t_lo = std::max(0.0, center.t - 1.5 * dt);
            box.t_hi = std::min(grid.t_max, center.t + 1.5 * dt);
            box.nb = make_odd(std::min(box.nb, 33));
            box.np = make_odd(std::min(box.np, 33));
            box.nt = make_odd(std::min(box.nt, 65));
            const ScanResult sr = scan_box(c, box, hit_tol, false, false, threads);
            if (hit_less(sr.best_hit, best_hit)) best_hit = sr.best_hit;
            if (miss_less(sr.best_miss, best_miss)) best_miss = sr.best_miss;
            if (sr.best_hit.valid)
                center = sr.best_hit;
            else if (sr.best_miss.valid && miss_less(sr.best_miss, center))
                center = sr.best_miss;
            else
                break;  // box no longer contains anything better
        }
        const Candidate polished = polish(c, center, grid.beta_max, grid.t_max);
        if (polished.residual <= hit_tol) {
            if (hit_less(polished, best_hit)) best_hit = polished;
            chain_hits.push_back(polished);
        }
        if (miss_less(polished, best_miss)) best_miss = polished;
    }

    // fold polished chain hits near the optimum into the near-hit list
    if (best_hit.valid) {
        const double dt0 = grid.t_max / (grid.t_steps - 1);
        const double window = best_hit.t + 2.0 * dt0 + 1e-12;
        for (const Candidate& h : chain_hits) {
            if (h.t > window) continue;
            const GeodesicParams p = canonical(GeodesicParams{h.beta, h.phi, h.t});
            bool dup = false;
            for (const auto& existing : report.near_hits)
                dup = dup || (std::abs(existing.params.t - p.t) < 1e-6 &&
                              std::abs(existing.params.beta - p.beta) < 1e-6 &&
                              std::abs(existing.params.phi - p.phi) < 1e-6);
            if (!dup) report.near_hits.push_back(OracleHit{p, h.residual});
        }
        std::sort(report.near_hits.begin(), report.near_hits.end(),
                  [](const OracleHit& a, const OracleHit& b) {
                      if (a.params.t != b.params.t) return a.params.t < b.params.t;
                      if (a.params.beta != b.params.beta)
                          return a.params.beta < b.params.beta;
                      return a.params.phi < b.params.phi;
                  });
    }

    report.hit_found = best_hit.valid;
    if (best_hit.valid) {
        report.t_min = best_hit.t;
        report.best_params = canonical(GeodesicParams{best_hit.beta, best_hit.phi,
                                                      best_hit.t});
        report.match_residual = best_hit.residual;
    } else {
        report.t_min = kInf;
        report.best_params = canonical(GeodesicParams{best_miss.beta, best_miss.phi,
                                                      best_miss.t});
        report.match_residual = best_miss.residual;
    }
    return report;
}

OracleReport verify_distance(const GroupElement& c, const GridSpec& grid,
                             double tol, double hit_tol, int threads) {
    OracleReport report = shoot_min_time(c, grid, hit_tol, threads);
    const DistanceResult analytic = distance_from_identity(c);
    report.analytic_d = analytic.d;
    report.analytic_geodesics = analytic.geodesics;
    report.gap = report.t_min - analytic.d;
    report.consistent = report.hit_found && std::abs(report.gap) <= tol;
    return report;
}

}  // namespace so21
