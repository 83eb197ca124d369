#pragma once

// Relations defined through the world function alone: collinearity, parallel
// same-direction vectors, coordinate-relative collinearity against a skeleton
// basis, degeneracy classification by solution counting, metric-space axiom
// checks on rho = sqrt(2 sigma), and the degenerate-ellipsoid interior probe.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "rootfind.hpp"
#include "sampling.hpp"

namespace sigmageom {

struct PredicateResult {
    bool verdict = false;
    double residual = 0; // raw residual, units as defined per predicate
};

// Collinearity of two vectors sharing a start point:
//   residual = (v.w)^2 - (v.v)(w.w), zero iff collinear.
// Verdict at |residual| <= tol * scale^4 with scale^2 the largest scalar
// product magnitude involved. Residual units are length^4.
template <GeometryLike G>
PredicateResult is_collinear(const G& g, const Vector& v, const Vector& w, double tol = 1e-9) {
    require(v.start == w.start, ErrorKind::contract, "is_collinear: vectors must share their start point");
    double vv = scalar_product(g, v, v);
    double ww = scalar_product(g, w, w);
    double vw = scalar_product(g, v, w);
    double residual = vw * vw - vv * ww;
    double scale2 = std::max({std::abs(vv), std::abs(ww), std::abs(vw)});
    return {std::abs(residual) <= tol * scale2 * scale2, residual};
}

// Same-direction parallelism for timelike vectors:
//   residual = (v.w) - sqrt((v.v)(w.w)), zero iff v and w point the same way.
// Defined only where both squared lengths are positive. Residual units length^2.
template <GeometryLike G>
PredicateResult is_parallel_same_direction(const G& g, const Vector& v, const Vector& w, double tol = 1e-9) {
    double vv = scalar_product(g, v, v);
    double ww = scalar_product(g, w, w);
    if (vv <= 0 || ww <= 0)
        fail(ErrorKind::spacelike_vector, "is_parallel_same_direction: both vectors must be timelike");
    double vw = scalar_product(g, v, w);
    double residual = vw - std::sqrt(vv * ww);
    double scale2 = std::max({vv, ww, std::abs(vw)});
    return {std::abs(residual) <= tol * scale2, residual};
}

struct CoordCollinearResult {
    bool verdict = false;
    double a = 0;        // fitted proportionality constant
    double residual = 0; // worst per-equation gap, units length^2
};

// Coordinate form of collinearity against a skeleton basis: a single constant
// a must satisfy x_i(Q) = a * x_i(R) for every basis index i. The constant is
// fitted by least squares, which agrees with elimination wherever the system
// is consistent and avoids picking a pivot equation.
template <GeometryLike G>
CoordCollinearResult coordinate_collinear(const G& g, const Skeleton& sk, const Point& q, const Point& r,
                                          double tol = 1e-9, bool require_positive_a = false) {
    metric_tensor(g, sk); // SingularSkeleton if the basis is degenerate
    std::vector<double> xq = covariant_coordinates_unchecked(g, sk, q);
    std::vector<double> xr = covariant_coordinates_unchecked(g, sk, r);
    double q_norm = 0, r_norm = 0, qr = 0, rr = 0;
    for (std::size_t i = 0; i < xq.size(); ++i) {
        q_norm = std::max(q_norm, std::abs(xq[i]));
        r_norm = std::max(r_norm, std::abs(xr[i]));
        qr += xq[i] * xr[i];
        rr += xr[i] * xr[i];
    }
    double scale2 = std::max(q_norm, r_norm);
    if (q_norm <= 1e-14 * std::max(1.0, scale2))
        fail(ErrorKind::elimination_failure, "coordinate_collinear: every (P0Pi.P0Q) vanishes");
    CoordCollinearResult out;
    if (rr <= 1e-28 * std::max(1.0, scale2 * scale2)) {
        out.a = 0;
        out.residual = q_norm;
        out.verdict = false;
        return out;
    }
    out.a = qr / rr;
    for (std::size_t i = 0; i < xq.size(); ++i)
        out.residual = std::max(out.residual, std::abs(xq[i] - out.a * xr[i]));
    out.verdict = out.residual <= tol * scale2;
    if (require_positive_a && out.a <= 0) out.verdict = false;
    return out;
}

// ---------------------------------------------------------------------------
// degeneracy classification

// Candidate points R at signed radius a from P0 in the query's sign class
// satisfy two scalar equations in the chart coordinates of R:
//   (P0R.P0R) = s a^2        (radius condition)
//   (P0R.w)   = s a sqrt(|w.w|)   (same-direction condition)
// The classifier solves this system by damped Gauss-Newton with least-norm
// steps, so every start converges toward the solution nearest to it, from a
// deterministic grid of chart starts in a box of half-width box_span * a
// around P0. Landings closer than distinct_factor * a are merged. An isolated
// solution absorbs every converged start into a single witness; a solution
// continuum keeps the landings apart, so the count exceeds one exactly when
// more than one point fits the two conditions.
struct SearchSpec {
    int grid = 6;                  // seeding-grid nodes per chart axis
    int starts = 64;               // best-ranked grid nodes refined by Gauss-Newton
    int iters = 60;                // Gauss-Newton iterations per start
    double residual_tol = 1e-9;    // accepted normalized residual, sup norm
    double distinct_factor = 1e-4; // landings closer than this * a coincide
    double box_span = 2.5;         // seeding box half-width, in units of a
    std::uint64_t seed = 12345;    // jitters the grid off exact symmetry axes
};

struct DegeneracyVerdict {
    int solution_count = 0;
    bool degenerate = true; // at most one solution
    std::vector<Point> witnesses;
    int failed_starts = 0; // refined starts that did not converge
};

namespace detail {

// Normalized residual pair of the radius + same-direction system at X.
// Both components are dimensionless; each is O(1) per unit of constraint
// violation at scale a.
template <GeometryLike G>
Eigen::Vector2d degeneracy_residual(const G& g, const Point& p0, const Point& x, const Vector& w,
                                    double s, double a, double w_len) {
    Vector v(p0, x);
    double vv = scalar_product(g, v, v);
    double vw = scalar_product(g, v, w);
    Eigen::Vector2d r;
    r(0) = (vv - s * a * a) / (a * a);
    r(1) = (vw - s * a * w_len) / (a * w_len);
    return r;
}

} // namespace detail

// Counts the points R at signed radius a from P0 whose vector P0R is parallel
// (same direction class) to the query vector. The search is sampled, not a
// proof: it reports the number of distinct converged landings of the
// two-condition solve described at SearchSpec, separated at
// distinct_factor * a in the chart.
template <GeometryLike G>
DegeneracyVerdict degeneracy_classify(const G& g, const Point& p0, const Vector& dirvec, double a,
                                      const SearchSpec& spec = {}) {
    require(a > 0, ErrorKind::contract, "degeneracy_classify: radius must be positive");
    int n = g.dim();
    require(n >= 1 && n <= 6, ErrorKind::contract,
            "degeneracy_classify: chart dimension must be between 1 and 6");
    double ww = scalar_product(g, dirvec, dirvec);
    require(std::abs(ww) > 1e-14, ErrorKind::contract, "degeneracy_classify: query vector must not be null");
    double s = ww > 0 ? 1.0 : -1.0;
    double w_len = std::sqrt(std::abs(ww));

    auto residual = [&](const Point& x) -> std::optional<Eigen::Vector2d> {
        if (!in_carrier(g, x)) return std::nullopt;
        Eigen::Vector2d r = detail::degeneracy_residual(g, p0, x, dirvec, s, a, w_len);
        if (!std::isfinite(r(0)) || !std::isfinite(r(1))) return std::nullopt;
        return r;
    };

    // Seeding: a jittered uniform grid over the box, plus the point at chart
    // distance a along the query direction, which is the principal solution in
    // the flat geometries. Nodes are ranked by residual norm and the best
    // `starts` refined.
    double half = spec.box_span * a;
    std::mt19937_64 rng = make_rng(spec.seed);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    std::vector<std::pair<double, Point>> ranked;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    int grid = std::max(2, spec.grid);
    double cell = 2.0 * half / grid;
    bool done = false;
    while (!done) {
        Point node = p0;
        for (int i = 0; i < n; ++i) {
            double frac = (idx[static_cast<std::size_t>(i)] + 0.5) / grid;
            node[i] += -half + 2.0 * half * frac + jitter(rng) * cell;
        }
        if (auto r = residual(node)) ranked.emplace_back(r->norm(), node);
        done = true;
        for (int i = n - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < grid) {
                done = false;
                break;
            }
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    {
        double qnorm = 0;
        for (int i = 0; i < n; ++i) {
            double c = dirvec.end[i] - dirvec.start[i];
            qnorm += c * c;
        }
        if (qnorm > 0) {
            Point guess = p0;
            double scale = a / std::sqrt(qnorm);
            for (int i = 0; i < n; ++i) guess[i] += scale * (dirvec.end[i] - dirvec.start[i]);
            if (auto r = residual(guess)) ranked.emplace_back(r->norm(), guess);
        }
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& lhs, const auto& rhs) { return lhs.first < rhs.first; });
    if (static_cast<int>(ranked.size()) > spec.starts) ranked.resize(static_cast<std::size_t>(spec.starts));

    DegeneracyVerdict out;
    double fd_step = 1e-6 * a;
    double runaway = 1e6 * a;
    std::vector<Point> found;
    for (const auto& [rank_norm, start] : ranked) {
        Point x = start;
        auto rx = residual(x);
        if (!rx) {
            ++out.failed_starts;
            continue;
        }
        for (int it = 0; it < spec.iters; ++it) {
            if (rx->template lpNorm<Eigen::Infinity>() <= spec.residual_tol) break;
            Eigen::MatrixXd J(2, n);
            bool jac_ok = true;
            for (int j = 0; j < n && jac_ok; ++j) {
                Point xp = x;
                xp[j] += fd_step;
                auto rp = residual(xp);
                if (!rp) {
                    jac_ok = false;
                    break;
                }
                J.col(j) = (*rp - *rx) / fd_step;
            }
            if (!jac_ok) break;
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
            svd.setThreshold(1e-12);
            Eigen::VectorXd delta = svd.solve(-*rx);
            if (!delta.allFinite()) break;
            double t = 1.0;
            bool accepted = false;
            for (int halving = 0; halving < 12; ++halving, t *= 0.5) {
                Point cand = x;
                for (int j = 0; j < n; ++j) cand[j] += t * delta(j);
                auto rc = residual(cand);
                if (!rc) continue;
                if (rc->norm() < rx->norm()) {
                    x = cand;
                    rx = rc;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
            double dist = chart_distance(x, p0);
            if (!std::isfinite(dist) || dist > runaway) break;
        }
        if (rx->template lpNorm<Eigen::Infinity>() <= spec.residual_tol)
            found.push_back(x);
        else
            ++out.failed_starts;
    }

    for (const Point& p : found) {
        bool fresh = true;
        for (const Point& w : out.witnesses)
            if (chart_distance(p, w) <= spec.distinct_factor * a) {
                fresh = false;
                break;
            }
        if (fresh) out.witnesses.push_back(p);
    }
    out.solution_count = static_cast<int>(out.witnesses.size());
    out.degenerate = out.solution_count <= 1;
    return out;
}

// ---------------------------------------------------------------------------
// metric-space axioms on rho = sqrt(2 sigma)

struct TriangleWitness {
    Point p, r, q;
    double residual = 0; // rho(P,R) + rho(R,Q) - rho(P,Q), negative means violated
};

struct MetricAxiomReport {
    bool is_candidate = true; // false when sigma is indefinite on the sample
    bool nonnegativity_ok = false;
    bool identity_ok = false;
    bool symmetry_ok = false;
    bool triangle_ok = false;
    std::vector<TriangleWitness> violations; // triangle violations, worst first
    Point indefinite_a, indefinite_b;        // witness pair when not a candidate
};

template <GeometryLike G>
MetricAxiomReport check_metric_axioms(const G& g, const std::vector<Point>& samples, double tol = 1e-9) {
    require(samples.size() >= 2, ErrorKind::insufficient_samples, "check_metric_axioms: need at least two points");
    MetricAxiomReport rep;
    std::size_t n = samples.size();

    double scale = 0;
    for (const Point& p : samples)
        for (double v : p.x) scale = std::max(scale, std::abs(v));
    double sigma_band = 1e-12 * std::max(1.0, scale * scale);

    std::vector<double> sig(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sig[i * n + j] = g.sigma(samples[i], samples[j]);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (sig[i * n + j] < -sigma_band) {
                rep.is_candidate = false;
                rep.indefinite_a = samples[i];
                rep.indefinite_b = samples[j];
                return rep;
            }

    auto rho = [&](std::size_t i, std::size_t j) { return std::sqrt(std::max(0.0, 2.0 * sig[i * n + j])); };

    rep.nonnegativity_ok = true; // sigma >= -band established above

    rep.identity_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(sig[i * n + i]) > sigma_band) rep.identity_ok = false;
        for (std::size_t j = i + 1; j < n; ++j)
            if (chart_distance(samples[i], samples[j]) > 1e-9 * std::max(1.0, scale) && sig[i * n + j] <= sigma_band)
                rep.identity_ok = false; // distinct labels at zero distance
    }

    rep.symmetry_ok = true;
    for (std::size_t i = 0; i < n && rep.symmetry_ok; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(sig[i * n + j] - sig[j * n + i]) > sigma_band) {
                rep.symmetry_ok = false;
                break;
            }

    double tri_tol = tol * std::max(1.0, scale);
    rep.triangle_ok = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (j == k) continue;
                double f = rho(i, k) + rho(k, j) - rho(i, j);
                if (f < -tri_tol) {
                    rep.triangle_ok = false;
                    rep.violations.push_back({samples[i], samples[k], samples[j], f});
                }
            }
        }
    std::sort(rep.violations.begin(), rep.violations.end(),
              [](const TriangleWitness& a, const TriangleWitness& b) { return a.residual < b.residual; });
    if (rep.violations.size() > 16) rep.violations.resize(16);
    return rep;
}

// Interior probe of the degenerate ellipsoid with focuses P, Q:
//   f = rho(P,R) + rho(R,Q) - rho(P,Q).
// f < 0 flags an interior point (possible only when the geometry violates the
// triangle inequality), f = 0 a boundary point, f > 0 an exterior point.
template <GeometryLike G>
double degenerate_ellipsoid_interior(const G& g, const Point& p, const Point& q, const Point& r) {
    double spq = evaluate_sigma(g, p, q);
    double spr = evaluate_sigma(g, p, r);
    double srq = evaluate_sigma(g, r, q);
    require(spq > 0, ErrorKind::contract, "degenerate_ellipsoid_interior: focuses must be separated");
    if (spr < 0 || srq < 0)
        fail(ErrorKind::not_metric_candidate, "degenerate_ellipsoid_interior: sigma is negative on an involved pair");
    return std::sqrt(2.0 * spr) + std::sqrt(2.0 * srq) - std::sqrt(2.0 * spq);
}

} // namespace sigmageom
