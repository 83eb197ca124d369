#pragma once

// Quantitative tools for the distorted geometry: the mass shift between the
// flat and distorted link lengths, the spatial radius profile of a segment
// (closed form and an independent numeric envelope solve), and a sequential
// simulator for free-particle chains whose links are equal-length and
// parallel in the distorted sense. Chart conventions throughout: 4 chart
// coordinates (t, x, y, z) with unit light speed.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "core.hpp"
#include "csv.hpp"
#include "rootfind.hpp"
#include "sampling.hpp"

namespace sigmageom {

// Distorted link length from the flat one: mu_d^2 = mu_M^2 + 2d, valid only
// above the distortion threshold mu_M^2 > 2*sigma0.
inline double mass_shift(double mu_M, double d, double sigma0 = 0.0) {
    require(mu_M > 0 && d >= 0 && sigma0 >= 0, ErrorKind::contract, "mass_shift: need mu_M > 0, d >= 0, sigma0 >= 0");
    require(mu_M * mu_M > 2.0 * sigma0, ErrorKind::below_threshold,
            "mass_shift: link length below the distortion threshold");
    return std::sqrt(mu_M * mu_M + 2.0 * d);
}

inline double mass_unshift(double mu_d, double d, double sigma0 = 0.0) {
    require(mu_d > 0 && d >= 0 && sigma0 >= 0, ErrorKind::contract, "mass_unshift: need mu_d > 0, d >= 0, sigma0 >= 0");
    require(mu_d * mu_d - 2.0 * d > 2.0 * sigma0, ErrorKind::below_threshold,
            "mass_unshift: link length below the distortion threshold");
    return std::sqrt(mu_d * mu_d - 2.0 * d);
}

// Closed-form squared radius of the segment between (0,0,0,0) and
// (mu_d,0,0,0) at time fraction tau. Three branches joined at
// tau1 = sqrt(2(sigma0+d))/mu_d; when tau1 >= 1/2 the middle branch is empty
// and the outer branches meet at tau = 1/2. The value can dip below zero in
// parameter corners; callers wanting a radius use segment_radius_closed,
// which clamps and leaves the sign diagnostic to this function.
inline double segment_radius_closed_sq(double d, double sigma0, double mu_d, double tau) {
    require(d >= 0 && sigma0 >= 0 && mu_d > 0, ErrorKind::contract,
            "segment_radius_closed_sq: need d >= 0, sigma0 >= 0, mu_d > 0");
    require(tau >= 0.0 && tau <= 1.0, ErrorKind::contract, "segment_radius_closed_sq: tau outside [0,1]");
    double mu2 = mu_d * mu_d;
    require(mu2 > 2.0 * (sigma0 + d), ErrorKind::branch_domain,
            "segment_radius_closed_sq: mu_d too small for the branch structure");
    if (d == 0.0 && sigma0 == 0.0) return 0.0; // undistorted segment is the straight line
    double tau1 = std::sqrt(2.0 * (sigma0 + d)) / mu_d;
    double denom = 1.0 - 2.0 * d / mu2;
    auto outer = [&](double s) {
        double a = 1.0 - s * d / (2.0 * (sigma0 + d));
        return s * s * mu2 * (a * a / denom - sigma0 / (sigma0 + d));
    };
    if (tau <= std::min(tau1, 0.5)) return outer(tau);
    if (tau >= std::max(1.0 - tau1, 0.5)) return outer(1.0 - tau);
    double h = tau - 0.5;
    return 1.5 * d + 2.0 * d * h * h / denom;
}

inline double segment_radius_closed(double d, double sigma0, double mu_d, double tau) {
    return std::sqrt(std::max(0.0, segment_radius_closed_sq(d, sigma0, mu_d, tau)));
}

struct RadialSpec {
    int grid = 512;        // radial scan cells
    double accept_tol = 0; // |residual| acceptance; 0 picks 1e-10 * (1 + mu_d)
    RootSpec root;         // bracketed refinement
};

// Numeric segment radius: on the fixed-time slice t = tau * mu_d in the
// canonical frame, the triangle defect f(rho) = |P0P1| - |P0R| - |RP1| is
// negative strictly inside the segment, crosses zero on its boundary and is
// undefined (imaginary length) outside the light cones; the radius is the
// outermost zero along a spatial ray. Spatial isotropy of the geometry in
// this frame makes one ray sufficient.
template <GeometryLike G>
double segment_radius_numeric(const G& g, double mu_d, double tau, RadialSpec spec = {}) {
    require(g.dim() == 4, ErrorKind::contract, "segment_radius_numeric: chart dimension must be 4");
    require(tau >= 0.0 && tau <= 1.0, ErrorKind::contract, "segment_radius_numeric: tau outside [0,1]");
    require(spec.grid >= 16, ErrorKind::contract, "segment_radius_numeric: grid too coarse");
    double tol = spec.accept_tol > 0 ? spec.accept_tol : 1e-10 * (1.0 + mu_d);

    Point p0{{0, 0, 0, 0}};
    Point p1{{mu_d, 0, 0, 0}};
    double t = tau * mu_d;
    auto length = [&](const Point& a, const Point& b) {
        double two_sigma = 2.0 * g.sigma(a, b);
        return two_sigma < 0 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(two_sigma);
    };
    double full = length(p0, p1);
    require(std::isfinite(full), ErrorKind::imaginary_length, "segment_radius_numeric: endpoints not causally related");
    auto f = [&](double rho) {
        Point r{{t, rho, 0, 0}};
        return full - length(p0, r) - length(r, p1);
    };

    // Any boundary zero is causally between the endpoints, so the scan never
    // needs to leave the overlap of their light cones.
    double rho_max = std::max(std::min(t, mu_d - t) + 1e-9, 1e-9);

    double best = -1;
    double prev_rho = 0, prev_f = f(0.0);
    if (std::isfinite(prev_f) && std::abs(prev_f) <= tol) best = 0.0;
    for (int i = 1; i <= spec.grid; ++i) {
        double rho = rho_max * static_cast<double>(i) / spec.grid;
        double fv = f(rho);
        if (std::isfinite(fv)) {
            if (std::abs(fv) <= tol) best = std::max(best, rho);
            if (std::isfinite(prev_f) && prev_f != 0.0 && fv != 0.0 && std::signbit(prev_f) != std::signbit(fv)) {
                RootResult rr = brent(f, prev_rho, rho, spec.root);
                if (rr.ok) best = std::max(best, rr.x);
            }
        }
        prev_rho = rho;
        prev_f = fv;
    }
    require(best >= 0, ErrorKind::solver_failure, "segment_radius_numeric: no boundary zero located on the slice");
    return best;
}

struct SegmentProfile {
    std::vector<double> tau;
    std::vector<double> r_closed;
    std::vector<double> r_numeric;
    double d = 0, sigma0 = 0, mu_d = 0;
};

inline SegmentProfile segment_profile(double d, double sigma0, double mu_d, int grid_points, RadialSpec spec = {}) {
    require(grid_points >= 2, ErrorKind::contract, "segment_profile: need at least two grid points");
    WorldFunction g = WorldFunction::distorted(d, sigma0, 4, 1.0);
    SegmentProfile out;
    out.d = d;
    out.sigma0 = sigma0;
    out.mu_d = mu_d;
    for (int i = 0; i < grid_points; ++i) {
        double tau = static_cast<double>(i) / (grid_points - 1);
        out.tau.push_back(tau);
        out.r_closed.push_back(segment_radius_closed(d, sigma0, mu_d, tau));
        out.r_numeric.push_back(segment_radius_numeric(g, mu_d, tau, spec));
    }
    return out;
}

namespace detail {

using Vec4 = std::array<double, 4>;

inline double eta(const Vec4& a, const Vec4& b) { return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]; }

inline Vec4 vsub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }

// Orthonormal tetrad adapted to a timelike direction: e0 along it, three unit
// spacelike legs filling the orthogonal complement, chosen deterministically.
inline std::array<Vec4, 4> adapted_tetrad(const Vec4& v) {
    double norm2 = eta(v, v);
    require(norm2 > 0, ErrorKind::spacelike_vector, "adapted_tetrad: direction must be timelike");
    std::array<Vec4, 4> e{};
    double inv = 1.0 / std::sqrt(norm2);
    for (int i = 0; i < 4; ++i) e[0][static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] * inv;
    int filled = 1;
    for (int axis = 1; axis <= 4 && filled < 4; ++axis) {
        Vec4 u{};
        u[static_cast<std::size_t>(axis % 4)] = 1.0;
        double c0 = eta(u, e[0]);
        for (int i = 0; i < 4; ++i) u[static_cast<std::size_t>(i)] -= c0 * e[0][static_cast<std::size_t>(i)];
        for (int k = 1; k < filled; ++k) {
            double ck = eta(u, e[static_cast<std::size_t>(k)]); // spacelike legs carry eta = -1
            for (int i = 0; i < 4; ++i) u[static_cast<std::size_t>(i)] += ck * e[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        }
        double s2 = -eta(u, u);
        if (s2 < 1e-12) continue;
        double is = 1.0 / std::sqrt(s2);
        for (int i = 0; i < 4; ++i) u[static_cast<std::size_t>(i)] *= is;
        e[static_cast<std::size_t>(filled++)] = u;
    }
    require(filled == 4, ErrorKind::solver_failure, "adapted_tetrad: failed to complete the tetrad");
    return e;
}

} // namespace detail

struct NextLinkSpec {
    RootSpec root;            // absolute residual tolerance, default 1e-12
    double hint_window = 0;   // time-solve bracket half width in sigma units; 0 picks automatically
};

namespace detail {

struct RestStep {
    double dt = 0;  // time offset in the incoming link's rest frame
    double rho = 0; // radial offset along the chosen azimuth
};

// Core constraint solve in the rest frame of the incoming link: the previous
// point sits at (-m_in, 0, 0, 0), the current one at the origin, and the next
// at (dt, rho * u). Conditions: equal distorted length 2 sigma(B,C) = mu_d^2
// and distorted parallelism, which for equal-length adjacent links reduces to
// sigma(A,C) = 2 mu_d^2. An inner bracketed solve pins dt from the length
// condition (bracket kept tight around the flat value, so evaluations never
// probe the world function far below the link scale); an outer bracketed
// solve finds rho. Solving in rest coordinates assumes the geometry is
// invariant under the chart isometries relating the frames, which holds for
// the whole distortion family; it also keeps every evaluation at O(1)
// magnitudes, so precision does not degrade along long, highly boosted
// chains.
template <GeometryLike G>
std::optional<RestStep> solve_step_rest(const G& g, double m_in, double mu_d, double d, double sigma0,
                                        const std::array<double, 3>& u, const NextLinkSpec& spec) {
    double mu2 = mu_d * mu_d;
    double mu_M2 = mu2 - 2.0 * d;
    require(m_in > 0, ErrorKind::contract, "solve_step_rest: incoming link must have positive timelike length");
    require(mu_M2 > 2.0 * sigma0, ErrorKind::below_threshold, "solve_step_rest: link below the distortion threshold");

    Point a0{{-m_in, 0, 0, 0}};
    Point b0{{0, 0, 0, 0}};
    auto point_at = [&](double dt, double rho) { return Point{{dt, rho * u[0], rho * u[1], rho * u[2]}}; };

    double delta = spec.hint_window > 0 ? spec.hint_window
                 : std::max(1e-9 * mu2, std::min(sigma0, 0.2 * (0.5 * mu_M2 - sigma0)));
    auto time_for_radius = [&](double rho) -> std::optional<double> {
        double lo = std::sqrt(rho * rho + mu_M2 - 2.0 * delta);
        double hi = std::sqrt(rho * rho + mu_M2 + 2.0 * delta);
        auto len_res = [&](double dt) { return 2.0 * g.sigma(b0, point_at(dt, rho)) - mu2; };
        RootResult rr = brent(len_res, lo, hi, spec.root);
        if (!rr.ok) return std::nullopt;
        return rr.x;
    };

    auto parallel_res = [&](double rho) -> std::optional<double> {
        auto dt = time_for_radius(rho);
        if (!dt) return std::nullopt;
        return g.sigma(a0, point_at(*dt, rho)) - 2.0 * mu2;
    };

    auto h0 = parallel_res(0.0);
    if (!h0) return std::nullopt;
    if (std::abs(*h0) <= std::max(spec.root.tol, 1e-13 * mu2)) {
        auto dt = time_for_radius(0.0);
        if (!dt) return std::nullopt;
        return RestStep{*dt, 0.0};
    }
    if (*h0 > 0) return std::nullopt; // radial defect has the wrong sign at the axis

    double rho_hi = std::sqrt(8.0 * (d + sigma0) + 16.0 * d * d / mu_M2 + 1e-18);
    bool bracketed = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
        auto hv = parallel_res(rho_hi);
        if (hv && *hv > 0) {
            bracketed = true;
            break;
        }
        rho_hi *= 1.7;
    }
    if (!bracketed) return std::nullopt;

    auto h = [&](double rho) {
        auto hv = parallel_res(rho);
        require(hv.has_value(), ErrorKind::solver_failure, "solve_step_rest: length solve failed inside radial solve");
        return *hv;
    };
    RootResult rr = brent(h, 0.0, rho_hi, spec.root);
    if (!rr.ok) return std::nullopt;
    auto dt = time_for_radius(rr.x);
    if (!dt) return std::nullopt;
    return RestStep{*dt, rr.x};
}

} // namespace detail

// Next chain point past the link A -> B for one spatial azimuth, mapped back
// to chart coordinates through a tetrad adapted to the link.
template <GeometryLike G>
std::optional<Point> next_link_point(const G& g, const Point& A, const Point& B, double mu_d, double d,
                                     double sigma0, const std::array<double, 3>& azimuth, NextLinkSpec spec = {}) {
    require(g.dim() == 4, ErrorKind::contract, "next_link_point: chart dimension must be 4");
    detail::Vec4 vin = detail::vsub(B, A);
    double m2 = detail::eta(vin, vin);
    require(m2 > 0, ErrorKind::spacelike_vector, "next_link_point: incoming link must be timelike");
    auto e = detail::adapted_tetrad(vin);
    auto st = detail::solve_step_rest(g, std::sqrt(m2), mu_d, d, sigma0, azimuth, spec);
    if (!st) return std::nullopt;
    Point c = B;
    for (int i = 0; i < 4; ++i)
        c.x[static_cast<std::size_t>(i)] += st->dt * e[0][static_cast<std::size_t>(i)]
            + st->rho * (azimuth[0] * e[1][static_cast<std::size_t>(i)]
                       + azimuth[1] * e[2][static_cast<std::size_t>(i)]
                       + azimuth[2] * e[3][static_cast<std::size_t>(i)]);
    return c;
}

struct NextLinkSolutions {
    std::vector<Point> points;
    int failed_directions = 0;
};

// Discrete sample of the full solution cone: one solve per azimuth from a
// deterministic spiral covering of the unit sphere in the link's rest space.
template <GeometryLike G>
NextLinkSolutions next_link_solutions(const G& g, const Point& A, const Point& B, double mu_d, double d,
                                      double sigma0, int azimuth_count, NextLinkSpec spec = {}) {
    require(azimuth_count >= 1, ErrorKind::contract, "next_link_solutions: need at least one azimuth");
    NextLinkSolutions out;
    for (const auto& u : fibonacci_sphere(azimuth_count)) {
        auto c = next_link_point(g, A, B, mu_d, d, sigma0, u, spec);
        if (c) out.points.push_back(*c);
        else ++out.failed_directions;
    }
    return out;
}

struct BrokenTube {
    std::vector<Point> chain; // n_links + 1 points
    double mu_d = 0;
    std::vector<double> theta_dM;           // per link; 0 for the seed link
    std::vector<double> residual_parallel;  // product-form defect at the link's start joint
    std::vector<double> residual_length;    // 2 sigma_d - mu_d^2 per link
    std::uint64_t seed = 0;
    bool completed = false;
    std::string note;
};

struct WorldlineSpec {
    std::uint64_t seed = 1;
    int n_links = 100;
    double mu_d = 1.0;
    double d = 0.0;
    double sigma0 = 0.0;
    NextLinkSpec solver;
    std::optional<std::pair<Point, Point>> initial; // defaults to the canonical rest link
};

// Flat-geometry angle between adjacent links, measured on the chart.
inline double joint_angle_flat(const Point& a, const Point& b, const Point& c) {
    detail::Vec4 v = detail::vsub(b, a);
    detail::Vec4 w = detail::vsub(c, b);
    double vv = detail::eta(v, v), ww = detail::eta(w, w);
    require(vv > 0 && ww > 0, ErrorKind::spacelike_vector, "joint_angle_flat: links must be timelike");
    double ch = detail::eta(v, w) / std::sqrt(vv * ww);
    return std::acosh(std::max(1.0, ch));
}

// Sequential free-particle chain: each step draws a uniform spatial azimuth
// (seeded) and solves for the next point in the current link's rest frame.
// Chart coordinates are reconstructed by composing the small per-step boosts
// into a running tetrad; all constraint solves and per-link diagnostics live
// in rest coordinates, so they stay at machine precision even when the chain
// boosts itself to enormous lab rapidity (randomly wobbling links perform a
// transient random walk in velocity space, so coordinates genuinely blow up
// on long chains). A failed solve stops the chain and leaves the prefix with
// a diagnostic note.
template <GeometryLike G>
BrokenTube simulate_worldline(const G& g, WorldlineSpec spec) {
    require(g.dim() == 4, ErrorKind::contract, "simulate_worldline: chart dimension must be 4");
    require(spec.n_links >= 1, ErrorKind::contract, "simulate_worldline: need at least one link");
    double mu2 = spec.mu_d * spec.mu_d;

    BrokenTube tube;
    tube.mu_d = spec.mu_d;
    tube.seed = spec.seed;
    std::array<detail::Vec4, 4> e{};
    double m_in = 0; // flat length of the incoming link
    if (spec.initial) {
        tube.chain = {spec.initial->first, spec.initial->second};
        require(tube.chain[0].dim() == 4 && tube.chain[1].dim() == 4, ErrorKind::contract,
                "simulate_worldline: initial link must live on the 4-chart");
        double len = 2.0 * g.sigma(tube.chain[0], tube.chain[1]);
        require(std::abs(len - mu2) <= 1e-6 * mu2, ErrorKind::contract,
                "simulate_worldline: initial link length does not match mu_d");
        detail::Vec4 vin = detail::vsub(tube.chain[1], tube.chain[0]);
        double vm2 = detail::eta(vin, vin);
        require(vm2 > 0, ErrorKind::spacelike_vector, "simulate_worldline: initial link must be timelike");
        m_in = std::sqrt(vm2);
        e = detail::adapted_tetrad(vin);
    } else {
        m_in = mass_unshift(spec.mu_d, spec.d, spec.sigma0);
        tube.chain = {Point{{0, 0, 0, 0}}, Point{{m_in, 0, 0, 0}}};
        e = {detail::Vec4{1, 0, 0, 0}, detail::Vec4{0, 1, 0, 0}, detail::Vec4{0, 0, 1, 0}, detail::Vec4{0, 0, 0, 1}};
    }
    tube.theta_dM.push_back(0.0);
    tube.residual_parallel.push_back(0.0);
    {
        Point a0{{-m_in, 0, 0, 0}};
        Point b0{{0, 0, 0, 0}};
        tube.residual_length.push_back(2.0 * g.sigma(a0, b0) - mu2);
    }

    auto rng = make_rng(spec.seed);
    tube.completed = true;
    for (int link = 1; link < spec.n_links; ++link) {
        std::array<double, 3> u = random_unit_s2(rng);
        auto st = detail::solve_step_rest(g, m_in, spec.mu_d, spec.d, spec.sigma0, u, spec.solver);
        if (!st) {
            tube.completed = false;
            tube.note = "solver failed at link " + std::to_string(link) + "; chain truncated";
            break;
        }
        double dt = st->dt, rho = st->rho;
        double m_out2 = dt * dt - rho * rho;
        if (m_out2 <= 0) {
            tube.completed = false;
            tube.note = "solver returned a non-timelike link at " + std::to_string(link);
            break;
        }
        double m_out = std::sqrt(m_out2);

        // Rest-frame diagnostics: the incoming link is (m_in, 0) and the
        // outgoing one (dt, rho * u) in the current tetrad.
        Point a0{{-m_in, 0, 0, 0}};
        Point b0{{0, 0, 0, 0}};
        Point c0{{dt, rho * u[0], rho * u[1], rho * u[2]}};
        double prod = g.sigma(a0, c0) - g.sigma(a0, b0) - g.sigma(b0, c0);
        double lv = std::sqrt(2.0 * g.sigma(a0, b0)), lw = std::sqrt(2.0 * g.sigma(b0, c0));
        tube.theta_dM.push_back(std::acosh(std::max(1.0, dt / m_out)));
        tube.residual_parallel.push_back(prod - lv * lw);
        tube.residual_length.push_back(2.0 * g.sigma(b0, c0) - mu2);

        // Chart step and tetrad update by the step's pure boost (gamma =
        // dt/m_out toward u). Coefficients are O(1), so the composed tetrad
        // keeps full relative accuracy however large its entries grow.
        Point c = tube.chain.back();
        for (int i = 0; i < 4; ++i)
            c.x[static_cast<std::size_t>(i)] += dt * e[0][static_cast<std::size_t>(i)]
                + rho * (u[0] * e[1][static_cast<std::size_t>(i)] + u[1] * e[2][static_cast<std::size_t>(i)]
                       + u[2] * e[3][static_cast<std::size_t>(i)]);
        tube.chain.push_back(c);

        double gamma = dt / m_out;
        double gb = rho / m_out; // gamma * beta
        std::array<detail::Vec4, 4> ne{};
        for (int i = 0; i < 4; ++i) {
            double spatial = u[0] * e[1][static_cast<std::size_t>(i)] + u[1] * e[2][static_cast<std::size_t>(i)]
                           + u[2] * e[3][static_cast<std::size_t>(i)];
            ne[0][static_cast<std::size_t>(i)] = gamma * e[0][static_cast<std::size_t>(i)] + gb * spatial;
            for (int j = 1; j <= 3; ++j)
                ne[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                    e[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]
                    + (gamma - 1.0) * u[static_cast<std::size_t>(j - 1)] * spatial
                    + gb * u[static_cast<std::size_t>(j - 1)] * e[0][static_cast<std::size_t>(i)];
        }
        e = ne;
        m_in = m_out;
    }
    return tube;
}

struct WobbleStats {
    double mean_cosh = 1;          // mean cosh of the chart angle over interior joints
    double predicted_cosh = 1;     // (mu_d^2 - d) / (mu_d^2 - 2d)
    double theta_rms = 0;
    double predicted_theta = 0;
    double endpoint_transverse = 0; // spatial displacement of the chain end from its start
    double endpoint_time = 0;
    long long n_links = 0;
    std::uint64_t seed = 0;
};

// Angle statistics over the chain's interior joints (the simulator records
// each angle in the joint's own rest frame, where it is well conditioned at
// any chain length); predictions come from the closed-form cone angle of the
// distorted parallelism.
inline WobbleStats wobble_statistics(const BrokenTube& tube, double d, double sigma0) {
    (void)sigma0;
    require(tube.chain.size() >= 2, ErrorKind::contract, "wobble_statistics: chain too short");
    require(tube.theta_dM.size() + 1 == tube.chain.size(), ErrorKind::contract,
            "wobble_statistics: per-link angles out of step with the chain");
    WobbleStats s;
    s.n_links = static_cast<long long>(tube.chain.size()) - 1;
    s.seed = tube.seed;
    double mu2 = tube.mu_d * tube.mu_d;
    require(mu2 > 2.0 * d, ErrorKind::below_threshold, "wobble_statistics: mass below the distortion threshold");
    s.predicted_cosh = (mu2 - d) / (mu2 - 2.0 * d);
    s.predicted_theta = std::acosh(std::max(1.0, s.predicted_cosh));

    if (tube.theta_dM.size() >= 2) {
        double sum_cosh = 0, sum_sq = 0;
        std::size_t joints = tube.theta_dM.size() - 1; // entry 0 is the seed link
        for (std::size_t i = 1; i < tube.theta_dM.size(); ++i) {
            sum_cosh += std::cosh(tube.theta_dM[i]);
            sum_sq += tube.theta_dM[i] * tube.theta_dM[i];
        }
        s.mean_cosh = sum_cosh / static_cast<double>(joints);
        s.theta_rms = std::sqrt(sum_sq / static_cast<double>(joints));
    }

    detail::Vec4 disp = detail::vsub(tube.chain.back(), tube.chain.front());
    s.endpoint_time = disp[0];
    s.endpoint_transverse = std::sqrt(disp[1] * disp[1] + disp[2] * disp[2] + disp[3] * disp[3]);
    return s;
}

// One row per link: the link's end point, the chart angle at its start joint
// and the two conservation residuals. Fixed 17-significant-digit formatting
// keeps reruns byte-identical.
inline void write_chain_csv(std::ostream& os, const BrokenTube& tube) {
    os << "link_index,t,x,y,z,theta_dM,residual_parallel,residual_length\n";
    for (std::size_t i = 0; i + 1 < tube.chain.size(); ++i) {
        const Point& p = tube.chain[i + 1];
        os << i << ',' << fmt17(p[0]) << ',' << fmt17(p[1]) << ',' << fmt17(p[2]) << ',' << fmt17(p[3]) << ','
           << fmt17(tube.theta_dM[i]) << ',' << fmt17(tube.residual_parallel[i]) << ','
           << fmt17(tube.residual_length[i]) << '\n';
    }
}

inline void write_stats(std::ostream& os, const WobbleStats& s) {
    write_kv(os, "mean_cosh", s.mean_cosh);
    write_kv(os, "predicted_cosh", s.predicted_cosh);
    write_kv(os, "theta_rms", s.theta_rms);
    write_kv(os, "predicted_theta", s.predicted_theta);
    write_kv(os, "n_links", s.n_links);
    write_kv(os, "seed", static_cast<long long>(s.seed));
}

} // namespace sigmageom
