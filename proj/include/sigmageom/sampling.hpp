#pragma once

// Deterministic sampling utilities: seeded point clouds and sphere direction
// draws. Everything is reproducible from the seed; parallel ensembles derive
// per-run streams as (master_seed, run_index).

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "core.hpp"

namespace sigmageom {

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    int dim() const { return static_cast<int>(lo.size()); }

    static Box cube(int n, double half_width) {
        Box b;
        b.lo.assign(static_cast<std::size_t>(n), -half_width);
        b.hi.assign(static_cast<std::size_t>(n), half_width);
        return b;
    }

    double diagonal() const {
        double s = 0;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            double d = hi[i] - lo[i];
            s += d * d;
        }
        return std::sqrt(s);
    }

    bool contains(const Point& p) const {
        for (int i = 0; i < dim(); ++i)
            if (p[i] < lo[static_cast<std::size_t>(i)] || p[i] > hi[static_cast<std::size_t>(i)]) return false;
        return true;
    }
};

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::mt19937_64 make_rng(std::uint64_t master_seed, std::uint64_t run_index) {
    std::seed_seq seq{master_seed, run_index};
    return std::mt19937_64(seq);
}

inline std::vector<Point> random_points_in_box(const Box& box, int count, std::uint64_t seed) {
    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        Point p;
        p.x.resize(box.lo.size());
        for (std::size_t i = 0; i < box.lo.size(); ++i)
            p.x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * u(rng);
        pts.push_back(std::move(p));
    }
    return pts;
}

// Uniform direction on S^2 (polar cosine uniform, azimuth uniform).
inline std::array<double, 3> random_unit_s2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double z = 2.0 * u(rng) - 1.0;
    double phi = 2.0 * std::numbers::pi * u(rng);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

// Fibonacci lattice on S^2: a deterministic, nearly uniform direction grid.
inline std::vector<std::array<double, 3>> fibonacci_sphere(int count) {
    std::vector<std::array<double, 3>> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / count;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * i;
        dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return dirs;
}

} // namespace sigmageom
