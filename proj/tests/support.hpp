#pragma once

// Shared test fixtures: purpose-built geometries that break one contract at a
// time, so each checker's failure path can be exercised deliberately.

#include <algorithm>
#include <cmath>
#include <vector>

#include "sigmageom/core.hpp"

namespace testgeom {

using sigmageom::Point;

// Euclidean plane with a lexicographic bias added to sigma: breaks the
// symmetry axiom and nothing else.
struct AsymmetricPlane {
    double eps = 1e-3;
    int dim() const { return 2; }
    double sigma(const Point& p, const Point& q) const {
        double dx = p[0] - q[0], dy = p[1] - q[1];
        double s = 0.5 * (dx * dx + dy * dy);
        if (p[0] < q[0] || (p[0] == q[0] && p[1] < q[1])) s += eps;
        return s;
    }
};

// Euclidean plane whose carrier excludes an open disk. sigma itself stays
// Euclidean; only membership changes, so existence of solutions inside the
// hole must fail while every algebraic identity still holds.
struct HoleyPlane {
    Point hole_center{0.0, 0.0};
    double hole_radius = 1.0;
    int dim() const { return 2; }
    double sigma(const Point& p, const Point& q) const {
        double dx = p[0] - q[0], dy = p[1] - q[1];
        return 0.5 * (dx * dx + dy * dy);
    }
    bool in_carrier(const Point& p) const {
        return sigmageom::chart_distance(p, hole_center) >= hole_radius;
    }
};

// Distorted world function whose far-spacelike branch is replaced by garbage.
// The replacement region sits strictly below every value the worldline
// stepper can query, so simulations must be bitwise identical to the ones run
// on the unmodified geometry.
struct TamperedFarBranch {
    double d = 0.005;
    double sigma0 = 0.0005;
    double cutoff = -1e-3; // flat values below this get remapped
    int dim() const { return 4; }
    double sigma(const Point& p, const Point& q) const {
        double dt = p[0] - q[0];
        double dx = p[1] - q[1], dy = p[2] - q[2], dz = p[3] - q[3];
        double sm = 0.5 * (dt * dt - dx * dx - dy * dy - dz * dz);
        if (sm < cutoff) return 3.0 * sm - 7.0; // deliberate tampering
        if (sm > sigma0) return sm + d;
        if (sm >= 0.0) return (1.0 + d / sigma0) * sm;
        return sm;
    }
};

inline std::vector<Point> line_points_3d(int count) {
    std::vector<Point> pts;
    for (int i = 0; i < count; ++i) {
        double t = 0.1 * i - 1.0;
        pts.push_back(Point{1.0 + 2.0 * t, -0.5 + 1.0 * t, 0.25 - 3.0 * t});
    }
    return pts;
}

} // namespace testgeom
