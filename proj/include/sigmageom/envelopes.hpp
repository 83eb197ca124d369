#pragma once

// Elementary geometric objects as zero sets of envelope functions over the
// world function, a grid sampler that extracts the zero sets numerically, and
// the tube / coordinate-tube coincidence test.
//
// Some envelope residuals are sign-definite (the Euclidean tube residual obeys
// Cauchy-Schwarz and never goes positive; its timelike Minkowski counterpart
// never goes negative), so the sampler refines each grid edge by a bracketed
// root solve when the endpoints change sign and by extremum refinement toward
// zero otherwise, keeping only points inside the membership band.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "core.hpp"
#include "csv.hpp"
#include "rootfind.hpp"
#include "sampling.hpp"

namespace sigmageom {

struct Envelope {
    enum class Kind { sphere, ellipsoid, segment, tube, coordinate_tube };

    Kind kind = Kind::sphere;
    Point p0;    // sphere center / ellipsoid focus / segment end / tube base
    Point p1;    // sphere surface point / ellipsoid focus / segment end / tube target Q
    double a = 0; // ellipsoid semiaxis
    Skeleton sk;  // coordinate tube basis

    // Sphere with center P0 passing through P1.
    static Envelope sphere(Point center, Point through) {
        Envelope e;
        e.kind = Kind::sphere;
        e.p0 = std::move(center);
        e.p1 = std::move(through);
        return e;
    }

    // Ellipsoid with focuses P, Q and semiaxis a.
    static Envelope ellipsoid(Point p, Point q, double a) {
        require(a > 0, ErrorKind::contract, "ellipsoid: semiaxis must be positive");
        Envelope e;
        e.kind = Kind::ellipsoid;
        e.p0 = std::move(p);
        e.p1 = std::move(q);
        e.a = a;
        return e;
    }

    // Straight-line segment between P0 and P1.
    static Envelope segment(Point p0, Point p1) {
        Envelope e;
        e.kind = Kind::segment;
        e.p0 = std::move(p0);
        e.p1 = std::move(p1);
        return e;
    }

    // Tube (the deformed straight) through P0 and Q, P0 != Q.
    static Envelope tube(Point p0, Point q) {
        require(!(p0 == q), ErrorKind::contract, "tube: defining points must be distinct");
        Envelope e;
        e.kind = Kind::tube;
        e.p0 = std::move(p0);
        e.p1 = std::move(q);
        return e;
    }

    // Coordinate tube: the set where the covariant coordinates of R stay
    // proportional to those of Q in the skeleton basis.
    static Envelope coordinate_tube(Point q, Skeleton basis) {
        basis.validate();
        Envelope e;
        e.kind = Kind::coordinate_tube;
        e.p0 = basis.points.front();
        e.p1 = std::move(q);
        e.sk = std::move(basis);
        return e;
    }

    int dim() const { return p0.dim(); }
};

namespace detail {

inline double real_length(double sigma, const char* who) {
    if (sigma < 0) fail(ErrorKind::imaginary_length, std::string(who) + ": sigma < 0 where a real length is required");
    return std::sqrt(2.0 * sigma);
}

} // namespace detail

// Envelope residual at R. Zero on the object; sign conventions:
//   sphere            sqrt(2 s(P0,P1)) - sqrt(2 s(P0,R)), positive inside the ball
//   ellipsoid         rho(P,R) + rho(R,Q) - 2a, negative inside
//   segment           rho(P0,P1) - rho(P0,R) - rho(R,P1)
//   tube              (P0Q.P0R)^2 - (P0Q.P0Q)(P0R.P0R), units length^4
//   coordinate tube   max_i |(P0Pi.P0Q)(P0P1.P0R) - (P0P1.P0Q)(P0Pi.P0R)|, length^4;
//                     the cross-multiplied form removes the elimination
//                     singularity of the ratio definition.
template <GeometryLike G>
double envelope_value(const G& g, const Envelope& obj, const Point& r) {
    detail::check_point_dims(g, obj.p0, r, "envelope_value");
    switch (obj.kind) {
        case Envelope::Kind::sphere:
            return detail::real_length(g.sigma(obj.p0, obj.p1), "sphere")
                 - detail::real_length(g.sigma(obj.p0, r), "sphere");
        case Envelope::Kind::ellipsoid:
            return detail::real_length(g.sigma(obj.p0, r), "ellipsoid")
                 + detail::real_length(g.sigma(r, obj.p1), "ellipsoid") - 2.0 * obj.a;
        case Envelope::Kind::segment:
            return detail::real_length(g.sigma(obj.p0, obj.p1), "segment")
                 - detail::real_length(g.sigma(obj.p0, r), "segment")
                 - detail::real_length(g.sigma(r, obj.p1), "segment");
        case Envelope::Kind::tube: {
            Vector v(obj.p0, obj.p1), w(obj.p0, r);
            double vw = scalar_product(g, v, w);
            return vw * vw - scalar_product(g, v, v) * scalar_product(g, w, w);
        }
        case Envelope::Kind::coordinate_tube: {
            const Point& p0 = obj.sk.points.front();
            Vector v1(p0, obj.sk.points[1]);
            Vector q(p0, obj.p1), w(p0, r);
            double aq = scalar_product(g, v1, q);
            double aw = scalar_product(g, v1, w);
            double worst = 0;
            for (int i = 2; i <= obj.sk.order(); ++i) {
                Vector vi(p0, obj.sk.points[static_cast<std::size_t>(i)]);
                double cross = scalar_product(g, vi, q) * aw - aq * scalar_product(g, vi, w);
                worst = std::max(worst, std::abs(cross));
            }
            return worst;
        }
    }
    return 0;
}

template <GeometryLike G>
bool contains(const G& g, const Envelope& obj, const Point& r, double tol) {
    return std::abs(envelope_value(g, obj, r)) <= tol;
}

// Default chart box: bounding box of the defining points, inflated per axis by
// 3 sqrt(d) plus 10 percent of the extent (tube widths scale like sqrt(d)).
inline Box default_box(const Envelope& obj, double d = 0) {
    std::vector<const Point*> pts{&obj.p0, &obj.p1};
    for (const Point& p : obj.sk.points) pts.push_back(&p);
    int n = obj.dim();
    Box box;
    box.lo.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    box.hi.assign(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
    for (const Point* p : pts) {
        if (p->dim() != n) continue;
        for (int i = 0; i < n; ++i) {
            box.lo[static_cast<std::size_t>(i)] = std::min(box.lo[static_cast<std::size_t>(i)], (*p)[i]);
            box.hi[static_cast<std::size_t>(i)] = std::max(box.hi[static_cast<std::size_t>(i)], (*p)[i]);
        }
    }
    double global = 0;
    for (int i = 0; i < n; ++i)
        global = std::max(global, box.hi[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)]);
    if (global == 0) global = 1.0;
    for (int i = 0; i < n; ++i) {
        double extent = box.hi[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)];
        double pad = 3.0 * std::sqrt(std::max(0.0, d)) + 0.1 * (extent > 0 ? extent : global);
        box.lo[static_cast<std::size_t>(i)] -= pad;
        box.hi[static_cast<std::size_t>(i)] += pad;
    }
    return box;
}

struct SampledEnvelope {
    std::vector<Point> points;
    std::vector<double> residuals; // per point, |residual| <= tol by construction
    Box box;
    int grid = 0;
    double tol = 0;
    bool empty_envelope = false; // no point of the zero set was found in the box
};

// Grid scan over the box: every lattice edge is refined by Brent when its ends
// straddle zero, and by golden-section extremum refinement toward zero when the
// residual is sign-definite along it. Deterministic for fixed inputs. Grid
// nodes where the residual is undefined (imaginary length) are skipped.
template <GeometryLike G>
SampledEnvelope sample_envelope(const G& g, const Envelope& obj, const Box& box, int grid, double tol) {
    require(grid >= 8, ErrorKind::contract, "sample_envelope: grid must be at least 8 per axis");
    require(box.dim() == obj.dim(), ErrorKind::contract, "sample_envelope: box dimension mismatch");
    int n = box.dim();
    SampledEnvelope out;
    out.box = box;
    out.grid = grid;
    out.tol = tol;

    std::vector<double> step(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        step[static_cast<std::size_t>(i)] =
            (box.hi[static_cast<std::size_t>(i)] - box.lo[static_cast<std::size_t>(i)]) / grid;

    std::vector<std::size_t> stride(static_cast<std::size_t>(n));
    std::size_t nodes = 1;
    for (int i = n - 1; i >= 0; --i) {
        stride[static_cast<std::size_t>(i)] = nodes;
        nodes *= static_cast<std::size_t>(grid + 1);
    }

    auto node_point = [&](std::size_t flat) {
        Point p;
        p.x.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            std::size_t idx = (flat / stride[static_cast<std::size_t>(i)]) % static_cast<std::size_t>(grid + 1);
            p.x[static_cast<std::size_t>(i)] =
                box.lo[static_cast<std::size_t>(i)] + step[static_cast<std::size_t>(i)] * static_cast<double>(idx);
        }
        return p;
    };

    auto safe_value = [&](const Point& p) -> double {
        try {
            return envelope_value(g, obj, p);
        } catch (const Error& e) {
            if (e.kind == ErrorKind::imaginary_length) return std::numeric_limits<double>::quiet_NaN();
            throw;
        }
    };

    std::vector<double> values(nodes);
    for (std::size_t f = 0; f < nodes; ++f) values[f] = safe_value(node_point(f));

    auto accept = [&](const Point& p, double fv) {
        if (std::isnan(fv) || std::abs(fv) > tol) return;
        out.points.push_back(p);
        out.residuals.push_back(fv);
    };

    for (std::size_t flat = 0; flat < nodes; ++flat) {
        double f0 = values[flat];
        if (std::isnan(f0)) continue;
        Point a = node_point(flat);
        if (f0 == 0.0) accept(a, f0);
        for (int j = 0; j < n; ++j) {
            std::size_t idx = (flat / stride[static_cast<std::size_t>(j)]) % static_cast<std::size_t>(grid + 1);
            if (idx == static_cast<std::size_t>(grid)) continue;
            double f1 = values[flat + stride[static_cast<std::size_t>(j)]];
            if (std::isnan(f1)) continue;
            double h = step[static_cast<std::size_t>(j)];
            auto along = [&](double s) {
                Point p = a;
                p[j] += s * h;
                return p;
            };
            auto fs = [&](double s) {
                double v = safe_value(along(s));
                return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
            };
            if (f0 * f1 < 0) {
                RootSpec spec;
                spec.tol = 0.5 * tol;
                RootResult root = brent(fs, 0.0, 1.0, spec);
                accept(along(root.x), root.f);
            } else {
                bool maximize = f0 < 0; // both ends share this sign
                RootResult ext = extremum_refine(fs, 0.0, 1.0, maximize, 48);
                accept(along(ext.x), ext.f);
            }
        }
    }
    out.empty_envelope = out.points.empty();
    return out;
}

// Point-cloud export, one row per sampled point: x0,...,x{n-1},residual.
inline void write_cloud_csv(std::ostream& os, const SampledEnvelope& se) {
    int n = se.box.dim();
    for (int i = 0; i < n; ++i) os << "x" << i << ",";
    os << "residual\n";
    for (std::size_t k = 0; k < se.points.size(); ++k) {
        for (int i = 0; i < n; ++i) os << fmt17(se.points[k][i]) << ",";
        os << fmt17(se.residuals[k]) << "\n";
    }
}

// Largest perpendicular chart offset of cloud points from the line through p0
// and q (diagnostic for tube widths).
inline double transverse_extent(const std::vector<Point>& cloud, const Point& p0, const Point& q) {
    int n = p0.dim();
    std::vector<double> axis(static_cast<std::size_t>(n));
    double norm2 = 0;
    for (int i = 0; i < n; ++i) {
        axis[static_cast<std::size_t>(i)] = q[i] - p0[i];
        norm2 += axis[static_cast<std::size_t>(i)] * axis[static_cast<std::size_t>(i)];
    }
    double worst = 0;
    for (const Point& p : cloud) {
        double along = 0, len2 = 0;
        for (int i = 0; i < n; ++i) {
            double rel = p[i] - p0[i];
            along += rel * axis[static_cast<std::size_t>(i)];
            len2 += rel * rel;
        }
        double perp2 = len2 - (norm2 > 0 ? along * along / norm2 : 0);
        worst = std::max(worst, std::sqrt(std::max(0.0, perp2)));
    }
    return worst;
}

// Second singular value of the centered cloud (zero for a perfectly straight
// sample, of order the tube width otherwise).
inline double second_singular_value(const std::vector<Point>& cloud) {
    if (cloud.size() < 2) return 0;
    int n = cloud.front().dim();
    Eigen::MatrixXd m(static_cast<int>(cloud.size()), n);
    for (std::size_t k = 0; k < cloud.size(); ++k)
        for (int i = 0; i < n; ++i) m(static_cast<int>(k), i) = cloud[k][i];
    Eigen::RowVectorXd mean = m.colwise().mean();
    m.rowwise() -= mean;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    if (svd.singularValues().size() < 2) return 0;
    return svd.singularValues()(1) / std::sqrt(static_cast<double>(cloud.size()));
}

struct TubeCoincidenceReport {
    bool coincide = false;
    double max_tube_residual_on_coord = 0;  // tube envelope over the coordinate-tube cloud
    double max_coord_residual_on_tube = 0;  // coordinate-tube envelope over the tube cloud
    double tube_transverse_extent = 0;      // chart width of the tube cloud about the P0-Q line
    std::size_t tube_points = 0;
    std::size_t coord_points = 0;
};

// Samples the tube through (P0, Q) and the coordinate tube of Q in the given
// skeleton basis over one box, then cross-evaluates each envelope on the other
// cloud. Both residuals carry length^4 units; the verdict compares their
// maxima against the same band used for membership.
template <GeometryLike G>
TubeCoincidenceReport tube_coincidence_check(const G& g, const Point& q, const Skeleton& sk, const Box& box,
                                             int grid, double tol) {
    metric_tensor(g, sk); // nonsingular basis required
    const Point& p0 = sk.points.front();
    require(!(p0 == q), ErrorKind::contract, "tube_coincidence_check: Q must differ from P0");
    Envelope tube = Envelope::tube(p0, q);
    Envelope coord = Envelope::coordinate_tube(q, sk);

    SampledEnvelope tube_cloud = sample_envelope(g, tube, box, grid, tol);
    SampledEnvelope coord_cloud = sample_envelope(g, coord, box, grid, tol);

    TubeCoincidenceReport rep;
    rep.tube_points = tube_cloud.points.size();
    rep.coord_points = coord_cloud.points.size();
    for (const Point& p : coord_cloud.points)
        rep.max_tube_residual_on_coord = std::max(rep.max_tube_residual_on_coord, std::abs(envelope_value(g, tube, p)));
    for (const Point& p : tube_cloud.points)
        rep.max_coord_residual_on_tube = std::max(rep.max_coord_residual_on_tube, std::abs(envelope_value(g, coord, p)));
    rep.tube_transverse_extent = transverse_extent(tube_cloud.points, p0, q);
    rep.coincide = rep.max_tube_residual_on_coord <= tol && rep.max_coord_residual_on_tube <= tol
                && !tube_cloud.empty_envelope && !coord_cloud.empty_envelope;
    return rep;
}

} // namespace sigmageom
