#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sigmageom/core.hpp"
#include "sigmageom/rootfind.hpp"
#include "sigmageom/sampling.hpp"
#include "support.hpp"

using namespace sigmageom;

namespace {

std::vector<Point> random_pts(int n, int count, std::uint64_t seed, double half = 5.0) {
    return random_points_in_box(Box::cube(n, half), count, seed);
}

} // namespace

TEST(SigmaValues, EuclideanHandValues) {
    WorldFunction g = WorldFunction::euclidean(2);
    EXPECT_DOUBLE_EQ(evaluate_sigma(g, Point{0, 0}, Point{3, 4}), 12.5);
    EXPECT_DOUBLE_EQ(evaluate_sigma(g, Point{1, 1}, Point{1, 1}), 0.0);
}

TEST(SigmaValues, FlatSpacetimeHandValues) {
    WorldFunction g = WorldFunction::minkowski(4);
    EXPECT_DOUBLE_EQ(evaluate_sigma(g, Point{0, 0, 0, 0}, Point{2, 1, 0, 0}), 1.5);
    EXPECT_DOUBLE_EQ(evaluate_sigma(g, Point{0, 0, 0, 0}, Point{0, 1, 0, 0}), -0.5);
    WorldFunction g2 = WorldFunction::minkowski(4, 2.0);
    // c = 2 doubles the time scale: (c^2 * 1 - 1) / 2.
    EXPECT_DOUBLE_EQ(evaluate_sigma(g2, Point{0, 0, 0, 0}, Point{1, 1, 0, 0}), 1.5);
}

TEST(SigmaValues, DistortedBranchValues) {
    WorldFunction g = WorldFunction::distorted(0.1, 0.5, 4);
    // Deep timelike: flat value 2 shifts by +d.
    EXPECT_NEAR(evaluate_sigma(g, Point{0, 0, 0, 0}, Point{2, 0, 0, 0}), 2.1, 1e-15);
    // Spacelike: untouched.
    Point sp{0, std::sqrt(2.0), 0, 0};
    EXPECT_NEAR(evaluate_sigma(g, Point{0, 0, 0, 0}, sp), -1.0, 1e-15);
    // Between 0 and the threshold: scaled by (1 + d / sigma0).
    Point mid{std::sqrt(0.5), 0, 0, 0}; // flat value 0.25
    EXPECT_NEAR(evaluate_sigma(g, Point{0, 0, 0, 0}, mid), 0.3, 1e-15);
}

TEST(SigmaValues, DistortedBranchContinuity) {
    double d = 0.1, s0 = 0.5;
    WorldFunction g = WorldFunction::distorted(d, s0, 4);
    auto sigma_at = [&](double flat) {
        // Pure time displacement realizing the requested flat value.
        double t = std::sqrt(2.0 * std::abs(flat));
        Point q{flat < 0 ? 0.0 : t, flat < 0 ? t : 0.0, 0, 0};
        return evaluate_sigma(g, Point{0, 0, 0, 0}, q);
    };
    double at_s0 = 1.0;
    EXPECT_NEAR(sigma_at(s0 * (1 - 5e-13)), sigma_at(s0 * (1 + 5e-13)), 1e-12 * at_s0);
    EXPECT_NEAR(sigma_at(1e-13), sigma_at(-1e-13), 1e-12);
}

TEST(SigmaValues, SelfDistanceIsExactlyZero) {
    WorldFunction geos[] = {WorldFunction::euclidean(3), WorldFunction::minkowski(4),
                            WorldFunction::distorted(0.01, 0.001, 4)};
    for (const auto& g : geos)
        for (const Point& p : random_pts(g.dim(), 50, 11))
            EXPECT_EQ(evaluate_sigma(g, p, p), 0.0);
    QuarticLine q;
    EXPECT_EQ(evaluate_sigma(q, Point{1.7}, Point{1.7}), 0.0);
}

TEST(SigmaValues, SymmetryProperty) {
    WorldFunction geos[] = {WorldFunction::euclidean(3), WorldFunction::minkowski(4),
                            WorldFunction::distorted(0.05, 0.01, 4)};
    for (const auto& g : geos) {
        auto pts = random_pts(g.dim(), 2000, 23);
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
            double spq = evaluate_sigma(g, pts[i], pts[i + 1]);
            double sqp = evaluate_sigma(g, pts[i + 1], pts[i]);
            EXPECT_LE(std::abs(spq - sqp), 1e-12 * (1.0 + std::abs(spq)));
        }
    }
}

TEST(SigmaValues, ContractViolations) {
    WorldFunction g = WorldFunction::euclidean(2);
    EXPECT_THROW(
        {
            try {
                evaluate_sigma(g, Point{0, 0, 0}, Point{1, 1, 1});
            } catch (const Error& e) {
                EXPECT_EQ(e.kind, ErrorKind::contract);
                throw;
            }
        },
        Error);
    Point bad{std::nan(""), 0};
    EXPECT_THROW(evaluate_sigma(g, bad, Point{0, 0}), Error);
    EXPECT_THROW(WorldFunction::euclidean(0), Error);
    EXPECT_THROW(WorldFunction::distorted(-0.1, 0.5, 4), Error);
    EXPECT_THROW(WorldFunction::distorted(0.1, 0.0, 4), Error); // positive d needs a positive threshold
    EXPECT_NO_THROW(WorldFunction::distorted(0.0, 0.0, 4));     // identity map is allowed
}

TEST(VectorCalculus, LengthAndClassification) {
    WorldFunction e2 = WorldFunction::euclidean(2);
    EXPECT_DOUBLE_EQ(squared_length(e2, Vector(Point{0, 0}, Point{3, 4})), 25.0);

    WorldFunction m = WorldFunction::minkowski(4);
    Vector spacelike(Point{0, 0, 0, 0}, Point{0, 1, 0, 0});
    EXPECT_DOUBLE_EQ(squared_length(m, spacelike), -1.0);
    EXPECT_EQ(classify(m, spacelike), IntervalClass::spacelike);
    EXPECT_EQ(classify(m, Vector(Point{0, 0, 0, 0}, Point{1, 0, 0, 0})), IntervalClass::timelike);
    EXPECT_EQ(classify(m, Vector(Point{1, 2, 3, 4}, Point{1, 2, 3, 4})), IntervalClass::null_interval);
    EXPECT_EQ(classify(m, Vector(Point{0, 0, 0, 0}, Point{1, 1, 0, 0})), IntervalClass::null_interval);
}

TEST(VectorCalculus, ScalarProductBasics) {
    WorldFunction e2 = WorldFunction::euclidean(2);
    Vector v(Point{0, 0}, Point{1, 0});
    Vector w(Point{0, 0}, Point{0, 1});
    EXPECT_DOUBLE_EQ(scalar_product(e2, v, w), 0.0);
    EXPECT_DOUBLE_EQ(scalar_product(e2, v, w), scalar_product(e2, w, v));

    // (v.v) collapses to the squared length bit-for-bit.
    for (const Point& p : random_pts(2, 40, 31)) {
        Vector u(Point{0.5, -0.25}, p);
        EXPECT_EQ(scalar_product(e2, u, u), squared_length(e2, u));
    }
}

TEST(VectorCalculus, DistortionShiftsProducts) {
    double d = 0.1, s0 = 0.5;
    WorldFunction gd = WorldFunction::distorted(d, s0, 4);
    WorldFunction gm = WorldFunction::minkowski(4);

    // Shared-start timelike fan, every pairwise flat value deep above the
    // threshold: the shift survives as exactly +d.
    Vector v(Point{0, 0, 0, 0}, Point{3, 0, 0, 0});
    Vector w(Point{0, 0, 0, 0}, Point{5, 0.1, 0, 0});
    EXPECT_NEAR(scalar_product(gd, v, w), scalar_product(gm, v, w) + d, 1e-12);

    // Adjacent chain links (shared interior point): the shift flips to -d.
    Vector a(Point{0, 0, 0, 0}, Point{2, 0, 0, 0});
    Vector b(Point{2, 0, 0, 0}, Point{5, 0, 0, 0});
    EXPECT_NEAR(scalar_product(gd, a, b), scalar_product(gm, a, b) - d, 1e-12);

    // Four distinct points, all six separations deep timelike: shifts cancel.
    Vector p(Point{0, 0, 0, 0}, Point{3, 0, 0, 0});
    Vector q(Point{10, 0, 0, 0}, Point{14, 0.2, 0, 0});
    EXPECT_NEAR(scalar_product(gd, p, q), scalar_product(gm, p, q), 1e-12);
}

TEST(SkeletonAlgebra, MetricTensorHandValues) {
    WorldFunction e3 = WorldFunction::euclidean(3);
    Skeleton ortho{Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{0, 0, 1}};
    MetricTensor mt = metric_tensor(e3, ortho);
    EXPECT_TRUE(mt.g.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));
    EXPECT_TRUE(mt.g_inv.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));

    WorldFunction m = WorldFunction::minkowski(4);
    Skeleton axes{Point{0, 0, 0, 0}, Point{1, 0, 0, 0}, Point{0, 1, 0, 0}, Point{0, 0, 1, 0}, Point{0, 0, 0, 1}};
    Eigen::MatrixXd gm = metric_tensor_matrix(m, axes);
    Eigen::VectorXd expected(4);
    expected << 1, -1, -1, -1;
    EXPECT_TRUE(gm.diagonal().isApprox(expected, 1e-14));
    EXPECT_NEAR(gm.cwiseAbs().sum(), 4.0, 1e-12); // off-diagonal entries vanish
}

TEST(SkeletonAlgebra, SingularSkeletonRejected) {
    WorldFunction e3 = WorldFunction::euclidean(3);
    Skeleton repeated{Point{0, 0, 0}, Point{1, 0, 0}, Point{1, 0, 0}, Point{0, 0, 1}};
    EXPECT_THROW(
        {
            try {
                metric_tensor(e3, repeated);
            } catch (const Error& e) {
                EXPECT_EQ(e.kind, ErrorKind::singular_skeleton);
                throw;
            }
        },
        Error);
}

TEST(SkeletonAlgebra, GramDeterminants) {
    WorldFunction e3 = WorldFunction::euclidean(3);
    Skeleton ortho{Point{0, 0, 0}, Point{1, 0, 0}, Point{0, 1, 0}, Point{0, 0, 1}};
    EXPECT_NEAR(gram_determinant(e3, ortho), 1.0, 1e-14);

    // One point more than the dimension supports: the determinant collapses.
    auto pts = random_pts(3, 5, 41, 1.0);
    EXPECT_LE(std::abs(gram_determinant(e3, Skeleton(pts))), 1e-8);

    WorldFunction e2 = WorldFunction::euclidean(2);
    Skeleton collinear{Point{0, 0}, Point{1, 1}, Point{2, 2}};
    EXPECT_NEAR(gram_determinant(e2, collinear), 0.0, 1e-12);
}

TEST(SkeletonAlgebra, GramPositiveSemidefiniteInEuclid) {
    WorldFunction e3 = WorldFunction::euclidean(3);
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto pts = random_pts(3, 4, 100 + s, 2.0);
        Eigen::MatrixXd g = metric_tensor_matrix(e3, Skeleton(pts));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    }
}

TEST(SkeletonAlgebra, CovariantCoordinates) {
    WorldFunction e2 = WorldFunction::euclidean(2);
    Skeleton ortho{Point{0, 0}, Point{1, 0}, Point{0, 1}};
    auto zero = covariant_coordinates(e2, ortho, Point{0, 0});
    EXPECT_DOUBLE_EQ(zero[0], 0.0);
    EXPECT_DOUBLE_EQ(zero[1], 0.0);

    auto xy = covariant_coordinates(e2, ortho, Point{2, 3});
    EXPECT_DOUBLE_EQ(xy[0], 2.0);
    EXPECT_DOUBLE_EQ(xy[1], 3.0);

    // Doubling a basis leg doubles the matching covariant component.
    Skeleton stretched{Point{0, 0}, Point{2, 0}, Point{0, 1}};
    auto sc = covariant_coordinates(e2, stretched, Point{2, 3});
    EXPECT_DOUBLE_EQ(sc[0], 4.0);
    EXPECT_DOUBLE_EQ(sc[1], 3.0);
}

TEST(SkeletonAlgebra, QuadraticReconstruction) {
    WorldFunction geos[] = {WorldFunction::euclidean(3), WorldFunction::minkowski(4)};
    for (const auto& g : geos) {
        int n = g.dim();
        auto pts = random_pts(n, n + 1, 53, 3.0);
        Skeleton sk(pts);
        MetricTensor mt;
        try {
            mt = metric_tensor(g, sk);
        } catch (const Error&) {
            continue; // singular random skeleton: nothing to check
        }
        for (const Point& p : random_pts(n, 20, 57))
            for (const Point& q : random_pts(n, 3, 59)) {
                double direct = evaluate_sigma(g, p, q);
                double rebuilt = reconstruct_sigma(mt, covariant_coordinates_unchecked(g, sk, p),
                                                   covariant_coordinates_unchecked(g, sk, q));
                EXPECT_LE(std::abs(direct - rebuilt), 1e-9 * (1.0 + std::abs(direct)));
            }
    }
}

TEST(SkeletonAlgebra, ReconstructionDetectsNonQuadraticSigma) {
    WorldFunction gd = WorldFunction::distorted(0.1, 0.01, 4);
    Skeleton sk{Point{0, 0, 0, 0}, Point{1, 0, 0, 0}, Point{0, 1, 0, 0}, Point{0, 0, 1, 0}, Point{0, 0, 0, 1}};
    MetricTensor mt = metric_tensor(gd, sk);
    Point p{4, 0, 0, 0}, q{-3, 0.5, 0, 0};
    double direct = evaluate_sigma(gd, p, q);
    double rebuilt = reconstruct_sigma(mt, covariant_coordinates_unchecked(gd, sk, p),
                                       covariant_coordinates_unchecked(gd, sk, q));
    EXPECT_GT(std::abs(direct - rebuilt), 0.05 * 0.1); // the piecewise map is visible
}

TEST(Calibration, QuantumDistortion) {
    EXPECT_DOUBLE_EQ(distortion_from_quantum(1.0, 1.0, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(distortion_from_quantum(1.0, 0.5, 1.0), 1.0);
    EXPECT_THROW(distortion_from_quantum(0.0, 1.0, 1.0), Error);
    EXPECT_THROW(distortion_from_quantum(1.0, -1.0, 1.0), Error);
}

TEST(QuarticFamily, Values) {
    QuarticLine q;
    EXPECT_EQ(q.dim(), 1);
    EXPECT_DOUBLE_EQ(evaluate_sigma(q, Point{0.0}, Point{2.0}), 8.0);
    EXPECT_DOUBLE_EQ(evaluate_sigma(q, Point{0.0}, Point{1.0}), 0.5);
}

TEST(RootFinding, BracketedSolve) {
    auto f = [](double x) { return x * x - 2.0; };
    auto br = scan_bracket(f, 0.0, 2.0, 16);
    ASSERT_TRUE(br.has_value());
    RootResult r = brent(f, br->first, br->second);
    ASSERT_TRUE(r.ok);
    EXPECT_NEAR(r.x, std::sqrt(2.0), 1e-12);
}

TEST(RootFinding, DampedNewtonSolvesNonlinearPair) {
    auto residual = [](const Eigen::VectorXd& x, Eigen::VectorXd& r) -> bool {
        r(0) = x(0) * x(0) + x(1) * x(1) - 4.0;
        r(1) = x(0) - x(1);
        return true;
    };
    Eigen::VectorXd x0(2);
    x0 << 1.0, 0.5;
    auto out = damped_newton(residual, x0, NewtonSpec{});
    ASSERT_TRUE(out.ok);
    EXPECT_NEAR(out.x(0), std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(out.x(1), std::sqrt(2.0), 1e-9);
}
