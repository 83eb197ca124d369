#pragma once

// Core of the sigmageom library: points, vectors, skeletons, the world-function
// geometries, and the scalar calculus built on them. A geometry is anything that
// exposes sigma(P,Q) (half the squared distance) and a chart dimension; every
// geometric notion in the library is routed through sigma, never through raw
// coordinates. Coordinates are labels for carrier points, nothing more.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sigmageom {

// ---------------------------------------------------------------------------
// errors

enum class ErrorKind {
    contract,             // precondition violated by the caller
    singular_skeleton,    // metric tensor not invertible at the pivot threshold
    spacelike_vector,     // operation defined for timelike vectors only
    elimination_failure,  // coordinate collinearity cannot eliminate the ratio
    solver_failure,       // bracketing or iteration failed
    imaginary_length,     // sqrt(2 sigma) requested where sigma < 0
    not_metric_candidate, // indefinite sigma handed to a metric-space check
    below_threshold,      // mass below the 2*sigma0 domain bound
    branch_domain,        // closed-form radius outside its branch domain
    insufficient_samples, // not enough points for the requested check
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind(kind) {}
    ErrorKind kind;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool ok, ErrorKind kind, const std::string& msg) {
    if (!ok) fail(kind, msg);
}

// ---------------------------------------------------------------------------
// carrier-set elements

// A carrier point. The label tuple identifies the point in a chart; all
// geometric content comes from the world function evaluated on labels.
struct Point {
    std::vector<double> x;

    Point() = default;
    Point(std::initializer_list<double> v) : x(v) {}
    explicit Point(std::vector<double> v) : x(std::move(v)) {}

    int dim() const { return static_cast<int>(x.size()); }
    double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }

    bool operator==(const Point& o) const { return x == o.x; }
};

// Ordered point pair. start.dim() == end.dim() is a construction contract.
struct Vector {
    Point start;
    Point end;

    Vector() = default;
    Vector(Point s, Point e) : start(std::move(s)), end(std::move(e)) {
        require(start.dim() == end.dim(), ErrorKind::contract, "vector endpoints disagree in dimension");
    }
};

// Ordered list of n+1 points P0..Pn, the defining data of bases and envelopes.
struct Skeleton {
    std::vector<Point> points;

    Skeleton() = default;
    explicit Skeleton(std::vector<Point> pts) : points(std::move(pts)) { validate(); }
    Skeleton(std::initializer_list<Point> pts) : points(pts) { validate(); }

    int order() const { return static_cast<int>(points.size()) - 1; } // n, the basis size
    int chart_dim() const { return points.empty() ? 0 : points.front().dim(); }

    void validate() const {
        require(points.size() >= 2, ErrorKind::contract, "skeleton needs at least two points");
        for (const Point& p : points)
            require(p.dim() == points.front().dim(), ErrorKind::contract, "skeleton points disagree in dimension");
    }
};

enum class IntervalClass { timelike, null_interval, spacelike };

inline const char* to_string(IntervalClass c) {
    switch (c) {
        case IntervalClass::timelike: return "timelike";
        case IntervalClass::null_interval: return "null";
        case IntervalClass::spacelike: return "spacelike";
    }
    return "unknown";
}

inline bool finite_point(const Point& p) {
    for (double v : p.x)
        if (!std::isfinite(v)) return false;
    return true;
}

// Chart-label distance. Purely diagnostic (deduplication, witness reporting);
// never a substitute for sigma.
inline double chart_distance(const Point& p, const Point& q) {
    double s = 0;
    for (int i = 0; i < p.dim(); ++i) {
        double d = p[i] - q[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// geometry concept

// Anything with a world function over a fixed-dimension chart. Optionally a
// geometry restricts its carrier set; see in_carrier below.
template <class G>
concept GeometryLike = requires(const G& g, const Point& p, const Point& q) {
    { g.sigma(p, q) } -> std::convertible_to<double>;
    { g.dim() } -> std::convertible_to<int>;
};

template <class G>
concept HasCarrierPredicate = requires(const G& g, const Point& p) {
    { g.in_carrier(p) } -> std::convertible_to<bool>;
};

// Carrier membership hook. Geometries without an explicit carrier predicate
// accept every finite label tuple.
template <GeometryLike G>
bool in_carrier(const G& g, const Point& p) {
    if constexpr (HasCarrierPredicate<G>) return g.in_carrier(p);
    else return true;
}

// ---------------------------------------------------------------------------
// concrete world functions

// The three geometry families the library ships. Euclidean and Minkowski are
// quadratic in the chart; the distorted family applies a piecewise map to the
// Minkowski value:
//     sigma_d = sigma_M + d            for sigma_M > sigma0
//     sigma_d = (1 + d/sigma0) sigma_M for 0 <= sigma_M <= sigma0
//     sigma_d = sigma_M                for sigma_M < 0
// The map is continuous at both joints ((1 + d/sigma0) sigma0 = sigma0 + d) and
// keeps sigma(P,P) = 0 and symmetry exactly.
struct WorldFunction {
    enum class Kind { euclidean, minkowski, distorted };

    Kind kind = Kind::euclidean;
    int n = 3;          // chart dimension; Minkowski/distorted use 1 time + (n-1) space
    double c = 1.0;     // signal speed, natural units by default
    double d = 0.0;     // distortion, length^2, d >= 0
    double sigma0 = 0.0; // distortion threshold, length^2, sigma0 > 0

    static WorldFunction euclidean(int n) {
        require(n >= 1, ErrorKind::contract, "dimension must be positive");
        WorldFunction g;
        g.kind = Kind::euclidean;
        g.n = n;
        return g;
    }

    static WorldFunction minkowski(int n = 4, double c = 1.0) {
        require(n >= 2, ErrorKind::contract, "spacetime needs at least 1+1 dimensions");
        require(c > 0, ErrorKind::contract, "signal speed must be positive");
        WorldFunction g;
        g.kind = Kind::minkowski;
        g.n = n;
        g.c = c;
        return g;
    }

    static WorldFunction distorted(double d, double sigma0, int n = 4, double c = 1.0) {
        require(n >= 2, ErrorKind::contract, "spacetime needs at least 1+1 dimensions");
        require(c > 0, ErrorKind::contract, "signal speed must be positive");
        require(d >= 0, ErrorKind::contract, "distortion d must be nonnegative");
        // sigma0 = 0 leaves no crossover band, which is well defined only for
        // the identity map d = 0.
        require(sigma0 > 0 || d == 0, ErrorKind::contract, "threshold sigma0 must be positive when d > 0");
        require(sigma0 >= 0, ErrorKind::contract, "threshold sigma0 must be nonnegative");
        WorldFunction g;
        g.kind = Kind::distorted;
        g.n = n;
        g.c = c;
        g.d = d;
        g.sigma0 = sigma0;
        return g;
    }

    int dim() const { return n; }

    double sigma(const Point& p, const Point& q) const {
        switch (kind) {
            case Kind::euclidean: {
                double s = 0;
                for (int i = 0; i < n; ++i) {
                    double dx = p[i] - q[i];
                    s += dx * dx;
                }
                return 0.5 * s;
            }
            case Kind::minkowski:
                return sigma_minkowski(p, q);
            case Kind::distorted:
                return distort(sigma_minkowski(p, q));
        }
        return 0;
    }

    // The underlying Minkowski value; for the distorted family this is the
    // quantity the branch map acts on. Coordinate 0 is time.
    double sigma_minkowski(const Point& p, const Point& q) const {
        double dt = p[0] - q[0];
        double s = c * c * dt * dt;
        for (int i = 1; i < n; ++i) {
            double dx = p[i] - q[i];
            s -= dx * dx;
        }
        return 0.5 * s;
    }

    double distort(double sigma_m) const {
        if (d == 0) return sigma_m;
        if (sigma_m > sigma0) return sigma_m + d;
        if (sigma_m >= 0) return (1.0 + d / sigma0) * sigma_m;
        return sigma_m;
    }
};

// Counterexample geometry on a 1-d chart: sigma(x,y) = |x-y|^4 / 2. The induced
// distance rho = sqrt(2 sigma) = (x-y)^2 is symmetric and positive but violates
// the triangle inequality (rho(0,2) = 4 > rho(0,1) + rho(1,2) = 2), so it
// exercises every code path that must reject or witness a non-metric.
struct QuarticLine {
    int dim() const { return 1; }
    double sigma(const Point& p, const Point& q) const {
        double dx = p[0] - q[0];
        double s = dx * dx;
        return 0.5 * s * s;
    }
};

// ---------------------------------------------------------------------------
// scalar calculus

namespace detail {

template <GeometryLike G>
void check_point_dims(const G& g, const Point& p, const Point& q, const char* who) {
    require(p.dim() == g.dim() && q.dim() == g.dim(), ErrorKind::contract,
            std::string(who) + ": point dimension does not match the geometry chart");
}

inline double coordinate_scale(const Point& p, const Point& q) {
    double m = 0;
    for (double v : p.x) m = std::max(m, std::abs(v));
    for (double v : q.x) m = std::max(m, std::abs(v));
    return m;
}

} // namespace detail

// The world function with the caller-facing contract checks.
template <GeometryLike G>
double evaluate_sigma(const G& g, const Point& p, const Point& q) {
    detail::check_point_dims(g, p, q, "evaluate_sigma");
    require(finite_point(p) && finite_point(q), ErrorKind::contract, "evaluate_sigma: nonfinite coordinate label");
    return g.sigma(p, q);
}

// |PQ|^2 = 2 sigma(P,Q). Negative for spacelike separations; the square root is
// taken only where a formula genuinely needs a real length.
template <GeometryLike G>
double squared_length(const G& g, const Vector& v) {
    return 2.0 * evaluate_sigma(g, v.start, v.end);
}

// Sign classification with a floating-point null band: |sigma| <= 1e-12 * scale^2,
// scale the largest coordinate magnitude involved.
template <GeometryLike G>
IntervalClass classify(const G& g, const Vector& v) {
    double s = evaluate_sigma(g, v.start, v.end);
    double scale = detail::coordinate_scale(v.start, v.end);
    double band = 1e-12 * scale * scale;
    if (std::abs(s) <= band) return IntervalClass::null_interval;
    return s > 0 ? IntervalClass::timelike : IntervalClass::spacelike;
}

// Scalar product of two ordered pairs, defined through sigma alone:
//   (P0P1 . Q0Q1) = sigma(P0,Q1) + sigma(P1,Q0) - sigma(P0,Q0) - sigma(P1,Q1)
// Symmetric in the two vectors; collapses to 2 sigma(P0,P1) when v == w.
template <GeometryLike G>
double scalar_product(const G& g, const Vector& v, const Vector& w) {
    detail::check_point_dims(g, v.start, w.start, "scalar_product");
    detail::check_point_dims(g, v.end, w.end, "scalar_product");
    return g.sigma(v.start, w.end) + g.sigma(v.end, w.start)
         - g.sigma(v.start, w.start) - g.sigma(v.end, w.end);
}

// ---------------------------------------------------------------------------
// skeleton linear algebra

// Metric tensor of a skeleton basis together with its inverse. g_il is the
// scalar product of basis vectors P0Pi and P0Pl; the inverse is accepted only
// when the smallest LU pivot clears 1e-12 * max|g| (below that the skeleton is
// reported singular rather than silently inverted).
struct MetricTensor {
    Eigen::MatrixXd g;
    Eigen::MatrixXd g_inv;
};

template <GeometryLike G>
Eigen::MatrixXd metric_tensor_matrix(const G& g, const Skeleton& sk) {
    sk.validate();
    require(sk.chart_dim() == g.dim(), ErrorKind::contract, "skeleton chart does not match the geometry");
    int n = sk.order();
    Eigen::MatrixXd m(n, n);
    const Point& p0 = sk.points.front();
    for (int i = 1; i <= n; ++i) {
        Vector vi(p0, sk.points[static_cast<std::size_t>(i)]);
        for (int l = i; l <= n; ++l) {
            Vector vl(p0, sk.points[static_cast<std::size_t>(l)]);
            double s = scalar_product(g, vi, vl);
            m(i - 1, l - 1) = s;
            m(l - 1, i - 1) = s;
        }
    }
    return m;
}

template <GeometryLike G>
MetricTensor metric_tensor(const G& g, const Skeleton& sk) {
    MetricTensor mt;
    mt.g = metric_tensor_matrix(g, sk);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(mt.g);
    double norm = mt.g.cwiseAbs().maxCoeff();
    double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (norm == 0.0 || min_pivot < 1e-12 * norm)
        fail(ErrorKind::singular_skeleton, "metric tensor is singular at the pivot threshold");
    mt.g_inv = lu.inverse();
    return mt;
}

// Gram determinant F_n of the skeleton basis. Deliberately never throws on
// singularity: F vanishing above the true dimension is the signal the
// dimension detector looks for.
template <GeometryLike G>
double gram_determinant(const G& g, const Skeleton& sk) {
    return metric_tensor_matrix(g, sk).determinant();
}

// Covariant coordinates of P in the skeleton basis, x_i(P) = (P0Pi . P0P),
// computed without the invertibility gate. For callers that already hold a
// validated MetricTensor and evaluate in a loop.
template <GeometryLike G>
std::vector<double> covariant_coordinates_unchecked(const G& g, const Skeleton& sk, const Point& p) {
    int n = sk.order();
    const Point& p0 = sk.points.front();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const Point& pi = sk.points[static_cast<std::size_t>(i)];
        x[static_cast<std::size_t>(i - 1)] = g.sigma(p0, p) + g.sigma(p0, pi) - g.sigma(pi, p);
    }
    return x;
}

// Covariant coordinates of P in the skeleton basis: x_i(P) = (P0Pi . P0P).
// The skeleton must be nonsingular; that is part of the operation's contract.
template <GeometryLike G>
std::vector<double> covariant_coordinates(const G& g, const Skeleton& sk, const Point& p) {
    metric_tensor(g, sk);
    return covariant_coordinates_unchecked(g, sk, p);
}

// Quadratic reconstruction of sigma from covariant coordinates,
//   sigma(P,Q) = 1/2 sum_ik g^ik (x_i(P) - x_i(Q)) (x_k(P) - x_k(Q)),
// exact for quadratic world functions, diagnostic for everything else.
inline double reconstruct_sigma(const MetricTensor& mt, const std::vector<double>& xp, const std::vector<double>& xq) {
    int n = static_cast<int>(xp.size());
    Eigen::VectorXd dx(n);
    for (int i = 0; i < n; ++i) dx(i) = xp[static_cast<std::size_t>(i)] - xq[static_cast<std::size_t>(i)];
    return 0.5 * dx.dot(mt.g_inv * dx);
}

// ---------------------------------------------------------------------------
// quantum calibration helper

// Distortion that reproduces quantum stochasticity: d = hbar / (2 b c), with b
// the mass-per-length constant relating geometric mass to physical mass (m = b mu).
inline double distortion_from_quantum(double hbar, double b, double c) {
    require(hbar > 0 && b > 0 && c > 0, ErrorKind::contract, "distortion_from_quantum: inputs must be positive");
    return 0.5 * hbar / (b * c);
}

} // namespace sigmageom
