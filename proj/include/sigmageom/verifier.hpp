#pragma once

// Consistency checks between a world function and n-dimensional proper
// Euclidean geometry, run over finite samples: symmetry, Gram-rank dimension
// detection, the quadratic (linear-structure) reconstruction identity, metric
// positivity, and existence/uniqueness of points with prescribed covariant
// coordinates. A sampled check is a falsification tool, not a proof; residual
// maxima are reported dimensionless (each quantity normalized by the scale
// power it carries) so that one tolerance is meaningful across conditions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "rootfind.hpp"
#include "sampling.hpp"

namespace sigmageom {

struct ConditionResult {
    bool passed = false;
    double max_residual = 0; // dimensionless, see module header
    std::vector<Point> witnesses;
    std::string note;
};

struct VerificationReport {
    ConditionResult symmetry;         // condition I
    ConditionResult dimension;        // condition II
    ConditionResult linear_structure; // condition III
    ConditionResult positivity;       // condition IV
    ConditionResult continuity;       // condition V
    std::optional<int> inferred_dimension;
    int declared_n = 0;
    bool overall = false;
};

namespace detail {

inline double sample_scale(const std::vector<Point>& samples) {
    double s = 0;
    for (const Point& p : samples)
        for (double v : p.x) s = std::max(s, std::abs(v));
    return std::max(1.0, s);
}

} // namespace detail

// Condition I: sigma(P,Q) = sigma(Q,P) over all sample pairs, residual
// normalized as |sigma(P,Q) - sigma(Q,P)| / (1 + |sigma|).
template <GeometryLike G>
ConditionResult check_symmetry(const G& g, const std::vector<Point>& samples, double tol = 1e-9) {
    require(samples.size() >= 2, ErrorKind::insufficient_samples, "check_symmetry: need at least two points");
    ConditionResult out;
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            double spq = g.sigma(samples[i], samples[j]);
            double sqp = g.sigma(samples[j], samples[i]);
            double res = std::abs(spq - sqp) / (1.0 + std::abs(spq));
            if (res > out.max_residual) {
                out.max_residual = res;
                out.witnesses = {samples[i], samples[j]};
            }
        }
    out.passed = out.max_residual <= tol;
    if (out.passed) out.witnesses.clear();
    return out;
}

// Condition II: the dimension is the largest k at which some sampled skeleton
// keeps the Gram determinant alive, |F_k| > tol * scale^(2k), while every
// probed F at higher order stays below its own threshold. Returns nothing when
// the pattern is unstable, in particular when F refuses to vanish even at
// k_max (the distorted family behaves this way: its metric is a full-rank
// perturbation at every order).
template <GeometryLike G>
std::optional<int> infer_dimension(const G& g, const std::vector<Point>& samples, int k_max,
                                   double tol = 1e-8, std::uint64_t seed = 971, int trials = 12) {
    require(static_cast<int>(samples.size()) >= k_max + 1, ErrorKind::insufficient_samples,
            "infer_dimension: need at least k_max + 1 sample points");
    double scale = detail::sample_scale(samples);
    auto rng = make_rng(seed);
    std::vector<std::size_t> idx(samples.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    std::vector<bool> alive(static_cast<std::size_t>(k_max + 1), false);
    for (int k = 1; k <= k_max; ++k) {
        double best = 0;
        for (int t = 0; t < trials; ++t) {
            std::shuffle(idx.begin(), idx.end(), rng);
            std::vector<Point> pts;
            for (int i = 0; i <= k; ++i) pts.push_back(samples[idx[static_cast<std::size_t>(i)]]);
            best = std::max(best, std::abs(gram_determinant(g, Skeleton(std::move(pts)))));
        }
        alive[static_cast<std::size_t>(k)] = best > tol * std::pow(scale, 2.0 * k);
    }
    if (alive[static_cast<std::size_t>(k_max)]) return std::nullopt; // rank did not saturate inside the probed range
    for (int k = k_max - 1; k >= 1; --k)
        if (alive[static_cast<std::size_t>(k)]) return k;
    return std::nullopt;
}

// Condition III: sigma must equal its quadratic reconstruction from covariant
// coordinates in the skeleton basis. Residual normalized by scale^2.
template <GeometryLike G>
ConditionResult check_linear_structure(const G& g, const std::vector<Point>& samples, const Skeleton& sk,
                                       double tol = 1e-9, int pair_samples = 4000, std::uint64_t seed = 972) {
    ConditionResult out;
    MetricTensor mt = metric_tensor(g, sk);
    double scale = detail::sample_scale(samples);
    double scale2 = scale * scale;

    std::vector<std::vector<double>> coords(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        coords[i] = covariant_coordinates_unchecked(g, sk, samples[i]);

    auto rng = make_rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    long long total = static_cast<long long>(samples.size()) * static_cast<long long>(samples.size() - 1) / 2;
    bool exhaustive = total <= pair_samples;
    auto consider = [&](std::size_t i, std::size_t j) {
        double truth = g.sigma(samples[i], samples[j]);
        double recon = reconstruct_sigma(mt, coords[i], coords[j]);
        double res = std::abs(truth - recon) / scale2;
        if (res > out.max_residual) {
            out.max_residual = res;
            out.witnesses = {samples[i], samples[j]};
        }
    };
    if (exhaustive) {
        for (std::size_t i = 0; i < samples.size(); ++i)
            for (std::size_t j = i + 1; j < samples.size(); ++j) consider(i, j);
    } else {
        for (int t = 0; t < pair_samples; ++t) {
            std::size_t i = pick(rng), j = pick(rng);
            if (i != j) consider(i, j);
        }
    }
    out.passed = out.max_residual <= tol;
    if (out.passed) out.witnesses.clear();
    return out;
}

// Condition IV: the skeleton metric must have only positive eigenvalues.
// Residual is the magnitude of the worst non-positive eigenvalue over the
// matrix norm; the eigenvalue list is recorded in the note.
inline ConditionResult check_positivity(const Eigen::MatrixXd& metric, double tol_factor = 1e-10) {
    ConditionResult out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric);
    require(es.info() == Eigen::Success, ErrorKind::solver_failure, "check_positivity: eigenvalue iteration failed");
    double norm = std::max(metric.cwiseAbs().maxCoeff(), 1e-300);
    double min_eig = es.eigenvalues().minCoeff();
    out.passed = min_eig > tol_factor * norm;
    out.max_residual = min_eig > 0 ? 0.0 : -min_eig / norm;
    out.note = "eigenvalues:";
    for (int i = 0; i < es.eigenvalues().size(); ++i) out.note += " " + std::to_string(es.eigenvalues()(i));
    return out;
}

// Condition V: every covariant-coordinate target y inside the probe box must
// be hit by exactly one carrier point. Targets on a grid; each is solved by
// damped Newton from several spread starts; existence failures and distinct
// solutions both fail the condition. Residual is the worst solution spread (or
// Newton residual) normalized by the chart diagonal (or scale^2).
template <GeometryLike G>
ConditionResult check_continuity(const G& g, const Skeleton& sk, const Box& probe_box, int grid, double tol = 1e-9) {
    ConditionResult out;
    metric_tensor(g, sk); // nonsingular basis
    int n = sk.order();
    require(g.dim() == n, ErrorKind::contract,
            "check_continuity: skeleton order must match the chart dimension");
    require(probe_box.dim() == n, ErrorKind::contract, "check_continuity: probe box lives in coordinate space");
    require(grid >= 1, ErrorKind::contract, "check_continuity: grid must be positive");

    Box chart_box;
    chart_box.lo.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    chart_box.hi.assign(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
    for (const Point& p : sk.points)
        for (int i = 0; i < n; ++i) {
            chart_box.lo[static_cast<std::size_t>(i)] = std::min(chart_box.lo[static_cast<std::size_t>(i)], p[i]);
            chart_box.hi[static_cast<std::size_t>(i)] = std::max(chart_box.hi[static_cast<std::size_t>(i)], p[i]);
        }
    double diag = std::max(chart_box.diagonal(), 1e-12);
    double scale = detail::sample_scale(sk.points);
    double scale2 = scale * scale;

    // Deterministic spread of Newton starts: skeleton points and their centroid.
    std::vector<Eigen::VectorXd> starts;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (const Point& p : sk.points) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v(i) = p[i];
        centroid += v;
        if (static_cast<int>(starts.size()) < 4) starts.push_back(v);
    }
    centroid /= static_cast<double>(sk.points.size());
    starts.push_back(centroid);

    std::vector<int> targets_failed;
    auto probe_target = [&](const std::vector<double>& y) {
        auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) -> bool {
            Point p;
            p.x.assign(x.data(), x.data() + n);
            if (!in_carrier(g, p)) return false;
            std::vector<double> cov = covariant_coordinates_unchecked(g, sk, p);
            for (int i = 0; i < n; ++i) r(i) = cov[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
            return true;
        };
        NewtonSpec nspec;
        nspec.tol = 1e-10 * scale2;
        std::vector<Eigen::VectorXd> found;
        for (const Eigen::VectorXd& s : starts) {
            NewtonResult nr = damped_newton(residual, s, nspec);
            if (!nr.ok) continue;
            Point p;
            p.x.assign(nr.x.data(), nr.x.data() + n);
            if (!in_carrier(g, p)) continue;
            found.push_back(nr.x);
        }
        if (found.empty()) return std::make_pair(false, 1.0); // existence failure
        double spread = 0;
        for (std::size_t i = 0; i < found.size(); ++i)
            for (std::size_t j = i + 1; j < found.size(); ++j)
                spread = std::max(spread, (found[i] - found[j]).norm());
        bool unique = spread <= 1e-6 * diag;
        return std::make_pair(unique, spread / diag);
    };

    std::vector<double> y(static_cast<std::size_t>(n));
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    bool done = false;
    while (!done) {
        for (int i = 0; i < n; ++i) {
            double t = grid == 1 ? 0.5 : static_cast<double>(idx[static_cast<std::size_t>(i)]) / (grid - 1);
            y[static_cast<std::size_t>(i)] = probe_box.lo[static_cast<std::size_t>(i)]
                + t * (probe_box.hi[static_cast<std::size_t>(i)] - probe_box.lo[static_cast<std::size_t>(i)]);
        }
        auto [ok, res] = probe_target(y);
        if (!ok) {
            out.passed = false;
            Point witness;
            witness.x = y;
            if (out.witnesses.size() < 8) out.witnesses.push_back(witness);
        }
        out.max_residual = std::max(out.max_residual, res);
        int axis = n - 1;
        while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] >= grid) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        done = axis < 0;
    }
    out.passed = out.witnesses.empty() && out.max_residual <= std::max(tol, 1e-6);
    if (!out.witnesses.empty()) out.note = "targets without a unique carrier solution listed as witnesses";
    return out;
}

struct SamplingSpec {
    int n_points = 200;
    Box box;               // chart sampling box; defaults to [-10,10]^n
    std::uint64_t seed = 20240815;
    int skeleton_trials = 12; // Gram trials per order during dimension inference
    int probe_grid = 3;       // condition V targets per coordinate axis
    int pair_samples = 4000;  // condition I/III pair budget
    double tol = 1e-9;
};

namespace detail {

// Greedy max-determinant skeleton: well-conditioned basis for conditions III-V.
template <GeometryLike G>
Skeleton greedy_skeleton(const G& g, const std::vector<Point>& samples, int order) {
    std::vector<Point> chosen{samples.front()};
    for (int k = 1; k <= order; ++k) {
        double best = -1;
        std::size_t best_idx = 0;
        for (std::size_t c = 0; c < samples.size(); ++c) {
            std::vector<Point> trial = chosen;
            trial.push_back(samples[c]);
            double det = std::abs(gram_determinant(g, Skeleton(std::move(trial))));
            if (det > best) {
                best = det;
                best_idx = c;
            }
        }
        chosen.push_back(samples[best_idx]);
    }
    return Skeleton(std::move(chosen));
}

} // namespace detail

// Full consistency suite at the declared dimension n. The sample, skeleton
// choice, probe grids and seeds all come from the SamplingSpec argument;
// identical inputs give identical reports.
template <GeometryLike G>
VerificationReport verify_euclidean(const G& g, int n, SamplingSpec spec = {}) {
    require(g.dim() == n, ErrorKind::contract, "verify_euclidean: declared n must match the chart dimension");
    if (spec.box.lo.empty()) spec.box = Box::cube(n, 10.0);
    require(spec.box.dim() == n, ErrorKind::contract, "verify_euclidean: sampling box dimension mismatch");

    VerificationReport rep;
    rep.declared_n = n;
    std::vector<Point> samples = random_points_in_box(spec.box, spec.n_points, spec.seed);

    rep.symmetry = check_symmetry(g, samples, spec.tol);

    rep.inferred_dimension = infer_dimension(g, samples, n + 1, 1e-8, spec.seed + 1, spec.skeleton_trials);
    rep.dimension.passed = rep.inferred_dimension.has_value() && *rep.inferred_dimension == n;
    {
        // Residual for the report: the worst surviving normalized F at order n+1.
        double scale = detail::sample_scale(samples);
        auto rng = make_rng(spec.seed + 2);
        std::vector<std::size_t> idx(samples.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        double worst = 0;
        for (int t = 0; t < spec.skeleton_trials; ++t) {
            std::shuffle(idx.begin(), idx.end(), rng);
            std::vector<Point> pts;
            for (int i = 0; i <= n + 1; ++i) pts.push_back(samples[idx[static_cast<std::size_t>(i)]]);
            worst = std::max(worst, std::abs(gram_determinant(g, Skeleton(std::move(pts)))));
        }
        rep.dimension.max_residual = worst / std::pow(scale, 2.0 * (n + 1));
        if (!rep.dimension.passed)
            rep.dimension.note = rep.inferred_dimension
                ? "inferred dimension " + std::to_string(*rep.inferred_dimension)
                : "dimension unstable: Gram determinants do not vanish inside the probed range";
    }

    Skeleton sk = detail::greedy_skeleton(g, samples, n);
    rep.linear_structure = check_linear_structure(g, samples, sk, spec.tol, spec.pair_samples, spec.seed + 3);
    rep.positivity = check_positivity(metric_tensor_matrix(g, sk));

    // Probe targets from the realized covariant-coordinate range, shrunk to
    // stay well inside the sampled region.
    {
        MetricTensor mt = metric_tensor(g, sk);
        (void)mt;
        Box probe;
        probe.lo.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
        probe.hi.assign(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
        for (const Point& p : samples) {
            std::vector<double> cov = covariant_coordinates_unchecked(g, sk, p);
            for (int i = 0; i < n; ++i) {
                probe.lo[static_cast<std::size_t>(i)] = std::min(probe.lo[static_cast<std::size_t>(i)], cov[static_cast<std::size_t>(i)]);
                probe.hi[static_cast<std::size_t>(i)] = std::max(probe.hi[static_cast<std::size_t>(i)], cov[static_cast<std::size_t>(i)]);
            }
        }
        for (int i = 0; i < n; ++i) {
            double mid = 0.5 * (probe.lo[static_cast<std::size_t>(i)] + probe.hi[static_cast<std::size_t>(i)]);
            double half = 0.25 * (probe.hi[static_cast<std::size_t>(i)] - probe.lo[static_cast<std::size_t>(i)]);
            probe.lo[static_cast<std::size_t>(i)] = mid - half;
            probe.hi[static_cast<std::size_t>(i)] = mid + half;
        }
        rep.continuity = check_continuity(g, sk, probe, spec.probe_grid, spec.tol);
    }

    rep.overall = rep.symmetry.passed && rep.dimension.passed && rep.linear_structure.passed
               && rep.positivity.passed && rep.continuity.passed;
    return rep;
}

inline nlohmann::ordered_json condition_to_json(const ConditionResult& c) {
    nlohmann::ordered_json j;
    j["passed"] = c.passed;
    j["max_residual"] = c.max_residual;
    if (!c.note.empty()) j["note"] = c.note;
    if (!c.witnesses.empty()) {
        nlohmann::ordered_json w = nlohmann::ordered_json::array();
        for (const Point& p : c.witnesses) w.push_back(p.x);
        j["witnesses"] = w;
    }
    return j;
}

inline nlohmann::ordered_json report_to_json(const VerificationReport& rep) {
    nlohmann::ordered_json j;
    j["condition_I"] = condition_to_json(rep.symmetry);
    j["condition_II"] = condition_to_json(rep.dimension);
    j["condition_III"] = condition_to_json(rep.linear_structure);
    j["condition_IV"] = condition_to_json(rep.positivity);
    j["condition_V"] = condition_to_json(rep.continuity);
    if (rep.inferred_dimension) j["inferred_dimension"] = *rep.inferred_dimension;
    else j["inferred_dimension"] = nullptr;
    j["declared_dimension"] = rep.declared_n;
    j["overall"] = rep.overall;
    return j;
}

} // namespace sigmageom
