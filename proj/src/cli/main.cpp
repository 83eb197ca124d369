// sigma-geom: command-line driver for the world-function geometry library.
// Subcommands: verify-euclidean, tube-profile, simulate-worldline, predicates,
// sample-envelope. Flat key=value config files via --config; flags override.
// SIGMA_GEOM_OUT selects the output root. Exit codes: 0 success or met
// expectation, 2 configuration error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "sigmageom/core.hpp"
#include "sigmageom/csv.hpp"
#include "sigmageom/envelopes.hpp"
#include "sigmageom/predicates.hpp"
#include "sigmageom/simulation.hpp"
#include "sigmageom/verifier.hpp"

namespace {

using sigmageom::Point;
using sigmageom::Skeleton;
using sigmageom::Vector;
using sigmageom::WorldFunction;

using GeometryVariant = std::variant<WorldFunction, sigmageom::QuarticLine>;

struct GeomOpts {
    std::string kind = "euclidean";
    int dim = 3;
    double c = 1.0;
    double d = 0.0;
    double sigma0 = 0.0;
};

void add_geometry_flags(CLI::App* cmd, GeomOpts& go) {
    cmd->add_option("--geometry", go.kind, "euclidean | minkowski | distorted | quartic")
        ->check(CLI::IsMember({"euclidean", "minkowski", "distorted", "quartic"}));
    cmd->add_option("--dim", go.dim, "chart dimension");
    cmd->add_option("--c", go.c, "light speed (minkowski / distorted)");
    cmd->add_option("--d", go.d, "distortion magnitude");
    cmd->add_option("--sigma0", go.sigma0, "distortion crossover scale");
}

// CLI11 2.4 only reads config files registered on the root app, so a
// subcommand's --config value is stored but never applied.  Apply it here:
// every flat key=value entry fills the matching option unless the command
// line already set it.
void apply_config_file(CLI::App* sub) {
    const CLI::Option* copt = sub->get_config_ptr();
    if (copt == nullptr || copt->count() == 0) return;
    const auto path = copt->as<std::string>();
    for (const CLI::ConfigItem& item : sub->get_config_formatter()->from_file(path)) {
        if (!item.parents.empty())
            throw CLI::ConfigError("sectioned entry '" + item.fullname() +
                                   "' not supported; use flat key=value lines");
        CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
        if (opt == nullptr) throw CLI::ConfigError("unknown key '" + item.name + "' in " + path);
        if (opt->count() > 0 || opt == copt) continue;  // command line wins
        if (item.inputs.empty())
            opt->add_result("true");
        else
            opt->add_result(item.inputs);
        opt->run_callback();
    }
}

GeometryVariant make_geometry(const GeomOpts& go) {
    if (go.kind == "euclidean") return WorldFunction::euclidean(go.dim);
    if (go.kind == "minkowski") return WorldFunction::minkowski(go.dim, go.c);
    if (go.kind == "distorted") return WorldFunction::distorted(go.d, go.sigma0, go.dim, go.c);
    return sigmageom::QuarticLine{};
}

int geometry_dim(const GeometryVariant& g) {
    return std::visit([](const auto& gg) { return gg.dim(); }, g);
}

std::filesystem::path out_path(const std::string& name) {
    std::filesystem::path p(name);
    if (p.is_absolute()) return p;
    const char* root = std::getenv("SIGMA_GEOM_OUT");
    if (!root || !*root) return p;
    std::filesystem::create_directories(root);
    return std::filesystem::path(root) / p;
}

std::ofstream open_out(const std::string& name) {
    auto p = out_path(name);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw sigmageom::Error(sigmageom::ErrorKind::contract, "cannot open output file: " + p.string());
    return os;
}

std::vector<Point> read_points_csv(const std::string& file, int expect_dim) {
    std::ifstream is(file);
    if (!is) throw sigmageom::Error(sigmageom::ErrorKind::contract, "cannot open points file: " + file);
    std::vector<Point> pts;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        Point p;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                p.x.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw sigmageom::Error(sigmageom::ErrorKind::contract, "points file: bad number '" + cell + "'");
            }
        }
        if (p.dim() == 0) continue;
        if (p.dim() != expect_dim)
            throw sigmageom::Error(sigmageom::ErrorKind::contract,
                                   "points file row has " + std::to_string(p.dim()) + " coordinates, geometry needs "
                                       + std::to_string(expect_dim));
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw sigmageom::Error(sigmageom::ErrorKind::contract, "points file is empty: " + file);
    return pts;
}

const Point& point_at(const std::vector<Point>& pts, int idx, const char* what) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= pts.size())
        throw sigmageom::Error(sigmageom::ErrorKind::contract,
                               std::string(what) + ": point index " + std::to_string(idx) + " out of range");
    return pts[static_cast<std::size_t>(idx)];
}

// ---- verify-euclidean ------------------------------------------------------

int run_verify(const GeomOpts& go, int points, double box_half, std::uint64_t seed, int probe_grid, double tol,
               const std::string& expect, const std::string& report_file) {
    GeometryVariant g = make_geometry(go);
    int n = geometry_dim(g);
    sigmageom::SamplingSpec spec;
    spec.n_points = points;
    spec.box = sigmageom::Box::cube(n, box_half);
    spec.seed = seed;
    spec.probe_grid = probe_grid;
    spec.tol = tol;

    sigmageom::VerificationReport rep =
        std::visit([&](const auto& gg) { return sigmageom::verify_euclidean(gg, n, spec); }, g);

    auto json = sigmageom::report_to_json(rep);
    {
        auto os = open_out(report_file);
        os << json.dump(2) << '\n';
    }
    const struct {
        const char* name;
        const sigmageom::ConditionResult* c;
    } rows[] = {{"condition_I", &rep.symmetry},
                {"condition_II", &rep.dimension},
                {"condition_III", &rep.linear_structure},
                {"condition_IV", &rep.positivity},
                {"condition_V", &rep.continuity}};
    for (const auto& r : rows)
        std::cout << r.name << ": " << (r.c->passed ? "pass" : "fail")
                  << " (max residual " << sigmageom::fmt17(r.c->max_residual) << ")\n";
    std::cout << "inferred_dimension: "
              << (rep.inferred_dimension ? std::to_string(*rep.inferred_dimension) : std::string("none")) << '\n';
    std::cout << "overall: " << (rep.overall ? "pass" : "fail") << '\n';

    bool failed[5] = {!rep.symmetry.passed, !rep.dimension.passed, !rep.linear_structure.passed,
                      !rep.positivity.passed, !rep.continuity.passed};
    auto fails_exactly = [&](int which) {
        for (int i = 0; i < 5; ++i)
            if (failed[i] != (i == which)) return false;
        return true;
    };
    bool matched = false;
    if (expect == "pass") matched = rep.overall;
    else if (expect == "fail") matched = !rep.overall;
    else if (expect == "fail-I") matched = fails_exactly(0);
    else if (expect == "fail-II") matched = fails_exactly(1);
    else if (expect == "fail-III") matched = fails_exactly(2);
    else if (expect == "fail-IV") matched = fails_exactly(3);
    else if (expect == "fail-V") matched = fails_exactly(4);
    if (!matched) std::cerr << "expectation '" << expect << "' not met\n";
    return matched ? 0 : 1;
}

// ---- tube-profile ----------------------------------------------------------

int run_tube_profile(double d, double sigma0, double mu_d, int grid, int radial_grid, const std::string& out_file) {
    sigmageom::RadialSpec rspec;
    rspec.grid = radial_grid;
    sigmageom::SegmentProfile prof = sigmageom::segment_profile(d, sigma0, mu_d, grid, rspec);
    auto os = open_out(out_file);
    os << "tau,r_closed,r_numeric\n";
    for (std::size_t i = 0; i < prof.tau.size(); ++i)
        os << sigmageom::fmt17(prof.tau[i]) << ',' << sigmageom::fmt17(prof.r_closed[i]) << ','
           << sigmageom::fmt17(prof.r_numeric[i]) << '\n';
    std::cout << "points: " << prof.tau.size() << '\n';
    std::cout << "mid_radius_closed: " << sigmageom::fmt17(sigmageom::segment_radius_closed(d, sigma0, mu_d, 0.5))
              << '\n';
    return 0;
}

// ---- simulate-worldline ----------------------------------------------------

int run_simulate(double d, double sigma0, double mu_d, double c, int links, std::uint64_t seed,
                 const std::string& chain_file, const std::string& stats_file) {
    if (!(c > 0))
        throw sigmageom::Error(sigmageom::ErrorKind::contract, "simulate-worldline: --c must be positive");
    // Simulate in the chart with unit time scaling (t' = c t leaves sigma and
    // every reported invariant unchanged), then rescale the time column back.
    WorldFunction g = WorldFunction::distorted(d, sigma0, 4, 1.0);
    sigmageom::WorldlineSpec spec;
    spec.seed = seed;
    spec.n_links = links;
    spec.mu_d = mu_d;
    spec.d = d;
    spec.sigma0 = sigma0;
    sigmageom::BrokenTube tube = sigmageom::simulate_worldline(g, spec);
    if (c != 1.0)
        for (Point& p : tube.chain) p[0] /= c;
    sigmageom::WobbleStats stats = sigmageom::wobble_statistics(tube, d, sigma0);
    {
        auto os = open_out(chain_file);
        sigmageom::write_chain_csv(os, tube);
    }
    {
        auto os = open_out(stats_file);
        sigmageom::write_stats(os, stats);
    }
    sigmageom::write_kv(std::cout, "mean_cosh", stats.mean_cosh);
    sigmageom::write_kv(std::cout, "theta_rms", stats.theta_rms);
    sigmageom::write_kv(std::cout, "endpoint_transverse", stats.endpoint_transverse);
    if (!tube.completed) {
        std::cerr << tube.note << '\n';
        return 3;
    }
    return 0;
}

// ---- predicates ------------------------------------------------------------

int run_predicates(const GeomOpts& go, const std::string& points_file, const std::vector<int>& collinear,
                   const std::vector<int>& parallel, const std::vector<int>& degeneracy, double radius,
                   int starts, std::uint64_t seed, bool metric_axioms, double tol,
                   const std::string& report_file) {
    GeometryVariant g = make_geometry(go);
    std::vector<Point> pts = read_points_csv(points_file, geometry_dim(g));
    nlohmann::ordered_json report;
    bool any = false;

    if (!collinear.empty()) {
        any = true;
        if (collinear.size() != 3)
            throw sigmageom::Error(sigmageom::ErrorKind::contract, "--collinear needs exactly 3 point indices o,p,q");
        const Point& o = point_at(pts, collinear[0], "--collinear");
        const Point& p = point_at(pts, collinear[1], "--collinear");
        const Point& q = point_at(pts, collinear[2], "--collinear");
        auto res = std::visit(
            [&](const auto& gg) { return sigmageom::is_collinear(gg, Vector(o, p), Vector(o, q), tol); }, g);
        std::cout << "collinear: " << (res.verdict ? "true" : "false") << " (residual "
                  << sigmageom::fmt17(res.residual) << ")\n";
        report["collinear"] = {{"verdict", res.verdict}, {"residual", res.residual}};
    }
    if (!parallel.empty()) {
        any = true;
        if (parallel.size() != 4)
            throw sigmageom::Error(sigmageom::ErrorKind::contract, "--parallel needs exactly 4 point indices a,b,c,d");
        const Point& a = point_at(pts, parallel[0], "--parallel");
        const Point& b = point_at(pts, parallel[1], "--parallel");
        const Point& cc = point_at(pts, parallel[2], "--parallel");
        const Point& dd = point_at(pts, parallel[3], "--parallel");
        auto res = std::visit(
            [&](const auto& gg) { return sigmageom::is_parallel_same_direction(gg, Vector(a, b), Vector(cc, dd), tol); },
            g);
        std::cout << "parallel_same_direction: " << (res.verdict ? "true" : "false") << " (residual "
                  << sigmageom::fmt17(res.residual) << ")\n";
        report["parallel_same_direction"] = {{"verdict", res.verdict}, {"residual", res.residual}};
    }
    if (!degeneracy.empty()) {
        any = true;
        if (degeneracy.size() != 2)
            throw sigmageom::Error(sigmageom::ErrorKind::contract, "--degeneracy needs exactly 2 point indices p0,p1");
        const Point& p0 = point_at(pts, degeneracy[0], "--degeneracy");
        const Point& p1 = point_at(pts, degeneracy[1], "--degeneracy");
        double a = radius;
        if (a <= 0) {
            double two_sigma = std::visit([&](const auto& gg) { return 2.0 * gg.sigma(p0, p1); }, g);
            a = std::sqrt(std::abs(two_sigma));
        }
        if (a <= 0)
            throw sigmageom::Error(sigmageom::ErrorKind::contract, "--degeneracy: radius must be positive");
        sigmageom::SearchSpec sspec;
        sspec.starts = starts;
        sspec.seed = seed;
        auto verdict = std::visit(
            [&](const auto& gg) { return sigmageom::degeneracy_classify(gg, p0, Vector(p0, p1), a, sspec); }, g);
        std::cout << "degeneracy: " << (verdict.degenerate ? "degenerate" : "nondegenerate") << " (solutions "
                  << verdict.solution_count << ", failed starts " << verdict.failed_starts << ")\n";
        report["degeneracy"] = {{"degenerate", verdict.degenerate},
                                {"solution_count", verdict.solution_count},
                                {"failed_starts", verdict.failed_starts}};
    }
    if (metric_axioms) {
        any = true;
        auto rep = std::visit([&](const auto& gg) { return sigmageom::check_metric_axioms(gg, pts, tol); }, g);
        if (!rep.is_candidate) {
            std::cout << "metric_axioms: not a metric candidate (sigma takes negative values)\n";
            report["metric_axioms"] = {{"is_candidate", false}};
        } else {
            std::cout << "metric_axioms: nonnegativity " << (rep.nonnegativity_ok ? "pass" : "fail") << ", identity "
                      << (rep.identity_ok ? "pass" : "fail") << ", symmetry " << (rep.symmetry_ok ? "pass" : "fail")
                      << ", triangle " << (rep.triangle_ok ? "pass" : "fail") << " (violations "
                      << rep.violations.size() << ")\n";
            report["metric_axioms"] = {{"is_candidate", true},
                                       {"nonnegativity_ok", rep.nonnegativity_ok},
                                       {"identity_ok", rep.identity_ok},
                                       {"symmetry_ok", rep.symmetry_ok},
                                       {"triangle_ok", rep.triangle_ok},
                                       {"violation_count", rep.violations.size()}};
            if (!rep.violations.empty()) {
                std::cout << "worst_triangle_residual: " << sigmageom::fmt17(rep.violations.front().residual) << '\n';
                report["metric_axioms"]["worst_residual"] = rep.violations.front().residual;
            }
        }
    }
    if (!any)
        throw sigmageom::Error(sigmageom::ErrorKind::contract,
                               "predicates: request at least one of --collinear / --parallel / --degeneracy / --metric-axioms");
    auto os = open_out(report_file);
    os << report.dump(2) << '\n';
    return 0;
}

// ---- sample-envelope -------------------------------------------------------

int run_sample_envelope(const GeomOpts& go, const std::string& kind, const std::string& points_file, double a,
                        double box_half, int grid, double tol, const std::string& out_file) {
    GeometryVariant g = make_geometry(go);
    std::vector<Point> pts = read_points_csv(points_file, geometry_dim(g));
    auto need = [&](std::size_t k, const char* what) {
        if (pts.size() < k)
            throw sigmageom::Error(sigmageom::ErrorKind::contract,
                                   std::string("sample-envelope ") + what + ": points file needs at least "
                                       + std::to_string(k) + " rows");
    };
    sigmageom::Envelope obj;
    if (kind == "sphere") {
        need(2, "sphere");
        obj = sigmageom::Envelope::sphere(pts[0], pts[1]);
    } else if (kind == "ellipsoid") {
        need(2, "ellipsoid");
        if (a <= 0) throw sigmageom::Error(sigmageom::ErrorKind::contract, "sample-envelope ellipsoid: --a required");
        obj = sigmageom::Envelope::ellipsoid(pts[0], pts[1], a);
    } else if (kind == "segment") {
        need(2, "segment");
        obj = sigmageom::Envelope::segment(pts[0], pts[1]);
    } else if (kind == "tube") {
        need(2, "tube");
        obj = sigmageom::Envelope::tube(pts[0], pts[1]);
    } else { // coordinate-tube: all rows but the last form the basis skeleton
        need(3, "coordinate-tube");
        std::vector<Point> basis(pts.begin(), pts.end() - 1);
        obj = sigmageom::Envelope::coordinate_tube(pts.back(), Skeleton(std::move(basis)));
    }

    double dist = go.kind == "distorted" ? go.d : 0.0;
    sigmageom::Box box = box_half > 0 ? sigmageom::Box::cube(geometry_dim(g), box_half)
                                      : sigmageom::default_box(obj, dist);
    if (tol <= 0) {
        double diag = box.diagonal();
        bool quartic_units = obj.kind == sigmageom::Envelope::Kind::tube
                          || obj.kind == sigmageom::Envelope::Kind::coordinate_tube;
        tol = quartic_units ? 1e-9 * (1.0 + diag * diag * diag * diag) : 1e-9 * (1.0 + diag);
    }
    auto cloud = std::visit([&](const auto& gg) { return sigmageom::sample_envelope(gg, obj, box, grid, tol); }, g);
    {
        auto os = open_out(out_file);
        sigmageom::write_cloud_csv(os, cloud);
    }
    std::cout << "points: " << cloud.points.size() << '\n';
    if (!cloud.points.empty() && (obj.kind == sigmageom::Envelope::Kind::tube)) {
        std::cout << "transverse_extent: "
                  << sigmageom::fmt17(sigmageom::transverse_extent(cloud.points, obj.p0, obj.p1)) << '\n';
    }
    return cloud.empty_envelope ? 3 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"world-function geometry toolkit"};
    app.require_subcommand(1);

    // verify-euclidean
    auto* vc = app.add_subcommand("verify-euclidean", "run the Euclidean consistency suite on a geometry");
    GeomOpts vgo;
    int v_points = 200, v_probe_grid = 3;
    double v_box_half = 10.0, v_tol = 1e-9;
    std::uint64_t v_seed = 20240815;
    std::string v_expect = "pass", v_report = "verification_report.json";
    add_geometry_flags(vc, vgo);
    vc->add_option("--points", v_points, "sample size");
    vc->add_option("--box-half", v_box_half, "half width of the sampling cube");
    vc->add_option("--seed", v_seed, "sampling seed");
    vc->add_option("--probe-grid", v_probe_grid, "coordinate targets per axis for the solvability check");
    vc->add_option("--tol", v_tol, "dimensionless residual tolerance");
    vc->add_option("--expect", v_expect, "pass | fail | fail-I .. fail-V")
        ->check(CLI::IsMember({"pass", "fail", "fail-I", "fail-II", "fail-III", "fail-IV", "fail-V"}));
    vc->add_option("--report", v_report, "report file (JSON)");
    vc->set_config("--config");

    // tube-profile
    auto* tc = app.add_subcommand("tube-profile", "segment radius profile: closed form vs numeric envelope");
    double t_d = 0.01, t_sigma0 = 0.001, t_mu = 1.0;
    int t_grid = 128, t_radial = 512;
    std::string t_out = "tube_profile.csv";
    tc->add_option("--d", t_d, "distortion magnitude");
    tc->add_option("--sigma0", t_sigma0, "distortion crossover scale");
    tc->add_option("--mu", t_mu, "link length in the distorted geometry");
    tc->add_option("--grid", t_grid, "number of tau samples");
    tc->add_option("--radial-grid", t_radial, "radial scan cells per tau");
    tc->add_option("--out", t_out, "profile CSV file");
    tc->set_config("--config");

    // simulate-worldline
    auto* sc = app.add_subcommand("simulate-worldline", "free-particle chain in the distorted geometry");
    double s_d = 0.005, s_sigma0 = 0.0005, s_mu = 1.0, s_c = 1.0;
    int s_links = 1000;
    std::uint64_t s_seed = 1;
    std::string s_chain = "chain.csv", s_stats = "stats.txt";
    sc->add_option("--d", s_d, "distortion magnitude");
    sc->add_option("--sigma0", s_sigma0, "distortion crossover scale");
    sc->add_option("--mu", s_mu, "link length in the distorted geometry");
    sc->add_option("--c", s_c, "light speed");
    sc->add_option("--links", s_links, "number of links");
    sc->add_option("--seed", s_seed, "azimuth stream seed");
    sc->add_option("--chain", s_chain, "chain CSV file");
    sc->add_option("--stats", s_stats, "statistics file");
    sc->set_config("--config");

    // predicates
    auto* pc = app.add_subcommand("predicates", "collinearity / parallelism / degeneracy / metric-axioms queries");
    GeomOpts pgo;
    std::string p_points, p_report = "predicates_report.json";
    std::vector<int> p_collinear, p_parallel, p_degeneracy;
    double p_radius = 0, p_tol = 1e-9;
    int p_starts = 64;
    std::uint64_t p_seed = 12345;
    bool p_metric = false;
    add_geometry_flags(pc, pgo);
    pc->add_option("--points", p_points, "points file (CSV, one point per row)")->required();
    pc->add_option("--collinear", p_collinear, "indices o,p,q: vectors OP and OQ")->delimiter(',')->expected(3);
    pc->add_option("--parallel", p_parallel, "indices a,b,c,d: vectors AB and CD")->delimiter(',')->expected(4);
    pc->add_option("--degeneracy", p_degeneracy, "indices p0,p1: classify at P0 toward P1")->delimiter(',')->expected(2);
    pc->add_option("--radius", p_radius, "degeneracy radius (default: length of P0P1)");
    pc->add_option("--starts", p_starts, "degeneracy solver starts");
    pc->add_option("--seed", p_seed, "degeneracy seeding-grid jitter seed");
    pc->add_flag("--metric-axioms", p_metric, "check metric axioms over the whole points file");
    pc->add_option("--tol", p_tol, "predicate tolerance");
    pc->add_option("--report", p_report, "report file (JSON)");
    pc->set_config("--config");

    // sample-envelope
    auto* ec = app.add_subcommand("sample-envelope", "sample an envelope zero set into a point cloud CSV");
    GeomOpts ego;
    std::string e_kind = "sphere", e_points, e_out = "envelope_cloud.csv";
    double e_a = 0, e_box_half = 0, e_tol = 0;
    int e_grid = 48;
    add_geometry_flags(ec, ego);
    ec->add_option("--kind", e_kind, "sphere | ellipsoid | segment | tube | coordinate-tube")
        ->check(CLI::IsMember({"sphere", "ellipsoid", "segment", "tube", "coordinate-tube"}));
    ec->add_option("--points", e_points, "defining points file (CSV)")->required();
    ec->add_option("--a", e_a, "ellipsoid semi-axis");
    ec->add_option("--box-half", e_box_half, "sampling cube half width (default: auto around the object)");
    ec->add_option("--grid", e_grid, "sampling grid per axis");
    ec->add_option("--tol", e_tol, "membership tolerance (default: scale-aware)");
    ec->add_option("--out", e_out, "cloud CSV file");
    ec->set_config("--config");

    try {
        app.parse(argc, argv);
        for (CLI::App* sub : {vc, tc, sc, pc, ec})
            if (sub->parsed()) apply_config_file(sub);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (vc->parsed())
            return run_verify(vgo, v_points, v_box_half, v_seed, v_probe_grid, v_tol, v_expect, v_report);
        if (tc->parsed()) return run_tube_profile(t_d, t_sigma0, t_mu, t_grid, t_radial, t_out);
        if (sc->parsed()) return run_simulate(s_d, s_sigma0, s_mu, s_c, s_links, s_seed, s_chain, s_stats);
        if (pc->parsed())
            return run_predicates(pgo, p_points, p_collinear, p_parallel, p_degeneracy, p_radius, p_starts,
                                  p_seed, p_metric, p_tol, p_report);
        if (ec->parsed()) return run_sample_envelope(ego, e_kind, e_points, e_a, e_box_half, e_grid, e_tol, e_out);
    } catch (const sigmageom::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind == sigmageom::ErrorKind::contract ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
