#pragma once

// Small numeric kernels the geometry code leans on: a bracketed Brent solver
// with a residual-based stopping rule, a grid bracket scan, ternary extremum
// refinement (for envelope residuals that touch zero without crossing it), and
// a damped Newton iteration with finite-difference Jacobian.
//
// All solvers stop on |f| <= tol (tolerance on the residual, not on x) and are
// capped at max_iter iterations; failures are reported, never patched.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "core.hpp"

namespace sigmageom {

struct RootSpec {
    double tol = 1e-12; // absolute tolerance on the residual
    int max_iter = 200;
};

struct RootResult {
    double x = 0;
    double f = 0;
    bool ok = false;
    int iters = 0;
};

// Classic Brent-Dekker on a sign-change bracket [a, b]. Inverse quadratic
// interpolation with bisection fallback; converges for any continuous f.
template <class F>
RootResult brent(F&& f, double a, double b, const RootSpec& spec = {}) {
    RootResult r;
    double fa = f(a), fb = f(b);
    if (std::abs(fa) <= spec.tol) { r = {a, fa, true, 0}; return r; }
    if (std::abs(fb) <= spec.tol) { r = {b, fb, true, 0}; return r; }
    if (!(fa * fb < 0)) { r = {a, fa, false, 0}; return r; }

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 1; it <= spec.max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5e-15;
        double xm = 0.5 * (c - b);
        if (std::abs(fb) <= spec.tol || std::abs(xm) <= tol1) {
            r = {b, fb, std::abs(fb) <= spec.tol || std::abs(xm) <= tol1, it};
            r.ok = true; // converged to the bracket floor; residual reported in r.f
            return r;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, rr = fb / fc;
                p = s * (2.0 * xm * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) {
            c = a; fc = fa;
            d = b - a; e = d;
        }
    }
    r = {b, fb, std::abs(fb) <= spec.tol, spec.max_iter};
    return r;
}

// First sign change of f on an even grid over [lo, hi]. Returns the bracketing
// subinterval, or nothing if every grid value has one sign.
template <class F>
std::optional<std::pair<double, double>> scan_bracket(F&& f, double lo, double hi, int grid) {
    double prev_x = lo, prev_f = f(lo);
    for (int i = 1; i <= grid; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / grid;
        double fx = f(x);
        if (prev_f == 0.0 || prev_f * fx < 0) return std::make_pair(prev_x, x);
        prev_x = x;
        prev_f = fx;
    }
    return std::nullopt;
}

// Golden-section refinement of a local extremum of f on [a, b]. Used where an
// envelope residual is sign-definite and its zero set is the set of extrema:
// refine the extremum, then test whether it reaches the membership band.
template <class F>
RootResult extremum_refine(F&& f, double a, double b, bool maximize, int iters = 80) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    auto better = [&](double u, double v) { return maximize ? u > v : u < v; };
    for (int i = 0; i < iters && (b - a) > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (better(f1, f2)) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    RootResult r;
    r.x = better(f1, f2) ? x1 : x2;
    r.f = better(f1, f2) ? f1 : f2;
    r.ok = true;
    return r;
}

struct NewtonSpec {
    double tol = 1e-10;    // infinity-norm tolerance on the residual vector
    int max_iter = 50;
    int max_halvings = 10; // damping: step is halved until the residual drops
    double fd_step = 1e-6; // finite-difference step, scaled per component
};

struct NewtonResult {
    Eigen::VectorXd x;
    double residual = 0;
    bool ok = false;
    int iters = 0;
};

// Damped Newton for R(x) = 0, R: R^n -> R^n, Jacobian by forward differences.
// The residual callback may signal an infeasible point (outside the carrier)
// by returning false; the step is then halved like a failed descent.
template <class F>
NewtonResult damped_newton(F&& residual, Eigen::VectorXd x0, const NewtonSpec& spec = {}) {
    NewtonResult out;
    int n = static_cast<int>(x0.size());
    Eigen::VectorXd r(n);
    if (!residual(x0, r)) { out.x = x0; out.residual = std::numeric_limits<double>::infinity(); return out; }
    double rn = r.lpNorm<Eigen::Infinity>();
    Eigen::VectorXd x = x0;
    for (int it = 1; it <= spec.max_iter; ++it) {
        if (rn <= spec.tol) {
            out = {x, rn, true, it - 1};
            return out;
        }
        Eigen::MatrixXd J(n, n);
        Eigen::VectorXd rp(n);
        bool jac_ok = true;
        for (int j = 0; j < n; ++j) {
            double h = spec.fd_step * (1.0 + std::abs(x(j)));
            Eigen::VectorXd xp = x;
            xp(j) += h;
            if (!residual(xp, rp)) { jac_ok = false; break; }
            J.col(j) = (rp - r) / h;
        }
        if (!jac_ok) break;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (lu.rank() < n) break;
        Eigen::VectorXd step = lu.solve(r);
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h <= spec.max_halvings; ++h) {
            Eigen::VectorXd xt = x - lambda * step;
            Eigen::VectorXd rt(n);
            if (residual(xt, rt)) {
                double rtn = rt.lpNorm<Eigen::Infinity>();
                if (rtn < rn || rtn <= spec.tol) {
                    x = xt;
                    r = rt;
                    rn = rtn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    out = {x, rn, rn <= spec.tol, spec.max_iter};
    return out;
}

} // namespace sigmageom
