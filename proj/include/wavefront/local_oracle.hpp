#ifndef WAVEFRONT_LOCAL_ORACLE_HPP
#define WAVEFRONT_LOCAL_ORACLE_HPP

#include <algorithm>
#include <cmath>

#include "wavefront/bvp_solver.hpp"

// The sigma = 0 limit: w'' - c w' + w^2(1 - w) - d w = 0, the classical
// bistable equation with equilibria 0 < a < A. Closed-form fronts from the
// quadratic ansatz w' = (w - lo)(hi - w)/sqrt(2), an independent phase-plane
// shooting integrator that re-derives the 0 -> A speed from scratch, and
// finite-domain Newton solutions on the shared discretization. These are the
// convergence targets and ground truth for the nonlocal solvers.

namespace wavefront {

/// Logistic front lo -> hi with slope scale k: w(xi) = lo + (hi-lo) s(xi),
/// s = 1/(1 + e^{-k (xi - xi0)}).
struct ExactFront {
    double c = kNaN;
    double lo = kNaN, hi = kNaN;
    double k = kNaN, xi0 = 0.0;

    double operator()(double xi) const { return lo + (hi - lo) * sfun(xi); }
    double deriv(double xi) const {
        const double s = sfun(xi);
        return (hi - lo) * k * s * (1.0 - s);
    }
    double deriv2(double xi) const {
        const double s = sfun(xi);
        return (hi - lo) * k * k * s * (1.0 - s) * (1.0 - 2.0 * s);
    }

private:
    double sfun(double xi) const { return 1.0 / (1.0 + std::exp(-k * (xi - xi0))); }
};

/// 0 -> A front: c = (3A - 2)/sqrt(2), w = A / (1 + e^{-A xi / sqrt 2}),
/// translated so w(0) = d0 (A/2 when no d0 is set).
inline ExactFront exact_front_0A(const ModelParams& model) {
    if (!(model.d > 0.0 && model.d < 2.0 / 9.0))
        throw param_error("exact_front_0A: need 0 < d < 2/9");
    const double A = model.A();
    ExactFront f;
    f.lo = 0.0;
    f.hi = A;
    f.k = A / std::sqrt(2.0);
    f.c = (3.0 * A - 2.0) / std::sqrt(2.0);
    const double d0 = std::isfinite(model.d0) ? model.d0 : 0.5 * A;
    if (!(d0 > 0.0 && d0 < A)) throw param_error("exact_front_0A: need 0 < d0 < A");
    f.xi0 = std::log(A / d0 - 1.0) / f.k;
    return f;
}

/// a -> A front: c = (a + A)/sqrt(2) = 1/sqrt(2) for every d, with
/// w(0) = (a + A)/2 = 1/2 automatically.
inline ExactFront exact_front_aA(const ModelParams& model) {
    if (!(model.d >= 0.0 && model.d < 2.0 / 9.0))
        throw param_error("exact_front_aA: need 0 <= d < 2/9");
    ExactFront f;
    f.lo = model.a();
    f.hi = model.A();
    f.k = (f.hi - f.lo) / std::sqrt(2.0);
    f.c = (f.lo + f.hi) / std::sqrt(2.0);
    f.xi0 = 0.0;
    return f;
}

namespace detail {

// One RK4 step of (u, v)' = (v, c v - f(u)).
inline void rk4_step(double& u, double& v, double c, double d, double h) {
    auto fu = [&](double x) { return reaction_local(x, d); };
    const double k1u = v, k1v = c * v - fu(u);
    const double k2u = v + 0.5 * h * k1v, k2v = c * (v + 0.5 * h * k1v) - fu(u + 0.5 * h * k1u);
    const double k3u = v + 0.5 * h * k2v, k3v = c * (v + 0.5 * h * k2v) - fu(u + 0.5 * h * k2u);
    const double k4u = v + h * k3v, k4v = c * (v + h * k3v) - fu(u + h * k3u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
}

enum class ShotOutcome { overshoot, undershoot };

// Launch from the (strong-)unstable direction at `base` with eigenvalue mu
// and quadratic manifold correction q; integrate until the trajectory either
// exceeds `target` (overshoot) or turns around (undershoot).
inline ShotOutcome shoot(double base, double target, double mu, double q, double c, double d,
                         double delta, double step) {
    double u = base + delta;
    double v = mu * delta + q * delta * delta;
    const double horizon = 400.0 / std::max(0.05, mu);
    double xi = 0.0;
    while (xi < horizon) {
        rk4_step(u, v, c, d, step);
        xi += step;
        if (u >= target) return ShotOutcome::overshoot;
        if (v <= 0.0) return ShotOutcome::undershoot;
    }
    // ran out of horizon while still creeping upward: closer to undershoot
    return u >= target - 1e-6 ? ShotOutcome::overshoot : ShotOutcome::undershoot;
}

}  // namespace detail

enum class ShootMode { zero_to_A, a_to_A };

/// Phase-plane shooting speed: bisection on c of the heteroclinic departure
/// from 0 (resp. the strong-unstable direction at a) reaching A. Fourth-order
/// fixed-step integration, quadratic manifold start; independent of the
/// closed-form ansatz fronts.
inline double shooting_speed(const ModelParams& model, ShootMode mode, double step = 1e-3,
                             double ctol = 1e-10) {
    const double A = model.A(), a = model.a(), d = model.d;
    double base, f2half;  // launch point and f''(base)/2
    if (mode == ShootMode::zero_to_A) {
        base = 0.0;
        f2half = 1.0;  // f(u) = -d u + u^2 - u^3
    } else {
        base = a;
        f2half = 1.0 - 3.0 * a;
    }
    auto outcome = [&](double c) {
        double mu;
        if (mode == ShootMode::zero_to_A) {
            mu = 0.5 * (c + std::sqrt(c * c + 4.0 * d));  // unstable direction at 0
        } else {
            const double fpa = a * (A - a);
            const double disc = c * c - 4.0 * fpa;
            if (!(disc > 0)) throw solve_error("shooting_speed: c below the node threshold at a");
            mu = 0.5 * (c + std::sqrt(disc));  // strong-unstable rate
        }
        const double q = -f2half / (3.0 * mu - c);
        return detail::shoot(base, A, mu, q, c, d, 1e-7, step);
    };
    double lo, hi;
    if (mode == ShootMode::zero_to_A) {
        lo = -2.0 * std::sqrt(A);
        hi = 2.0 * std::sqrt(A);
    } else {
        lo = 2.0 * std::sqrt(a * (A - a)) + 5e-3;
        hi = 2.0 * std::sqrt(A);
    }
    const auto out_lo = outcome(lo), out_hi = outcome(hi);
    if (out_lo == out_hi) throw solve_error("shooting_speed: bracket endpoints agree; no sign change");
    while (hi - lo > ctol) {
        const double mid = 0.5 * (lo + hi);
        if (outcome(mid) == out_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Phase-plane trajectory at speed c launched from the invariant manifold
/// (the departure equilibrium of `mode`), sampled on a uniform xi grid until
/// it settles at A; the independent profile oracle for the exact fronts.
/// From the node at a the strong-unstable direction carries the pushed
/// minimal front; `slow_direction` selects instead the slow rate the generic
/// supercritical fronts leave along.
inline GridProfile shooting_profile(const ModelParams& model, ShootMode mode, double c,
                                    double step = 1e-3, bool slow_direction = false) {
    const double A = model.A(), a = model.a(), d = model.d;

    if (mode == ShootMode::a_to_A && slow_direction) {
        // Generic supercritical fronts leave a along its SLOW direction — a
        // non-generic orbit that forward integration cannot hold (the fast
        // mode amplifies like e^{(mu+ - mu-) xi}). Integrate BACKWARD from
        // A's stable direction instead: backward in xi, both error modes
        // decay and the orbit lands on the node.
        const double fpA = -A * (A - a);  // f'(A)
        const double lamA = 0.5 * (c - std::sqrt(c * c - 4.0 * fpA));  // < 0
        const double q = -(1.0 - 3.0 * A) / (3.0 * lamA - c);
        const double s0 = -1e-7;
        double u = A + s0;
        double v = lamA * s0 + q * s0 * s0;
        std::vector<double> rev;
        rev.push_back(u);
        const std::size_t cap = 4000000;
        while (rev.size() < cap && u > a + 1e-12 && v > 0.0) {
            detail::rk4_step(u, v, c, d, -step);
            rev.push_back(u);
        }
        GridProfile out(-step * static_cast<double>(rev.size() - 1), step, rev.size());
        for (std::size_t i = 0; i < rev.size(); ++i) out.values[i] = rev[rev.size() - 1 - i];
        out.left_ext = a;
        out.right_ext = A;
        return out;
    }

    double base, mu, q;
    if (mode == ShootMode::zero_to_A) {
        base = 0.0;
        mu = 0.5 * (c + std::sqrt(c * c + 4.0 * d));
        q = -1.0 / (3.0 * mu - c);
    } else {
        base = a;
        const double disc = c * c - 4.0 * a * (A - a);
        if (!(disc > 0)) throw param_error("shooting_profile: c below the node threshold at a");
        mu = 0.5 * (c + std::sqrt(disc));
        q = -(1.0 - 3.0 * a) / (3.0 * mu - c);
    }
    const double delta = 1e-7;
    double u = base + delta;
    double v = mu * delta + q * delta * delta;
    GridProfile out(0.0, step, 0);
    out.left_ext = base;
    out.right_ext = A;
    const double horizon = 400.0 / std::max(0.05, mu);
    double xi = 0.0;
    while (xi < horizon) {
        out.values.push_back(u);
        detail::rk4_step(u, v, c, d, step);
        xi += step;
        if (v <= 0.0 || u >= A - 1e-13) break;
    }
    out.values.push_back(u);
    return out;
}

enum class LocalMode {
    a_to_A_fixed_c,    // supercritical member of the monostable family
    zero_to_A_free_c,  // unique (c, w) pinned by w(0) = d0
};

struct LocalBvpOptions {
    double L = 60.0;
    double h = 0.005;
    double newton_tol = 1e-10;
};

/// Finite-domain Newton solution of the local equation on the shared
/// discretization (convolution replaced by the identity): either the a -> A
/// front at a prescribed speed (the monostable family; reached by
/// continuation in c from the exact ansatz front), or the unique
/// (c, w) of the 0 -> A problem pinned by w(0) = d0.
inline FrontSolution local_bvp_front(const ModelParams& model, double c, LocalMode mode,
                                     LocalBvpOptions opt = {}) {
    const double A = model.A(), a = model.a();
    const std::size_t n_half = std::max<std::size_t>(8, static_cast<std::size_t>(std::llround(opt.L / opt.h)));
    const double h = opt.L / static_cast<double>(n_half);

    detail::ReactionBvpConfig cfg;
    cfg.L = opt.L;
    cfg.h = h;
    cfg.n_half = n_half;
    cfg.model = model;
    cfg.sigma = 0.0;
    cfg.tau = 1.0;
    cfg.cutoff_eps = 0.0;

    FrontSolution out;
    std::vector<double> u;
    double c_cur;

    if (mode == LocalMode::a_to_A_fixed_c) {
        // A Dirichlet BVP cannot hold this front: at supercritical c the
        // deviation from A rides the unstable rate (c + sqrt(c^2 - 4 f'(A)))/2
        // rightward, so the unique finite-domain solution presses the whole
        // rise against the +L boundary (verified by a shooting scan of the
        // left slope). The front itself is the backward phase-plane orbit
        // off A's stable direction; sample it on the requested grid, centered
        // at its midpoint crossing.
        const double fpa = a * (A - a);
        if (!(c * c > 4.0 * fpa))
            throw param_error("local_bvp_front: a_to_A needs c >= 2 sqrt(f'(a)) = " +
                              format_full(2.0 * std::sqrt(fpa)));
        const GridProfile shot =
            shooting_profile(model, ShootMode::a_to_A, c, std::min(1e-3, h / 2.0), true);
        const double cross = shot.crossing(0.5 * (a + A));
        if (!std::isfinite(cross))
            throw solve_error("local_bvp_front: phase-plane orbit found no front at c = " +
                              format_full(c));
        out.profile = GridProfile(-opt.L, h, 2 * n_half + 1);
        for (std::size_t j = 0; j <= 2 * n_half; ++j)
            out.profile.values[j] = shot.at_cubic(out.profile.x(j) + cross);
        out.profile.left_ext = a;
        out.profile.right_ext = A;
        c_cur = c;
    } else {
        if (!(model.d0 > 0.0 && model.d0 < model.d))
            throw param_error("local_bvp_front: zero_to_A needs 0 < d0 < d");
        cfg.left_bc = 0.0;
        cfg.right_bc = A;
        detail::ReactionBvp sys(cfg);
        const ExactFront seed = exact_front_0A(model);
        u.resize(sys.unknowns());
        for (std::size_t j = 1; j < 2 * n_half; ++j)
            u[j - 1] = seed(-opt.L + h * static_cast<double>(j));
        c_cur = seed.c;
        auto res = sys.newton(u, c_cur, true, model.d0, opt.newton_tol, 60);
        if (!res.ok) throw solve_error("local_bvp_front: Newton failed (residual " +
                                       format_full(res.residual_norm) + ")");
        out.profile = sys.profile_of(u);
    }

    out.c = c_cur;
    out.converged = true;
    const double d = model.d;
    {
        GridProfile res(out.profile.x0 + h, h, out.profile.size() - 2);
        double sup = 0.0;
        for (std::size_t j = 1; j + 1 < out.profile.size(); ++j) {
            const double um = out.profile.values[j - 1], u0 = out.profile.values[j],
                         up = out.profile.values[j + 1];
            res.values[j - 1] = (up - 2.0 * u0 + um) / (h * h) - c_cur * (up - um) / (2.0 * h) +
                                reaction_local(u0, d);
            sup = std::max(sup, std::abs(res.values[j - 1]));
        }
        out.residual = std::move(res);
        out.residual_sup = sup;
    }
    const LimitReport lims = classify_limits_report(out.profile, model);
    out.left_limit = lims.left;
    out.right_limit = lims.right;
    double slope_min = kInf;
    for (std::size_t j = 0; j + 1 < out.profile.size(); ++j)
        slope_min = std::min(slope_min, out.profile.values[j + 1] - out.profile.values[j]);
    out.bound_report.add("nondecreasing", slope_min >= -1e-9, slope_min / h, 0.0);
    return out;
}

}  // namespace wavefront

#endif
