#ifndef WAVEFRONT_MONOTONE_SOLVER_HPP
#define WAVEFRONT_MONOTONE_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavefront/subsuper.hpp"

// Monotone iteration for the a -> A wavefront at given (c, sigma):
// omega_m = T[omega_{m-1}] starting from the super-solution, squeezed above
// the sub-solution, where
//   F(w)(xi) = 2 A w - w^2 (1 - J_sigma * w),
//   T[w](xi) = 1/(mu2-mu1) int_xi^inf (e^{mu1(xi-y)} - e^{mu2(xi-y)}) F(w(y)) dy
// and 0 < mu1 <= mu2 are the roots of mu^2 - c mu + 2A - d = 0.

namespace wavefront {

enum class LimitClass { zero, a, A, unresolved };

inline const char* to_string(LimitClass c) {
    switch (c) {
        case LimitClass::zero: return "0";
        case LimitClass::a: return "a";
        case LimitClass::A: return "A";
        case LimitClass::unresolved: return "unresolved";
    }
    return "?";
}

struct LimitReport {
    LimitClass left = LimitClass::unresolved;
    LimitClass right = LimitClass::unresolved;
    double left_mean = kNaN, right_mean = kNaN;  // tail means over the outer 10%
    bool left_flat = false, right_flat = false;
};

/// Nearest equilibrium within tol_class of the tail mean over the outer 10%
/// of the grid, provided the tail is flat (|w'| < tol_class there);
/// `unresolved` otherwise.
inline LimitReport classify_limits_report(const GridProfile& profile, const ModelParams& model,
                                          double tol_class = 1e-4) {
    auto segment = [&](std::size_t lo, std::size_t hi, LimitClass& cls, double& mean, bool& flat) {
        flat = true;
        mean = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            mean += profile.values[i];
            if (i + 1 < hi && std::abs(profile.values[i + 1] - profile.values[i]) / profile.h >= tol_class)
                flat = false;
        }
        mean /= static_cast<double>(hi - lo);
        cls = LimitClass::unresolved;
        if (!flat) return;
        const double cand[3] = {0.0, model.a(), model.A()};
        const LimitClass cc[3] = {LimitClass::zero, LimitClass::a, LimitClass::A};
        double best = tol_class;
        for (int k = 0; k < 3; ++k) {
            const double err = std::abs(mean - cand[k]);
            if (err < best) {
                best = err;
                cls = cc[k];
            }
        }
    };
    LimitReport rep;
    const std::size_t n = profile.size();
    const std::size_t w = std::max<std::size_t>(5, n / 10);
    if (n < 2 * w) return rep;
    segment(0, w, rep.left, rep.left_mean, rep.left_flat);
    segment(n - w, n, rep.right, rep.right_mean, rep.right_flat);
    return rep;
}

inline std::pair<LimitClass, LimitClass> classify_limits(const GridProfile& profile,
                                                         const ModelParams& model,
                                                         double tol_class = 1e-4) {
    const LimitReport r = classify_limits_report(profile, model, tol_class);
    return {r.left, r.right};
}

/// Construction metadata of a monotone-iteration run.
struct MonotoneMeta {
    double b = kNaN;
    double alpha = kNaN, xi_minus = kNaN, mu = kNaN;
    double lambda1 = kNaN, lambda2 = kNaN, eps1 = kNaN, eps2 = kNaN;
    double mu1 = kNaN, mu2 = kNaN;
    double mu_b = kNaN, xi_b = kNaN;
    double max_chain_violation = 0.0;    // worst pointwise breach of the decreasing chain
    double max_squeeze_violation = 0.0;  // worst pointwise breach of sub <= iterate
    double fixed_point_gap = kNaN;       // sup |T[w] - w| at acceptance
    double max_slope = kNaN;             // max discrete derivative of the front
    bool no_theorem_guarantee = false;   // d >= 2/9 override marker
};

/// Ladder trace of a semi-wavefront extraction.
struct SemiwaveCell {
    double eps = kNaN;
    double L = kNaN;
    double h = kNaN;
    double c = kNaN;
    double newton_residual = kNaN;
    bool bounds_pass = false;
};

struct SemiwaveMeta {
    double d0 = kNaN;
    std::vector<SemiwaveCell> ladder;
    double delta_c_last = kNaN;        // |c| change between the two finest cells
    double delta_profile_last = kNaN;  // interior sup change between them
    bool stabilized = false;
    double c_lower_bound = kNaN, c_upper_bound = kNaN;  // speed bracket at tau = 1
};

struct FrontSolution {
    double c = kNaN;
    GridProfile profile;
    GridProfile residual;  // L[w] on the reporting window (interior values)
    double residual_sup = kNaN;
    LimitClass left_limit = LimitClass::unresolved;
    LimitClass right_limit = LimitClass::unresolved;
    std::size_t iterations = 0;
    bool converged = false;
    double last_delta = kNaN;
    BoundReport bound_report;
    std::optional<MonotoneMeta> monotone;
    std::optional<SemiwaveMeta> semiwave;
};

/// Pointwise F(w) = 2 A w - w^2 (1 - J_sigma * w~); order preserving on
/// profiles with values (and extensions) in [0, A], and strictly positive
/// wherever w > 0.
inline GridProfile F_op(const GridProfile& profile, const ModelParams& model,
                        const ConvolutionPlan& plan) {
    const double A = model.A();
    auto in_range = [&](double v) { return v >= -1e-10 && v <= A + 1e-10; };
    if (!in_range(profile.left_ext) || !in_range(profile.right_ext))
        throw param_error("F_op: extensions must lie in [0, A]");
    for (double v : profile.values)
        if (!in_range(v)) throw param_error("F_op: profile values must lie in [0, A], got " + format_full(v));

    GridProfile conv;
    plan.apply(profile, conv);
    GridProfile out = profile;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double w = profile.values[i];
        out.values[i] = 2.0 * A * w - w * w * (1.0 - conv.values[i]);
    }
    const auto fext = [&](double w) { return 2.0 * A * w - w * w * (1.0 - w); };
    out.left_ext = fext(profile.left_ext);
    out.right_ext = fext(profile.right_ext);
    return out;
}

inline GridProfile F_op(const GridProfile& profile, const ModelParams& model,
                        const KernelSpec& kernel, double sigma) {
    return F_op(profile, model, ConvolutionPlan(kernel, sigma, profile.h));
}

namespace detail {

// Exponential moments over one cell: i0 = int_0^h e^{-mu t} dt,
// i1 = int_0^h t e^{-mu t} dt. Series branch avoids cancellation at small mu h.
struct CellMoments {
    double decay, i0, i1;
    CellMoments(double mu, double h) {
        decay = std::exp(-mu * h);
        const double z = mu * h;
        if (z < 1e-5) {
            i0 = h * (1.0 - z / 2.0 + z * z / 6.0);
            i1 = h * h * (0.5 - z / 3.0 + z * z / 8.0);
        } else {
            i0 = (1.0 - decay) / mu;
            i1 = (1.0 - decay * (1.0 + z)) / (mu * mu);
        }
    }
};

// P(xi_j) = int_{xi_j}^inf e^{mu (xi_j - y)} g(y) dy with g piecewise linear
// through the samples and constant g_tail beyond the last point. The linear
// product rule keeps constants exact fixed points: P = g/mu for g constant.
inline void exp_tail_integral(const std::vector<double>& g, double g_tail, double mu, double h,
                              std::vector<double>& out) {
    const CellMoments m(mu, h);
    const std::size_t n = g.size();
    out.resize(n);
    double p = g_tail / mu;
    out[n - 1] = p;
    for (std::size_t j = n - 1; j-- > 0;) {
        const double inc = g[j] * m.i0 + (g[j + 1] - g[j]) / h * m.i1;
        p = m.decay * p + inc;
        out[j] = p;
    }
}

}  // namespace detail

/// T[w] via two backward exponential recurrences with the right tail closed
/// analytically using constant F(right_ext).
inline GridProfile T_op(const GridProfile& profile, double c, const ModelParams& model,
                        const ConvolutionPlan& plan) {
    const MuRoots mu = mu_roots(c, model);
    const GridProfile F = F_op(profile, model, plan);
    std::vector<double> p1, p2;
    detail::exp_tail_integral(F.values, F.right_ext, mu.mu1, profile.h, p1);
    detail::exp_tail_integral(F.values, F.right_ext, mu.mu2, profile.h, p2);
    GridProfile out = profile;
    const double scale = 1.0 / (mu.mu2 - mu.mu1);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = (p1[i] - p2[i]) * scale;
    out.left_ext = F.left_ext / (mu.mu1 * mu.mu2);
    out.right_ext = F.right_ext / (mu.mu1 * mu.mu2);
    return out;
}

inline GridProfile T_op(const GridProfile& profile, double c, double sigma,
                        const ModelParams& model, const KernelSpec& kernel) {
    return T_op(profile, c, model, ConvolutionPlan(kernel, sigma, profile.h));
}

struct MonotoneOptions {
    double xmin = -60.0, xmax = 60.0;  // reporting window
    double h = 0.01;
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    double margin = 1e-3;         // required gap above max{2 sqrt(2A-d), c_*}
    bool allow_critical = false;  // c at the threshold: solve above and extrapolate
    bool allow_outside_theorem_range = false;  // d >= 2/9 override
    double chain_slack = 1e-11;   // tolerated pointwise breach from rounding
    bool normalize_shift = true;  // shift so the (a+A)/2 crossing sits at 0
};

namespace detail {

inline FrontSolution solve_monotone_impl(double c, double sigma, const ModelParams& model,
                                         const KernelSpec& kernel, const MonotoneOptions& opt);

}  // namespace detail

/// The monotone a -> A front at (c, sigma). Iterates T from the super-solution
/// downward; asserts the decreasing chain and the squeeze above the
/// sub-solution at every step; classifies the limits and reports the discrete
/// residual of the converged front on the requested window.
inline FrontSolution solve_monotone(double c, double sigma, const ModelParams& model,
                                    const KernelSpec& kernel, MonotoneOptions opt = {}) {
    if (model.eq.outside_theorem_range && !opt.allow_outside_theorem_range)
        throw param_error("solve_monotone: d >= 2/9 is outside the guaranteed range; "
                          "pass allow_outside_theorem_range to explore anyway");
    const double threshold = std::max(mu_threshold(model), c_star(sigma, model, kernel));
    if (c >= threshold + opt.margin) return detail::solve_monotone_impl(c, sigma, model, kernel, opt);
    if (!opt.allow_critical || c < threshold - 1e-12)
        throw param_error("solve_monotone: need c >= max{2 sqrt(2A-d), c_*(sigma)} + margin = " +
                          format_full(threshold + opt.margin) + ", got c = " + format_full(c) +
                          " (pass allow_critical for the limiting mode at the threshold)");
    // Limiting mode: solve at threshold + delta for delta, delta/2 and take a
    // pointwise Richardson limit of the aligned profiles.
    const double d1 = std::max(4.0 * opt.margin, 4e-3);
    MonotoneOptions sub_opt = opt;
    sub_opt.allow_critical = false;
    sub_opt.normalize_shift = true;
    FrontSolution f2 = detail::solve_monotone_impl(threshold + d1, sigma, model, kernel, sub_opt);
    FrontSolution f1 = detail::solve_monotone_impl(threshold + d1 / 2.0, sigma, model, kernel, sub_opt);
    FrontSolution out = f1;
    out.c = c;
    for (std::size_t i = 0; i < out.profile.size(); ++i)
        out.profile.values[i] =
            2.0 * f1.profile.values[i] - f2.profile.at_cubic(out.profile.x(i));
    out.residual = GridProfile{};
    out.residual_sup = kNaN;  // extrapolated profile; no single-c residual applies
    out.bound_report.add("critical_extrapolation", true, d1 / 2.0, opt.margin);
    return out;
}

namespace detail {

inline FrontSolution solve_monotone_impl(double c, double sigma, const ModelParams& model,
                                         const KernelSpec& kernel, const MonotoneOptions& opt) {
    const double A = model.A(), a = model.a();

    const auto r1 = largest_negative_root(1, c, sigma, model, kernel);
    const auto r2 = largest_negative_root(2, c, sigma, model, kernel);
    if (!r1 || !r2) throw solve_error("solve_monotone: dispersion roots missing at c = " + format_full(c));
    const MuRoots mu = mu_roots(c, model);
    const SubSolution sub = build_sub(c, sigma, model, kernel);

    // Solver grid. Right: padded so the constant-A tail closure of T agrees
    // with the super-solution's rising branch below the chain slack. Left:
    // padded to 40 e-foldings of the slow a-side rate so the limit
    // classification sees a settled tail (the local rate; the nonlocal
    // correction is O(sigma^2) and only widens the padding marginally).
    const double fpa = 2.0 * a - 3.0 * a * a - model.d;  // f'(a)
    const double left_rate = fpa > 1e-8 ? 0.5 * (c - std::sqrt(c * c - 4.0 * fpa)) : c;
    const double pad = 5.0 * kernel.truncation_radius() * sigma;
    const double pad_r = std::max(opt.xmax, -40.0 / r2->lambda) + pad;
    const double pad_l = std::min(opt.xmin, -40.0 / left_rate) - pad - 10.0;
    GridSpec grid;
    grid.h = opt.h;
    grid.xmin = opt.xmin - std::ceil((opt.xmin - pad_l) / opt.h) * opt.h;
    grid.xmax = opt.xmin + std::ceil((pad_r - opt.xmin) / opt.h) * opt.h;

    const ConvolutionPlan plan(kernel, sigma, grid.h);
    const double b = choose_b(c, sigma, model, kernel, sub, grid);
    const SuperSolution sup = build_super(c, sigma, b, model, kernel);

    const GridProfile sub_grid = sample_on(grid, sub, sub.limit_left(), A);
    GridProfile iter = sample_on(grid, sup, sup.mu_b, A);

    // Pointwise allowance for the chain/squeeze assertions: quadrature error
    // scales with the locally resolved deficit (far out, both bounds pinch to
    // the common asymptote A e^{lambda2 xi} and a flat slack is unattainable).
    std::vector<double> allow(sub_grid.size());
    for (std::size_t i = 0; i < allow.size(); ++i)
        allow[i] = opt.chain_slack + 25.0 * grid.h * grid.h * (A - sub_grid.values[i]);

    FrontSolution out;
    out.c = c;
    MonotoneMeta meta;
    meta.b = b;
    meta.alpha = sub.alpha;
    meta.xi_minus = sub.xi_minus;
    meta.mu = sub.mu;
    meta.lambda1 = r1->lambda;
    meta.lambda2 = r2->lambda;
    meta.eps1 = r1->eps;
    meta.eps2 = r2->eps;
    meta.mu1 = mu.mu1;
    meta.mu2 = mu.mu2;
    meta.mu_b = sup.mu_b;
    meta.xi_b = sup.xi_b;
    meta.no_theorem_guarantee = model.eq.outside_theorem_range;

    double delta = kInf;
    std::size_t m = 0;
    for (; m < opt.max_iter && delta >= opt.tol; ++m) {
        GridProfile next = T_op(iter, c, model, plan);
        delta = 0.0;
        double chain_viol = 0.0, squeeze_viol = 0.0, chain_excess = 0.0, squeeze_excess = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            const double dn = next.values[i] - iter.values[i];
            delta = std::max(delta, std::abs(dn));
            chain_viol = std::max(chain_viol, dn);
            squeeze_viol = std::max(squeeze_viol, sub_grid.values[i] - next.values[i]);
            chain_excess = std::max(chain_excess, dn - allow[i]);
            squeeze_excess = std::max(squeeze_excess, sub_grid.values[i] - next.values[i] - allow[i]);
            // clamp rounding-level excursions so F stays admissible
            next.values[i] = std::clamp(next.values[i], 0.0, A);
        }
        meta.max_chain_violation = std::max(meta.max_chain_violation, chain_viol);
        meta.max_squeeze_violation = std::max(meta.max_squeeze_violation, squeeze_viol);
        if (chain_excess > 0.0)
            throw solve_error("solve_monotone: iterate chain not decreasing (violation " +
                              format_full(chain_excess) + " beyond the error allowance); "
                              "discretization too coarse");
        if (squeeze_excess > 0.0)
            throw solve_error("solve_monotone: iterate dropped below the sub-solution (violation " +
                              format_full(squeeze_excess) + " beyond the error allowance); "
                              "discretization too coarse");
        // Enforce the decreasing chain. Rounding-level upward seeds in the far
        // tail (where the super-solution margin is below machine precision)
        // otherwise grow at the iteration's unstable constant-mode gain
        // 3A^2/(2A-d) > 1 and let the front drift off the grid.
        for (std::size_t i = 0; i < next.size(); ++i)
            next.values[i] = std::min(next.values[i], iter.values[i]);
        iter.values.swap(next.values);
        iter.left_ext = next.left_ext;
        iter.right_ext = next.right_ext;
    }
    out.iterations = m;
    out.converged = delta < opt.tol;
    out.last_delta = delta;

    {
        const GridProfile once = T_op(iter, c, model, plan);
        double gap = 0.0;
        for (std::size_t i = 0; i < iter.size(); ++i)
            gap = std::max(gap, std::abs(once.values[i] - iter.values[i]));
        meta.fixed_point_gap = gap;
    }

    // Limits from the padded grid (its outer tails are settled by
    // construction of the padding).
    const LimitReport lims = classify_limits_report(iter, model);
    out.left_limit = lims.left;
    out.right_limit = lims.right;

    // Residual on the padded grid, then slice both profile and residual to
    // the reporting window.
    const GridProfile res_full = residual_L(iter, c, model, plan);
    const auto i0 = static_cast<std::size_t>(std::llround((opt.xmin - grid.xmin) / grid.h));
    const auto i1 = static_cast<std::size_t>(std::llround((opt.xmax - grid.xmin) / grid.h));
    GridProfile report;
    report.h = grid.h;
    report.x0 = iter.x(i0);
    report.values.assign(iter.values.begin() + static_cast<std::ptrdiff_t>(i0),
                         iter.values.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
    report.left_ext = iter.values[i0];
    report.right_ext = A;

    GridProfile res_win;
    res_win.h = grid.h;
    res_win.x0 = report.x0;
    res_win.values.assign(res_full.values.begin() + static_cast<std::ptrdiff_t>(i0 - 1),
                          res_full.values.begin() + static_cast<std::ptrdiff_t>(i1 - 1) + 1);
    out.residual_sup = 0.0;
    for (double v : res_win.values) out.residual_sup = std::max(out.residual_sup, std::abs(v));

    double slope_min = kInf, slope_max = -kInf;
    for (std::size_t i = 0; i + 1 < report.size(); ++i) {
        const double s = (report.values[i + 1] - report.values[i]) / report.h;
        slope_min = std::min(slope_min, s);
        slope_max = std::max(slope_max, s);
    }
    meta.max_slope = slope_max;

    double vmin = kInf, vmax = -kInf;
    for (double v : report.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    out.bound_report.add("converged", out.converged, delta, opt.tol);
    out.bound_report.add("nondecreasing", slope_min >= -1e-9, slope_min, 0.0);
    out.bound_report.add("range_low", vmin >= a - 1e-6, vmin, a);
    out.bound_report.add("range_high", vmax <= A + 1e-6, vmax, A);
    out.bound_report.add("derivative_bound", slope_max <= mu.mu1 * A + 1e-8, slope_max, mu.mu1 * A);
    out.bound_report.add("fixed_point_gap", meta.fixed_point_gap < 10.0 * opt.tol,
                         meta.fixed_point_gap, 10.0 * opt.tol);
    out.bound_report.add("left_limit_a", out.left_limit == LimitClass::a, lims.left_mean, a);
    out.bound_report.add("right_limit_A", out.right_limit == LimitClass::A, lims.right_mean, A);

    if (opt.normalize_shift) {
        const double shift = report.crossing(0.5 * (a + A));
        if (std::isfinite(shift)) {
            report.x0 -= shift;
            res_win.x0 -= shift;
        }
    }
    out.profile = std::move(report);
    out.residual = std::move(res_win);
    out.monotone = meta;
    return out;
}

}  // namespace detail

/// Sup distance between two monotone profiles after shifting each so its
/// crossing of `level` sits at 0; measured by cubic interpolation on the
/// common window shrunk by `edge_margin` on both sides.
inline double aligned_sup_distance(const GridProfile& p1, const GridProfile& p2, double level,
                                   double edge_margin = 10.0) {
    const double s1 = p1.crossing(level), s2 = p2.crossing(level);
    if (!std::isfinite(s1) || !std::isfinite(s2))
        throw solve_error("aligned_sup_distance: a profile never crosses the alignment level");
    const double lo = std::max(p1.x0 - s1, p2.x0 - s2) + edge_margin;
    const double hi = std::min(p1.x_back() - s1, p2.x_back() - s2) - edge_margin;
    if (!(hi > lo)) throw solve_error("aligned_sup_distance: windows do not overlap");
    const int n = 2000;
    double dist = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / n;
        dist = std::max(dist, std::abs(p1.at_cubic(x + s1) - p2.at_cubic(x + s2)));
    }
    return dist;
}

}  // namespace wavefront

#endif
