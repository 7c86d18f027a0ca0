#ifndef WAVEFRONT_BVP_SOLVER_HPP
#define WAVEFRONT_BVP_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavefront/banded.hpp"
#include "wavefront/monotone_solver.hpp"

// Cutoff finite-domain construction of the 0 -> A semi-wavefront:
//   w'' - c w' + tau g_eps(w) [w^2 (1 - J_sigma * w~) - d w] = 0 on (-L, L),
//   w(-L) = 0, w(L) = A, w(0) = d0  (phase; fixes the unknown speed c),
// with w~ extended by 0 on the left and A on the right. The homotopy runs
// tau: 0 -> 1 from the closed-form linear solution; the semi-wavefront is
// extracted by driving eps down and L up until (c, w) stabilize.

namespace wavefront {

/// Smooth bump: 0 outside (eps, A-eps), 1 on [3 eps, A-3 eps], quintic
/// smoothstep ramps between (a C^2 realization; the solver needs g').
struct CutoffSpec {
    double eps = 1e-3;
};

namespace detail {
inline double smoothstep5(double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); }
inline double smoothstep5_deriv(double x) { return 30.0 * x * x * (1.0 - x) * (1.0 - x); }
}  // namespace detail

inline double g_eps(double s, const CutoffSpec& cut, double A) {
    const double e = cut.eps;
    if (!(e > 0.0) || !(e < A / 6.0))
        throw param_error("g_eps: need 0 < eps < A/6 = " + format_full(A / 6.0));
    if (s <= e || s >= A - e) return 0.0;
    if (s >= 3.0 * e && s <= A - 3.0 * e) return 1.0;
    if (s < 3.0 * e) return detail::smoothstep5((s - e) / (2.0 * e));
    return detail::smoothstep5((A - e - s) / (2.0 * e));
}

inline double g_eps_deriv(double s, const CutoffSpec& cut, double A) {
    const double e = cut.eps;
    if (s <= e || s >= A - e) return 0.0;
    if (s >= 3.0 * e && s <= A - 3.0 * e) return 0.0;
    if (s < 3.0 * e) return detail::smoothstep5_deriv((s - e) / (2.0 * e)) / (2.0 * e);
    return -detail::smoothstep5_deriv((A - e - s) / (2.0 * e)) / (2.0 * e);
}

struct BvpProblem {
    ModelParams model;
    KernelSpec kernel = KernelSpec::tophat();
    double L = 40.0;
    double h = 0.01;  // requested spacing; the grid uses L / round(L/h)
    CutoffSpec cutoff;
    double tau_target = 1.0;
    double newton_tol = 1e-10;
    int max_newton = 30;

    std::size_t half_points() const {
        return std::max<std::size_t>(8, static_cast<std::size_t>(std::llround(L / h)));
    }
    double spacing() const { return L / static_cast<double>(half_points()); }
    std::size_t total_points() const { return 2 * half_points() + 1; }
};

inline double domain_threshold_L0(const ModelParams& model) {
    return (std::log(model.A()) - std::log(model.d0)) / std::sqrt(model.A());
}

inline void validate_problem(const BvpProblem& p) {
    const ValidationReport v = validate(p.model, ConnectionMode::zero_to_A);
    if (!v.pass) throw param_error("bvp: hypothesis violated: " + v.first_violation);
    if (!(p.cutoff.eps > 0.0 && p.cutoff.eps < p.model.A() / 6.0))
        throw param_error("bvp: need 0 < eps < A/6");
    if (!(p.L >= domain_threshold_L0(p.model)))
        throw param_error("bvp: need L >= L0 = (ln A - ln d0)/sqrt(A) = " +
                          format_full(domain_threshold_L0(p.model)));
    const double h = p.spacing();
    if (p.model.sigma > 0.0 && !(h < p.model.sigma / 2.0))
        throw param_error("bvp: grid too coarse for the kernel, need h < sigma/2 = " +
                          format_full(p.model.sigma / 2.0) + ", got h = " + format_full(h));
    if (!(h < 0.1 / std::sqrt(p.model.A())))
        throw param_error("bvp: grid too coarse for the boundary layers, need h < 0.1/sqrt(A) = " +
                          format_full(0.1 / std::sqrt(p.model.A())));
}

/// Closed-form solution of w'' - c w' = 0, w(-L) = 0, w(L) = A, sampled on
/// the problem grid (expm1 forms stay stable for |c| L up to ~350).
inline GridProfile tau0_solution(double c, const BvpProblem& p) {
    const double A = p.model.A(), L = p.L, h = p.spacing();
    const std::size_t N = 2 * p.half_points();
    GridProfile w(-L, h, N + 1);
    w.left_ext = 0.0;
    w.right_ext = A;
    for (std::size_t j = 0; j <= N; ++j) {
        const double t = w.x(j);
        if (c == 0.0) {
            w.values[j] = A * (t + L) / (2.0 * L);
        } else if (c > 0.0) {
            w.values[j] = A * (std::expm1(c * (t - L)) - std::expm1(-2.0 * c * L)) /
                          (-std::expm1(-2.0 * c * L));
        } else {
            w.values[j] = A * std::expm1(c * (t + L)) / std::expm1(2.0 * c * L);
        }
    }
    w.values[0] = 0.0;
    w.values[N] = A;
    return w;
}

/// Unique c0 with tau0_solution(c0)(0) = d0, by bisection on the strictly
/// decreasing map c -> w_0^c(0).
inline double find_c0(const BvpProblem& p) {
    const double A = p.model.A(), L = p.L, d0 = p.model.d0;
    auto value_at_0 = [&](double c) {
        if (c == 0.0) return 0.5 * A;
        if (c > 0.0)
            return A * (std::expm1(-c * L) - std::expm1(-2.0 * c * L)) / (-std::expm1(-2.0 * c * L));
        return A * std::expm1(c * L) / std::expm1(2.0 * c * L);
    };
    double hi = 1.0;
    int guard = 0;
    while (value_at_0(hi) > d0) {
        hi *= 2.0;
        if (++guard > 60) throw solve_error("find_c0: no upper bracket");
    }
    double lo = -1.0;
    guard = 0;
    while (value_at_0(lo) < d0) {
        lo *= 2.0;
        if (++guard > 60) throw solve_error("find_c0: no lower bracket");
    }
    // value_at_0 is decreasing: value(lo) >= d0 >= value(hi)
    return detail::bisect_root(lo, hi, value_at_0(lo) - d0, value_at_0(hi) - d0,
                               1e-15 * (1.0 + std::abs(hi)), [&](double c) { return value_at_0(c) - d0; });
}

namespace detail {

// Discretized reaction BVP shared by the cutoff problem, its local (sigma=0)
// limit, and the barrier equation: second-order central differences for
// w'' - c w' + tau g(w) [w^2 (1 - conv(w)) - d w] - shift = 0,
// Dirichlet ends, optional phase row w(0) = d0 with c unknown.
struct ReactionBvpConfig {
    double L = 40.0;
    double h = 0.01;          // exact spacing; L/h must be an integer
    std::size_t n_half = 0;   // grid points per half; index of t = 0
    double left_bc = 0.0, right_bc = 1.0;
    ModelParams model;
    const KernelSpec* kernel = nullptr;  // used when sigma > 0
    double sigma = 0.0;                  // 0 => conv(w) = w pointwise
    double tau = 1.0;
    double cutoff_eps = 0.0;  // 0 => g == 1
    double shift = 0.0;
};

class ReactionBvp {
public:
    explicit ReactionBvp(const ReactionBvpConfig& cfg) : cfg_(cfg) {
        N_ = 2 * cfg.n_half;
        if (cfg.sigma > 0.0) plan_.emplace(*cfg.kernel, cfg.sigma, cfg.h);
        K_ = plan_ ? static_cast<std::size_t>(plan_->half_width()) : 1;
        full_ = GridProfile(-cfg.L, cfg.h, N_ + 1);
        full_.left_ext = cfg.left_bc;
        full_.right_ext = cfg.right_bc;
        full_.values.front() = cfg.left_bc;
        full_.values.back() = cfg.right_bc;
    }

    std::size_t unknowns() const { return N_ - 1; }
    std::size_t bandwidth() const { return std::max<std::size_t>(1, K_); }
    std::size_t phase_row() const { return cfg_.n_half - 1; }
    const ReactionBvpConfig& config() const { return cfg_; }

    double gfun(double u) const {
        if (cfg_.cutoff_eps <= 0.0) return 1.0;
        return g_eps(u, CutoffSpec{cfg_.cutoff_eps}, cfg_.model.A());
    }
    double gfun_deriv(double u) const {
        if (cfg_.cutoff_eps <= 0.0) return 0.0;
        return g_eps_deriv(u, CutoffSpec{cfg_.cutoff_eps}, cfg_.model.A());
    }

    void fill_full(const std::vector<double>& u) {
        for (std::size_t j = 1; j < N_; ++j) full_.values[j] = u[j - 1];
        if (plan_)
            plan_->apply(full_, conv_);
        else
            conv_ = full_;
    }

    // Interior residual rows; `u` are the interior values.
    void residual(const std::vector<double>& u, double c, std::vector<double>& r) {
        fill_full(u);
        const double h = cfg_.h, d = cfg_.model.d;
        r.resize(N_ - 1);
        for (std::size_t j = 1; j < N_; ++j) {
            const double um = full_.values[j - 1], u0 = full_.values[j], up = full_.values[j + 1];
            const double lap = (up - 2.0 * u0 + um) / (h * h);
            const double adv = (up - um) / (2.0 * h);
            const double R = u0 * u0 * (1.0 - conv_.values[j]) - d * u0;
            r[j - 1] = lap - c * adv + cfg_.tau * gfun(u0) * R - cfg_.shift;
        }
    }

    void jacobian(const std::vector<double>& u, double c, BandedMatrix& B,
                  std::vector<double>& dres_dc) {
        fill_full(u);
        const double h = cfg_.h, d = cfg_.model.d;
        B.clear();
        dres_dc.assign(N_ - 1, 0.0);
        for (std::size_t j = 1; j < N_; ++j) {
            const std::size_t row = j - 1;
            const double um = full_.values[j - 1], u0 = full_.values[j], up = full_.values[j + 1];
            const double cv = conv_.values[j];
            const double g = gfun(u0), gp = gfun_deriv(u0);
            const double R = u0 * u0 * (1.0 - cv) - d * u0;
            double diag = -2.0 / (h * h) + cfg_.tau * (gp * R + g * (2.0 * u0 * (1.0 - cv) - d));
            if (!plan_) diag -= cfg_.tau * g * u0 * u0;  // identity convolution
            B(row, row) += diag;
            if (j - 1 >= 1) B(row, row - 1) += 1.0 / (h * h) + c / (2.0 * h);
            if (j + 1 <= N_ - 1) B(row, row + 1) += 1.0 / (h * h) - c / (2.0 * h);
            if (plan_) {
                const double coef = -cfg_.tau * g * u0 * u0;
                const auto K = static_cast<std::ptrdiff_t>(K_);
                const auto jj = static_cast<std::ptrdiff_t>(j);
                const auto lo = std::max<std::ptrdiff_t>(1, jj - K);
                const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(N_) - 1, jj + K);
                for (std::ptrdiff_t m = lo; m <= hi; ++m)
                    B(row, static_cast<std::size_t>(m - 1)) += coef * plan_->weight(jj - m);
            }
            dres_dc[row] = -(up - um) / (2.0 * h);
        }
    }

    struct NewtonOutcome {
        bool ok = false;
        int iterations = 0;
        double residual_norm = kNaN;
    };

    /// Damped Newton on (u, c). With free_c the phase row w(0) = d0 closes the
    /// bordered system (one factorization, two banded solves per step). The
    /// tolerance is floored at the rounding level of the second difference,
    /// ~eps_mach * |u| / h^2, which dominates the residual on fine grids.
    NewtonOutcome newton(std::vector<double>& u, double& c, bool free_c, double d0, double tol,
                         int max_iter) {
        const double scale = std::max(1.0, std::abs(cfg_.left_bc) + std::abs(cfg_.right_bc));
        tol = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * scale / (cfg_.h * cfg_.h));
        std::vector<double> r, p, z1, z2;
        auto norm = [&](const std::vector<double>& rr, const std::vector<double>& uu) {
            double n = 0.0;
            for (double v : rr) n = std::max(n, std::abs(v));
            if (free_c) n = std::max(n, std::abs(uu[phase_row()] - d0));
            return n;
        };
        NewtonOutcome out;
        residual(u, c, r);
        double rn = norm(r, u);
        for (int it = 0; it < max_iter; ++it) {
            if (rn < tol) {
                out.ok = true;
                out.iterations = it;
                out.residual_norm = rn;
                return out;
            }
            BandedMatrix B(N_ - 1, bandwidth(), bandwidth());
            jacobian(u, c, B, p);
            const BandedLU lu(std::move(B));
            z1 = r;
            lu.solve(z1);
            double dc = 0.0;
            if (free_c) {
                z2 = p;
                lu.solve(z2);
                const double s = u[phase_row()] - d0;
                const double denom = z2[phase_row()];
                if (denom == 0.0) break;
                dc = (s - z1[phase_row()]) / denom;
            }
            // delta_u = -z1 - dc * z2
            double alpha = 1.0;
            bool accepted = false;
            std::vector<double> u_try(u.size());
            for (int half = 0; half < 40; ++half, alpha *= 0.5) {
                for (std::size_t i = 0; i < u.size(); ++i)
                    u_try[i] = u[i] + alpha * (-z1[i] - (free_c ? dc * z2[i] : 0.0));
                const double c_try = c + alpha * dc;
                residual(u_try, c_try, r);
                const double rn_try = norm(r, u_try);
                if (rn_try < rn || rn_try < tol) {
                    u.swap(u_try);
                    c = c_try;
                    rn = rn_try;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                out.iterations = it + 1;
                out.residual_norm = rn;
                return out;  // stalled
            }
        }
        out.ok = rn < tol;
        out.iterations = max_iter;
        out.residual_norm = rn;
        return out;
    }

    GridProfile profile_of(const std::vector<double>& u) const {
        GridProfile w = full_;
        for (std::size_t j = 1; j < N_; ++j) w.values[j] = u[j - 1];
        w.values.front() = cfg_.left_bc;
        w.values.back() = cfg_.right_bc;
        return w;
    }

private:
    ReactionBvpConfig cfg_;
    std::size_t N_ = 0, K_ = 0;
    std::optional<ConvolutionPlan> plan_;
    GridProfile full_, conv_;
};

inline ReactionBvpConfig cutoff_config(const BvpProblem& p, double tau) {
    ReactionBvpConfig cfg;
    cfg.L = p.L;
    cfg.n_half = p.half_points();
    cfg.h = p.spacing();
    cfg.left_bc = 0.0;
    cfg.right_bc = p.model.A();
    cfg.model = p.model;
    cfg.kernel = &p.kernel;
    cfg.sigma = p.model.sigma;
    cfg.tau = tau;
    cfg.cutoff_eps = p.cutoff.eps;
    return cfg;
}

}  // namespace detail

struct BvpSolution {
    double c = kNaN;
    GridProfile profile;  // full grid incl. Dirichlet ends; left_ext 0, right_ext A
    double newton_residual = kNaN;
    double tau = kNaN;
    BoundReport bound_report;
};

/// The discretized residual of the cutoff problem at (omega, c): interior
/// rows plus the scalar phase residual omega(0) - d0.
inline std::pair<GridProfile, double> assemble_system(const GridProfile& omega, double c,
                                                      const BvpProblem& p, double tau) {
    validate_problem(p);
    if (omega.size() != p.total_points())
        throw param_error("assemble_system: profile does not match the problem grid");
    detail::ReactionBvp sys(detail::cutoff_config(p, tau));
    std::vector<double> u(omega.values.begin() + 1, omega.values.end() - 1);
    std::vector<double> r;
    sys.residual(u, c, r);
    GridProfile res(omega.x0 + p.spacing(), p.spacing(), r.size());
    res.values = std::move(r);
    const double phase = omega.values[p.half_points()] - p.model.d0;
    return {std::move(res), phase};
}

/// Lemma-style a priori checks of an accepted solution: speed bracket,
/// range, C^2 surrogate norms, monotonicity left of 0, and the phase.
inline BoundReport verify_bounds(const BvpSolution& sol, const BvpProblem& p) {
    BoundReport rep;
    const double A = p.model.A(), d = p.model.d, sigma = p.model.sigma;
    const double c_max = 2.0 * std::sqrt(A);
    rep.add("speed_upper", sol.c <= c_max + 1e-9, sol.c, c_max);
    const double eps0 = (1.0 - 4.0 * d) / 36.0;
    if (sol.tau >= 1.0) {
        const double R0 = p.kernel.tail_radius(eps0, A);
        const double c_min = -(2.0 / eps0) * A * A * R0 * sigma;
        rep.add("speed_lower", sol.c >= c_min - 1e-9, sol.c, c_min);
    }
    double vmin = kInf, vmax = -kInf;
    for (double v : sol.profile.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    rep.add("range_low", vmin >= -1e-12, vmin, 0.0);
    rep.add("range_high", vmax <= A + 1e-12, vmax, A);
    const double h = sol.profile.h;
    double d1max = 0.0, d2max = 0.0;
    for (std::size_t j = 1; j + 1 < sol.profile.size(); ++j) {
        const double um = sol.profile.values[j - 1], u0 = sol.profile.values[j],
                     up = sol.profile.values[j + 1];
        d1max = std::max(d1max, std::abs((up - um) / (2.0 * h)));
        d2max = std::max(d2max, std::abs((up - 2.0 * u0 + um) / (h * h)));
    }
    rep.add("grad_bound", d1max <= 10.0, d1max, 10.0);
    rep.add("second_diff_bound", d2max <= 100.0, d2max, 100.0);
    double slope_min = kInf;
    for (std::size_t j = 0; j < p.half_points(); ++j)
        slope_min = std::min(slope_min, sol.profile.values[j + 1] - sol.profile.values[j]);
    rep.add("monotone_left_half", slope_min >= -1e-9, slope_min / h, 0.0);
    const double phase = sol.profile.values[p.half_points()] - p.model.d0;
    rep.add("phase", std::abs(phase) <= 1e-10, phase, 0.0);
    return rep;
}

struct HomotopyStep {
    double tau = kNaN;
    double c = kNaN;
    int newton_iterations = 0;
    double residual = kNaN;
};

struct HomotopyResult {
    bool success = false;
    double last_tau = 0.0;
    BvpSolution solution;  // at last_tau (tau_target when success)
    std::vector<HomotopyStep> trace;
};

/// tau-continuation from the closed-form start (c0, w0^{c0}) to tau_target:
/// adaptive steps, halved on Newton failure down to the 1e-4 floor, damped
/// Newton on the bordered system at each step. Range violations beyond the
/// maximum-principle slack also reject a step. A warm start (profile + speed)
/// tries the target tau directly before falling back to the full path.
inline HomotopyResult homotopy_solve(const BvpProblem& p, const GridProfile* warm_start = nullptr,
                                     const double* warm_speed = nullptr) {
    validate_problem(p);
    HomotopyResult out;
    const double A = p.model.A();
    const std::size_t N = 2 * p.half_points();

    auto range_ok = [&](const std::vector<double>& u) {
        for (double v : u)
            if (v < -1e-12 || v > A + 1e-12) return false;
        return true;
    };
    auto make_solution = [&](const std::vector<double>& u, double c, double tau, double rn) {
        BvpSolution sol;
        sol.c = c;
        sol.tau = tau;
        detail::ReactionBvp sys(detail::cutoff_config(p, tau));
        sol.profile = sys.profile_of(u);
        sol.newton_residual = rn;
        sol.bound_report = verify_bounds(sol, p);
        return sol;
    };

    double c = find_c0(p);
    std::vector<double> u;
    {
        const GridProfile w0 = tau0_solution(c, p);
        u.assign(w0.values.begin() + 1, w0.values.end() - 1);
    }
    if (warm_start) {
        // try the target directly from the supplied profile
        const double h = p.spacing();
        std::vector<double> uw(N - 1);
        for (std::size_t j = 1; j < N; ++j)
            uw[j - 1] = std::clamp(warm_start->at(-p.L + h * static_cast<double>(j)), 0.0, A);
        detail::ReactionBvp sys(detail::cutoff_config(p, p.tau_target));
        double cw = warm_speed ? *warm_speed : c;
        auto res = sys.newton(uw, cw, true, p.model.d0, p.newton_tol, p.max_newton);
        if (res.ok && range_ok(uw)) {
            out.success = true;
            out.last_tau = p.tau_target;
            out.trace.push_back({p.tau_target, cw, res.iterations, res.residual_norm});
            out.solution = make_solution(uw, cw, p.tau_target, res.residual_norm);
            return out;
        }
    }

    double tau = 0.0;
    {
        detail::ReactionBvp sys(detail::cutoff_config(p, 0.0));
        auto res = sys.newton(u, c, true, p.model.d0, p.newton_tol, p.max_newton);
        if (!res.ok) throw solve_error("homotopy: tau = 0 polish failed");
        out.trace.push_back({0.0, c, res.iterations, res.residual_norm});
        out.solution = make_solution(u, c, 0.0, res.residual_norm);
        out.last_tau = 0.0;
    }

    double dtau = 0.1;
    while (tau < p.tau_target - 1e-14) {
        const double trial = std::min(tau + dtau, p.tau_target);
        std::vector<double> u_try = u;
        double c_try = c;
        detail::ReactionBvp sys(detail::cutoff_config(p, trial));
        auto res = sys.newton(u_try, c_try, true, p.model.d0, p.newton_tol, p.max_newton);
        if (res.ok && range_ok(u_try)) {
            u.swap(u_try);
            c = c_try;
            tau = trial;
            out.trace.push_back({tau, c, res.iterations, res.residual_norm});
            out.last_tau = tau;
            out.solution = make_solution(u, c, tau, res.residual_norm);
            dtau = std::min({dtau * 1.5, 0.25, p.tau_target - tau + 1e-15});
        } else {
            dtau *= 0.5;
            if (dtau < 1e-4) {
                out.success = false;
                return out;  // continuation-failure report with last good tau
            }
        }
    }
    out.success = true;
    return out;
}

struct SemiwaveSchedule {
    // The speed settles like a power of eps (measured ~eps^{1.5}); the ladder
    // ends where consecutive-cell changes sit well inside the stabilization
    // tolerances. L matters only through exponentially small tail terms.
    std::vector<double> eps_ladder = {1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<double> L_ladder = {20.0, 30.0, 40.0, 50.0};
    double h = 0.01;
    double newton_tol = 1e-10;
    double stabil_c_tol = 1e-5;
    double stabil_profile_tol = 1e-4;
};

/// Drives eps down and L up along the (zipped) schedule, warm-starting each
/// cell from the previous; declares convergence when both the speed and the
/// interior profile stop moving. Returns the final (c^*(sigma), omega) with
/// tail classification and the full bound report.
inline FrontSolution extract_semiwavefront(const ModelParams& model, const KernelSpec& kernel,
                                           double sigma, const SemiwaveSchedule& sched = {}) {
    if (sched.eps_ladder.empty() || sched.L_ladder.empty())
        throw param_error("extract_semiwavefront: empty schedule");
    ModelParams m = model;
    m.sigma = sigma;

    const std::size_t cells = std::max(sched.eps_ladder.size(), sched.L_ladder.size());
    auto at = [](const std::vector<double>& v, std::size_t i) {
        return v[std::min(i, v.size() - 1)];
    };

    SemiwaveMeta meta;
    meta.d0 = m.d0;
    BvpSolution prev, last;
    BvpProblem prob_last;
    for (std::size_t i = 0; i < cells; ++i) {
        BvpProblem prob;
        prob.model = m;
        prob.kernel = kernel;
        prob.L = at(sched.L_ladder, i);
        prob.h = std::min(sched.h, sigma / 2.5);
        prob.cutoff.eps = at(sched.eps_ladder, i);
        prob.newton_tol = sched.newton_tol;
        HomotopyResult hr;
        if (i == 0) {
            hr = homotopy_solve(prob);
        } else {
            hr = homotopy_solve(prob, &last.profile, &last.c);
        }
        if (!hr.success)
            throw solve_error("extract_semiwavefront: continuation stalled at tau = " +
                              format_full(hr.last_tau) + " (cell " + std::to_string(i) + ", L = " +
                              format_full(prob.L) + ", eps = " + format_full(prob.cutoff.eps) + ")");
        prev = std::move(last);
        last = std::move(hr.solution);
        prob_last = prob;
        meta.ladder.push_back({prob.cutoff.eps, prob.L, prob.spacing(), last.c,
                               last.newton_residual, last.bound_report.all_pass()});
    }

    if (cells >= 2) {
        meta.delta_c_last = std::abs(last.c - prev.c);
        // interior = inside the previous domain and outside both cutoff
        // bands (profiles differ by O(eps) inside the bands by construction)
        const double Lw = std::min(prev.profile.x_back(), -prev.profile.x0) - 1.0;
        const double band = 5.0 * at(sched.eps_ladder, cells - 2);
        double dp = 0.0;
        for (std::size_t j = 0; j < last.profile.size(); ++j) {
            const double x = last.profile.x(j);
            const double v = last.profile.values[j];
            if (x < -Lw || x > Lw || v < band || v > m.A() - band) continue;
            dp = std::max(dp, std::abs(v - prev.profile.at(x)));
        }
        meta.delta_profile_last = dp;
        meta.stabilized =
            meta.delta_c_last < sched.stabil_c_tol && meta.delta_profile_last < sched.stabil_profile_tol;
    }

    FrontSolution out;
    out.c = last.c;
    out.profile = last.profile;

    // True-equation residual (no cutoff): coincides with the solved system on
    // the plateau g == 1; reported there.
    {
        const double h = last.profile.h, d = m.d;
        GridProfile conv;
        const ConvolutionPlan plan(kernel, sigma, h);
        plan.apply(last.profile, conv);
        GridProfile res(last.profile.x0 + h, h, last.profile.size() - 2);
        double sup = 0.0;
        for (std::size_t j = 1; j + 1 < last.profile.size(); ++j) {
            const double um = last.profile.values[j - 1], u0 = last.profile.values[j],
                         up = last.profile.values[j + 1];
            const double lap = (up - 2.0 * u0 + um) / (h * h);
            const double adv = (up - um) / (2.0 * h);
            const double R = u0 * u0 * (1.0 - conv.values[j]) - d * u0;
            res.values[j - 1] = lap - out.c * adv + R;
            if (g_eps(u0, prob_last.cutoff, m.A()) >= 1.0 - 1e-12)
                sup = std::max(sup, std::abs(res.values[j - 1]));
        }
        out.residual = std::move(res);
        out.residual_sup = sup;
    }

    // Tail classification. The cutoff leaves an O(eps) band against each
    // Dirichlet end, so the achievable resolution of the tail statistic is
    // eps-limited; the tolerance reflects that.
    const double tol_class = std::max(1e-4, 5.0 * at(sched.eps_ladder, cells - 1));
    const LimitReport lims = classify_limits_report(last.profile, m, tol_class);
    out.left_limit = lims.left;
    out.right_limit = lims.right;
    out.converged = meta.stabilized;
    out.last_delta = meta.delta_profile_last;
    out.iterations = cells;

    out.bound_report = last.bound_report;
    out.bound_report.add("ladder_stabilized", meta.stabilized,
                         meta.delta_c_last, sched.stabil_c_tol);
    out.bound_report.add("left_limit_zero", out.left_limit == LimitClass::zero, lims.left_mean, 0.0);
    // Tail-limit gate: |c| > sqrt(m2) sigma A^2 forces a classified right tail.
    const double gate = std::sqrt(kernel.moment(2)) * sigma * m.A() * m.A();
    out.bound_report.add("tail_limit_gate",
                         std::abs(out.c) <= gate || out.right_limit != LimitClass::unresolved,
                         std::abs(out.c), gate);
    {
        const double eps0 = (1.0 - 4.0 * m.d) / 36.0;
        meta.c_upper_bound = 2.0 * std::sqrt(m.A());
        meta.c_lower_bound = -(2.0 / eps0) * m.A() * m.A() * kernel.tail_radius(eps0, m.A()) * sigma;
    }
    out.semiwave = std::move(meta);
    return out;
}

/// Comparison-function diagnostic: C0 = A^2 ||w'||_inf m1; the three roots
/// alpha < gamma < beta of s^2(1-s) - d s - C0 sigma = 0 (when they exist);
/// the solution psi of psi'' - c psi' + f(psi) - C0 sigma = 0 with
/// psi(-L) = alpha, psi(L) = beta at the front's own speed; and the pointwise
/// check psi <= omega.
struct BarrierReport {
    double C0 = kNaN, sigma = kNaN;
    double deriv_sup = kNaN;  // measured ||omega'||_inf
    bool roots_exist = false;
    double alpha = kNaN, gamma = kNaN, beta = kNaN;
    bool ordering_ok = false;  // alpha < 0 < a < gamma < beta < A
    bool psi_solved = false;
    bool psi_below = false;  // psi <= omega pointwise
    double min_gap = kNaN;   // min(omega - psi)
    GridProfile psi;
};

inline BarrierReport barrier_check(const FrontSolution& front, const ModelParams& model,
                                   const KernelSpec& kernel, double sigma) {
    BarrierReport rep;
    rep.sigma = sigma;
    const double A = model.A(), a = model.a(), d = model.d;
    const GridProfile& w = front.profile;

    double dsup = 0.0;
    for (std::size_t j = 0; j + 1 < w.size(); ++j)
        dsup = std::max(dsup, std::abs(w.values[j + 1] - w.values[j]) / w.h);
    rep.deriv_sup = dsup;
    rep.C0 = A * A * dsup * kernel.moment(1);
    const double s0 = rep.C0 * sigma;

    auto pfun = [&](double s) { return reaction_local(s, d) - s0; };
    const double s_peak = (1.0 + std::sqrt(1.0 - 3.0 * d)) / 3.0;
    if (s0 <= 1e-14) {  // vanishing shift: the roots are the equilibria
        rep.roots_exist = true;
        rep.alpha = 0.0;
        rep.gamma = a;
        rep.beta = A;
    } else {
        if (!(pfun(s_peak) > 0.0)) return rep;  // fewer than three real roots
        rep.roots_exist = true;
        rep.alpha = detail::bisect_root(-1.0, 0.0, pfun(-1.0), pfun(0.0), 1e-14, pfun);
        rep.gamma = detail::bisect_root(a, s_peak, pfun(a), pfun(s_peak), 1e-14, pfun);
        rep.beta = detail::bisect_root(s_peak, A, pfun(s_peak), pfun(A), 1e-14, pfun);
    }
    rep.ordering_ok = rep.alpha < 0.0 && 0.0 < a && a < rep.gamma && rep.gamma < rep.beta &&
                      rep.beta < A;

    // The MINIMAL solution of the psi problem at the front's own speed:
    // monotone iteration upward from the constant sub-solution alpha through
    // the shifted linear operator (D2 - c D1 - lam). Fixed-speed Newton is
    // translation degenerate here; the minimal solution is well defined and
    // sits below every super-solution, in particular below omega.
    {
        const double c = front.c;
        const double h = w.h;
        const std::size_t N = w.size() - 1;
        const double lam = 2.0;  // >= sup |f'| on [alpha, beta] for d < 2/9
        BandedMatrix B(N - 1, 1, 1);
        for (std::size_t j = 1; j < N; ++j) {
            const std::size_t row = j - 1;
            B(row, row) = -2.0 / (h * h) - lam;
            if (j - 1 >= 1) B(row, row - 1) = 1.0 / (h * h) + c / (2.0 * h);
            if (j + 1 <= N - 1) B(row, row + 1) = 1.0 / (h * h) - c / (2.0 * h);
        }
        const BandedLU lu(std::move(B));
        std::vector<double> psi(N - 1, rep.alpha), rhs(N - 1);
        double delta = kInf;
        int it = 0;
        for (; it < 200000 && delta >= 1e-13; ++it) {
            for (std::size_t j = 1; j < N; ++j) {
                rhs[j - 1] = -lam * psi[j - 1] - (reaction_local(psi[j - 1], d) - s0);
                if (j == 1) rhs[j - 1] -= rep.alpha * (1.0 / (h * h) + c / (2.0 * h));
                if (j == N - 1) rhs[j - 1] -= rep.beta * (1.0 / (h * h) - c / (2.0 * h));
            }
            lu.solve(rhs);
            delta = 0.0;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                delta = std::max(delta, std::abs(rhs[i] - psi[i]));
                psi[i] = rhs[i];
            }
        }
        rep.psi_solved = delta < 1e-13;
        if (rep.psi_solved) {
            rep.psi = w;
            rep.psi.values.front() = rep.alpha;
            rep.psi.values.back() = rep.beta;
            for (std::size_t j = 1; j < N; ++j) rep.psi.values[j] = psi[j - 1];
            rep.psi.left_ext = rep.alpha;
            rep.psi.right_ext = rep.beta;
            double gap = kInf;
            for (std::size_t j = 0; j < w.size(); ++j)
                gap = std::min(gap, w.values[j] - rep.psi.values[j]);
            rep.min_gap = gap;
            rep.psi_below = gap >= -1e-9;
        }
    }
    return rep;
}

}  // namespace wavefront

#endif
