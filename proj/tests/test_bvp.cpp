#include <doctest.h>

#include "oracles.hpp"
#include "wavefront/bvp_solver.hpp"
#include "wavefront/local_oracle.hpp"

using namespace wavefront;

TEST_SUITE_BEGIN("bvp");

namespace {

BvpProblem make_problem(double sigma = 0.1, double L = 20.0, double h = 0.02, double eps = 1e-2) {
    BvpProblem p;
    p.model = ModelParams(0.16, sigma, 0.1);
    p.kernel = KernelSpec::tophat();
    p.L = L;
    p.h = h;
    p.cutoff.eps = eps;
    return p;
}

}  // namespace

TEST_CASE("cutoff bump") {
    const double A = 0.8;
    const CutoffSpec cut{1e-2};
    CHECK(g_eps(A / 2.0, cut, A) == 1.0);
    CHECK(g_eps(0.0, cut, A) == 0.0);
    CHECK(g_eps(A, cut, A) == 0.0);
    CHECK(g_eps(2e-2, cut, A) == doctest::Approx(0.5).epsilon(1e-14));  // ramp midpoint
    CHECK(g_eps(A - 2e-2, cut, A) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g_eps(3e-2, cut, A) == 1.0);
    CHECK(g_eps(A - 3e-2, cut, A) == 1.0);
    CHECK_THROWS_AS(g_eps(0.1, CutoffSpec{0.2}, A), param_error);  // eps >= A/6

    // derivative consistency on the ramps
    for (double s : {1.3e-2, 2.4e-2, A - 1.7e-2}) {
        const double fd = (g_eps(s + 1e-7, cut, A) - g_eps(s - 1e-7, cut, A)) / 2e-7;
        CHECK(g_eps_deriv(s, cut, A) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("linear-problem solution") {
    const BvpProblem p = make_problem();
    const double A = p.model.A();
    const GridProfile w0 = tau0_solution(0.0, p);
    CHECK(w0.values.front() == 0.0);
    CHECK(w0.values.back() == A);
    CHECK(w0.at(0.0) == doctest::Approx(0.5 * A).epsilon(1e-14));

    const GridProfile wfast = tau0_solution(5.0, p);
    CHECK(wfast.at(0.0) < 1e-10);  // omega_0^c(0) -> 0 as c grows
    const GridProfile wneg = tau0_solution(-5.0, p);
    CHECK(wneg.at(0.0) == doctest::Approx(A).epsilon(1e-10));

    for (double c : {-2.0, -0.5, 0.3, 1.7}) {
        const GridProfile w = tau0_solution(c, p);
        CHECK(w.values.front() == 0.0);
        CHECK(w.values.back() == A);
    }
}

TEST_CASE("find_c0 pins the phase of the linear problem") {
    BvpProblem p = make_problem();
    p.model.d0 = p.model.A() / 2.0;
    CHECK(std::abs(find_c0(p)) < 1e-12);

    p.model.d0 = 0.1;  // < A/2, so c0 > 0
    const double c0 = find_c0(p);
    CHECK(c0 > 0.0);
    CHECK(std::abs(tau0_solution(c0, p).at(0.0) - 0.1) < 1e-12);

    // independent scalar bisection on the closed form
    const double A = p.model.A(), L = p.L;
    auto w0_at_0 = [&](double c) {
        return c == 0.0 ? 0.5 * A
                        : A * (std::exp(-c * L) - std::exp(-2.0 * c * L)) /
                              (1.0 - std::exp(-2.0 * c * L));
    };
    double lo = 0.0, hi = 4.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (w0_at_0(mid) > 0.1 ? lo : hi) = mid;
    }
    CHECK(c0 == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
}

TEST_CASE("assembled residual of the tau = 0 closed form is second order") {
    BvpProblem p1 = make_problem(0.1, 10.0, 0.02);
    const double c0 = find_c0(p1);
    const auto [r1, phase1] = assemble_system(tau0_solution(c0, p1), c0, p1, 0.0);
    double sup1 = 0.0;
    for (double v : r1.values) sup1 = std::max(sup1, std::abs(v));
    CHECK(std::abs(phase1) < 1e-12);

    BvpProblem p2 = make_problem(0.1, 10.0, 0.01);
    const auto [r2, phase2] = assemble_system(tau0_solution(c0, p2), c0, p2, 0.0);
    double sup2 = 0.0;
    for (double v : r2.values) sup2 = std::max(sup2, std::abs(v));

    CHECK(sup1 / sup2 > 3.0);
    CHECK(sup1 / sup2 < 5.0);
}

TEST_CASE("resolution and domain guards") {
    BvpProblem p = make_problem();
    p.h = 0.06;  // sigma/2 = 0.05
    CHECK_THROWS_AS(validate_problem(p), param_error);
    p = make_problem();
    p.L = 1.0;  // below L0 = (ln A - ln d0)/sqrt(A) ~ 2.33
    CHECK_THROWS_AS(validate_problem(p), param_error);
    p = make_problem();
    p.cutoff.eps = 0.2;
    CHECK_THROWS_AS(validate_problem(p), param_error);
    p = make_problem();
    p.model.d0 = 0.3;  // d0 > d
    CHECK_THROWS_AS(validate_problem(p), param_error);
}

TEST_CASE("homotopy reaches tau = 1 with certified bounds") {
    const BvpProblem p = make_problem();
    const HomotopyResult hr = homotopy_solve(p);
    REQUIRE(hr.success);
    CHECK(hr.last_tau == 1.0);
    CHECK(hr.solution.newton_residual < p.newton_tol);
    CHECK(hr.solution.bound_report.all_pass());

    const double A = p.model.A();
    double vmin = kInf, vmax = -kInf;
    for (double v : hr.solution.profile.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    CHECK(vmin >= -1e-12);
    CHECK(vmax <= A + 1e-12);
    CHECK(std::abs(hr.solution.profile.at(0.0) - 0.1) < 1e-10);
    for (std::size_t j = 0; j < p.half_points(); ++j)
        CHECK(hr.solution.profile.values[j + 1] >= hr.solution.profile.values[j] - 1e-9);

    // homotopy start matches the closed form
    CHECK(hr.trace.front().tau == 0.0);
    const double c0 = find_c0(p);
    CHECK(std::abs(tau0_solution(c0, p).at(0.0) - p.model.d0) < 1e-12);
}

TEST_CASE("speed is second-order accurate in h") {
    // sigma/h >= 4 keeps the kernel quadrature inside its asymptotic range
    const BvpProblem pa = make_problem(0.2, 15.0, 0.04);
    const BvpProblem pb = make_problem(0.2, 15.0, 0.02);
    const BvpProblem pc = make_problem(0.2, 15.0, 0.01);
    const double ca = homotopy_solve(pa).solution.c;
    const double cb = homotopy_solve(pb).solution.c;
    const double cc = homotopy_solve(pc).solution.c;
    const double ratio = (ca - cb) / (cb - cc);
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("verify_bounds arithmetic") {
    const BvpProblem p = make_problem();
    const double eps0 = (1.0 - 4.0 * p.model.d) / 36.0;
    CHECK(eps0 == doctest::Approx(0.01).epsilon(1e-15));
    BvpSolution sol;
    sol.c = 0.3;
    sol.tau = 1.0;
    sol.profile = tau0_solution(0.3, p);
    const BoundReport rep = verify_bounds(sol, p);
    const BoundCheck* up = rep.find("speed_upper");
    REQUIRE(up != nullptr);
    CHECK(up->bound == doctest::Approx(2.0 * std::sqrt(0.8)).epsilon(1e-15));
    const BoundCheck* lo = rep.find("speed_lower");
    REQUIRE(lo != nullptr);
    // c_min = -(2/eps0) A^2 R0 sigma with R0 the tail radius at eps0
    const double R0 = p.kernel.tail_radius(eps0, p.model.A());
    CHECK(lo->bound == doctest::Approx(-(2.0 / eps0) * 0.64 * R0 * 0.1).epsilon(1e-12));
}

TEST_CASE("semi-wavefront ladder stabilizes and classifies its tails") {
    const KernelSpec k = KernelSpec::tophat();
    SemiwaveSchedule sched;
    sched.eps_ladder = {1e-2, 1e-4, 1e-5};
    sched.L_ladder = {25.0, 40.0, 40.0};
    sched.h = 0.02;
    const ModelParams m(0.16, 0.1, 0.1);
    const FrontSolution f = extract_semiwavefront(m, k, 0.1, sched);

    CHECK(f.left_limit == LimitClass::zero);
    CHECK(f.right_limit == LimitClass::A);
    REQUIRE(f.semiwave.has_value());
    CHECK(f.semiwave->ladder.size() == 3);
    CHECK(f.semiwave->stabilized);
    CHECK(f.c > 0.0);
    CHECK(f.c <= f.semiwave->c_upper_bound);
    CHECK(f.c >= f.semiwave->c_lower_bound);
    CHECK(f.residual_sup < 1e-8);
    CHECK(f.bound_report.all_pass());

    // Lemma-style gate: fast enough speed forces a classified right tail
    const double gate = std::sqrt(k.moment(2)) * 0.1 * 0.64;
    if (std::abs(f.c) > gate) CHECK(f.right_limit != LimitClass::unresolved);
}

TEST_CASE("barrier diagnostic at small sigma") {
    const KernelSpec k = KernelSpec::tophat();
    SemiwaveSchedule sched;
    sched.eps_ladder = {1e-2, 1e-4, 1e-5};
    sched.L_ladder = {25.0, 40.0, 40.0};
    sched.h = 0.02;
    const ModelParams m(0.16, 0.02, 0.1);
    const FrontSolution f = extract_semiwavefront(m, k, 0.02, sched);
    const BarrierReport rep = barrier_check(f, m, k, 0.02);

    REQUIRE(rep.roots_exist);
    CHECK(rep.ordering_ok);
    CHECK(rep.alpha < 0.0);
    CHECK(rep.gamma > m.a());
    CHECK(rep.beta < m.A());
    CHECK(rep.beta > rep.gamma);
    REQUIRE(rep.psi_solved);
    CHECK(rep.psi_below);

    // sigma = 0 exactly: the roots coincide with the equilibria
    FrontSolution f0 = f;
    // C0 scales with sigma through the product C0 * sigma only
    const BarrierReport rep0 = barrier_check(f0, m, k, 0.0);
    CHECK(rep0.alpha == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep0.gamma == doctest::Approx(m.a()).epsilon(1e-10));
    CHECK(rep0.beta == doctest::Approx(m.A()).epsilon(1e-10));
}

TEST_SUITE_END();
