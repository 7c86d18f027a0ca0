// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failures. Individual criteria can be selected by number on the command
// line: `acceptance 3 7`.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wavefront/io.hpp"
#include "wavefront/local_oracle.hpp"

using namespace wavefront;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    Outcome& out;
    void operator()(bool ok, const std::string& what) {
        if (!ok) {
            out.pass = false;
            out.detail += (out.detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---- 1. equilibria identities ----------------------------------------------

Outcome criterion1() {
    Outcome out;
    Check check{out};
    auto gen = oracles::rng(101);
    std::uniform_real_distribution<double> Ud(0.0, 2.0 / 9.0);
    std::uniform_real_distribution<double> Uu(-1.0, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double d = Ud(gen);
        const Equilibria e = equilibria(d);
        check(std::abs(e.a + e.A - 1.0) < 1e-14, "a+A != 1 at d=" + fmt(d));
        check(std::abs(e.a * e.A - d) < 1e-14, "aA != d at d=" + fmt(d));
        for (int j = 0; j < 64; ++j) {
            const double u = Uu(gen);
            const double res = std::abs(reaction_local(u, d) - u * (u - e.a) * (e.A - u));
            worst = std::max(worst, res);
        }
    }
    check(worst < 1e-14, "factorization residual " + fmt(worst));
    out.detail = "worst factorization residual " + fmt(worst);
    return out;
}

// ---- 2. convolution oracle equivalence -------------------------------------

Outcome criterion2() {
    Outcome out;
    Check check{out};
    auto gen = oracles::rng(202);
    const KernelSpec kernels[3] = {KernelSpec::tophat(), KernelSpec::gaussian(),
                                   KernelSpec::laplace()};
    std::uniform_real_distribution<double> Us(0.2, 1.0);
    std::uniform_int_distribution<int> Un(16, 256);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const double sigma = Us(gen);
        GridProfile p = oracles::random_profile(gen, static_cast<std::size_t>(Un(gen)), sigma / 5.0,
                                                0.0, 1.0);
        for (const auto& k : kernels) {
            const GridProfile a = convolve(p, k, sigma);
            const GridProfile b = oracles::brute_convolve(p, k, sigma);
            for (std::size_t i = 0; i < p.size(); ++i)
                worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
        }
    }
    check(worst < 1e-10, "sup error " + fmt(worst));
    out.detail = "sup error vs brute force " + fmt(worst);
    return out;
}

// ---- 3. dispersion consistency ---------------------------------------------

Outcome criterion3() {
    Outcome out;
    Check check{out};
    const ModelParams m(0.16, 1.0);
    const KernelSpec kernels[3] = {KernelSpec::tophat(), KernelSpec::gaussian(),
                                   KernelSpec::laplace()};
    for (const auto& k : kernels) {
        // 20 pairs where roots exist
        int pairs = 0;
        for (double sigma : {0.1, 0.3, 0.6, 1.0, 1.5}) {
            const double cs = c_star(sigma, m, k);
            for (double dc : {0.05, 0.3, 1.0, 2.5}) {
                const double c = (std::isfinite(cs) ? cs : 0.0) + dc;
                const DispersionResult r = dispersion_roots(c, sigma, m, k);
                if (!r.both_exist()) continue;
                ++pairs;
                for (int i : {1, 2}) {
                    const auto& root = (i == 1) ? *r.root1 : *r.root2;
                    const double val = phi(i, c, sigma, root.lambda, m, k);
                    check(std::abs(val) < 1e-10, std::string(to_string(k.family())) +
                                                     ": |Phi(lambda)| = " + fmt(std::abs(val)));
                    check(phi(i, c, sigma, root.lambda - root.eps, m, k) > 0.0,
                          std::string(to_string(k.family())) + ": margin not positive");
                }
            }
        }
        check(pairs >= 20, std::string(to_string(k.family())) + ": only " + std::to_string(pairs) +
                               " root pairs");
        // monotone threshold over the ladder 0.05 .. 2
        double prev = -kInf;
        for (int i = 1; i <= 40; ++i) {
            const double sigma = 0.05 * i;
            const double cs = c_star(sigma, m, k);
            check(cs >= prev - 1e-8, std::string(to_string(k.family())) + ": c_* inversion at sigma=" +
                                         fmt(sigma));
            prev = cs;
        }
    }
    return out;
}

// ---- 4. sub/super certification --------------------------------------------

Outcome criterion4() {
    Outcome out;
    Check check{out};
    const KernelSpec k = KernelSpec::tophat();
    for (double d : {0.0, 0.1, 0.16}) {
        for (double sigma : {0.1, 0.5}) {
            const ModelParams m(d, sigma);
            const double c = std::max(mu_threshold(m), c_star(sigma, m, k)) + 0.5;
            const SubSuperCertificate cert = certify(c, sigma, m, k);
            const std::string tag = "d=" + fmt(d) + ", sigma=" + fmt(sigma);
            check(cert.sub_residual_max <= cert.tol_q,
                  tag + ": L[sub] max " + fmt(cert.sub_residual_max) + " > tol_q " + fmt(cert.tol_q));
            check(cert.sup_residual_min >= -cert.tol_q,
                  tag + ": L[super] min " + fmt(cert.sup_residual_min));
            check(cert.ordering_margin >= -1e-12, tag + ": ordering margin " + fmt(cert.ordering_margin));
        }
    }
    return out;
}

// ---- 5. T-operator fixed points and monotonicity ----------------------------

Outcome criterion5() {
    Outcome out;
    Check check{out};
    const ModelParams m(0.16, 0.2);
    const KernelSpec k = KernelSpec::tophat();
    for (double level : {m.a(), m.A()}) {
        GridProfile p(-30.0, 0.01, 6001, level);
        p.left_ext = p.right_ext = level;
        const GridProfile t = T_op(p, 3.0, 0.2, m, k);
        double worst = 0.0;
        for (double v : t.values) worst = std::max(worst, std::abs(v - level));
        check(worst < 1e-10, "fixed point " + fmt(level) + " drift " + fmt(worst));
    }
    auto gen = oracles::rng(505);
    for (int t = 0; t < 50; ++t) {
        GridProfile p = oracles::random_nondecreasing(gen, 100 + t, 0.05, 0.0, m.A());
        const GridProfile q = T_op(p, 3.0, 0.2, m, k);
        for (std::size_t i = 0; i + 1 < q.size(); ++i)
            check(q.values[i + 1] >= q.values[i] - 1e-12, "monotonicity broken at trial " +
                                                              std::to_string(t));
    }
    return out;
}

// ---- 6. monotone front -------------------------------------------------------

FrontSolution criterion6_solve() {
    const ModelParams m(0.16, 0.2);
    MonotoneOptions opt;
    opt.xmin = -60.0;
    opt.xmax = 60.0;
    opt.h = 0.01;
    opt.tol = 1e-10;
    return solve_monotone(3.0, 0.2, m, KernelSpec::tophat(), opt);
}

Outcome criterion6() {
    Outcome out;
    Check check{out};
    const ModelParams m(0.16, 0.2);
    const FrontSolution f = criterion6_solve();
    check(f.converged, "not converged");
    check(f.left_limit == LimitClass::a, "left limit not a");
    check(f.right_limit == LimitClass::A, "right limit not A");
    const BoundCheck* ll = f.bound_report.find("left_limit_a");
    const BoundCheck* rr = f.bound_report.find("right_limit_A");
    check(ll && std::abs(ll->measured - m.a()) < 1e-4, "left tail mean off a by more than 1e-4");
    check(rr && std::abs(rr->measured - m.A()) < 1e-4, "right tail mean off A by more than 1e-4");
    check(f.residual_sup < 1e-6, "residual_sup " + fmt(f.residual_sup));
    double slope_min = kInf;
    for (std::size_t i = 0; i + 1 < f.profile.size(); ++i)
        slope_min = std::min(slope_min, f.profile.values[i + 1] - f.profile.values[i]);
    check(slope_min >= -1e-12, "profile decreasing somewhere");
    // chain ordering within the discretization allowance (the solver aborts
    // on anything beyond it; the raw worst breach is reported here)
    check(f.monotone->max_chain_violation <= 25.0 * 0.01 * 0.01 * m.A() + 1e-11,
          "chain violation " + fmt(f.monotone->max_chain_violation));
    check(f.monotone->max_slope <= f.monotone->mu1 * m.A() + 1e-8,
          "derivative bound " + fmt(f.monotone->max_slope));
    out.detail = "residual_sup " + fmt(f.residual_sup) + ", iterations " +
                 std::to_string(f.iterations);
    return out;
}

// ---- 7. sigma -> 0 front convergence ----------------------------------------

Outcome criterion7() {
    Outcome out;
    Check check{out};
    const KernelSpec k = KernelSpec::tophat();
    const ModelParams mloc(0.16, 0.0);
    const FrontSolution ref = local_bvp_front(mloc, 3.0, LocalMode::a_to_A_fixed_c, {70.0, 0.001, 1e-10});
    double prev = kInf;
    std::string dists;
    for (double sigma : {0.2, 0.1, 0.05, 0.01, 1e-3}) {
        const ModelParams m(0.16, sigma);
        MonotoneOptions opt;
        opt.xmin = -60.0;
        opt.xmax = 60.0;
        opt.h = std::min(0.01, sigma / 4.0);
        const FrontSolution f = solve_monotone(3.0, sigma, m, k, opt);
        const double dist = aligned_sup_distance(f.profile, ref.profile, 0.5, 10.0);
        dists += (dists.empty() ? "" : " > ") + fmt(dist);
        check(dist < prev + 1e-12, "distance not decreasing at sigma=" + fmt(sigma));
        prev = dist;
        if (sigma == 1e-3) check(dist < 5e-3, "distance at sigma=1e-3 is " + fmt(dist));
    }
    out.detail = dists;
    return out;
}

// ---- 8. homotopy start exactness ---------------------------------------------

Outcome criterion8() {
    Outcome out;
    Check check{out};
    BvpProblem p;
    p.model = ModelParams(0.16, 0.1, 0.1);
    p.kernel = KernelSpec::tophat();
    p.L = 10.0;
    p.cutoff.eps = 1e-2;

    p.h = 0.02;
    const double c0 = find_c0(p);
    const auto [r1, ph1] = assemble_system(tau0_solution(c0, p), c0, p, 0.0);
    double sup1 = 0.0;
    for (double v : r1.values) sup1 = std::max(sup1, std::abs(v));
    p.h = 0.01;
    const auto [r2, ph2] = assemble_system(tau0_solution(c0, p), c0, p, 0.0);
    double sup2 = 0.0;
    for (double v : r2.values) sup2 = std::max(sup2, std::abs(v));
    const double ratio = sup1 / sup2;
    check(ratio > 3.0 && ratio < 5.0, "refinement ratio " + fmt(ratio));
    check(std::abs(ph2) < 1e-12, "phase residual " + fmt(ph2));

    // independent scalar oracle for c0
    const double A = p.model.A(), L = p.L;
    auto w0 = [&](double c) {
        return c == 0.0 ? 0.5 * A
                        : A * (std::exp(-c * L) - std::exp(-2.0 * c * L)) /
                              (1.0 - std::exp(-2.0 * c * L));
    };
    double lo = 0.0, hi = 4.0;
    for (int i = 0; i < 200; ++i) (w0(0.5 * (lo + hi)) > 0.1 ? lo : hi) = 0.5 * (lo + hi);
    check(std::abs(c0 - 0.5 * (lo + hi)) < 1e-10, "find_c0 vs oracle " + fmt(c0 - 0.5 * (lo + hi)));
    out.detail = "order ratio " + fmt(ratio) + ", c0 " + fmt(c0);
    return out;
}

// ---- 9. semi-wavefront bounds -------------------------------------------------

HomotopyResult criterion9_solve() {
    BvpProblem p;
    p.model = ModelParams(0.16, 0.1, 0.1);
    p.kernel = KernelSpec::tophat();
    p.L = 40.0;
    p.h = 0.01;
    p.cutoff.eps = 1e-3;
    return homotopy_solve(p);
}

Outcome criterion9() {
    Outcome out;
    Check check{out};
    const HomotopyResult hr = criterion9_solve();
    check(hr.success, "homotopy did not reach tau = 1");
    const BvpSolution& sol = hr.solution;
    const ModelParams& m = ModelParams(0.16, 0.1, 0.1);
    double vmin = kInf, vmax = -kInf;
    for (double v : sol.profile.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    check(vmin >= -1e-12 && vmax <= m.A() + 1e-12, "range violation");
    for (std::size_t j = 0; j + 1 < sol.profile.size() / 2 + 1; ++j)
        if (sol.profile.values[j + 1] < sol.profile.values[j] - 1e-9) {
            check(false, "not nondecreasing on [-L, 0]");
            break;
        }
    check(std::abs(sol.profile.at(0.0) - 0.1) < 1e-10, "phase |w(0)-d0| violated");
    const double eps0 = 0.01;
    const double R0 = KernelSpec::tophat().tail_radius(eps0, m.A());
    const double cmin = -(2.0 / eps0) * m.A() * m.A() * R0 * 0.1;
    const double cmax = 2.0 * std::sqrt(m.A());
    check(sol.c >= cmin && sol.c <= cmax,
          "speed " + fmt(sol.c) + " outside [" + fmt(cmin) + ", " + fmt(cmax) + "]");
    const auto lims = classify_limits(sol.profile, m);
    check(lims.first == LimitClass::zero, "left limit not 0");
    check(sol.bound_report.all_pass(), "stored bound report has failures");
    out.detail = "c = " + fmt(sol.c);
    return out;
}

// ---- 10. wavefronts at small sigma and the speed limit -------------------------

Outcome criterion10() {
    Outcome out;
    Check check{out};
    const KernelSpec k = KernelSpec::tophat();
    const double exact = (3.0 * 0.8 - 2.0) / std::sqrt(2.0);

    const std::vector<double> ladder = {0.2, 0.1, 0.05, 0.01, 3e-3, 1e-3};
    std::vector<FrontSolution> fronts;
    std::vector<bool> rightA;
    for (double sigma : ladder) {
        const ModelParams m(0.16, sigma, 0.1);
        fronts.push_back(extract_semiwavefront(m, k, sigma));
        rightA.push_back(fronts.back().right_limit == LimitClass::A);
    }
    // measured threshold: the largest ladder sigma below which every right
    // limit classifies as A
    std::size_t first_ok = ladder.size();
    for (std::size_t i = ladder.size(); i-- > 0;) {
        if (rightA[i])
            first_ok = i;
        else
            break;
    }
    check(first_ok < ladder.size(), "no sigma classified A on the right");
    std::string cs;
    for (std::size_t i = first_ok; i < ladder.size(); ++i) {
        check(rightA[i], "right limit not A below the measured threshold");
        check(fronts[i].c > 0.0, "c^* not positive at sigma=" + fmt(ladder[i]));
        cs += (cs.empty() ? "c^* = " : ", ") + fmt(fronts[i].c);
    }
    const double c_last = fronts.back().c;
    check(std::abs(c_last - exact) / exact < 0.01,
          "|c^*(1e-3) - exact|/exact = " + fmt(std::abs(c_last - exact) / exact));
    // the exact local speed is independently confirmed by the shooting oracle
    const double shot = shooting_speed(ModelParams(0.16, 0.0, 0.1), ShootMode::zero_to_A);
    check(std::abs(shot - exact) < 1e-8, "shooting oracle disagrees: " + fmt(shot));
    out.detail = cs + "; exact " + fmt(exact);
    return out;
}

// ---- 11. barrier diagnostic ----------------------------------------------------

Outcome criterion11() {
    Outcome out;
    Check check{out};
    const KernelSpec k = KernelSpec::tophat();
    const ModelParams m(0.16, 0.01, 0.1);
    const FrontSolution f = extract_semiwavefront(m, k, 0.01);
    const BarrierReport rep = barrier_check(f, m, k, 0.01);
    check(rep.roots_exist, "cubic roots missing");
    check(rep.ordering_ok, "root ordering alpha<0<a<gamma<beta<A violated");
    check(rep.psi_solved, "barrier BVP did not converge");
    check(rep.psi_below, "psi exceeds omega somewhere (min gap " + fmt(rep.min_gap) + ")");
    out.detail = "alpha " + fmt(rep.alpha) + ", gamma " + fmt(rep.gamma) + ", beta " +
                 fmt(rep.beta) + ", min gap " + fmt(rep.min_gap);
    return out;
}

// ---- 12. determinism -----------------------------------------------------------

Outcome criterion12() {
    Outcome out;
    Check check{out};
    // criterion-6 artifacts
    const FrontSolution f1 = criterion6_solve();
    const FrontSolution f2 = criterion6_solve();
    const std::string p1 = io::profile_csv(f1.profile, f1.residual);
    const std::string p2 = io::profile_csv(f2.profile, f2.residual);
    check(p1 == p2, "monotone profile CSV differs between reruns");
    const std::string j1 = io::front_result_json(f1).dump(2);
    const std::string j2 = io::front_result_json(f2).dump(2);
    check(j1 == j2, "monotone JSON differs between reruns");
    // criterion-9 artifacts
    const HomotopyResult h1 = criterion9_solve();
    const HomotopyResult h2 = criterion9_solve();
    check(io::profile_csv(h1.solution.profile, GridProfile{}) ==
              io::profile_csv(h2.solution.profile, GridProfile{}),
          "bvp profile CSV differs between reruns");
    check(io::to_json(h1.solution.bound_report).dump(2) ==
              io::to_json(h2.solution.bound_report).dump(2),
          "bvp bound report differs between reruns");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> fn;
    };
    const std::vector<Entry> entries = {
        {1, "equilibria identities", criterion1},
        {2, "convolution oracle equivalence", criterion2},
        {3, "dispersion consistency", criterion3},
        {4, "sub/super certification", criterion4},
        {5, "T-operator fixed points", criterion5},
        {6, "monotone front", criterion6},
        {7, "sigma->0 front convergence", criterion7},
        {8, "homotopy start exactness", criterion8},
        {9, "semi-wavefront bounds", criterion9},
        {10, "wavefront at small sigma and speed limit", criterion10},
        {11, "barrier diagnostic", criterion11},
        {12, "determinism", criterion12},
    };

    int failures = 0;
    for (const auto& e : entries) {
        if (!wanted.empty() && !wanted.count(e.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = e.fn();
        } catch (const std::exception& ex) {
            out.pass = false;
            out.detail = std::string("exception: ") + ex.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %2d: %s (%.1fs)%s%s\n", out.pass ? "PASS" : "FAIL", e.id,
                    e.name, secs, out.detail.empty() ? "" : " -- ", out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    return failures;
}
