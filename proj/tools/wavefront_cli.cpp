// Command-line front end: traveling-wave solvers for the nonlocal bistable
// reaction-diffusion equation u_t = u_xx + u^2 (1 - J_sigma * u) - d u.
//
// Subcommands: equilibria, dispersion, c-star, solve-monotone, solve-bvp,
// sweep-sigma, subsuper, local-oracle, verify. All numeric output is
// deterministic: CSV cells carry 17 significant digits, JSON embeds the
// resolved configuration, and nothing time-dependent is ever written.
//
// Exit codes: 0 success, 1 solver non-convergence (diagnostics still
// written), 2 invalid parameters or usage.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wavefront/io.hpp"
#include "wavefront/local_oracle.hpp"
#include "wavefront/sweep.hpp"

namespace fs = std::filesystem;
using namespace wavefront;
using nlohmann::json;

namespace {

struct KernelArgs {
    std::string family = "tophat";
    std::string csv_path;

    KernelSpec build() const {
        if (family == "tophat") return KernelSpec::tophat();
        if (family == "gaussian") return KernelSpec::gaussian();
        if (family == "laplace") return KernelSpec::laplace();
        if (family == "tabulated") {
            if (csv_path.empty())
                throw param_error("tabulated kernel requires --kernel-csv <file>");
            KernelSpec k = KernelSpec::from_csv(csv_path);
            if (k.tail_warning())
                std::cerr << "warning: tabulated kernel carries tail mass > 1e-8 past its data range\n";
            return k;
        }
        throw param_error("unknown kernel '" + family + "'");
    }

    json to_json() const {
        json j = {{"family", family}};
        if (!csv_path.empty()) j["csv"] = csv_path;
        return j;
    }
};

void add_kernel_flags(CLI::App* cmd, KernelArgs& k) {
    cmd->add_option("--kernel", k.family, "kernel family: tophat|gaussian|laplace|tabulated")
        ->default_val("tophat");
    cmd->add_option("--kernel-csv", k.csv_path, "two-column CSV (offset,density) for --kernel tabulated");
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw param_error("cannot create output directory '" + dir + "': " + ec.message());
}

// Flat key=value config support: keys name long flags of the invoked
// subcommand. Values given on the command line win — a key is only injected
// when its flag is absent from argv.
std::vector<std::string> inject_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw param_error("cannot open config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq_pos = line.find('=');
        if (eq_pos == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq_pos));
        const std::string value = trim(line.substr(eq_pos + 1));
        if (key.empty()) continue;
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (present) continue;
        if (value == "true" || value.empty()) {
            args.push_back(flag);
        } else {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

json limit_json(LimitClass c) { return std::string(to_string(c)); }

// ----- solve-monotone ------------------------------------------------------

struct MonotoneArgs {
    double d = 0.16, sigma = 0.2, c = 3.0;
    KernelArgs kernel;
    MonotoneOptions opt;
    std::string out_dir;
};

int run_solve_monotone(const MonotoneArgs& a) {
    const ModelParams model(a.d, a.sigma);
    const KernelSpec kernel = a.kernel.build();
    const ValidationReport val = validate(model, ConnectionMode::a_to_A);

    FrontSolution f = solve_monotone(a.c, a.sigma, model, kernel, a.opt);

    json summary = {
        {"tool", "solve-monotone"},
        {"config",
         {{"d", a.d},
          {"sigma", a.sigma},
          {"c", a.c},
          {"kernel", a.kernel.to_json()},
          {"xmin", a.opt.xmin},
          {"xmax", a.opt.xmax},
          {"h", a.opt.h},
          {"tol", a.opt.tol},
          {"max_iter", a.opt.max_iter},
          {"margin", a.opt.margin},
          {"allow_critical", a.opt.allow_critical},
          {"allow_outside_theorem_range", a.opt.allow_outside_theorem_range}}},
        {"validation", io::to_json(val)},
        {"result", io::front_result_json(f)},
        {"bound_report", io::to_json(f.bound_report)},
        {"profile_csv", "profile.csv"},
    };

    if (!a.out_dir.empty()) {
        ensure_dir(a.out_dir);
        io::save_text((fs::path(a.out_dir) / "profile.csv").string(),
                      io::profile_csv(f.profile, f.residual));
        io::write_json_file((fs::path(a.out_dir) / "summary.json").string(), summary);
    }
    std::cout << summary.dump(2) << '\n';
    return f.converged ? 0 : 1;
}

// ----- solve-bvp -----------------------------------------------------------

struct BvpArgs {
    double d = 0.16, d0 = 0.1, sigma = 0.1;
    KernelArgs kernel;
    double L = 40.0, eps = 1e-3, h = 0.01, tau_target = 1.0, newton_tol = 1e-10;
    std::string out_dir;
};

int run_solve_bvp(const BvpArgs& a) {
    BvpProblem p;
    p.model = ModelParams(a.d, a.sigma, a.d0);
    p.kernel = a.kernel.build();
    p.L = a.L;
    p.h = a.h;
    p.cutoff.eps = a.eps;
    p.tau_target = a.tau_target;
    p.newton_tol = a.newton_tol;
    const ValidationReport val = validate(p.model, ConnectionMode::zero_to_A);

    const HomotopyResult hr = homotopy_solve(p);

    json trace = json::array();
    for (const auto& s : hr.trace)
        trace.push_back({{"tau", s.tau},
                         {"c", s.c},
                         {"newton_iterations", s.newton_iterations},
                         {"residual", s.residual}});
    json summary = {
        {"tool", "solve-bvp"},
        {"config",
         {{"d", a.d},
          {"d0", a.d0},
          {"sigma", a.sigma},
          {"kernel", a.kernel.to_json()},
          {"L", a.L},
          {"eps", a.eps},
          {"h", a.h},
          {"tau_target", a.tau_target},
          {"newton_tol", a.newton_tol}}},
        {"validation", io::to_json(val)},
        {"result",
         {{"success", hr.success},
          {"last_tau", hr.last_tau},
          {"c", hr.solution.c},
          {"newton_residual", hr.solution.newton_residual}}},
        {"bound_report", io::to_json(hr.solution.bound_report)},
        {"homotopy_trace", trace},
        {"profile_csv", "profile.csv"},
    };

    if (!a.out_dir.empty()) {
        ensure_dir(a.out_dir);
        io::save_text((fs::path(a.out_dir) / "profile.csv").string(),
                      io::profile_csv(hr.solution.profile, GridProfile{}));
        io::write_json_file((fs::path(a.out_dir) / "summary.json").string(), summary);
    }
    std::cout << summary.dump(2) << '\n';
    return hr.success && hr.solution.bound_report.all_pass() ? 0 : 1;
}

// ----- c-star --------------------------------------------------------------

struct CStarArgs {
    double d = 0.16;
    KernelArgs kernel;
    std::string sigma_ladder;
    double sigma = kNaN;
    std::string out_dir;
};

int run_c_star(const CStarArgs& a) {
    const ModelParams model(a.d, 1.0);
    const KernelSpec kernel = a.kernel.build();

    std::vector<double> sigmas;
    if (!a.sigma_ladder.empty())
        sigmas = io::parse_ladder(a.sigma_ladder);
    else if (std::isfinite(a.sigma))
        sigmas.push_back(a.sigma);
    else
        throw param_error("c-star: pass --sigma or --sigma-ladder");

    struct Row {
        double sigma, cs, l1, l2, e1, e2;
    };
    const auto cells = run_cells<Row>(sigmas.size(), [&](std::size_t i) {
        Row r{sigmas[i], kNaN, kNaN, kNaN, kNaN, kNaN};
        r.cs = c_star(r.sigma, model, kernel);
        if (std::isfinite(r.cs)) {
            const DispersionResult dr = dispersion_roots(r.cs, r.sigma, model, kernel);
            if (dr.root1) {
                r.l1 = dr.root1->lambda;
                r.e1 = dr.root1->eps;
            }
            if (dr.root2) {
                r.l2 = dr.root2->lambda;
                r.e2 = dr.root2->eps;
            }
        }
        return r;
    });

    io::CsvWriter csv({"sigma", "c_star", "lambda1", "lambda2", "eps1", "eps2"});
    bool all_ok = true;
    for (const auto& cell : cells) {
        if (!cell.ok) {
            all_ok = false;
            continue;
        }
        const Row& r = cell.result;
        csv.row(r.sigma, r.cs, r.l1, r.l2, r.e1, r.e2);
    }
    if (!a.out_dir.empty()) {
        ensure_dir(a.out_dir);
        csv.save((fs::path(a.out_dir) / "c_star.csv").string());
    }
    std::cout << csv.str();
    return all_ok ? 0 : 1;
}

// ----- sweep-sigma ---------------------------------------------------------

struct SweepArgs {
    double d = 0.16, d0 = 0.1;
    KernelArgs kernel;
    std::string sigma_ladder = "0.2,0.1,0.05";
    std::string eps_ladder = "1e-2,1e-3,1e-4,1e-5";
    std::string L_ladder = "20,30,40,50";
    double h = 0.01;
    std::string out_dir;
};

int run_sweep_sigma(const SweepArgs& a) {
    if (a.out_dir.empty()) throw param_error("sweep-sigma: --out directory required");
    ensure_dir(a.out_dir);
    const KernelSpec kernel = a.kernel.build();
    const std::vector<double> sigmas = io::parse_ladder(a.sigma_ladder);
    SemiwaveSchedule sched;
    sched.eps_ladder = io::parse_ladder(a.eps_ladder);
    sched.L_ladder = io::parse_ladder(a.L_ladder);
    sched.h = a.h;

    const auto cells = run_cells<FrontSolution>(sigmas.size(), [&](std::size_t i) {
        const ModelParams model(a.d, sigmas[i], a.d0);
        return extract_semiwavefront(model, kernel, sigmas[i], sched);
    });

    io::CsvWriter csv({"sigma", "c_star_semi", "right_limit_class", "residual", "bounds_pass"});
    bool all_ok = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& cell = cells[i];
        json cj = {{"tool", "sweep-sigma-cell"},
                   {"config",
                    {{"d", a.d},
                     {"d0", a.d0},
                     {"sigma", sigmas[i]},
                     {"kernel", a.kernel.to_json()},
                     {"eps_ladder", a.eps_ladder},
                     {"L_ladder", a.L_ladder},
                     {"h", a.h}}},
                   {"validation", io::to_json(validate(ModelParams(a.d, sigmas[i], a.d0),
                                                       ConnectionMode::zero_to_A))}};
        if (cell.ok) {
            const FrontSolution& f = cell.result;
            csv.row(sigmas[i], f.c, to_string(f.right_limit), f.residual_sup,
                    f.bound_report.all_pass() ? 1 : 0);
            cj["result"] = io::front_result_json(f);
            cj["bound_report"] = io::to_json(f.bound_report);
            const std::string pf = "cell_" + std::to_string(i) + "_profile.csv";
            io::save_text((fs::path(a.out_dir) / pf).string(), io::profile_csv(f.profile, f.residual));
            cj["profile_csv"] = pf;
            all_ok = all_ok && f.bound_report.all_pass();
        } else {
            csv.row(sigmas[i], kNaN, "failed", kNaN, 0);
            cj["error"] = cell.error;
            all_ok = false;
        }
        io::write_json_file((fs::path(a.out_dir) / ("cell_" + std::to_string(i) + ".json")).string(), cj);
    }
    csv.save((fs::path(a.out_dir) / "sweep.csv").string());
    std::cout << csv.str();
    return all_ok ? 0 : 1;
}

// ----- subsuper dump -------------------------------------------------------

struct SubsuperArgs {
    double d = 0.16, sigma = 0.2, c = 3.0, h = 0.01;
    KernelArgs kernel;
    std::string out_dir;
};

int run_subsuper_dump(const SubsuperArgs& a) {
    const ModelParams model(a.d, a.sigma);
    const KernelSpec kernel = a.kernel.build();
    const SubSuperCertificate cert = certify(a.c, a.sigma, model, kernel);

    const double A = model.A();
    GridProfile sub = sample_on(cert.grid, cert.sub, cert.sub.limit_left(), A);
    GridProfile sup = sample_on(cert.grid, cert.sup, cert.sup.mu_b, A);
    GridProfile rsub = residual_L(sub, a.c, a.sigma, model, kernel);
    GridProfile rsup = residual_L(sup, a.c, a.sigma, model, kernel);

    io::CsvWriter csv({"xi", "omega_sub", "omega_super", "residual_sub", "residual_super"});
    for (std::size_t i = 1; i + 1 < sub.size(); ++i)
        csv.row(sub.x(i), sub.values[i], sup.values[i], rsub.values[i - 1], rsup.values[i - 1]);

    json summary = {
        {"tool", "subsuper"},
        {"config",
         {{"d", a.d}, {"sigma", a.sigma}, {"c", a.c}, {"kernel", a.kernel.to_json()}, {"h", a.h}}},
        {"validation", io::to_json(validate(model, ConnectionMode::a_to_A))},
        {"result",
         {{"b", cert.sup.b},
          {"alpha", cert.sub.alpha},
          {"xi_minus", cert.sub.xi_minus},
          {"mu", cert.sub.mu},
          {"lambda", cert.sub.lambda},
          {"lambda2", cert.sup.lambda2},
          {"eps2", cert.sup.eps2},
          {"mu_b", cert.sup.mu_b},
          {"xi_b", cert.sup.xi_b},
          {"tol_q", cert.tol_q},
          {"sub_residual_max", cert.sub_residual_max},
          {"sup_residual_min", cert.sup_residual_min},
          {"ordering_margin", cert.ordering_margin},
          {"pass", cert.pass}}},
    };
    if (!a.out_dir.empty()) {
        ensure_dir(a.out_dir);
        csv.save((fs::path(a.out_dir) / "subsuper.csv").string());
        io::write_json_file((fs::path(a.out_dir) / "summary.json").string(), summary);
    } else {
        std::cout << csv.str();
    }
    std::cout << summary.dump(2) << '\n';
    return cert.pass ? 0 : 1;
}

// ----- verify --------------------------------------------------------------

bool close_rel(double x, double y, double tol) {
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

int run_verify(const std::string& in_path) {
    const json run = io::read_json_file(in_path);
    const std::string tool = run.value("tool", "");
    const fs::path dir = fs::path(in_path).parent_path();
    const json& cfg = run.at("config");

    bool ok = true;
    auto fail = [&](const std::string& why) {
        std::cerr << "verify: " << why << '\n';
        ok = false;
    };

    for (const auto& item : run.at("bound_report"))
        if (!item.at("pass").get<bool>()) fail("stored bound_report item failed: " + item.at("name").get<std::string>());

    KernelArgs ka;
    ka.family = cfg.at("kernel").value("family", "tophat");
    if (cfg.at("kernel").contains("csv")) ka.csv_path = cfg.at("kernel")["csv"];
    const KernelSpec kernel = ka.build();

    std::vector<double> stored_res;
    const GridProfile profile =
        io::read_profile_csv((dir / run.at("profile_csv").get<std::string>()).string(), &stored_res);

    if (tool == "solve-monotone") {
        const ModelParams model(cfg.at("d"), cfg.at("sigma"));
        const double c = cfg.at("c");
        const double sigma = cfg.at("sigma");
        // The stored residual column came from the padded solver grid; the
        // recomputation on the window alone matches it away from the ends
        // (outside the kernel stencil of the window edges).
        const GridProfile res = residual_L(profile, c, sigma, model, kernel);
        const KernelSpec k2 = kernel;
        const auto guard = static_cast<std::size_t>(
            std::ceil(k2.truncation_radius() * sigma / profile.h)) + 4;
        double worst = 0.0, stored_sup = 0.0;
        for (std::size_t i = 0; i < stored_res.size(); ++i)
            if (std::isfinite(stored_res[i])) stored_sup = std::max(stored_sup, std::abs(stored_res[i]));
        for (std::size_t j = guard; j + guard < res.size(); ++j) {
            const double stored_here = stored_res[j + 1];  // residual starts one node in
            if (!std::isfinite(stored_here)) continue;
            worst = std::max(worst, std::abs(res.values[j] - stored_here));
        }
        if (worst > 1e-12) fail("stored residual column deviates from recomputation by " + format_full(worst));
        if (!close_rel(stored_sup, run.at("result").at("residual_sup").get<double>(), 1e-9))
            fail("stored residual_sup does not match the residual column");
        for (std::size_t i = 0; i + 1 < profile.size(); ++i)
            if (profile.values[i + 1] < profile.values[i] - 1e-9) fail("profile not nondecreasing");
    } else if (tool == "solve-bvp") {
        BvpProblem p;
        p.model = ModelParams(cfg.at("d"), cfg.at("sigma"), cfg.at("d0"));
        p.kernel = kernel;
        p.L = cfg.at("L");
        p.h = cfg.at("h");
        p.cutoff.eps = cfg.at("eps");
        const double c = run.at("result").at("c");
        const auto [res, phase] = assemble_system(profile, c, p, cfg.value("tau_target", 1.0));
        double sup = std::abs(phase);
        for (double v : res.values) sup = std::max(sup, std::abs(v));
        const double stored = run.at("result").at("newton_residual").get<double>();
        if (sup > std::max(10.0 * stored, 1e-8))
            fail("recomputed system residual " + format_full(sup) + " too large");
        BvpSolution sol;
        sol.c = c;
        sol.tau = cfg.value("tau_target", 1.0);
        sol.profile = profile;
        sol.profile.left_ext = 0.0;
        sol.profile.right_ext = p.model.A();
        const BoundReport rep = verify_bounds(sol, p);
        for (const auto& chk : rep.checks)
            if (!chk.pass) fail("recomputed bound failed: " + chk.name);
    } else {
        fail("unknown tool '" + tool + "' in run JSON");
    }

    std::cout << (ok ? "verify: all checks pass\n" : "verify: FAILED\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traveling wavefronts of u_t = u_xx + u^2 (1 - J_sigma*u) - d u"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // frees -h/--h for the grid spacing

    double eq_d = 0.16;
    auto* eq = app.add_subcommand("equilibria", "the three constant states 0, a, A");
    eq->add_option("--d", eq_d, "mortality rate")->required();

    struct {
        double d = 0.16, sigma = 0.2, c = 3.0;
        KernelArgs kernel;
    } disp;
    auto* dc = app.add_subcommand("dispersion", "largest negative roots of Phi_1, Phi_2 and margins");
    dc->add_option("--d", disp.d)->required();
    dc->add_option("--sigma", disp.sigma)->required();
    dc->add_option("--c", disp.c)->required();
    add_kernel_flags(dc, disp.kernel);

    CStarArgs cstar;
    auto* cs = app.add_subcommand("c-star", "threshold speed c_*(sigma), single or ladder sweep");
    cs->add_option("--d", cstar.d)->required();
    cs->add_option("--sigma", cstar.sigma);
    cs->add_option("--sigma-ladder", cstar.sigma_ladder, "start:stop:step or comma list");
    cs->add_option("--out", cstar.out_dir);
    add_kernel_flags(cs, cstar.kernel);

    MonotoneArgs mono;
    auto* sm = app.add_subcommand("solve-monotone", "monotone a -> A wavefront at (c, sigma)");
    sm->add_option("--d", mono.d)->required();
    sm->add_option("--sigma", mono.sigma)->required();
    sm->add_option("--c", mono.c)->required();
    sm->add_option("--xmin", mono.opt.xmin);
    sm->add_option("--xmax", mono.opt.xmax);
    sm->add_option("--h", mono.opt.h);
    sm->add_option("--tol", mono.opt.tol);
    sm->add_option("--max-iter", mono.opt.max_iter);
    sm->add_option("--margin", mono.opt.margin);
    sm->add_flag("--allow-critical", mono.opt.allow_critical,
                 "solve at the threshold speed by extrapolation from above");
    sm->add_flag("--allow-outside-theorem-range", mono.opt.allow_outside_theorem_range,
                 "permit d >= 2/9 (no existence guarantee; marked in output)");
    sm->add_option("--out", mono.out_dir);
    add_kernel_flags(sm, mono.kernel);

    BvpArgs bvp;
    auto* sb = app.add_subcommand("solve-bvp", "cutoff finite-domain problem with tau homotopy");
    sb->add_option("--d", bvp.d)->required();
    sb->add_option("--d0", bvp.d0)->required();
    sb->add_option("--sigma", bvp.sigma)->required();
    sb->add_option("--L", bvp.L);
    sb->add_option("--eps", bvp.eps);
    sb->add_option("--h", bvp.h);
    sb->add_option("--tau-target", bvp.tau_target);
    sb->add_option("--newton-tol", bvp.newton_tol);
    sb->add_option("--out", bvp.out_dir);
    add_kernel_flags(sb, bvp.kernel);

    SweepArgs sweep;
    auto* sw = app.add_subcommand("sweep-sigma", "semi-wavefront extraction over a sigma ladder");
    sw->add_option("--d", sweep.d)->required();
    sw->add_option("--d0", sweep.d0)->required();
    sw->add_option("--sigma-ladder", sweep.sigma_ladder)->required();
    sw->add_option("--eps-ladder", sweep.eps_ladder);
    sw->add_option("--L-ladder", sweep.L_ladder);
    sw->add_option("--h", sweep.h);
    sw->add_option("--out", sweep.out_dir)->required();
    add_kernel_flags(sw, sweep.kernel);

    SubsuperArgs ss;
    auto* sd = app.add_subcommand("subsuper", "sub/super-solution certification dump");
    auto* sdd = sd->add_subcommand("dump", "emit both profiles plus residuals as CSV");
    sdd->add_option("--d", ss.d)->required();
    sdd->add_option("--sigma", ss.sigma)->required();
    sdd->add_option("--c", ss.c)->required();
    sdd->add_option("--h", ss.h);
    sdd->add_option("--out", ss.out_dir);
    add_kernel_flags(sdd, ss.kernel);

    double lo_d = 0.16;
    auto* lo = app.add_subcommand("local-oracle", "exact local-front speeds and equilibria");
    lo->add_option("--d", lo_d)->required();

    std::string verify_in;
    auto* vf = app.add_subcommand("verify", "re-check the bound report of a stored run");
    vf->add_option("--in", verify_in, "run summary JSON")->required();

    std::string config_path;
    for (CLI::App* sub : {eq, dc, cs, sm, sb, sw, sd, sdd, lo, vf}) {
        sub->set_help_flag("--help", "print help");
        sub->add_option("--config", config_path,
                        "flat key=value config file; command line overrides it");
    }

    try {
        std::vector<std::string> args = inject_config(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const param_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (eq->parsed()) {
            const Equilibria e = equilibria(eq_d);
            json j = {{"d", eq_d},
                      {"zero", e.zero},
                      {"a", e.a},
                      {"A", e.A},
                      {"outside_theorem_range", e.outside_theorem_range}};
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (dc->parsed()) {
            const ModelParams model(disp.d, disp.sigma);
            const DispersionResult r = dispersion_roots(disp.c, disp.sigma, model, disp.kernel.build());
            json j = {{"c", disp.c}, {"sigma", disp.sigma}, {"d", disp.d},
                      {"both_exist", r.both_exist()}};
            j["lambda1"] = r.root1 ? json(r.root1->lambda) : json();
            j["eps1"] = r.root1 ? json(r.root1->eps) : json();
            j["lambda2"] = r.root2 ? json(r.root2->lambda) : json();
            j["eps2"] = r.root2 ? json(r.root2->eps) : json();
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (cs->parsed()) return run_c_star(cstar);
        if (sm->parsed()) return run_solve_monotone(mono);
        if (sb->parsed()) return run_solve_bvp(bvp);
        if (sw->parsed()) return run_sweep_sigma(sweep);
        if (sd->parsed()) {
            if (!sdd->parsed()) throw param_error("usage: subsuper dump --d ... --sigma ... --c ...");
            return run_subsuper_dump(ss);
        }
        if (lo->parsed()) {
            const ModelParams m(lo_d, 0.0);
            json j = {{"d", lo_d},
                      {"a", m.a()},
                      {"A", m.A()},
                      {"c_0A_exact", (3.0 * m.A() - 2.0) / std::sqrt(2.0)},
                      {"c_aA_exact", (m.a() + m.A()) / std::sqrt(2.0)}};
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (vf->parsed()) return run_verify(verify_in);
    } catch (const param_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const solve_error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
