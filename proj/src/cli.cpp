#include "polyelast/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyelast/checks.hpp"
#include "polyelast/direct_min.hpp"
#include "polyelast/energy.hpp"
#include "polyelast/io.hpp"
#include "polyelast/pressure.hpp"
#include "polyelast/radial_bvp.hpp"
#include "polyelast/rho.hpp"

namespace polyelast {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class InvalidInput : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Common {
    std::string out = ".";
    std::string format = "json";
    double eps0 = 1e-6;
    int grid = 512;
    std::optional<double> tol;
};

struct RhoFlags {
    double gamma = 1.0;
    double s0 = 1.0;
    double delay = 0.0;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--eps0", c.eps0, "inner radius of the radial grid")->capture_default_str();
    sub->add_option("--grid", c.grid, "radial grid nodes")->capture_default_str();
    sub->add_option("--tol", c.tol, "residual tolerance (solve) or gradient tolerance (minimize)");
}

void add_rho(CLI::App* sub, RhoFlags& r) {
    sub->add_option("--gamma", r.gamma, "slope of the affine tail of rho")->capture_default_str();
    sub->add_option("--s0", r.s0, "end of the bridge")->capture_default_str();
    sub->add_option("--delay", r.delay, "rho vanishes on [0, delay]")->capture_default_str();
}

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidInput(what);
}

void validate_radial(int M, const RhoFlags& r, const Common& c) {
    require(M >= 1, "--M must be >= 1");
    require(r.gamma > 0.0 && std::isfinite(r.gamma), "--gamma must be positive");
    require(r.s0 > 0.0 && std::isfinite(r.s0), "--s0 must be positive");
    require(r.delay >= 0.0 && r.delay < r.s0, "--delay must lie in [0, s0)");
    require(c.eps0 > 0.0 && c.eps0 < 1.0, "--eps0 must lie in (0, 1)");
    require(c.grid >= 8, "--grid must be >= 8");
    require(!c.tol || *c.tol > 0.0, "--tol must be positive");
}

json rho_inputs(int M, const RhoFlags& r, const Common& c) {
    json j{{"M", M}, {"gamma", r.gamma}, {"s0", r.s0}, {"delay", r.delay}, {"eps0", c.eps0}, {"grid", c.grid}};
    if (c.tol) j["tol"] = *c.tol;
    return j;
}

fs::path out_dir(const Common& c) {
    fs::path p(c.out);
    fs::create_directories(p);
    return p;
}

std::string profile_csv(const RadialProfile& p, const BvpDiagnostics& d) {
    std::ostringstream os;
    write_profile_csv(os, p, d);
    return os.str();
}

// A solve with the minimizer as fallback when shooting fails.
struct SolveOutcome {
    int exit_code = kExitOk;
    std::string status;
    RadialProfile profile;
    BvpDiagnostics diag;
    EnergyReport energy;
    json report;
};

SolveOutcome solve_with_fallback(int M, const RhoSpec& rho, const Common& c) {
    BvpOptions o;
    o.eps0 = c.eps0;
    o.grid_size = c.grid;
    if (c.tol) o.tol_residual = *c.tol;
    SolveOutcome s;
    auto fallback = [&](const std::string& why) {
        MinimizeOptions mo;
        mo.eps0 = c.eps0;
        mo.grid_size = c.grid;
        json fb{{"method", "direct_min"}};
        try {
            const MinimizeResult mr = minimize(M, rho, mo);
            s.profile = mr.profile;
            s.energy = mr.energy;
            fb["converged"] = mr.converged;
            fb["iterations"] = mr.iterations;
            fb["grad_norm"] = mr.grad_norm;
        } catch (const MaxItersExceeded& e) {
            s.profile = e.last.profile;
            s.energy = e.last.energy;
            fb["converged"] = false;
            fb["iterations"] = e.last.iterations;
            fb["grad_norm"] = e.last.grad_norm;
        }
        s.diag = diagnostics(s.profile, rho, o.liftoff_tol);
        s.exit_code = kExitSolver;
        s.status = why;
        s.report = {{"schema", kSchemaVersion},
                    {"op", "solve_bvp"},
                    {"status", why},
                    {"M", M},
                    {"rho", rho_to_json(rho)},
                    {"fallback", fb},
                    {"lift_off", lift_off_to_json(s.diag)},
                    {"DM_estimate", s.diag.DM_estimate},
                    {"energy", energy_to_json(s.energy)}};
    };
    try {
        const BvpSolution sol = solve_bvp(M, rho, o);
        s.profile = sol.profile;
        s.diag = sol.diag;
        s.energy = radial_energy(sol.profile, rho);
        s.status = "ok";
        s.report = solve_report(sol, rho, s.energy);
        s.report["status"] = "ok";
    } catch (const NoBracket& e) {
        fallback("no_bracket");
        s.report["s_max"] = e.s_max;
        json cands = json::array();
        for (const DelayedCandidate& dc : e.search.candidates)
            cands.push_back({{"delta", dc.delta}, {"slope", dc.slope}, {"bracketed", dc.bracketed}});
        s.report["delayed_search"] = {{"found", e.search.found},
                                      {"best_delta", e.search.best_delta},
                                      {"best_slope", e.search.best_slope},
                                      {"candidates", cands}};
    } catch (const ResidualTooLarge& e) {
        s.profile = e.solution.profile;
        s.diag = e.solution.diag;
        s.energy = radial_energy(e.solution.profile, rho);
        s.exit_code = kExitSolver;
        s.status = "residual_too_large";
        s.report = solve_report(e.solution, rho, s.energy);
        s.report["status"] = s.status;
    } catch (const Diverged& e) {
        fallback("diverged");
        s.report["diverged_at_s"] = e.s;
    }
    return s;
}

void emit(std::ostream& out, const Common& c, const json& report, const std::string& csv) {
    if (c.format == "csv")
        out << csv;
    else
        out << report.dump(2) << '\n';
}

// ---- subcommands -------------------------------------------------------------

int cmd_solve(int M, const RhoFlags& rf, const Common& c, std::ostream& out) {
    validate_radial(M, rf, c);
    const RhoSpec rho = build_rho(rf.gamma, rf.s0, rf.delay);
    SolveOutcome s = solve_with_fallback(M, rho, c);
    s.report["inputs"] = rho_inputs(M, rf, c);
    const fs::path dir = out_dir(c);
    const std::string csv = profile_csv(s.profile, s.diag);
    write_text_file((dir / "profile.csv").string(), csv);
    write_text_file((dir / "report.json").string(), s.report.dump(2) + "\n");
    emit(out, c, s.report, csv);
    return s.exit_code;
}

int cmd_minimize(int M, const RhoFlags& rf, const Common& c, std::optional<std::uint64_t> seed, std::ostream& out) {
    validate_radial(M, rf, c);
    const RhoSpec rho = build_rho(rf.gamma, rf.s0, rf.delay);
    MinimizeOptions mo;
    mo.eps0 = c.eps0;
    mo.grid_size = c.grid;
    if (c.tol) mo.tol_grad = *c.tol;
    if (seed) mo.init = MinimizeInit::random(*seed);
    MinimizeResult res;
    int code = kExitOk;
    try {
        res = minimize(M, rho, mo);
    } catch (const MaxItersExceeded& e) {
        res = e.last;
        code = kExitSolver;
    }
    json report = minimize_report(M, rho, res);
    json in = rho_inputs(M, rf, c);
    in["init"] = seed ? json{{"kind", "random"}, {"seed", *seed}} : json{{"kind", "identity"}};
    report["inputs"] = in;
    const BvpDiagnostics diag = diagnostics(res.profile, rho);
    report["lift_off"] = lift_off_to_json(diag);
    const fs::path dir = out_dir(c);
    std::ostringstream log;
    write_iteration_log_csv(log, res.log);
    write_text_file((dir / "iterations.csv").string(), log.str());
    write_text_file((dir / "profile.csv").string(), profile_csv(res.profile, diag));
    write_text_file((dir / "report.json").string(), report.dump(2) + "\n");
    emit(out, c, report, log.str());
    return code;
}

int cmd_energy(int M, const RhoFlags& rf, const Common& c, std::optional<double> eps, std::ostream& out) {
    validate_radial(M, rf, c);
    require(!eps || *eps > 0.0, "--eps must be positive");
    const RhoSpec rho = build_rho(rf.gamma, rf.s0, rf.delay);
    const SolveOutcome s = solve_with_fallback(M, rho, c);
    const PolarGrid mesh(16, 8, std::max(64, 16 * M));
    const VectorField u = embed_radial_solution(mesh, s.profile, rho);
    const EnergyReport full = full_energy(mesh, u, rho);
    json report{{"schema", kSchemaVersion},
                {"op", "energy"},
                {"inputs", rho_inputs(M, rf, c)},
                {"solve_status", s.status},
                {"radial", energy_to_json(s.energy)},
                {"full", energy_to_json(full)}};
    std::ostringstream csv;
    csv << std::setprecision(17) << "quantity,value\n"
        << "radial_total," << s.energy.total << "\nfull_total," << full.total << '\n';
    if (eps) {
        report["inputs"]["eps"] = *eps;
        const TwistProfile tp = identity_twist(*eps);
        const double d = buckling_energy(tp);
        const double closed = std::numbers::pi * (*eps + 1.0 / *eps);
        const double slope = twist_pressure_slope(tp, 0.5);
        report["buckling"] = {{"D_eps_identity", d},
                              {"closed_form", closed},
                              {"p_eps", p_eps(*eps)},
                              {"twist_pressure_slope_at_half", slope}};
        csv << "D_eps_identity," << d << "\np_eps," << p_eps(*eps) << "\ntwist_pressure_slope_at_half," << slope << '\n';
    }
    const fs::path dir = out_dir(c);
    write_text_file((dir / "energy.json").string(), report.dump(2) + "\n");
    emit(out, c, report, csv.str());
    return s.exit_code;
}

int cmd_pressure(int N, double a, double nu, const Common& c, bool write_files, std::ostream& out) {
    require(N >= 1, "--N must be >= 1");
    require(nu > 0.0 && std::isfinite(nu), "--nu must be positive");
    require(std::isfinite(a), "--a must be finite");
    const PolarQuadForm form = PolarQuadForm::ncover(a, nu);
    std::vector<double> radii, thetas;
    for (int i = 1; i <= 8; ++i) radii.push_back(i / 8.0);
    for (int k = 0; k < 16; ++k) thetas.push_back(2.0 * std::numbers::pi * k / 16);
    const PressureGradient pg = compute_pressure_gradient(form, N, radii, thetas);
    const SmallPressureResult sp = small_pressure_check(pg.sup_norm_P, nu, PressureMode::RadialOnly);
    const PressureSample fast = ncover_pressure_fast(form, N);
    const Interval range = admissible_a_range(N);
    json report{{"schema", kSchemaVersion},
                {"op", "pressure"},
                {"inputs", {{"N", N}, {"a", a}, {"nu", nu}}},
                {"lamRR", fast.lam_R_R},
                {"lamTheta", fast.lam_theta},
                {"P", pg.sup_norm_P},
                {"threshold", sp.threshold},
                {"pass", sp.pass},
                {"strict", sp.strict},
                {"a_range", {range.lo, range.hi}}};
    if (a >= range.lo && a <= range.hi) {
        report["min_energy"] = ncover_min_energy(nu, a, N);
        const PolarGrid mesh(16, 8, std::max(64, 16 * N));
        report["quadrature_energy"] = quadratic_energy(mesh, ncover_map(mesh, N), form);
    } else {
        report["min_energy"] = nullptr;
        report["note"] = "a outside the range where (R/sqrt N) e_R(N theta) minimizes";
    }
    std::ostringstream csv;
    write_pressure_csv(csv, pg);
    if (write_files) {
        const fs::path dir = out_dir(c);
        write_text_file((dir / "pressure.csv").string(), csv.str());
        write_text_file((dir / "pressure.json").string(), report.dump(2) + "\n");
    }
    emit(out, c, report, csv.str());
    return kExitOk;
}

int cmd_check(const std::string& format, std::ostream& out) {
    const std::vector<CheckResult> results = run_acceptance_suite();
    int failed = 0;
    json arr = json::array();
    for (const CheckResult& r : results) {
        if (!r.pass) ++failed;
        arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    if (format == "json") {
        out << json{{"schema", kSchemaVersion}, {"op", "check"}, {"failed", failed}, {"results", arr}}.dump(2) << '\n';
    } else {
        for (const CheckResult& r : results) out << format_check_line(r) << '\n';
        out << failed << " of " << results.size() << " checks failed\n";
    }
    return failed == 0 ? kExitOk : kExitInvalid;
}

struct SweepRun {
    int M = 1;
    RhoFlags rho;
    std::string status;
    int exit_code = kExitOk;
    double energy = 0.0;
    double residual = 0.0;
    std::string lift_off, rho_lift_off;
};

std::string trend(double prev, double cur) {
    const double tol = 1e-12 * std::max(std::abs(prev), std::abs(cur));
    if (cur > prev + tol) return "up";
    if (cur < prev - tol) return "down";
    return "flat";
}

int cmd_sweep(const std::string& Ms, const std::string& gammas, const std::string& s0s, const std::string& delays,
              const Common& c, std::ostream& out) {
    const std::vector<double> Mv = parse_range(Ms), gv = parse_range(gammas), sv = parse_range(s0s),
                              dv = parse_range(delays);
    for (double m : Mv) require(m == std::floor(m), "--M values must be integers");
    std::vector<SweepRun> runs;
    for (double m : Mv)
        for (double g : gv)
            for (double s : sv)
                for (double d : dv) {
                    SweepRun r;
                    r.M = static_cast<int>(m);
                    r.rho = {g, s, d};
                    validate_radial(r.M, r.rho, c);
                    runs.push_back(r);
                }
    // the trend column follows the innermost axis that actually varies
    const std::size_t sizes[] = {Mv.size(), gv.size(), sv.size(), dv.size()};
    const char* names[] = {"M", "gamma", "s0", "delay"};
    int axis = -1;
    std::size_t stride = 1, axis_len = 1;
    for (int k = 3; k >= 0; --k)
        if (sizes[k] > 1) {
            axis = k;
            axis_len = sizes[k];
            break;
        } else {
            stride *= sizes[k];
        }

    const fs::path dir = out_dir(c);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < runs.size(); k = next++) {
            SweepRun& r = runs[k];
            const RhoSpec rho = build_rho(r.rho.gamma, r.rho.s0, r.rho.delay);
            SolveOutcome s = solve_with_fallback(r.M, rho, c);
            s.report["inputs"] = rho_inputs(r.M, r.rho, c);
            s.report["run"] = k;
            r.status = s.status;
            r.exit_code = s.exit_code;
            r.energy = s.energy.total;
            r.residual = s.diag.residual_sup;
            r.lift_off = to_string(s.diag.lift_off.kind);
            r.rho_lift_off = to_string(s.diag.rho_lift_off.kind);
            std::ostringstream name;
            name << "run_" << std::setw(4) << std::setfill('0') << k << ".json";
            write_text_file((dir / name.str()).string(), s.report.dump(2) + "\n");
        }
    };
    const int workers = worker_count(static_cast<int>(runs.size()));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();

    std::ostringstream csv;
    csv << std::setprecision(17) << "run,M,gamma,s0,delay,status,energy,residual_sup,lift_off,rho_lift_off,energy_trend\n";
    bool monotone_up = true, monotone_down = true;
    int failed = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const SweepRun& r = runs[k];
        if (r.exit_code != kExitOk) ++failed;
        std::string t;
        if (axis >= 0 && (k / stride) % axis_len != 0) {
            const SweepRun& p = runs[k - stride];
            t = (r.exit_code == kExitOk && p.exit_code == kExitOk) ? trend(p.energy, r.energy) : "n/a";
            monotone_up = monotone_up && (t == "up" || t == "flat");
            monotone_down = monotone_down && (t == "down" || t == "flat");
        }
        csv << k << ',' << r.M << ',' << r.rho.gamma << ',' << r.rho.s0 << ',' << r.rho.delay << ',' << r.status << ','
            << r.energy << ',' << r.residual << ',' << r.lift_off << ',' << r.rho_lift_off << ',' << t << '\n';
    }
    write_text_file((dir / "sweep.csv").string(), csv.str());
    const std::string verdict =
        axis < 0 ? "single run" : monotone_up ? "nondecreasing" : monotone_down ? "nonincreasing" : "not monotone";
    const json index{{"schema", kSchemaVersion},
                     {"op", "sweep"},
                     {"inputs", {{"M", Ms}, {"gamma", gammas}, {"s0", s0s}, {"delay", delays}}},
                     {"runs", runs.size()},
                     {"failed", failed},
                     {"trend_axis", axis < 0 ? "" : names[axis]},
                     {"energy_trend", verdict}};
    emit(out, c, index, csv.str());
    return failed == 0 ? kExitOk : kExitSolver;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    auto num = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw InvalidInput("bad number '" + s + "' in '" + text + "'");
        }
        require(used == s.size() && std::isfinite(v), "bad number '" + s + "' in '" + text + "'");
        return v;
    };
    if (parts.size() == 1) return {num(parts[0])};
    require(parts.size() == 3, "range must be a:b:step, got '" + text + "'");
    const double a = num(parts[0]), b = num(parts[1]), step = num(parts[2]);
    require(step > 0.0 && b >= a, "range needs step > 0 and b >= a, got '" + text + "'");
    const double count = std::floor((b - a) / step + 1e-9) + 1.0;
    require(count <= 100000, "range '" + text + "' has too many values");
    std::vector<double> v;
    for (int k = 0; k < static_cast<int>(count); ++k) v.push_back(a + k * step);
    return v;
}

int worker_count(int jobs) {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("POLYELAST_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) n = std::min<long>(n, cap);
    }
    return std::max(1, std::min(n, jobs));
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial and pressure computations for polyconvex energies on the disk", "polyelast"};
    app.require_subcommand(1);

    Common c;
    RhoFlags rf;
    int M = 1, N = 2;
    double a = 5.0, nu = 1.0;
    std::optional<double> eps;
    std::optional<std::uint64_t> seed;
    std::string Ms = "1", gammas = "1", s0s = "1", delays = "0";
    bool pressure_files = false;

    CLI::App* solve = app.add_subcommand("solve", "shoot for the radial stationary point");
    solve->add_option("--M", M, "covering degree")->required();
    add_rho(solve, rf);
    add_common(solve, c);

    CLI::App* mini = app.add_subcommand("minimize", "direct minimization of the discretized radial energy");
    mini->add_option("--M", M, "covering degree")->required();
    mini->add_option("--seed", seed, "random initial profile instead of the identity");
    add_rho(mini, rf);
    add_common(mini, c);

    CLI::App* energy = app.add_subcommand("energy", "radial and full energy of the solved profile");
    energy->add_option("--M", M, "covering degree")->capture_default_str();
    energy->add_option("--eps", eps, "also evaluate the buckling functional at this eps");
    add_rho(energy, rf);
    add_common(energy, c);

    CLI::App* pressure = app.add_subcommand("pressure", "pressure of the N-cover for the quadratic polar energy");
    pressure->add_option("--N", N, "covering degree")->capture_default_str();
    pressure->add_option("--a", a, "coefficient a")->capture_default_str();
    pressure->add_option("--nu", nu, "coefficient nu")->capture_default_str();
    add_common(pressure, c);

    CLI::App* check = app.add_subcommand("check", "run the acceptance checks");
    std::string check_format = "csv";
    check->add_option("--format", check_format, "stdout format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    CLI::App* sweep = app.add_subcommand("sweep", "solve over a parameter grid (a or a:b:step per flag)");
    sweep->add_option("--M", Ms, "covering degrees")->capture_default_str();
    sweep->add_option("--gamma", gammas, "tail slopes")->capture_default_str();
    sweep->add_option("--s0", s0s, "bridge ends")->capture_default_str();
    sweep->add_option("--delay", delays, "delays")->capture_default_str();
    add_common(sweep, c);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    pressure_files = pressure->count("--out") > 0;

    try {
        if (solve->parsed()) return cmd_solve(M, rf, c, out);
        if (mini->parsed()) return cmd_minimize(M, rf, c, seed, out);
        if (energy->parsed()) return cmd_energy(M, rf, c, eps, out);
        if (pressure->parsed()) return cmd_pressure(N, a, nu, c, pressure_files, out);
        if (check->parsed()) return cmd_check(check_format, out);
        if (sweep->parsed()) return cmd_sweep(Ms, gammas, s0s, delays, c, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitInvalid;
}

}  // namespace polyelast
