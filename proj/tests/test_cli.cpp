#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "polyelast/cli.hpp"

using namespace polyelast;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("polyelast_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("parse_range") {
    CHECK(parse_range("2") == std::vector<double>{2.0});
    const std::vector<double> g = parse_range("0.1:2:0.1");
    REQUIRE(g.size() == 20);
    CHECK(g.front() == doctest::Approx(0.1));
    CHECK(g.back() == doctest::Approx(2.0));
    CHECK(parse_range("1:1:0.5") == std::vector<double>{1.0});
    CHECK_THROWS(parse_range("1:2"));
    CHECK_THROWS(parse_range("2:1:0.5"));
    CHECK_THROWS(parse_range("0:1:0"));
    CHECK_THROWS(parse_range("abc"));
}

TEST_CASE("worker_count honours the thread cap") {
    setenv("POLYELAST_THREADS", "1", 1);
    CHECK(worker_count(10) == 1);
    setenv("POLYELAST_THREADS", "bogus", 1);
    CHECK(worker_count(1) == 1);
    CHECK(worker_count(10) >= 1);
    unsetenv("POLYELAST_THREADS");
}

TEST_CASE("solve M = 1 writes the identity profile and its energy") {
    const fs::path d = fresh_dir("solve1");
    const Run r = run({"solve", "--M", "1", "--out", d.string()});
    CHECK(r.code == kExitOk);
    const nlohmann::json out = nlohmann::json::parse(r.out);
    CHECK(out["energy"]["total"].get<double>() == doctest::Approx(1.5 * std::numbers::pi).epsilon(1e-9));
    CHECK(out["lift_off"]["profile"] == "Immediate");
    const nlohmann::json rep = read_json(d / "report.json");
    CHECK(rep["inputs"]["M"] == 1);
    CHECK(rep["energy"] == out["energy"]);
    CHECK(slurp(d / "profile.csv").rfind("R,r,dr,d,ddot,z,zdot\n", 0) == 0);
    fs::remove_all(d);
}

TEST_CASE("solve with a delayed penalty reports the penalty lift-off") {
    const fs::path d = fresh_dir("solve2");
    const Run r = run({"solve", "--M", "2", "--delay", "0.5", "--out", d.string()});
    CHECK(r.code == kExitOk);
    CHECK(nlohmann::json::parse(r.out)["lift_off"]["rho"] == "Delayed");
    fs::remove_all(d);
}

TEST_CASE("invalid input exits with 1") {
    CHECK(run({"solve", "--M", "0"}).code == kExitInvalid);
    CHECK(run({"solve", "--M", "2", "--delay", "1.0"}).code == kExitInvalid);
    CHECK(run({"solve", "--M", "2", "--gamma", "-1"}).code == kExitInvalid);
    CHECK(run({"pressure", "--N", "0"}).code == kExitInvalid);
    CHECK(run({"pressure", "--nu", "0"}).code == kExitInvalid);
    CHECK(run({"sweep", "--gamma", "2:1:0.1"}).code == kExitInvalid);
    CHECK(run({"bogus"}).code == kExitInvalid);
    CHECK(run({}).code == kExitInvalid);
    const Run bad = run({"solve", "--M", "0"});
    CHECK(!bad.err.empty());
}

TEST_CASE("help exits cleanly") {
    const Run r = run({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("sweep") != std::string::npos);
}

TEST_CASE("pressure of the double cover") {
    const Run r = run({"pressure", "--N", "2", "--a", "5", "--nu", "1"});
    CHECK(r.code == kExitOk);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["lamRR"].get<double>() == doctest::Approx(-0.5));
    CHECK(j["P"].get<double>() == doctest::Approx(0.5));
    CHECK(j["strict"] == true);
    CHECK(j["pass"] == true);
    CHECK(j["min_energy"].get<double>() == doctest::Approx(7.5 * std::numbers::pi));

    // outside the admissible range the pressure is still reported, without a minimal energy
    const Run out = run({"pressure", "--N", "2", "--a", "7"});
    CHECK(out.code == kExitOk);
    const nlohmann::json o = nlohmann::json::parse(out.out);
    CHECK(o["pass"] == false);
    CHECK(o["min_energy"].is_null());

    const fs::path d = fresh_dir("pressure");
    CHECK(run({"pressure", "--N", "3", "--a", "9", "--out", d.string()}).code == kExitOk);
    CHECK(fs::exists(d / "pressure.json"));
    fs::remove_all(d);
}

TEST_CASE("minimize and energy write their outputs") {
    const fs::path d = fresh_dir("mini");
    const Run m = run({"minimize", "--M", "2", "--gamma", "0.5", "--seed", "3", "--out", d.string()});
    CHECK(m.code == kExitOk);
    CHECK(nlohmann::json::parse(m.out)["converged"] == true);
    CHECK(slurp(d / "iterations.csv").rfind("iter,energy,grad_norm,step\n", 0) == 0);
    CHECK(fs::exists(d / "profile.csv"));
    CHECK(fs::exists(d / "report.json"));

    const Run e = run({"energy", "--M", "1", "--eps", "1.2", "--out", d.string()});
    CHECK(e.code == kExitOk);
    const nlohmann::json j = read_json(d / "energy.json");
    CHECK(j["buckling"]["D_eps_identity"].get<double>() == doctest::Approx(6.387905).epsilon(1e-7));
    CHECK(j["full"]["total"].get<double>() == doctest::Approx(j["radial"]["total"].get<double>()).epsilon(1e-6));
    fs::remove_all(d);
}

TEST_CASE("sweep: trend column and thread-count determinism") {
    const fs::path a = fresh_dir("sweep_a"), b = fresh_dir("sweep_b");
    setenv("POLYELAST_THREADS", "1", 1);
    const Run r1 = run({"sweep", "--M", "2", "--gamma", "0.25:1:0.25", "--grid", "256", "--out", a.string()});
    setenv("POLYELAST_THREADS", "4", 1);
    const Run r4 = run({"sweep", "--M", "2", "--gamma", "0.25:1:0.25", "--grid", "256", "--out", b.string()});
    unsetenv("POLYELAST_THREADS");
    CHECK(r1.code == kExitOk);
    CHECK(r4.code == kExitOk);
    CHECK(r1.out == r4.out);
    const std::string csv = slurp(a / "sweep.csv");
    CHECK(csv == slurp(b / "sweep.csv"));
    CHECK(csv.rfind("run,M,gamma,s0,delay,status,energy,residual_sup,lift_off,rho_lift_off,energy_trend\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    const nlohmann::json idx = nlohmann::json::parse(r1.out);
    CHECK(idx["runs"] == 4);
    CHECK(idx["energy_trend"] == "nondecreasing");
    for (int k = 0; k < 4; ++k) {
        const std::string name = "run_000" + std::to_string(k) + ".json";
        CHECK(slurp(a / name) == slurp(b / name));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("check reports every property and fails on any failure") {
    const Run r = run({"check"});
    CHECK(r.out.find("PASS") != std::string::npos);
    // exit status follows the results: nonzero exactly when some line reads FAIL
    const bool any_fail = r.out.find("FAIL") != std::string::npos;
    CHECK(r.code == (any_fail ? kExitInvalid : kExitOk));
}
