#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "polyelast/io.hpp"

using namespace polyelast;

namespace {

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("profile csv layout and round trip of values") {
    const RhoSpec rho = build_rho(0.5, 1.0, 0.0);
    const BvpSolution sol = solve_bvp(2, rho);
    std::ostringstream os;
    write_profile_csv(os, sol.profile, sol.diag);
    const std::vector<std::string> L = lines(os.str());
    REQUIRE(L.size() == sol.profile.grid.size() + 1);
    CHECK(L[0] == "R,r,dr,d,ddot,z,zdot");
    // 17 significant digits reproduce the doubles exactly
    std::istringstream row(L.back());
    std::string cell;
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == sol.profile.grid.back());
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == sol.profile.r.back());
}

TEST_CASE("iteration log csv") {
    const std::vector<IterationRecord> log = {{0, 2.0, 1.0, 0.0}, {1, 1.5, 0.1, 0.25}};
    std::ostringstream os;
    write_iteration_log_csv(os, log);
    const std::vector<std::string> L = lines(os.str());
    REQUIRE(L.size() == 3);
    CHECK(L[0] == "iter,energy,grad_norm,step");
    CHECK(L[2] == "1,1.5,0.10000000000000001,0.25");
}

TEST_CASE("solve and minimize reports carry the schema fields") {
    const RhoSpec rho = build_rho(1.0, 1.0, 0.5);
    const BvpSolution sol = solve_bvp(2, rho);
    const nlohmann::json s = solve_report(sol, rho, radial_energy(sol.profile, rho));
    for (const char* key : {"schema", "op", "M", "rho", "s_star", "shots", "residual_sup", "lift_off", "DM_estimate", "energy"})
        CHECK(s.contains(key));
    CHECK(s["schema"] == kSchemaVersion);
    CHECK(s["op"] == "solve_bvp");
    CHECK(s["lift_off"]["rho"] == "Delayed");
    CHECK(s["lift_off"].contains("rho_delta"));
    for (const char* key : {"total", "dirichlet_part", "rho_part", "quad_error_estimate"}) CHECK(s["energy"].contains(key));
    CHECK(rho_from_json(s["rho"]).kappa == rho.kappa);

    const MinimizeResult mr = minimize(2, rho);
    const nlohmann::json m = minimize_report(2, rho, mr);
    for (const char* key : {"schema", "op", "M", "rho", "iterations", "grad_norm", "converged", "roundoff_stop", "energy"})
        CHECK(m.contains(key));
    CHECK(m["op"] == "minimize");
    CHECK(m["energy"]["total"].get<double>() == mr.energy.total);
}

TEST_CASE("reports are deterministic") {
    const RhoSpec rho = build_rho(0.5, 1.0, 0.0);
    auto dump = [&] {
        const BvpSolution sol = solve_bvp(3, rho);
        std::ostringstream os;
        write_profile_csv(os, sol.profile, sol.diag);
        return solve_report(sol, rho, radial_energy(sol.profile, rho)).dump() + os.str();
    };
    CHECK(dump() == dump());
}

TEST_CASE("write_text_file") {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "polyelast_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "a.txt").string();
    write_text_file(path, "abc\n");
    std::ifstream f(path);
    std::string s;
    std::getline(f, s);
    CHECK(s == "abc");
    CHECK_THROWS_AS(write_text_file((dir / "missing" / "b.txt").string(), "x"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
