#include "polyelast/io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace polyelast {

void write_profile_csv(std::ostream& os, const RadialProfile& p, const BvpDiagnostics& diag) {
    os << "R,r,dr,d,ddot,z,zdot\n" << std::setprecision(17);
    for (std::size_t i = 0; i < p.grid.size(); ++i)
        os << p.grid[i] << ',' << p.r[i] << ',' << p.dr[i] << ',' << diag.d[i] << ',' << diag.ddot[i] << ','
           << diag.z[i] << ',' << diag.zdot[i] << '\n';
}

void write_iteration_log_csv(std::ostream& os, const std::vector<IterationRecord>& log) {
    os << "iter,energy,grad_norm,step\n" << std::setprecision(17);
    for (const IterationRecord& r : log) os << r.iter << ',' << r.energy << ',' << r.grad_norm << ',' << r.step << '\n';
}

nlohmann::json energy_to_json(const EnergyReport& e) {
    return {{"total", e.total},
            {"dirichlet_part", e.dirichlet_part},
            {"rho_part", e.rho_part},
            {"quad_error_estimate", e.quad_error_estimate}};
}

nlohmann::json lift_off_to_json(const BvpDiagnostics& diag) {
    nlohmann::json j{{"profile", to_string(diag.lift_off.kind)}, {"rho", to_string(diag.rho_lift_off.kind)}};
    if (diag.lift_off.delayed()) j["profile_delta"] = diag.lift_off.delta;
    if (diag.rho_lift_off.delayed()) j["rho_delta"] = diag.rho_lift_off.delta;
    return j;
}

nlohmann::json solve_report(const BvpSolution& sol, const RhoSpec& rho, const EnergyReport& energy) {
    return {{"schema", kSchemaVersion},
            {"op", "solve_bvp"},
            {"M", sol.profile.M},
            {"rho", rho_to_json(rho)},
            {"s_star", sol.s_star},
            {"shots", sol.shots},
            {"residual_sup", sol.diag.residual_sup},
            {"lift_off", lift_off_to_json(sol.diag)},
            {"DM_estimate", sol.diag.DM_estimate},
            {"energy", energy_to_json(energy)}};
}

nlohmann::json minimize_report(int M, const RhoSpec& rho, const MinimizeResult& res) {
    return {{"schema", kSchemaVersion},
            {"op", "minimize"},
            {"M", M},
            {"rho", rho_to_json(rho)},
            {"iterations", res.iterations},
            {"grad_norm", res.grad_norm},
            {"converged", res.converged},
            {"roundoff_stop", res.roundoff_stop},
            {"energy", energy_to_json(res.energy)}};
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << contents;
    if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace polyelast
