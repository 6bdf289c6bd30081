#pragma once

#include <ostream>
#include <string>

#include "json.hpp"
#include "polyelast/direct_min.hpp"
#include "polyelast/energy.hpp"
#include "polyelast/radial_bvp.hpp"
#include "polyelast/rho.hpp"

namespace polyelast {

inline constexpr int kSchemaVersion = 1;

// Columns R, r, dr, d, ddot, z, zdot.
void write_profile_csv(std::ostream& os, const RadialProfile& p, const BvpDiagnostics& diag);
// Columns iter, energy, grad_norm, step.
void write_iteration_log_csv(std::ostream& os, const std::vector<IterationRecord>& log);

nlohmann::json energy_to_json(const EnergyReport& e);
// Both the profile's and the penalty's lift-off.
nlohmann::json lift_off_to_json(const BvpDiagnostics& diag);

// {schema, op, M, rho, s_star, residual_sup, lift_off, DM_estimate, energy, shots}
nlohmann::json solve_report(const BvpSolution& sol, const RhoSpec& rho, const EnergyReport& energy);
nlohmann::json minimize_report(int M, const RhoSpec& rho, const MinimizeResult& res);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace polyelast
