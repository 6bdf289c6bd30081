#pragma once

#include "json.hpp"

namespace polyelast {

// Volumetric penalty: zero up to `delay`, a C² quintic bridge on [delay, s0],
// then the affine tail γ s + κ. κ is always derived from the other three.
struct RhoSpec {
    double gamma_slope = 1.0;
    double s0 = 1.0;
    double delay = 0.0;
    double kappa = -0.5;
};

struct RhoValue {
    double rho;
    double drho;
    double ddrho;
};

RhoSpec build_rho(double gamma_slope, double s0, double delay = 0.0);

RhoValue rho_eval(const RhoSpec& spec, double s);

// f(d) = d ρ'(d) − ρ(d)
double f_aux(const RhoSpec& spec, double d);

nlohmann::json rho_to_json(const RhoSpec& spec);
// Reads {"gamma", "s0", "delay"}; kappa in the input, if any, is ignored.
RhoSpec rho_from_json(const nlohmann::json& j);

}  // namespace polyelast
