#include "polyelast/rho.hpp"

#include <cmath>
#include <stdexcept>

namespace polyelast {

RhoSpec build_rho(double gamma_slope, double s0, double delay) {
    if (!(gamma_slope > 0.0)) throw std::invalid_argument("build_rho: gamma must be positive");
    if (!(delay >= 0.0)) throw std::invalid_argument("build_rho: delay must be non-negative");
    if (!(delay < s0)) throw std::invalid_argument("build_rho: delay must be smaller than s0");
    RhoSpec spec;
    spec.gamma_slope = gamma_slope;
    spec.s0 = s0;
    spec.delay = delay;
    // The bridge accumulates γ L / 2 over its length L = s0 − delay.
    spec.kappa = -gamma_slope * (s0 + delay) / 2.0;
    return spec;
}

RhoValue rho_eval(const RhoSpec& spec, double s) {
    const double g = spec.gamma_slope;
    if (s <= spec.delay) return {0.0, 0.0, 0.0};
    if (s >= spec.s0) return {g * s + spec.kappa, g, 0.0};

    const double L = spec.s0 - spec.delay;
    const double t = (s - spec.delay) / L;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double u = 1.0 - t;
    RhoValue v;
    v.ddrho = 30.0 * g / L * t2 * u * u;
    v.drho = g * t3 * (10.0 - 15.0 * t + 6.0 * t2);
    v.rho = g * L * t3 * t * (2.5 - 3.0 * t + t2);
    return v;
}

double f_aux(const RhoSpec& spec, double d) {
    const RhoValue v = rho_eval(spec, d);
    return d * v.drho - v.rho;
}

nlohmann::json rho_to_json(const RhoSpec& spec) {
    return {{"gamma", spec.gamma_slope}, {"s0", spec.s0}, {"delay", spec.delay}, {"kappa", spec.kappa}};
}

RhoSpec rho_from_json(const nlohmann::json& j) {
    return build_rho(j.at("gamma").get<double>(), j.at("s0").get<double>(), j.value("delay", 0.0));
}

}  // namespace polyelast
