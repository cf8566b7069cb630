#include "stokes/solver_config.hpp"

#include <cmath>

namespace stokes {

void SolverConfig::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(nu > 0.0, "nu must be > 0");
    require(rho > 0.0, "rho must be > 0");
    require(epsilon >= 0.0 && std::isfinite(epsilon), "epsilon must be >= 0 and finite");
    require(!epsilon_schedule || epsilon > 0.0, "epsilon schedule requires epsilon > 0");
    require(xi >= 0.0, "xi must be >= 0");
    for (double x : xi_values) require(x >= 0.0, "xi values must be >= 0");
    require(tau_p > 0.0, "tau_p must be > 0");
    require(inner_tol > 0.0, "inner_tol must be > 0");
    require(outer_tol > 0.0, "outer_tol must be > 0");
    require(div_tol > 0.0, "div_tol must be > 0");
    require(max_inner > 0, "max_inner must be > 0");
    require(max_outer > 0, "max_outer must be > 0");
    require(cg_tol > 0.0 && cg_tol < 1.0, "cg_tol must be in (0,1)");
}

}  // namespace stokes
