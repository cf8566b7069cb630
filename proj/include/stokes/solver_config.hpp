#pragma once

#include <vector>

#include "stokes/errors.hpp"

namespace stokes {

/// Interval-projection variant for the divergence auxiliary: the exact
/// per-element clamp (default) or the global ball normalization kept for
/// comparison runs.
enum class LambdaStepMode { clamp, paper_ball };

struct SolverConfig {
    double nu = 1.0;       // viscosity
    double rho = 1.0;      // augmentation penalty
    double epsilon = 1e-3; // divergence interval half-width
    bool epsilon_schedule = false;  // epsilon_n = epsilon / n per outer iteration
    double xi = 0.1;                // friction bound (constant)
    std::vector<double> xi_values;  // optional per-friction-node bounds
    double tau_p = 1.0;             // pressure step factor

    double inner_tol = 1e-8;
    double outer_tol = 1e-6;
    double div_tol = 1e-6;
    int max_inner = 5000;
    int max_outer = 200;
    LambdaStepMode lambda_step_mode = LambdaStepMode::clamp;

    double cg_tol = 1e-10;
    int cg_max_iterations = 0;  // 0: 10 n
    bool warm_start = true;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

}  // namespace stokes
