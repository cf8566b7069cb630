#pragma once

#include <utility>
#include <vector>

#include "stokes/admm.hpp"

namespace stokes {

struct OuterReport {
    std::vector<double> du_h1;   // ||u_{n+1} - u_n||, H1 norm
    std::vector<double> dp_l2;   // ||p_{n+1} - p_n||, area-weighted L2
    std::vector<double> div_l2;  // ||div u_{n+1}||, area-weighted L2
    std::vector<int> inner_iterations;
    int total_inner_iterations = 0;
    bool converged = false;
    bool div_converged = false;  // ||div u|| < div_tol at the last iteration

    int outer_iterations() const { return static_cast<int>(du_h1.size()); }
};

struct StokesSolution {
    VelocityField u;  // frame components at friction nodes
    CellField pressure;
    OuterReport report;
};

struct OuterError : SolveError {
    OuterError(const std::string& what, OuterReport report, StokesSolution partial)
        : SolveError(what), report(std::move(report)), partial(std::move(partial)) {}
    OuterReport report;
    StokesSolution partial;
};

/// p + tau_p * (mean-zero part of div u). Keeps the pressure mean zero.
CellField pressure_update(const Mesh& mesh, const ElementGeometry& geo, const CellField& p,
                          std::span<const double> u_cartesian, double tau_p);

/// Fixed-point pressure iteration wrapping the inner solver: alternates a
/// full inner solve with the pressure update until the joint increment
/// ||du||_1 + ||dp||_0 drops below cfg.outer_tol. With cfg.epsilon_schedule
/// the divergence interval shrinks as epsilon/n. Starts from p = 0; throws
/// OuterError with report and partial fields when max_outer is exceeded.
StokesSolution solve_stokes(const AdmmSolver& solver);

}  // namespace stokes
