#pragma once

#include <vector>

#include "stokes/assembly.hpp"
#include "stokes/dense.hpp"
#include "stokes/solver_config.hpp"

namespace stokes {

/// Desk-scale statement of the constrained nonsmooth minimization, built
/// with dense operators in the constrained (frame-rotated) DOF space.
struct DenseProblem {
    dense::DenseMatrix stiffness;   // viscous operator, constraints applied
    dense::DenseMatrix divergence;  // element divergence rows over rotated DOFs
    std::vector<double> areas;
    std::vector<double> load;       // rotated, zeroed at fixed DOFs
    std::vector<int> tangential_dofs;
    std::vector<double> friction_weights;
    std::vector<double> friction_bounds;
    std::vector<std::uint8_t> fixed;
    double epsilon = 0.0;
};

/// Assembles the dense problem for a mesh (optionally at a fixed pressure).
DenseProblem build_dense_problem(const Mesh& mesh, const SolverConfig& cfg,
                                 const BodyForce& f, const CellField* pressure = nullptr);

/// 1/2 v'Kv - load.v + sum_i w_i xi_i |v_tau,i|
double oracle_objective(const DenseProblem& p, std::span<const double> v);

/// Gradient of the smooth part, K v - load.
std::vector<double> oracle_smooth_gradient(const DenseProblem& p, std::span<const double> v);

/// Orthogonal projection onto {v : fixed DOFs zero, |(Dv)_K| <= epsilon}
/// by Dykstra's alternating projections, iterated until successive sweeps
/// differ by less than 1e-12.
std::vector<double> project_feasible(const DenseProblem& p, std::vector<double> v);

struct OracleResult {
    std::vector<double> velocity;
    double best_objective = 0.0;
    std::vector<double> objective_history;  // best-so-far at each checkpoint
};

/// Projected subgradient descent with diminishing steps a/(1+k); returns the
/// best-objective iterate. Refuses problems above 200 velocity DOFs.
OracleResult oracle_solve(const DenseProblem& p, int steps);

/// Independent elasticity assembly (Voigt form) used to cross-check the
/// velocity step: stress 2 mu e(u) + lame_lambda tr(e(u)) I.
dense::DenseMatrix assemble_elasticity_dense(const Mesh& mesh, double mu, double lame_lambda);

/// Dense analogue of constrain_matrix (rotation + elimination).
dense::DenseMatrix apply_constraints_dense(const dense::DenseMatrix& a, const ConstraintMap& cm);

/// Velocity of the incompressible mixed problem on an enclosed mesh: the
/// minimizer of the viscous energy over discretely divergence-free fields,
/// computed by a dense nullspace reduction of the element divergence rows.
std::vector<double> solve_incompressible_dense(const Mesh& mesh, const ConstraintMap& cm,
                                               double nu, std::span<const double> load);

}  // namespace stokes
