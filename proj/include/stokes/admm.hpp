#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "stokes/assembly.hpp"
#include "stokes/fields.hpp"
#include "stokes/solver_config.hpp"

namespace stokes {

/// Iterate of the inner splitting solver. The velocity is stored in frame
/// components at friction nodes; div_aux is the interval-constrained
/// divergence auxiliary, slip the tangential auxiliary, and the two
/// multipliers enforce div(u) = div_aux and u_tau = slip.
struct AdmmState {
    VelocityField u;
    CellField div_aux;
    TangentialTrace slip;
    TangentialTrace traction_multiplier;
    CellField pressure_multiplier;
    int iteration = 0;
};

struct AdmmReport {
    std::vector<double> slip_residuals;  // ||u_tau - slip||, lumped boundary norm
    std::vector<double> div_residuals;   // ||div u - div_aux||, area-weighted norm
    std::vector<double> energies;        // J(u) + j(u_tau)
    std::vector<double> div_aux_max;     // max_K |div_aux| per iteration
    std::vector<int> cg_iterations;
    int iterations = 0;
    bool converged = false;
};

struct AdmmError : SolveError {
    AdmmError(const std::string& what, AdmmReport report)
        : SolveError(what), report(std::move(report)) {}
    AdmmReport report;
};

/// The inner solver: splitting iteration for the friction Stokes problem at
/// a fixed pressure field. Operators are assembled once at construction and
/// reused across calls; a solver instance is safe for concurrent solve()
/// calls only if each call owns its own state.
class AdmmSolver {
public:
    AdmmSolver(const Mesh& mesh, const SolverConfig& cfg, const BodyForce& f);

    AdmmState make_state() const;

    /// One linear velocity solve with the other blocks frozen. Updates
    /// state.u; conjugate-gradient failures propagate.
    void velocity_step(AdmmState& state, const CellField& pressure) const;

    /// Per-element interval projection of the divergence drive. Exact
    /// feasibility |div_aux| <= epsilon holds after every call (clamp mode).
    void divergence_step(AdmmState& state, double epsilon) const;

    /// Nodewise shrinkage of the tangential trace against the friction bound.
    void slip_step(AdmmState& state) const;

    void update_multipliers(AdmmState& state) const;

    /// Full inner loop at fixed pressure. Stops when the velocity increment
    /// (H1 norm) and both primal residuals drop below cfg.inner_tol; throws
    /// AdmmError with the report attached when max_inner is exceeded.
    std::pair<AdmmState, AdmmReport> solve(const CellField& pressure, double epsilon,
                                           const AdmmState* warm_start = nullptr) const;
    std::pair<AdmmState, AdmmReport> solve(const CellField& pressure,
                                           const AdmmState* warm_start = nullptr) const;

    /// J(u) + j(u_tau) at the given pressure.
    double objective(const AdmmState& state, const CellField& pressure) const;
    /// J(u) + j(slip) (the split objective; equals objective() at feasibility).
    double split_objective(const AdmmState& state, const CellField& pressure) const;
    /// Full augmented Lagrangian of the state (+inf if div_aux is infeasible).
    double augmented_lagrangian(const AdmmState& state, const CellField& pressure,
                                double epsilon) const;

    TangentialTrace tangential_trace(const AdmmState& state) const;
    CellField divergence(const AdmmState& state) const;

    const Mesh& mesh() const { return *mesh_; }
    const ElementGeometry& geometry() const { return geo_; }
    const ConstraintMap& constraints() const { return cmap_; }
    const SolverConfig& config() const { return cfg_; }
    const SparseMatrix& system_matrix() const { return system_; }
    const SparseMatrix& viscous_matrix() const { return viscous_; }
    std::span<const double> load() const { return load_; }
    std::span<const double> friction_bounds() const { return xi_; }
    std::span<const double> boundary_weights() const { return weights_; }

    /// Cartesian right-hand side of the velocity solve before constraints;
    /// exposed for the independent elasticity cross-check.
    std::vector<double> velocity_rhs_cartesian(const AdmmState& state,
                                               const CellField& pressure) const;

private:
    std::vector<double> velocity_rhs(const AdmmState& state, const CellField& pressure) const;

    const Mesh* mesh_;
    SolverConfig cfg_;
    ElementGeometry geo_;
    ConstraintMap cmap_;
    SparseMatrix viscous_;   // unconstrained viscous operator (cartesian)
    SparseMatrix system_;    // constrained viscous + rho div'div + rho boundary mass
    std::vector<double> load_;
    std::vector<double> weights_;  // lumped boundary measures per frame
    std::vector<double> xi_;       // friction bound per frame
};

}  // namespace stokes
