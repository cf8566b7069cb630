#include "stokes/outer.hpp"

#include <cmath>

#include "stokes/kernels.hpp"

namespace stokes {

CellField pressure_update(const Mesh& mesh, const ElementGeometry& geo, const CellField& p,
                          std::span<const double> u_cartesian, double tau_p) {
    const CellField div = element_divergence(mesh, geo, u_cartesian);
    const CellField mean_zero = project_mean_zero(mesh, div);
    CellField out(p.values.size());
    for (std::size_t k = 0; k < p.values.size(); ++k)
        out.values[k] = p.values[k] + tau_p * mean_zero.values[k];
    return out;
}

StokesSolution solve_stokes(const AdmmSolver& solver) {
    const Mesh& mesh = solver.mesh();
    const SolverConfig& cfg = solver.config();
    const ElementGeometry& geo = solver.geometry();

    StokesSolution sol;
    sol.pressure = CellField(mesh.num_triangles());
    AdmmState state = solver.make_state();
    std::vector<double> u_prev(mesh.num_velocity_dofs(), 0.0);

    auto fail = [&](const std::string& what) {
        StokesSolution partial = sol;
        partial.u = state.u;
        return OuterError(what, sol.report, std::move(partial));
    };

    for (int n = 1; n <= cfg.max_outer; ++n) {
        const double epsilon = cfg.epsilon_schedule ? cfg.epsilon / n : cfg.epsilon;
        AdmmReport inner;
        try {
            auto [next, report] =
                solver.solve(sol.pressure, epsilon, cfg.warm_start ? &state : nullptr);
            state = std::move(next);
            inner = std::move(report);
        } catch (const AdmmError& e) {
            sol.report.inner_iterations.push_back(e.report.iterations);
            sol.report.total_inner_iterations += e.report.iterations;
            throw fail("outer iteration " + std::to_string(n) + ": " + e.what());
        }

        const std::vector<double> u_cart = solver.constraints().cartesian_copy(state.u);
        const CellField p_next = pressure_update(mesh, geo, sol.pressure, u_cart, cfg.tau_p);

        std::vector<double> du = u_cart;
        kernels::axpy(-1.0, u_prev, du);
        const double du_h1 = velocity_h1_norm(mesh, geo, du);
        CellField dp(p_next.values.size());
        for (std::size_t k = 0; k < dp.values.size(); ++k)
            dp.values[k] = p_next.values[k] - sol.pressure.values[k];
        const double dp_l2 = cell_l2_norm(mesh, dp);
        const CellField div = element_divergence(mesh, geo, u_cart);
        const double div_l2 = cell_l2_norm(mesh, div);

        sol.report.du_h1.push_back(du_h1);
        sol.report.dp_l2.push_back(dp_l2);
        sol.report.div_l2.push_back(div_l2);
        sol.report.inner_iterations.push_back(inner.iterations);
        sol.report.total_inner_iterations += inner.iterations;

        sol.pressure = p_next;
        u_prev = u_cart;

        if (du_h1 + dp_l2 < cfg.outer_tol) {
            sol.report.converged = true;
            sol.report.div_converged = div_l2 < cfg.div_tol;
            break;
        }
    }
    if (!sol.report.converged)
        throw fail("outer solver: no convergence within " + std::to_string(cfg.max_outer) +
                   " iterations");
    sol.u = std::move(state.u);
    return sol;
}

}  // namespace stokes
