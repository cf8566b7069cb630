#include "stokes/admm.hpp"

#include <cmath>
#include <limits>

#include "stokes/kernels.hpp"

namespace stokes {

AdmmSolver::AdmmSolver(const Mesh& mesh, const SolverConfig& cfg, const BodyForce& f)
    : mesh_(&mesh), cfg_(cfg) {
    cfg_.validate();
    geo_ = ElementGeometry::build(mesh);
    cmap_ = ConstraintMap::build(mesh, boundary_frames(mesh));
    weights_ = tangential_boundary_mass(cmap_.frames());

    xi_.assign(cmap_.frames().size(), cfg_.xi);
    if (!cfg_.xi_values.empty()) {
        if (cfg_.xi_values.size() != cmap_.frames().size())
            throw ConfigError("xi values must match the number of friction nodes");
        xi_ = cfg_.xi_values;
    }

    viscous_ = assemble_viscous(mesh, geo_, cfg_.nu);
    SparseMatrix augmented = add_scaled(viscous_, assemble_divdiv(mesh, geo_), cfg_.rho);
    system_ = constrain_matrix(augmented, cmap_);
    // lumped tangential boundary mass is diagonal in the rotated frame
    {
        std::vector<Triplet> diag;
        for (std::size_t i = 0; i < cmap_.frames().size(); ++i) {
            if (cmap_.frame_fixed(static_cast<int>(i))) continue;
            diag.push_back({cmap_.tangential_dof(static_cast<int>(i)),
                            cmap_.tangential_dof(static_cast<int>(i)), cfg_.rho * weights_[i]});
        }
        if (!diag.empty())
            system_ = add_scaled(system_, SparseMatrix::from_triplets(system_.size(), diag), 1.0);
    }

    load_ = assemble_load(mesh, geo_, f);
}

AdmmState AdmmSolver::make_state() const {
    AdmmState s;
    s.u = VelocityField(mesh_->num_vertices());
    s.div_aux = CellField(mesh_->num_triangles());
    s.slip = TangentialTrace(cmap_.frames().size());
    s.traction_multiplier = TangentialTrace(cmap_.frames().size());
    s.pressure_multiplier = CellField(mesh_->num_triangles());
    return s;
}

std::vector<double> AdmmSolver::velocity_rhs_cartesian(const AdmmState& state,
                                                       const CellField& pressure) const {
    // momentum source: load - (div coupling of p + mu - rho*div_aux)
    CellField q(mesh_->num_triangles());
    for (std::size_t k = 0; k < q.values.size(); ++k)
        q.values[k] = cfg_.rho * state.div_aux.values[k] - state.pressure_multiplier.values[k] -
                      pressure.values[k];
    std::vector<double> rhs = pressure_coupling(*mesh_, geo_, q);
    kernels::axpy(1.0, load_, rhs);
    return rhs;
}

std::vector<double> AdmmSolver::velocity_rhs(const AdmmState& state,
                                             const CellField& pressure) const {
    std::vector<double> rhs = cmap_.constrain_rhs(velocity_rhs_cartesian(state, pressure));
    for (std::size_t i = 0; i < cmap_.frames().size(); ++i) {
        if (cmap_.frame_fixed(static_cast<int>(i))) continue;
        rhs[cmap_.tangential_dof(static_cast<int>(i))] +=
            weights_[i] * (cfg_.rho * state.slip.values[i] - state.traction_multiplier.values[i]);
    }
    return rhs;
}

void AdmmSolver::velocity_step(AdmmState& state, const CellField& pressure) const {
    const std::vector<double> rhs = velocity_rhs(state, pressure);
    CgResult r = cg_solve(system_, rhs, cfg_.cg_tol, cfg_.cg_max_iterations, state.u.values);
    state.u.values = std::move(r.x);
}

void AdmmSolver::divergence_step(AdmmState& state, double epsilon) const {
    const CellField div = divergence(state);
    std::vector<double> drive(div.values.size());
    for (std::size_t k = 0; k < drive.size(); ++k)
        drive[k] = state.pressure_multiplier.values[k] + cfg_.rho * div.values[k];

    if (cfg_.lambda_step_mode == LambdaStepMode::clamp) {
        kernels::clamp_interval(drive, cfg_.rho, epsilon, state.div_aux.values);
    } else {
        // global ball normalization variant, kept for comparison runs
        double norm2 = 0.0;
        for (std::size_t k = 0; k < drive.size(); ++k)
            norm2 += mesh_->element_areas[k] * drive[k] * drive[k];
        const double denom = std::max(cfg_.rho * epsilon, std::sqrt(norm2));
        for (std::size_t k = 0; k < drive.size(); ++k)
            state.div_aux.values[k] = drive[k] / denom;
    }
}

void AdmmSolver::slip_step(AdmmState& state) const {
    const TangentialTrace trace = tangential_trace(state);
    std::vector<double> s(trace.values.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = state.traction_multiplier.values[i] + cfg_.rho * trace.values[i];
    kernels::soft_shrink(s, xi_, cfg_.rho, state.slip.values);
}

void AdmmSolver::update_multipliers(AdmmState& state) const {
    const TangentialTrace trace = tangential_trace(state);
    for (std::size_t i = 0; i < trace.values.size(); ++i)
        state.traction_multiplier.values[i] +=
            cfg_.rho * (trace.values[i] - state.slip.values[i]);
    const CellField div = divergence(state);
    for (std::size_t k = 0; k < div.values.size(); ++k)
        state.pressure_multiplier.values[k] +=
            cfg_.rho * (div.values[k] - state.div_aux.values[k]);
}

TangentialTrace AdmmSolver::tangential_trace(const AdmmState& state) const {
    TangentialTrace t(cmap_.frames().size());
    for (std::size_t i = 0; i < cmap_.frames().size(); ++i)
        t.values[i] = state.u.values[cmap_.tangential_dof(static_cast<int>(i))];
    return t;
}

CellField AdmmSolver::divergence(const AdmmState& state) const {
    return element_divergence(*mesh_, geo_, cmap_.cartesian_copy(state.u));
}

std::pair<AdmmState, AdmmReport> AdmmSolver::solve(const CellField& pressure, double epsilon,
                                                   const AdmmState* warm_start) const {
    AdmmState state = warm_start ? *warm_start : make_state();
    AdmmReport report;

    std::vector<double> u_prev = cmap_.cartesian_copy(state.u);
    for (int k = 1; k <= cfg_.max_inner; ++k) {
        velocity_step(state, pressure);
        divergence_step(state, epsilon);
        slip_step(state);
        update_multipliers(state);
        state.iteration = k;

        const std::vector<double> u_cart = cmap_.cartesian_copy(state.u);
        const CellField div = element_divergence(*mesh_, geo_, u_cart);
        const TangentialTrace trace = tangential_trace(state);

        double slip_res = 0.0;
        for (std::size_t i = 0; i < trace.values.size(); ++i) {
            const double d = trace.values[i] - state.slip.values[i];
            slip_res += weights_[i] * d * d;
        }
        slip_res = std::sqrt(slip_res);
        double div_res = 0.0, aux_max = 0.0;
        for (std::size_t e = 0; e < div.values.size(); ++e) {
            const double d = div.values[e] - state.div_aux.values[e];
            div_res += mesh_->element_areas[e] * d * d;
            aux_max = std::max(aux_max, std::abs(state.div_aux.values[e]));
        }
        div_res = std::sqrt(div_res);

        std::vector<double> du = u_cart;
        kernels::axpy(-1.0, u_prev, du);
        const double du_h1 = velocity_h1_norm(*mesh_, geo_, du);
        u_prev = u_cart;

        report.slip_residuals.push_back(slip_res);
        report.div_residuals.push_back(div_res);
        report.energies.push_back(objective(state, pressure));
        report.div_aux_max.push_back(aux_max);
        report.iterations = k;

        if (du_h1 < cfg_.inner_tol && slip_res < cfg_.inner_tol && div_res < cfg_.inner_tol) {
            report.converged = true;
            break;
        }
    }
    if (!report.converged)
        throw AdmmError("inner solver: no convergence within " + std::to_string(cfg_.max_inner) +
                            " iterations",
                        std::move(report));
    return {std::move(state), std::move(report)};
}

std::pair<AdmmState, AdmmReport> AdmmSolver::solve(const CellField& pressure,
                                                   const AdmmState* warm_start) const {
    return solve(pressure, cfg_.epsilon, warm_start);
}

double AdmmSolver::objective(const AdmmState& state, const CellField& pressure) const {
    const std::vector<double> u_cart = cmap_.cartesian_copy(state.u);
    const CellField div = element_divergence(*mesh_, geo_, u_cart);
    double value = 0.5 * quadratic_form(viscous_, u_cart, u_cart) -
                   kernels::dot(load_, u_cart);
    for (std::size_t k = 0; k < div.values.size(); ++k)
        value += mesh_->element_areas[k] * pressure.values[k] * div.values[k];
    const TangentialTrace trace = tangential_trace(state);
    for (std::size_t i = 0; i < trace.values.size(); ++i)
        value += weights_[i] * xi_[i] * std::abs(trace.values[i]);
    return value;
}

double AdmmSolver::split_objective(const AdmmState& state, const CellField& pressure) const {
    const std::vector<double> u_cart = cmap_.cartesian_copy(state.u);
    const CellField div = element_divergence(*mesh_, geo_, u_cart);
    double value = 0.5 * quadratic_form(viscous_, u_cart, u_cart) -
                   kernels::dot(load_, u_cart);
    for (std::size_t k = 0; k < div.values.size(); ++k)
        value += mesh_->element_areas[k] * pressure.values[k] * div.values[k];
    for (std::size_t i = 0; i < state.slip.values.size(); ++i)
        value += weights_[i] * xi_[i] * std::abs(state.slip.values[i]);
    return value;
}

double AdmmSolver::augmented_lagrangian(const AdmmState& state, const CellField& pressure,
                                        double epsilon) const {
    for (double v : state.div_aux.values)
        if (std::abs(v) > epsilon) return std::numeric_limits<double>::infinity();

    double value = split_objective(state, pressure);
    const CellField div = divergence(state);
    for (std::size_t k = 0; k < div.values.size(); ++k) {
        const double gap = div.values[k] - state.div_aux.values[k];
        value += mesh_->element_areas[k] *
                 (state.pressure_multiplier.values[k] * gap + 0.5 * cfg_.rho * gap * gap);
    }
    const TangentialTrace trace = tangential_trace(state);
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
        const double gap = trace.values[i] - state.slip.values[i];
        value += weights_[i] *
                 (state.traction_multiplier.values[i] * gap + 0.5 * cfg_.rho * gap * gap);
    }
    return value;
}

}  // namespace stokes
