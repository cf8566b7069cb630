#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "stokes/fields.hpp"
#include "stokes/linalg.hpp"
#include "stokes/mesh.hpp"

namespace stokes {

using BodyForce = std::function<Vec2(Vec2)>;

/// Per-element hat-function gradients (gx0,gy0,gx1,gy1,gx2,gy2) and the
/// vertex->incident-element adjacency used by the gather-style assembly.
/// Derived once from a mesh and shared by all operators.
struct ElementGeometry {
    std::vector<std::array<double, 6>> grads;
    std::vector<int> node_offsets;   // CSR into node_elements, size nv+1
    std::vector<int> node_elements;  // incident elements, ascending per node

    static ElementGeometry build(const Mesh& mesh);
};

/// Stiffness of the symmetric-gradient viscous form; positive semidefinite
/// with nullspace {translations, rotations} before constraints.
SparseMatrix assemble_viscous(const Mesh& mesh, const ElementGeometry& geo, double nu);

/// div' M div with M the diagonal of element areas.
SparseMatrix assemble_divdiv(const Mesh& mesh, const ElementGeometry& geo);

/// One-point-quadrature load vector for a body force.
std::vector<double> assemble_load(const Mesh& mesh, const ElementGeometry& geo,
                                  const BodyForce& f);

/// Diagonal of the lumped tangential boundary mass, one entry per frame.
std::vector<double> tangential_boundary_mass(const std::vector<BoundaryFrame>& frames);

/// Exact per-element divergence of a P1 field given in cartesian components.
CellField element_divergence(const Mesh& mesh, const ElementGeometry& geo,
                             std::span<const double> u_cartesian);

/// Vector r with r . v = sum_K area_K q_K div(v)|_K for every P1 field v;
/// the adjoint of element_divergence in the area-weighted pairing.
std::vector<double> pressure_coupling(const Mesh& mesh, const ElementGeometry& geo,
                                      const CellField& q);

/// Subtracts the area-weighted mean; idempotent and self-adjoint.
CellField project_mean_zero(const Mesh& mesh, const CellField& q);

/// Velocity boundary conditions: which DOFs are eliminated and how friction
/// node pairs rotate between cartesian and (normal, tangent) components.
class ConstraintMap {
public:
    static ConstraintMap build(const Mesh& mesh, std::vector<BoundaryFrame> frames);

    int num_dofs() const { return static_cast<int>(fixed_.size()); }
    const std::vector<BoundaryFrame>& frames() const { return frames_; }
    bool is_fixed(int dof) const { return fixed_[dof] != 0; }
    std::span<const std::uint8_t> fixed() const { return fixed_; }
    /// -1 for nodes without a frame.
    int frame_of_node(int node) const { return frame_of_node_[node]; }
    /// DOF index holding the tangential component of a frame's node.
    int tangential_dof(int frame) const { return 2 * frames_[frame].node + 1; }
    /// True if the frame's node is Dirichlet-overridden (no free tangential DOF).
    bool frame_fixed(int frame) const { return fixed_[tangential_dof(frame)] != 0; }

    /// In-place change of nodal components, cartesian <-> boundary frame.
    void to_frame(std::span<double> v) const;
    void to_cartesian(std::span<double> v) const;
    std::vector<double> cartesian_copy(const VelocityField& u) const;

    /// Rotates a cartesian right-hand side into frame components and zeros
    /// the fixed entries.
    std::vector<double> constrain_rhs(std::vector<double> b) const;

private:
    std::vector<std::uint8_t> fixed_;
    std::vector<int> frame_of_node_;
    std::vector<BoundaryFrame> frames_;
};

/// Rotates friction-node DOF pairs into frame components and eliminates
/// fixed rows/columns symmetrically (unit diagonal). The result is SPD for
/// the artifact's operators. Throws ConfigError when the Dirichlet part is empty.
SparseMatrix constrain_matrix(const SparseMatrix& a, const ConstraintMap& cm);

struct ConstrainedSystem {
    SparseMatrix matrix;
    std::vector<double> rhs;
};

ConstrainedSystem apply_constraints(const SparseMatrix& a, std::span<const double> rhs,
                                    const Mesh& mesh, const ConstraintMap& cm);

/// Exact P1 norms of a cartesian velocity vector.
double velocity_l2_norm(const Mesh& mesh, const ElementGeometry& geo,
                        std::span<const double> u_cartesian);
double velocity_h1_seminorm(const Mesh& mesh, const ElementGeometry& geo,
                            std::span<const double> u_cartesian);
double velocity_h1_norm(const Mesh& mesh, const ElementGeometry& geo,
                        std::span<const double> u_cartesian);

/// Area-weighted L2 norm of a piecewise-constant field.
double cell_l2_norm(const Mesh& mesh, const CellField& q);

}  // namespace stokes
