#pragma once

#include <cstddef>
#include <vector>

namespace stokes {

/// Nodal 2-vector field over mesh vertices, stored interleaved (x0,y0,x1,y1,...).
/// At friction-boundary nodes the pair holds the boundary-frame components
/// (normal, tangential) instead of cartesian ones; ConstraintMap converts.
struct VelocityField {
    std::vector<double> values;

    VelocityField() = default;
    explicit VelocityField(std::size_t num_vertices) : values(2 * num_vertices, 0.0) {}
};

/// One scalar per triangle (piecewise-constant field).
struct CellField {
    std::vector<double> values;

    CellField() = default;
    explicit CellField(std::size_t num_cells, double fill = 0.0) : values(num_cells, fill) {}
};

/// One scalar per friction-boundary node, in boundary-frame order.
struct TangentialTrace {
    std::vector<double> values;

    TangentialTrace() = default;
    explicit TangentialTrace(std::size_t num_nodes, double fill = 0.0) : values(num_nodes, fill) {}
};

}  // namespace stokes
