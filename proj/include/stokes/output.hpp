#pragma once

#include <span>
#include <string>

#include "stokes/fields.hpp"
#include "stokes/mesh.hpp"
#include "stokes/outer.hpp"

namespace stokes {

/// Legacy ASCII VTK (version 3.0) unstructured grid: point vector "velocity"
/// (cartesian components), cell scalars "pressure" and "divergence". Values
/// carry 17 significant digits; the file is written to a temporary and
/// renamed so readers never see a partial file.
void write_vtk(const Mesh& mesh, std::span<const double> u_cartesian, const CellField& pressure,
               const CellField& divergence, const std::string& path);

/// CSV "outer_iter,inner_iters,du_h1,dp_l2,div_l2", one row per outer
/// iteration, deterministic formatting. Same atomic-write discipline.
void write_convergence_csv(const OuterReport& report, const std::string& path);

}  // namespace stokes
