#pragma once

#include <set>
#include <string>

#include "stokes/assembly.hpp"
#include "stokes/mesh.hpp"
#include "stokes/solver_config.hpp"

namespace stokes {

struct MeshSpec {
    bool from_file = false;
    std::string msh_path;
    int nx = 0;
    int ny = 0;
    double width = 1.0;
    double height = 1.0;
    std::set<Side> friction_sides;
};

enum class ForceKind { zero, constant, shear };

struct ForceSpec {
    ForceKind kind = ForceKind::zero;
    double cx = 0.0;  // constant components
    double cy = 0.0;
    Side shear_side = Side::bottom;
    double magnitude = 1.0;
};

struct RunConfig {
    MeshSpec mesh;
    ForceSpec force;
    SolverConfig solver;
};

/// Parses the key=value run configuration ('#' starts a comment, one key per
/// line). Unknown keys, malformed values and a missing or ambiguous mesh
/// source raise ConfigError naming the key and line.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Serializes a config so that parse_config_text(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

Mesh build_mesh(const RunConfig& cfg);

/// Body force for the configured preset. The shear preset pushes along the
/// chosen wall (+x for horizontal sides, +y for vertical ones) with an
/// exponential boundary-layer profile.
BodyForce build_force(const RunConfig& cfg);

}  // namespace stokes
