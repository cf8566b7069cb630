#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace stokes {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

enum class BoundaryTag { dirichlet = 1, friction = 2 };

struct BoundaryFacet {
    int a = -1;  // vertex indices as stored in the mesh
    int b = -1;
    BoundaryTag tag = BoundaryTag::dirichlet;
};

/// Conforming triangulation of a 2D domain. Triangles are counter-clockwise,
/// boundary facets cover the topological boundary and carry exactly one tag.
/// Immutable after construction; safe for concurrent reads.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryFacet> boundary_facets;
    std::vector<double> element_areas;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int num_velocity_dofs() const { return 2 * num_vertices(); }

    double total_area() const;
    Vec2 centroid(int triangle) const;
};

enum class Side { bottom = 0, right = 1, top = 2, left = 3 };

/// Tag assignment for the four sides of a generated rectangle.
struct SideTags {
    BoundaryTag bottom = BoundaryTag::dirichlet;
    BoundaryTag right = BoundaryTag::dirichlet;
    BoundaryTag top = BoundaryTag::dirichlet;
    BoundaryTag left = BoundaryTag::dirichlet;

    static SideTags all_dirichlet() { return {}; }
    BoundaryTag side(Side s) const;
};

/// Structured crossed-diagonal triangulation of [0,width] x [0,height]
/// with nx*ny cells, two triangles per cell. Throws std::invalid_argument
/// on nonpositive cell counts or dimensions.
Mesh generate_rectangle(int nx, int ny, double width, double height, const SideTags& tags);

/// Checks all mesh invariants (positive areas, facet/boundary consistency,
/// nonempty Dirichlet part). Throws ParseError naming the first violation.
void validate_mesh(const Mesh& mesh);

/// Reads the ASCII Gmsh MSH 2.2 subset: 2-node boundary lines carrying
/// physical tag 1 (Dirichlet) or 2 (friction) and 3-node triangles.
/// Vertex ids are remapped to dense 0-based indices.
Mesh load_msh(const std::string& path);

/// Writes the same MSH 2.2 subset read by load_msh.
void save_msh(const Mesh& mesh, const std::string& path);

/// Outward unit normal, tangent (normal rotated +90 degrees) and lumped
/// boundary measure at one friction-boundary node.
struct BoundaryFrame {
    int node = -1;
    Vec2 normal;
    Vec2 tangent;
    double weight = 0.0;
};

/// One frame per node incident to at least one friction facet, ascending by
/// node index. At nodes shared by two friction facets the normal is the
/// normalized average of the facet normals; the weight is the half-sum of
/// the incident friction facet lengths.
std::vector<BoundaryFrame> boundary_frames(const Mesh& mesh);

}  // namespace stokes
