#include "stokes/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stokes/errors.hpp"

namespace stokes {

ElementGeometry ElementGeometry::build(const Mesh& mesh) {
    ElementGeometry geo;
    const std::ptrdiff_t nt = mesh.num_triangles();
    geo.grads.resize(nt);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nt; ++k) {
        const auto& t = mesh.triangles[k];
        const Vec2 p0 = mesh.vertices[t[0]];
        const Vec2 p1 = mesh.vertices[t[1]];
        const Vec2 p2 = mesh.vertices[t[2]];
        const double inv2a = 1.0 / (2.0 * mesh.element_areas[k]);
        geo.grads[k] = {(p1.y - p2.y) * inv2a, (p2.x - p1.x) * inv2a,
                        (p2.y - p0.y) * inv2a, (p0.x - p2.x) * inv2a,
                        (p0.y - p1.y) * inv2a, (p1.x - p0.x) * inv2a};
    }

    const int nv = mesh.num_vertices();
    geo.node_offsets.assign(nv + 1, 0);
    for (const auto& t : mesh.triangles)
        for (int v : t) ++geo.node_offsets[v + 1];
    for (int i = 0; i < nv; ++i) geo.node_offsets[i + 1] += geo.node_offsets[i];
    geo.node_elements.resize(geo.node_offsets.back());
    std::vector<int> cursor(geo.node_offsets.begin(), geo.node_offsets.end() - 1);
    for (int k = 0; k < static_cast<int>(nt); ++k)
        for (int v : mesh.triangles[k]) geo.node_elements[cursor[v]++] = k;
    return geo;
}

namespace {

int local_index(const std::array<int, 3>& tri, int node) {
    for (int l = 0; l < 3; ++l)
        if (tri[l] == node) return l;
    return -1;
}

// Sorted unique vertex neighbourhood (including the node itself).
std::vector<int> node_neighbors(const Mesh& mesh, const ElementGeometry& geo, int node,
                                std::vector<int>& scratch) {
    scratch.clear();
    for (int k = geo.node_offsets[node]; k < geo.node_offsets[node + 1]; ++k)
        for (int v : mesh.triangles[geo.node_elements[k]]) scratch.push_back(v);
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    return scratch;
}

// Gather-style assembly over vertex rows: deterministic for any thread count
// because each row sums its incident elements in a fixed order.
template <typename EntryFn>
SparseMatrix assemble_vector_operator(const Mesh& mesh, const ElementGeometry& geo,
                                      EntryFn&& entry) {
    const int nv = mesh.num_vertices();
    const int ndof = 2 * nv;

    std::vector<int> offsets(ndof + 1, 0);
    std::vector<std::vector<int>> neighbors(nv);
    {
        std::vector<int> scratch;
        for (int i = 0; i < nv; ++i) {
            neighbors[i] = node_neighbors(mesh, geo, i, scratch);
            const int rownnz = 2 * static_cast<int>(neighbors[i].size());
            offsets[2 * i + 1] = rownnz;
            offsets[2 * i + 2] = rownnz;
        }
    }
    for (int r = 0; r < ndof; ++r) offsets[r + 1] += offsets[r];

    std::vector<int> cols(offsets.back());
    std::vector<double> vals(offsets.back(), 0.0);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nv; ++i) {
        const auto& nbr = neighbors[i];
        for (int a = 0; a < 2; ++a) {
            const int row = 2 * static_cast<int>(i) + a;
            int* rc = cols.data() + offsets[row];
            for (std::size_t m = 0; m < nbr.size(); ++m) {
                rc[2 * m] = 2 * nbr[m];
                rc[2 * m + 1] = 2 * nbr[m] + 1;
            }
        }
        for (int k = geo.node_offsets[i]; k < geo.node_offsets[i + 1]; ++k) {
            const int elem = geo.node_elements[k];
            const auto& tri = mesh.triangles[elem];
            const int li = local_index(tri, static_cast<int>(i));
            for (int lj = 0; lj < 3; ++lj) {
                const int j = tri[lj];
                const auto pos = std::lower_bound(nbr.begin(), nbr.end(), j) - nbr.begin();
                for (int a = 0; a < 2; ++a) {
                    const int row = 2 * static_cast<int>(i) + a;
                    double* rv = vals.data() + offsets[row];
                    for (int b = 0; b < 2; ++b)
                        rv[2 * pos + b] += entry(elem, li, a, lj, b);
                }
            }
        }
    }
    return SparseMatrix::from_csr(ndof, std::move(offsets), std::move(cols), std::move(vals));
}

}  // namespace

SparseMatrix assemble_viscous(const Mesh& mesh, const ElementGeometry& geo, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("assemble_viscous: viscosity must be > 0");
    return assemble_vector_operator(
        mesh, geo, [&](int elem, int li, int a, int lj, int b) {
            const auto& g = geo.grads[elem];
            const double gdot = g[2 * li] * g[2 * lj] + g[2 * li + 1] * g[2 * lj + 1];
            const double cross = g[2 * li + b] * g[2 * lj + a];
            return nu * mesh.element_areas[elem] * 0.5 * ((a == b ? gdot : 0.0) + cross);
        });
}

SparseMatrix assemble_divdiv(const Mesh& mesh, const ElementGeometry& geo) {
    return assemble_vector_operator(mesh, geo, [&](int elem, int li, int a, int lj, int b) {
        const auto& g = geo.grads[elem];
        return mesh.element_areas[elem] * g[2 * li + a] * g[2 * lj + b];
    });
}

std::vector<double> assemble_load(const Mesh& mesh, const ElementGeometry& geo,
                                  const BodyForce& f) {
    const std::ptrdiff_t nt = mesh.num_triangles();
    std::vector<Vec2> centroid_force(nt);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nt; ++k) centroid_force[k] = f(mesh.centroid(static_cast<int>(k)));

    const std::ptrdiff_t nv = mesh.num_vertices();
    std::vector<double> load(2 * nv, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nv; ++i) {
        double lx = 0.0, ly = 0.0;
        for (int k = geo.node_offsets[i]; k < geo.node_offsets[i + 1]; ++k) {
            const int elem = geo.node_elements[k];
            lx += mesh.element_areas[elem] * centroid_force[elem].x / 3.0;
            ly += mesh.element_areas[elem] * centroid_force[elem].y / 3.0;
        }
        load[2 * i] = lx;
        load[2 * i + 1] = ly;
    }
    return load;
}

std::vector<double> tangential_boundary_mass(const std::vector<BoundaryFrame>& frames) {
    std::vector<double> diag(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) diag[i] = frames[i].weight;
    return diag;
}

CellField element_divergence(const Mesh& mesh, const ElementGeometry& geo,
                             std::span<const double> u_cartesian) {
    if (static_cast<int>(u_cartesian.size()) != mesh.num_velocity_dofs())
        throw std::invalid_argument("element_divergence: field size mismatch");
    CellField div(mesh.num_triangles());
    const std::ptrdiff_t nt = mesh.num_triangles();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nt; ++k) {
        const auto& t = mesh.triangles[k];
        const auto& g = geo.grads[k];
        double d = 0.0;
        for (int l = 0; l < 3; ++l)
            d += u_cartesian[2 * t[l]] * g[2 * l] + u_cartesian[2 * t[l] + 1] * g[2 * l + 1];
        div.values[k] = d;
    }
    return div;
}

std::vector<double> pressure_coupling(const Mesh& mesh, const ElementGeometry& geo,
                                      const CellField& q) {
    if (q.values.size() != mesh.triangles.size())
        throw std::invalid_argument("pressure_coupling: field size mismatch");
    const std::ptrdiff_t nv = mesh.num_vertices();
    std::vector<double> r(2 * nv, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nv; ++i) {
        double rx = 0.0, ry = 0.0;
        for (int k = geo.node_offsets[i]; k < geo.node_offsets[i + 1]; ++k) {
            const int elem = geo.node_elements[k];
            const int li = local_index(mesh.triangles[elem], static_cast<int>(i));
            const double w = mesh.element_areas[elem] * q.values[elem];
            rx += w * geo.grads[elem][2 * li];
            ry += w * geo.grads[elem][2 * li + 1];
        }
        r[2 * i] = rx;
        r[2 * i + 1] = ry;
    }
    return r;
}

CellField project_mean_zero(const Mesh& mesh, const CellField& q) {
    if (q.values.size() != mesh.triangles.size())
        throw std::invalid_argument("project_mean_zero: field size mismatch");
    double total = 0.0, weighted = 0.0;
    for (std::size_t k = 0; k < q.values.size(); ++k) {
        total += mesh.element_areas[k];
        weighted += mesh.element_areas[k] * q.values[k];
    }
    const double mean = weighted / total;
    CellField out(q.values.size());
    for (std::size_t k = 0; k < q.values.size(); ++k) out.values[k] = q.values[k] - mean;
    return out;
}

ConstraintMap ConstraintMap::build(const Mesh& mesh, std::vector<BoundaryFrame> frames) {
    ConstraintMap cm;
    const int nv = mesh.num_vertices();
    cm.fixed_.assign(2 * nv, 0);
    cm.frame_of_node_.assign(nv, -1);
    cm.frames_ = std::move(frames);

    bool any_dirichlet = false;
    for (const auto& f : mesh.boundary_facets) {
        if (f.tag != BoundaryTag::dirichlet) continue;
        any_dirichlet = true;
        for (int v : {f.a, f.b}) {
            cm.fixed_[2 * v] = 1;
            cm.fixed_[2 * v + 1] = 1;
        }
    }
    if (!any_dirichlet)
        throw ConfigError("constraints: empty Dirichlet boundary leaves the system singular");

    for (std::size_t i = 0; i < cm.frames_.size(); ++i) {
        const int node = cm.frames_[i].node;
        cm.frame_of_node_[node] = static_cast<int>(i);
        // friction node: normal component fixed, tangential free
        // (unless the node also touches a Dirichlet facet: both stay fixed)
        cm.fixed_[2 * node] = 1;
    }
    return cm;
}

void ConstraintMap::to_frame(std::span<double> v) const {
    for (const auto& f : frames_) {
        const double vx = v[2 * f.node], vy = v[2 * f.node + 1];
        v[2 * f.node] = f.normal.x * vx + f.normal.y * vy;
        v[2 * f.node + 1] = f.tangent.x * vx + f.tangent.y * vy;
    }
}

void ConstraintMap::to_cartesian(std::span<double> v) const {
    for (const auto& f : frames_) {
        const double vn = v[2 * f.node], vt = v[2 * f.node + 1];
        v[2 * f.node] = f.normal.x * vn + f.tangent.x * vt;
        v[2 * f.node + 1] = f.normal.y * vn + f.tangent.y * vt;
    }
}

std::vector<double> ConstraintMap::cartesian_copy(const VelocityField& u) const {
    std::vector<double> v = u.values;
    to_cartesian(v);
    return v;
}

std::vector<double> ConstraintMap::constrain_rhs(std::vector<double> b) const {
    to_frame(b);
    for (std::size_t d = 0; d < b.size(); ++d)
        if (fixed_[d]) b[d] = 0.0;
    return b;
}

SparseMatrix constrain_matrix(const SparseMatrix& a, const ConstraintMap& cm) {
    if (a.size() != cm.num_dofs())
        throw std::invalid_argument("constrain_matrix: dimension mismatch");

    // rotation row vectors per node: R[0] = n, R[1] = t for frame nodes
    auto rotation = [&](int node, int local, int comp) -> double {
        const int f = cm.frame_of_node(node);
        if (f < 0) return local == comp ? 1.0 : 0.0;
        const BoundaryFrame& fr = cm.frames()[f];
        const Vec2 r = local == 0 ? fr.normal : fr.tangent;
        return comp == 0 ? r.x : r.y;
    };

    std::vector<Triplet> triplets;
    triplets.reserve(a.values().size() * 2);
    const auto offsets = a.row_offsets();
    const auto cols = a.cols();
    const auto vals = a.values();
    for (int row = 0; row < a.size(); ++row) {
        const int i = row / 2, ai = row % 2;
        const bool rot_i = cm.frame_of_node(i) >= 0;
        for (int k = offsets[row]; k < offsets[row + 1]; ++k) {
            const int col = cols[k];
            const double v = vals[k];
            const int j = col / 2, bj = col % 2;
            const bool rot_j = cm.frame_of_node(j) >= 0;
            if (!rot_i && !rot_j) {
                if (!cm.is_fixed(row) && !cm.is_fixed(col)) triplets.push_back({row, col, v});
                continue;
            }
            for (int alpha = 0; alpha < 2; ++alpha) {
                const int r2 = 2 * i + alpha;
                if (cm.is_fixed(r2)) continue;
                const double ri = rotation(i, alpha, ai);
                if (ri == 0.0) continue;
                for (int beta = 0; beta < 2; ++beta) {
                    const int c2 = 2 * j + beta;
                    if (cm.is_fixed(c2)) continue;
                    const double rj = rotation(j, beta, bj);
                    if (rj == 0.0) continue;
                    triplets.push_back({r2, c2, ri * v * rj});
                }
            }
        }
    }
    for (int d = 0; d < cm.num_dofs(); ++d)
        if (cm.is_fixed(d)) triplets.push_back({d, d, 1.0});
    return SparseMatrix::from_triplets(a.size(), triplets);
}

ConstrainedSystem apply_constraints(const SparseMatrix& a, std::span<const double> rhs,
                                    const Mesh& mesh, const ConstraintMap& cm) {
    if (static_cast<int>(rhs.size()) != mesh.num_velocity_dofs())
        throw std::invalid_argument("apply_constraints: rhs size mismatch");
    ConstrainedSystem sys;
    sys.matrix = constrain_matrix(a, cm);
    sys.rhs = cm.constrain_rhs(std::vector<double>(rhs.begin(), rhs.end()));
    return sys;
}

double velocity_l2_norm(const Mesh& mesh, const ElementGeometry& geo,
                        std::span<const double> u_cartesian) {
    (void)geo;
    double sum = 0.0;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        const double w = mesh.element_areas[k] / 6.0;
        for (int c = 0; c < 2; ++c) {
            const double a = u_cartesian[2 * t[0] + c];
            const double b = u_cartesian[2 * t[1] + c];
            const double d = u_cartesian[2 * t[2] + c];
            sum += w * (a * a + b * b + d * d + a * b + a * d + b * d);
        }
    }
    return std::sqrt(sum);
}

double velocity_h1_seminorm(const Mesh& mesh, const ElementGeometry& geo,
                            std::span<const double> u_cartesian) {
    double sum = 0.0;
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        const auto& g = geo.grads[k];
        for (int c = 0; c < 2; ++c) {
            double gx = 0.0, gy = 0.0;
            for (int l = 0; l < 3; ++l) {
                gx += u_cartesian[2 * t[l] + c] * g[2 * l];
                gy += u_cartesian[2 * t[l] + c] * g[2 * l + 1];
            }
            sum += mesh.element_areas[k] * (gx * gx + gy * gy);
        }
    }
    return std::sqrt(sum);
}

double velocity_h1_norm(const Mesh& mesh, const ElementGeometry& geo,
                        std::span<const double> u_cartesian) {
    const double l2 = velocity_l2_norm(mesh, geo, u_cartesian);
    const double semi = velocity_h1_seminorm(mesh, geo, u_cartesian);
    return std::sqrt(l2 * l2 + semi * semi);
}

double cell_l2_norm(const Mesh& mesh, const CellField& q) {
    double sum = 0.0;
    for (std::size_t k = 0; k < q.values.size(); ++k)
        sum += mesh.element_areas[k] * q.values[k] * q.values[k];
    return std::sqrt(sum);
}

}  // namespace stokes
