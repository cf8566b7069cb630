#include "stokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "stokes/errors.hpp"

namespace stokes {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// edge -> (owner count, third vertex of the first owner)
std::map<std::pair<int, int>, std::pair<int, int>> edge_owners(const Mesh& mesh) {
    std::map<std::pair<int, int>, std::pair<int, int>> owners;
    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e];
            const int b = tri[(e + 1) % 3];
            const int c = tri[(e + 2) % 3];
            auto [it, inserted] = owners.try_emplace(edge_key(a, b), 0, c);
            it->second.first += 1;
            if (inserted) it->second.second = c;
        }
    }
    return owners;
}

double facet_length(const Mesh& mesh, const BoundaryFacet& f) {
    const Vec2 d = mesh.vertices[f.b] - mesh.vertices[f.a];
    return std::sqrt(dot(d, d));
}

}  // namespace

double Mesh::total_area() const {
    double sum = 0.0;
    for (double a : element_areas) sum += a;
    return sum;
}

Vec2 Mesh::centroid(int triangle) const {
    const auto& t = triangles[triangle];
    return (1.0 / 3.0) * (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]);
}

BoundaryTag SideTags::side(Side s) const {
    switch (s) {
        case Side::bottom: return bottom;
        case Side::right: return right;
        case Side::top: return top;
        case Side::left: return left;
    }
    throw std::invalid_argument("bad side");
}

Mesh generate_rectangle(int nx, int ny, double width, double height, const SideTags& tags) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("generate_rectangle: cell counts must be >= 1");
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("generate_rectangle: dimensions must be > 0");

    Mesh mesh;
    mesh.vertices.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            mesh.vertices.push_back({width * i / nx, height * j / ny});

    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

    mesh.triangles.reserve(2 * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int ll = vid(i, j), lr = vid(i + 1, j);
            const int ul = vid(i, j + 1), ur = vid(i + 1, j + 1);
            if ((i + j) % 2 == 0) {
                mesh.triangles.push_back({ll, lr, ur});
                mesh.triangles.push_back({ll, ur, ul});
            } else {
                mesh.triangles.push_back({ll, lr, ul});
                mesh.triangles.push_back({lr, ur, ul});
            }
        }
    }

    for (int i = 0; i < nx; ++i)
        mesh.boundary_facets.push_back({vid(i, 0), vid(i + 1, 0), tags.side(Side::bottom)});
    for (int j = 0; j < ny; ++j)
        mesh.boundary_facets.push_back({vid(nx, j), vid(nx, j + 1), tags.side(Side::right)});
    for (int i = 0; i < nx; ++i)
        mesh.boundary_facets.push_back({vid(i + 1, ny), vid(i, ny), tags.side(Side::top)});
    for (int j = 0; j < ny; ++j)
        mesh.boundary_facets.push_back({vid(0, j + 1), vid(0, j), tags.side(Side::left)});

    mesh.element_areas.resize(mesh.triangles.size());
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        mesh.element_areas[k] = signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    }

    validate_mesh(mesh);
    return mesh;
}

void validate_mesh(const Mesh& mesh) {
    if (mesh.element_areas.size() != mesh.triangles.size())
        throw ParseError("mesh: element_areas not populated");
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        for (int v : t)
            if (v < 0 || v >= mesh.num_vertices())
                throw ParseError("mesh: triangle " + std::to_string(k) + " references invalid vertex");
        const double a = signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        if (!(a > 0.0))
            throw ParseError("mesh: triangle " + std::to_string(k) + " has nonpositive area");
        if (std::abs(a - mesh.element_areas[k]) > 1e-12 * std::max(1.0, std::abs(a)))
            throw ParseError("mesh: stored area of triangle " + std::to_string(k) + " is stale");
    }

    auto owners = edge_owners(mesh);
    std::map<std::pair<int, int>, int> facet_count;
    double dirichlet_length = 0.0;
    for (const auto& f : mesh.boundary_facets) {
        auto it = owners.find(edge_key(f.a, f.b));
        if (it == owners.end() || it->second.first != 1)
            throw ParseError("mesh: boundary facet (" + std::to_string(f.a) + "," +
                             std::to_string(f.b) + ") does not belong to exactly one triangle");
        if (++facet_count[edge_key(f.a, f.b)] > 1)
            throw ParseError("mesh: duplicate boundary facet (" + std::to_string(f.a) + "," +
                             std::to_string(f.b) + ")");
        if (f.tag == BoundaryTag::dirichlet) dirichlet_length += facet_length(mesh, f);
    }
    for (const auto& [key, owner] : owners) {
        if (owner.first == 1 && facet_count.find(key) == facet_count.end())
            throw ParseError("mesh: boundary edge (" + std::to_string(key.first) + "," +
                             std::to_string(key.second) + ") carries no tag");
    }
    if (!(dirichlet_length > 0.0))
        throw ParseError("mesh: Dirichlet boundary part must have nonzero measure");
}

std::vector<BoundaryFrame> boundary_frames(const Mesh& mesh) {
    auto owners = edge_owners(mesh);

    // accumulate unit facet normals and half-lengths per friction node
    std::map<int, std::pair<Vec2, double>> acc;
    for (const auto& f : mesh.boundary_facets) {
        if (f.tag != BoundaryTag::friction) continue;
        const Vec2 pa = mesh.vertices[f.a];
        const Vec2 pb = mesh.vertices[f.b];
        const Vec2 e = pb - pa;
        const double len = std::sqrt(dot(e, e));
        Vec2 n{e.y / len, -e.x / len};
        const int third = owners.at(edge_key(f.a, f.b)).second;
        const Vec2 mid = 0.5 * (pa + pb);
        if (dot(n, mesh.vertices[third] - mid) > 0.0) n = -1.0 * n;
        for (int v : {f.a, f.b}) {
            auto& [nsum, wsum] = acc[v];
            nsum = nsum + n;
            wsum += 0.5 * len;
        }
    }

    std::vector<BoundaryFrame> frames;
    frames.reserve(acc.size());
    for (const auto& [node, nw] : acc) {
        const auto& [nsum, w] = nw;
        const double len = std::sqrt(dot(nsum, nsum));
        if (!(len > 0.0))
            throw ParseError("mesh: degenerate friction normal at node " + std::to_string(node));
        BoundaryFrame frame;
        frame.node = node;
        frame.normal = (1.0 / len) * nsum;
        frame.tangent = {-frame.normal.y, frame.normal.x};
        frame.weight = w;
        frames.push_back(frame);
    }
    return frames;
}

namespace {

std::string next_content_line(std::istream& in, int& line_no) {
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return line;
    }
    throw ParseError("msh: unexpected end of file at line " + std::to_string(line_no));
}

}  // namespace

Mesh load_msh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("msh: cannot open '" + path + "'");

    int line_no = 0;
    std::string line = next_content_line(in, line_no);
    if (line != "$MeshFormat") throw ParseError("msh: expected $MeshFormat, got '" + line + "'");
    line = next_content_line(in, line_no);
    {
        std::istringstream ss(line);
        std::string version;
        int file_type = -1, data_size = -1;
        ss >> version >> file_type >> data_size;
        if (version != "2.2" || file_type != 0)
            throw ParseError("msh: unsupported MSH version '" + version + "' (need ASCII 2.2)");
    }
    if (next_content_line(in, line_no) != "$EndMeshFormat")
        throw ParseError("msh: missing $EndMeshFormat");

    if (next_content_line(in, line_no) != "$Nodes") throw ParseError("msh: expected $Nodes");
    int num_nodes = 0;
    {
        std::istringstream ss(next_content_line(in, line_no));
        if (!(ss >> num_nodes) || num_nodes < 0) throw ParseError("msh: bad node count");
    }
    std::map<long, int> node_index;  // file id -> dense index
    std::vector<Vec2> coords;
    coords.reserve(num_nodes);
    for (int i = 0; i < num_nodes; ++i) {
        std::istringstream ss(next_content_line(in, line_no));
        long id = 0;
        double x = 0, y = 0, z = 0;
        if (!(ss >> id >> x >> y >> z)) throw ParseError("msh: bad node line " + std::to_string(line_no));
        if (!node_index.emplace(id, static_cast<int>(coords.size())).second)
            throw ParseError("msh: duplicate node id " + std::to_string(id));
        coords.push_back({x, y});
    }
    if (next_content_line(in, line_no) != "$EndNodes") throw ParseError("msh: missing $EndNodes");

    if (next_content_line(in, line_no) != "$Elements") throw ParseError("msh: expected $Elements");
    int num_elements = 0;
    {
        std::istringstream ss(next_content_line(in, line_no));
        if (!(ss >> num_elements) || num_elements < 0) throw ParseError("msh: bad element count");
    }

    auto lookup = [&](long id) {
        auto it = node_index.find(id);
        if (it == node_index.end())
            throw ParseError("msh: element references unknown node " + std::to_string(id));
        return it->second;
    };

    Mesh mesh;
    mesh.vertices = coords;
    for (int e = 0; e < num_elements; ++e) {
        std::istringstream ss(next_content_line(in, line_no));
        long id = 0;
        int type = 0, ntags = 0;
        if (!(ss >> id >> type >> ntags)) throw ParseError("msh: bad element line " + std::to_string(line_no));
        std::vector<long> tags(ntags);
        for (int t = 0; t < ntags; ++t)
            if (!(ss >> tags[t])) throw ParseError("msh: bad element tags in element " + std::to_string(id));
        if (type == 1) {
            long a = 0, b = 0;
            if (!(ss >> a >> b)) throw ParseError("msh: bad line element " + std::to_string(id));
            if (ntags < 1)
                throw ParseError("msh: untagged boundary line in element " + std::to_string(id));
            const long phys = tags[0];
            if (phys != 1 && phys != 2)
                throw ParseError("msh: unknown physical tag " + std::to_string(phys) +
                                 " in element " + std::to_string(id));
            mesh.boundary_facets.push_back(
                {lookup(a), lookup(b), phys == 1 ? BoundaryTag::dirichlet : BoundaryTag::friction});
        } else if (type == 2) {
            long a = 0, b = 0, c = 0;
            if (!(ss >> a >> b >> c)) throw ParseError("msh: bad triangle element " + std::to_string(id));
            std::array<int, 3> tri{lookup(a), lookup(b), lookup(c)};
            if (signed_area(coords[tri[0]], coords[tri[1]], coords[tri[2]]) < 0.0)
                std::swap(tri[1], tri[2]);
            mesh.triangles.push_back(tri);
        } else {
            throw ParseError("msh: unsupported element type " + std::to_string(type) +
                             " in element " + std::to_string(id));
        }
    }
    if (next_content_line(in, line_no) != "$EndElements") throw ParseError("msh: missing $EndElements");

    std::vector<char> used(mesh.vertices.size(), 0);
    for (const auto& t : mesh.triangles)
        for (int v : t) used[v] = 1;
    for (const auto& [id, idx] : node_index)
        if (!used[idx])
            throw ParseError("msh: dangling vertex " + std::to_string(id) +
                             " (not referenced by any triangle)");

    mesh.element_areas.resize(mesh.triangles.size());
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        mesh.element_areas[k] =
            signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    }
    validate_mesh(mesh);
    return mesh;
}

void save_msh(const Mesh& mesh, const std::string& path) {
    std::ostringstream out;
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    out << "$Nodes\n" << mesh.num_vertices() << "\n";
    char buf[96];
    for (int i = 0; i < mesh.num_vertices(); ++i) {
        std::snprintf(buf, sizeof(buf), "%d %.17g %.17g 0\n", i + 1, mesh.vertices[i].x,
                      mesh.vertices[i].y);
        out << buf;
    }
    out << "$EndNodes\n$Elements\n"
        << mesh.boundary_facets.size() + mesh.triangles.size() << "\n";
    long id = 1;
    for (const auto& f : mesh.boundary_facets) {
        const int phys = f.tag == BoundaryTag::dirichlet ? 1 : 2;
        out << id++ << " 1 2 " << phys << " " << phys << " " << f.a + 1 << " " << f.b + 1 << "\n";
    }
    for (const auto& t : mesh.triangles)
        out << id++ << " 2 2 0 0 " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    out << "$EndElements\n";

    const std::string tmp = path + ".tmp";
    {
        std::ofstream file(tmp);
        if (!file) throw IoError("msh: cannot write '" + tmp + "'");
        file << out.str();
        if (!file) throw IoError("msh: write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace stokes
