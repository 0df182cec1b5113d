#include "surfpde/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <utility>

#include "surfpde/errors.hpp"

namespace surfpde {

namespace {

constexpr double kDegeneracyTol = 1e-14; // measure < tol * longest_edge^n is rejected

double element_measure(const SurfaceMesh& mesh, int e) {
    const auto c = mesh.element_coords(e);
    if (mesh.dim_surface == 1) return norm(c[1] - c[0]);
    return 0.5 * norm(cross(c[1] - c[0], c[2] - c[0]));
}

double longest_edge(const SurfaceMesh& mesh, int e) {
    const auto c = mesh.element_coords(e);
    if (mesh.dim_surface == 1) return norm(c[1] - c[0]);
    return std::max({norm(c[1] - c[0]), norm(c[2] - c[1]), norm(c[0] - c[2])});
}

void check_elements(const SurfaceMesh& mesh) {
    const int nv = mesh.num_vertices();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& el = mesh.elements[e];
        for (int k = 0; k <= mesh.dim_surface; ++k) {
            if (el[k] < 0 || el[k] >= nv)
                throw ValidationError("mesh: element " + std::to_string(e) +
                                      ": vertex index out of range (" + std::to_string(el[k]) +
                                      " of " + std::to_string(nv) + ")");
        }
        if (mesh.dim_surface == 1 && el[2] != -1)
            throw ValidationError("mesh: segment element " + std::to_string(e) +
                                  " carries a third vertex index");
        const double h = longest_edge(mesh, e);
        const double tol = kDegeneracyTol * (mesh.dim_surface == 1 ? h : h * h);
        if (!(element_measure(mesh, e) > tol))
            throw ValidationError("mesh: element " + std::to_string(e) + " is degenerate");
    }
}

// Facet bookkeeping: boundary set, manifoldness, orientation consistency.
// A facet is an endpoint for segments, an undirected edge for triangles.
std::vector<int> check_facets(const SurfaceMesh& mesh) {
    std::vector<char> on_boundary(mesh.num_vertices(), 0);
    if (mesh.dim_surface == 1) {
        std::vector<int> head(mesh.num_vertices(), 0), tail(mesh.num_vertices(), 0);
        for (const auto& el : mesh.elements) {
            ++tail[el[0]];
            ++head[el[1]];
        }
        for (int v = 0; v < mesh.num_vertices(); ++v) {
            const int deg = head[v] + tail[v];
            if (deg == 0) continue;
            if (deg > 2)
                throw ValidationError("mesh: vertex " + std::to_string(v) +
                                      " is shared by more than two segments");
            if (deg == 1) {
                on_boundary[v] = 1;
            } else if (head[v] != 1 || tail[v] != 1) {
                throw ValidationError("mesh: inconsistent segment orientation at vertex " +
                                      std::to_string(v));
            }
        }
    } else {
        struct EdgeUse {
            int count = 0;
            int forward = 0; // traversals with lo -> hi
        };
        std::map<std::pair<int, int>, EdgeUse> edges;
        for (const auto& el : mesh.elements) {
            for (int k = 0; k < 3; ++k) {
                const int a = el[k], b = el[(k + 1) % 3];
                auto& use = edges[std::minmax(a, b)];
                ++use.count;
                if (a < b) ++use.forward;
            }
        }
        for (const auto& [key, use] : edges) {
            if (use.count > 2)
                throw ValidationError("mesh: edge (" + std::to_string(key.first) + "," +
                                      std::to_string(key.second) +
                                      ") is shared by more than two triangles");
            if (use.count == 1) {
                on_boundary[key.first] = 1;
                on_boundary[key.second] = 1;
            } else if (use.forward != 1) {
                // interior edge must be traversed once in each direction
                throw ValidationError("mesh: inconsistent triangle orientation across edge (" +
                                      std::to_string(key.first) + "," +
                                      std::to_string(key.second) + ")");
            }
        }
    }
    std::vector<int> boundary;
    for (int v = 0; v < mesh.num_vertices(); ++v)
        if (on_boundary[v]) boundary.push_back(v);
    return boundary;
}

// --- OFF / curve parsing ------------------------------------------------

struct LineReader {
    std::istream& in;
    int line_no = 0;

    // next non-empty, non-comment line; false on EOF
    bool next(std::string& out) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            if (raw.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            out = raw;
            return true;
        }
        return false;
    }
};

[[noreturn]] void parse_fail(const std::string& what, int line) {
    throw ValidationError("off: " + what + " (line " + std::to_string(line) + ")");
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

double parse_double(const std::string& tok, int line, const char* what) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) parse_fail(std::string("bad ") + what + " '" + tok + "'", line);
    return v;
}

long parse_int(const std::string& tok, int line, const char* what) {
    long v = 0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) parse_fail(std::string("bad ") + what + " '" + tok + "'", line);
    return v;
}

} // namespace

SurfaceMesh build_mesh(int dim_surface, std::vector<Vec3> vertices,
                       std::vector<std::array<int, 3>> elements) {
    if (dim_surface != 1 && dim_surface != 2)
        throw ValidationError("mesh: dim_surface must be 1 or 2");
    if (vertices.empty() || elements.empty())
        throw ValidationError("mesh: empty vertex or element list");
    SurfaceMesh mesh;
    mesh.dim_surface = dim_surface;
    mesh.vertices = std::move(vertices);
    mesh.elements = std::move(elements);
    check_elements(mesh);
    mesh.boundary_vertices = check_facets(mesh);
    return mesh;
}

SurfaceMesh load_off(std::istream& in) {
    LineReader reader{in};
    std::string line;
    if (!reader.next(line)) parse_fail("empty stream", reader.line_no);

    auto toks = tokens_of(line);
    if (toks.empty() || toks[0] != "OFF") parse_fail("malformed header, expected OFF", reader.line_no);
    toks.erase(toks.begin());
    if (toks.empty()) {
        if (!reader.next(line)) parse_fail("missing counts line", reader.line_no);
        toks = tokens_of(line);
    }
    if (toks.size() < 2) parse_fail("counts line needs vertex and face counts", reader.line_no);
    const long nv = parse_int(toks[0], reader.line_no, "vertex count");
    const long nf = parse_int(toks[1], reader.line_no, "face count");
    if (nv <= 0 || nf <= 0) parse_fail("vertex and face counts must be positive", reader.line_no);

    std::vector<Vec3> verts;
    verts.reserve(static_cast<size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!reader.next(line)) parse_fail("unexpected end of file in vertex list", reader.line_no);
        toks = tokens_of(line);
        if (toks.size() != 3) parse_fail("vertex line needs 3 coordinates", reader.line_no);
        verts.emplace_back(parse_double(toks[0], reader.line_no, "coordinate"),
                           parse_double(toks[1], reader.line_no, "coordinate"),
                           parse_double(toks[2], reader.line_no, "coordinate"));
    }

    std::vector<std::array<int, 3>> faces;
    faces.reserve(static_cast<size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        if (!reader.next(line)) parse_fail("unexpected end of file in face list", reader.line_no);
        toks = tokens_of(line);
        if (toks.empty()) parse_fail("empty face line", reader.line_no);
        const long arity = parse_int(toks[0], reader.line_no, "face arity");
        if (arity != 3) parse_fail("non-triangle face", reader.line_no);
        if (toks.size() < 4) parse_fail("face line needs 3 vertex indices", reader.line_no);
        std::array<int, 3> f{};
        for (int k = 0; k < 3; ++k) {
            const long idx = parse_int(toks[1 + k], reader.line_no, "vertex index");
            if (idx < 0 || idx >= nv)
                parse_fail("vertex index out of range (" + std::to_string(idx) + " of " +
                               std::to_string(nv) + ")",
                           reader.line_no);
            f[k] = static_cast<int>(idx);
        }
        // degeneracy reported with the face's line number; build_mesh re-checks
        const Vec3 e1 = verts[f[1]] - verts[f[0]], e2 = verts[f[2]] - verts[f[0]];
        const double h = std::max({norm(e1), norm(e2), norm(verts[f[2]] - verts[f[1]])});
        if (!(0.5 * norm(cross(e1, e2)) > kDegeneracyTol * h * h))
            parse_fail("degenerate face", reader.line_no);
        faces.push_back(f);
    }
    return build_mesh(2, std::move(verts), std::move(faces));
}

SurfaceMesh load_off_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("off: cannot open '" + path + "'");
    return load_off(in);
}

SurfaceMesh load_curve(std::istream& in) {
    LineReader reader{in};
    std::string line;
    if (!reader.next(line)) parse_fail("empty stream", reader.line_no);
    auto toks = tokens_of(line);
    if (toks.size() != 3 || toks[0] != "CURVE")
        throw ValidationError("curve: malformed header, expected 'CURVE <N> <closed|open>' (line " +
                              std::to_string(reader.line_no) + ")");
    const long nv = parse_int(toks[1], reader.line_no, "vertex count");
    const std::string mode = toks[2];
    if (mode != "closed" && mode != "open")
        throw ValidationError("curve: mode must be 'closed' or 'open' (line " +
                              std::to_string(reader.line_no) + ")");
    const bool closed = (mode == "closed");
    if (nv < (closed ? 3 : 2))
        throw ValidationError("curve: too few vertices (line " + std::to_string(reader.line_no) + ")");

    std::vector<Vec3> verts;
    verts.reserve(static_cast<size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!reader.next(line)) parse_fail("unexpected end of file in vertex list", reader.line_no);
        toks = tokens_of(line);
        if (toks.size() != 2) parse_fail("curve vertex line needs 2 coordinates", reader.line_no);
        verts.emplace_back(parse_double(toks[0], reader.line_no, "coordinate"),
                           parse_double(toks[1], reader.line_no, "coordinate"), 0.0);
    }
    std::vector<std::array<int, 3>> segs;
    const long nseg = closed ? nv : nv - 1;
    segs.reserve(static_cast<size_t>(nseg));
    for (long i = 0; i < nseg; ++i)
        segs.push_back({static_cast<int>(i), static_cast<int>((i + 1) % nv), -1});
    return build_mesh(1, std::move(verts), std::move(segs));
}

SurfaceMesh load_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("curve: cannot open '" + path + "'");
    return load_curve(in);
}

SurfaceMesh refine(const SurfaceMesh& mesh, const SurfaceProjector& projector) {
    std::vector<Vec3> verts = mesh.vertices;
    std::map<std::pair<int, int>, int> midpoint_of;
    auto midpoint = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint_of.find(key);
        if (it != midpoint_of.end()) return it->second;
        Vec3 m = 0.5 * (verts[a] + verts[b]);
        if (projector) m = projector(m);
        const int idx = static_cast<int>(verts.size());
        verts.push_back(m);
        midpoint_of.emplace(key, idx);
        return idx;
    };

    std::vector<std::array<int, 3>> children;
    if (mesh.dim_surface == 1) {
        children.reserve(mesh.elements.size() * 2);
        for (const auto& el : mesh.elements) {
            const int m = midpoint(el[0], el[1]);
            children.push_back({el[0], m, -1});
            children.push_back({m, el[1], -1});
        }
    } else {
        children.reserve(mesh.elements.size() * 4);
        for (const auto& el : mesh.elements) {
            const int m01 = midpoint(el[0], el[1]);
            const int m12 = midpoint(el[1], el[2]);
            const int m02 = midpoint(el[0], el[2]);
            children.push_back({el[0], m01, m02});
            children.push_back({m01, el[1], m12});
            children.push_back({m02, m12, el[2]});
            children.push_back({m01, m12, m02});
        }
    }
    return build_mesh(mesh.dim_surface, std::move(verts), std::move(children));
}

double mesh_size(const SurfaceMesh& mesh) {
    double h = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) h = std::max(h, longest_edge(mesh, e));
    return h;
}

int count_edges(const SurfaceMesh& mesh) {
    if (mesh.dim_surface == 1) return mesh.num_elements();
    std::map<std::pair<int, int>, char> seen;
    for (const auto& el : mesh.elements)
        for (int k = 0; k < 3; ++k) seen[std::minmax(el[k], el[(k + 1) % 3])] = 1;
    return static_cast<int>(seen.size());
}

std::vector<char> boundary_mask(const SurfaceMesh& mesh) {
    std::vector<char> mask(mesh.num_vertices(), 0);
    for (int v : mesh.boundary_vertices) mask[v] = 1;
    return mask;
}

} // namespace surfpde
