#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pinnfem/errors.hpp"
#include "pinnfem/geometry.hpp"

namespace pinnfem {

struct BoundaryEdge {
    int a = -1;
    int b = -1;
    std::string tag;
};

// Triangulated 2D domain with tagged boundary entities. Triangles are CCW;
// immutable after construction (validate() checks the structural invariants).
struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    std::map<std::string, std::string> physical_names;  // tag -> label

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }

    double tri_signed_area(int t) const {
        const auto& tr = triangles[t];
        return signed_area(nodes[tr[0]], nodes[tr[1]], nodes[tr[2]]);
    }

    double tri_area(int t) const { return std::abs(tri_signed_area(t)); }

    Vec2 centroid(int t) const {
        const auto& tr = triangles[t];
        return (nodes[tr[0]] + nodes[tr[1]] + nodes[tr[2]]) / 3.0;
    }

    double area() const {
        double a = 0.0;
        for (int t = 0; t < num_triangles(); ++t) a += tri_area(t);
        return a;
    }

    // True if (a, b) in either order is an edge of triangle t.
    bool tri_has_edge(int t, int a, int b) const {
        const auto& tr = triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int u = tr[k], v = tr[(k + 1) % 3];
            if ((u == a && v == b) || (u == b && v == a)) return true;
        }
        return false;
    }

    void validate() const {
        for (const auto& tr : triangles)
            for (int v : tr)
                if (v < 0 || v >= num_nodes())
                    throw IndexError("triangle references node " + std::to_string(v) +
                                     " out of range [0," + std::to_string(num_nodes()) + ")");
        for (int t = 0; t < num_triangles(); ++t)
            if (tri_signed_area(t) <= 0.0)
                throw Error("triangle " + std::to_string(t) +
                            " is degenerate or clockwise (signed area " +
                            std::to_string(tri_signed_area(t)) + ")");
        for (const auto& e : boundary_edges) {
            if (e.a < 0 || e.a >= num_nodes() || e.b < 0 || e.b >= num_nodes())
                throw IndexError("boundary edge references node out of range");
            int owners = 0;
            for (int t = 0; t < num_triangles(); ++t)
                if (tri_has_edge(t, e.a, e.b)) ++owners;
            if (owners != 1)
                throw Error("boundary edge (" + std::to_string(e.a) + "," +
                            std::to_string(e.b) + ") belongs to " +
                            std::to_string(owners) + " triangles, expected 1");
        }
    }
};

// Structured right-triangle mesh of [x0,x1] x [y0,y1]; each cell is split by
// the lower-left -> upper-right diagonal. Boundary edges are tagged
// "left" / "right" / "bottom" / "top".
inline Mesh structured_rectangle(double x0, double x1, double y0, double y1, double h) {
    auto divisions = [h](double len) {
        const double q = len / h;
        const long n = std::lround(q);
        if (n < 1 || std::abs(q - static_cast<double>(n)) > 1e-9 * std::max(1.0, q))
            throw InvalidResolutionError("mesh size " + std::to_string(h) +
                                         " does not divide extent " + std::to_string(len));
        return static_cast<int>(n);
    };
    const int nx = divisions(x1 - x0);
    const int ny = divisions(y1 - y0);

    Mesh m;
    m.nodes.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            m.nodes.push_back({x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny});

    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

    m.triangles.reserve(2 * nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            m.triangles.push_back({v00, v10, v11});
            m.triangles.push_back({v00, v11, v01});
        }

    for (int j = 0; j < ny; ++j) {
        m.boundary_edges.push_back({vid(0, j), vid(0, j + 1), "left"});
        m.boundary_edges.push_back({vid(nx, j), vid(nx, j + 1), "right"});
    }
    for (int i = 0; i < nx; ++i) {
        m.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), "bottom"});
        m.boundary_edges.push_back({vid(i, ny), vid(i + 1, ny), "top"});
    }
    for (const char* tag : {"left", "right", "bottom", "top"})
        m.physical_names[tag] = tag;

    m.validate();
    return m;
}

inline Mesh structured_unit_square(double h) {
    return structured_rectangle(0.0, 1.0, 0.0, 1.0, h);
}

// Per-node Dirichlet data: which components are prescribed and their values.
struct DirichletValue {
    std::array<bool, 2> constrained = {false, false};
    Vec2 g = {0.0, 0.0};
};

// Selects boundary nodes by tag (all endpoints of edges carrying the tag),
// by coordinate box, by explicit point list, or any combination; a tag with a
// box keeps only tagged nodes inside the box.
struct NodeSelector {
    std::optional<std::string> tag;
    std::optional<BoundingBox> box;
    std::vector<Vec2> points;  // matched to nearest node within `point_tol`
    double point_tol = 1e-9;
};

struct DirichletSpec {
    NodeSelector select;
    std::function<Vec2(Vec2)> g = [](Vec2) { return Vec2{0.0, 0.0}; };
    std::array<bool, 2> components = {true, true};
};

inline std::vector<int> select_nodes(const Mesh& mesh, const NodeSelector& sel) {
    std::vector<char> picked(mesh.nodes.size(), 0);
    if (sel.tag) {
        for (const auto& e : mesh.boundary_edges)
            if (e.tag == *sel.tag) picked[e.a] = picked[e.b] = 1;
        if (sel.box)
            for (size_t i = 0; i < picked.size(); ++i)
                if (picked[i] && !sel.box->contains(mesh.nodes[i])) picked[i] = 0;
    } else if (sel.box) {
        for (size_t i = 0; i < picked.size(); ++i)
            if (sel.box->contains(mesh.nodes[i])) picked[i] = 1;
    }
    for (const Vec2& p : sel.points) {
        int best = -1;
        double best_d = sel.point_tol;
        for (int i = 0; i < mesh.num_nodes(); ++i) {
            const double d = dist(mesh.nodes[i], p);
            if (d <= best_d) { best_d = d; best = i; }
        }
        if (best >= 0) picked[best] = 1;
    }
    std::vector<int> out;
    for (size_t i = 0; i < picked.size(); ++i)
        if (picked[i]) out.push_back(static_cast<int>(i));
    return out;
}

struct QuadPoint {
    int tri = -1;
    Vec2 point;
    double area = 0.0;
};

using TractionFn = std::function<Vec2(Vec2)>;

struct NeumannEdge {
    Vec2 midpoint;
    double length = 0.0;
    Vec2 normal;  // outward unit normal
    TractionFn traction;
    int tri = -1;  // adjacent triangle
    std::array<int, 2> nodes = {-1, -1};
};

// The Omega_FE / Omega_NN split: a single layer of elements touching the
// Dirichlet set, plus quadrature data for both regions.
struct DomainDecomposition {
    std::vector<int> fe_elements;   // sorted
    std::vector<int> nn_elements;   // sorted
    std::map<int, DirichletValue> dirichlet_nodes;
    std::vector<int> interface_nodes;  // sorted; non-Dirichlet nodes of fe elements
    std::vector<QuadPoint> collocation;    // centroids/areas of nn elements
    std::vector<QuadPoint> fe_quadrature;  // centroids/areas of fe elements

    bool is_fe(int tri) const {
        return std::binary_search(fe_elements.begin(), fe_elements.end(), tri);
    }
    bool is_dirichlet(int node) const { return dirichlet_nodes.count(node) > 0; }

    double nn_area() const {
        double a = 0.0;
        for (const auto& q : collocation) a += q.area;
        return a;
    }
    double fe_area() const {
        double a = 0.0;
        for (const auto& q : fe_quadrature) a += q.area;
        return a;
    }
};

// Pure function of (mesh, specs): fe elements are exactly the triangles with
// at least one Dirichlet node; interface nodes are their remaining nodes.
inline DomainDecomposition decompose(const Mesh& mesh,
                                     const std::vector<DirichletSpec>& dirichlet) {
    DomainDecomposition dec;

    for (size_t s = 0; s < dirichlet.size(); ++s) {
        const auto& spec = dirichlet[s];
        const std::vector<int> sel = select_nodes(mesh, spec.select);
        if (sel.empty())
            throw EmptyBoundaryError("dirichlet selector " + std::to_string(s) +
                                     " matched no nodes");
        for (int n : sel) {
            DirichletValue& dv = dec.dirichlet_nodes[n];
            const Vec2 g = spec.g(mesh.nodes[n]);
            for (int c = 0; c < 2; ++c)
                if (spec.components[c]) {
                    dv.constrained[c] = true;
                    dv.g[c] = g[c];
                }
        }
    }

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        bool touches = false;
        for (int v : mesh.triangles[t])
            if (dec.is_dirichlet(v)) { touches = true; break; }
        (touches ? dec.fe_elements : dec.nn_elements).push_back(t);
    }

    std::vector<char> on_nn(mesh.nodes.size(), 0);
    for (int t : dec.nn_elements)
        for (int v : mesh.triangles[t]) on_nn[v] = 1;

    std::vector<char> iface(mesh.nodes.size(), 0);
    for (int t : dec.fe_elements)
        for (int v : mesh.triangles[t])
            if (!dec.is_dirichlet(v)) iface[v] = 1;
    for (size_t n = 0; n < iface.size(); ++n) {
        if (!iface[n]) continue;
        if (!on_nn[n])
            throw DecompositionError(
                "interface node " + std::to_string(n) +
                " touches no interior element; the FE layer is not a single layer here");
        dec.interface_nodes.push_back(static_cast<int>(n));
    }

    for (int t : dec.nn_elements)
        dec.collocation.push_back({t, mesh.centroid(t), mesh.tri_area(t)});
    for (int t : dec.fe_elements)
        dec.fe_quadrature.push_back({t, mesh.centroid(t), mesh.tri_area(t)});

    return dec;
}

struct TractionSpec {
    std::string tag;
    TractionFn h;
};

// Midpoint-rule data for the traction line integral over tagged edges.
// The normal points out of the domain (away from the owning triangle).
inline std::vector<NeumannEdge> neumann_data(const Mesh& mesh,
                                             const std::vector<TractionSpec>& specs) {
    std::vector<NeumannEdge> out;
    for (const auto& spec : specs) {
        bool found = false;
        for (const auto& e : mesh.boundary_edges) {
            if (e.tag != spec.tag) continue;
            found = true;
            NeumannEdge ne;
            ne.nodes = {e.a, e.b};
            const Vec2 pa = mesh.nodes[e.a], pb = mesh.nodes[e.b];
            ne.midpoint = (pa + pb) / 2.0;
            ne.length = dist(pa, pb);
            ne.traction = spec.h;
            for (int t = 0; t < mesh.num_triangles(); ++t)
                if (mesh.tri_has_edge(t, e.a, e.b)) { ne.tri = t; break; }
            const Vec2 d = (pb - pa) / ne.length;
            Vec2 n{d.y, -d.x};
            if (dot(n, ne.midpoint - mesh.centroid(ne.tri)) < 0.0) n = n * -1.0;
            ne.normal = n;
            out.push_back(std::move(ne));
        }
        if (!found) throw MissingTagError("no boundary edges tagged \"" + spec.tag + "\"");
    }
    return out;
}

}  // namespace pinnfem
