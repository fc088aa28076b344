#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pinnfem/errors.hpp"
#include "pinnfem/mesh.hpp"

namespace pinnfem {

namespace detail {

class LineReader {
public:
    explicit LineReader(const std::string& text) : in_(text) {}

    bool next(std::string& line) {
        while (std::getline(in_, line)) {
            ++lineno_;
            while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
                line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    }

    int lineno() const { return lineno_; }

private:
    std::istringstream in_;
    int lineno_ = 0;
};

}  // namespace detail

// Reads the MSH 2.2 ASCII subset: $MeshFormat, $PhysicalNames (optional),
// $Nodes, $Elements with element types 1 (2-node line) and 2 (3-node
// triangle). z coordinates are dropped; clockwise triangles are reoriented.
inline Mesh parse_msh(const std::string& text) {
    detail::LineReader rd(text);
    std::string line;

    std::map<int, std::string> phys_names;         // dim-1 physical id -> name
    std::map<int, int> node_index;                 // file node id -> dense index
    Mesh mesh;
    bool saw_nodes = false, saw_elements = false;

    auto parse_count = [&](const std::string& section) {
        if (!rd.next(line))
            throw ParseError(rd.lineno(), "unexpected end of file in " + section);
        std::istringstream ss(line);
        long n = -1;
        ss >> n;
        if (ss.fail() || n < 0)
            throw ParseError(rd.lineno(), "expected a count in " + section);
        return n;
    };
    auto expect_end = [&](const std::string& end) {
        if (!rd.next(line) || line != end)
            throw ParseError(rd.lineno(), "expected " + end);
    };

    while (rd.next(line)) {
        if (line == "$MeshFormat") {
            if (!rd.next(line))
                throw ParseError(rd.lineno(), "unexpected end of file in $MeshFormat");
            std::istringstream ss(line);
            std::string version;
            int file_type = -1;
            ss >> version >> file_type;
            if (ss.fail() || version.rfind("2.", 0) != 0 || file_type != 0)
                throw ParseError(rd.lineno(),
                                 "unsupported mesh format \"" + line + "\" (need 2.x ASCII)");
            expect_end("$EndMeshFormat");
        } else if (line == "$PhysicalNames") {
            const long n = parse_count("$PhysicalNames");
            for (long k = 0; k < n; ++k) {
                if (!rd.next(line))
                    throw ParseError(rd.lineno(), "unexpected end of file in $PhysicalNames");
                std::istringstream ss(line);
                int dim = -1, id = -1;
                ss >> dim >> id;
                std::string name;
                std::getline(ss, name);
                const auto q1 = name.find('"');
                const auto q2 = name.rfind('"');
                if (ss.fail() || q1 == std::string::npos || q2 <= q1)
                    throw ParseError(rd.lineno(), "malformed physical name entry");
                name = name.substr(q1 + 1, q2 - q1 - 1);
                if (dim == 1) phys_names[id] = name;
            }
            expect_end("$EndPhysicalNames");
        } else if (line == "$Nodes") {
            saw_nodes = true;
            const long n = parse_count("$Nodes");
            for (long k = 0; k < n; ++k) {
                if (!rd.next(line))
                    throw ParseError(rd.lineno(), "unexpected end of file in $Nodes");
                std::istringstream ss(line);
                int id = -1;
                double x = 0, y = 0, z = 0;
                ss >> id >> x >> y >> z;
                if (ss.fail())
                    throw ParseError(rd.lineno(), "malformed node line");
                node_index[id] = mesh.num_nodes();
                mesh.nodes.push_back({x, y});
            }
            expect_end("$EndNodes");
        } else if (line == "$Elements") {
            saw_elements = true;
            const long n = parse_count("$Elements");
            for (long k = 0; k < n; ++k) {
                if (!rd.next(line))
                    throw ParseError(rd.lineno(), "unexpected end of file in $Elements");
                std::istringstream ss(line);
                int id = -1, type = -1, ntags = -1;
                ss >> id >> type >> ntags;
                if (ss.fail() || ntags < 0)
                    throw ParseError(rd.lineno(), "malformed element line");
                std::vector<int> tags(ntags);
                for (int& t : tags) ss >> t;
                const int nodes_per = (type == 1) ? 2 : (type == 2) ? 3 : 0;
                if (nodes_per == 0)
                    throw UnsupportedElementError("element type " + std::to_string(type) +
                                                  " at line " + std::to_string(rd.lineno()) +
                                                  " (only 2-node lines and 3-node triangles)");
                std::array<int, 3> v{-1, -1, -1};
                for (int i = 0; i < nodes_per; ++i) {
                    int file_id = -1;
                    ss >> file_id;
                    if (ss.fail())
                        throw ParseError(rd.lineno(), "malformed element node list");
                    const auto it = node_index.find(file_id);
                    if (it == node_index.end())
                        throw IndexError("element at line " + std::to_string(rd.lineno()) +
                                         " references unknown node " + std::to_string(file_id));
                    v[i] = it->second;
                }
                const int phys = ntags > 0 ? tags[0] : 0;
                if (type == 1) {
                    const auto it = phys_names.find(phys);
                    const std::string tag =
                        it != phys_names.end() ? it->second : std::to_string(phys);
                    mesh.boundary_edges.push_back({v[0], v[1], tag});
                } else {
                    if (signed_area(mesh.nodes[v[0]], mesh.nodes[v[1]], mesh.nodes[v[2]]) < 0.0)
                        std::swap(v[1], v[2]);
                    mesh.triangles.push_back(v);
                }
            }
            expect_end("$EndElements");
        } else if (!line.empty() && line[0] == '$' && line.rfind("$End", 0) != 0) {
            // Unknown well-formed section: skip to its terminator.
            const std::string end = "$End" + line.substr(1);
            bool closed = false;
            while (rd.next(line))
                if (line == end) { closed = true; break; }
            if (!closed) throw ParseError(rd.lineno(), "unterminated section " + end);
        } else {
            throw ParseError(rd.lineno(), "unexpected content \"" + line + "\"");
        }
    }

    if (!saw_nodes) throw ParseError(rd.lineno(), "missing $Nodes section");
    if (!saw_elements) throw ParseError(rd.lineno(), "missing $Elements section");

    for (const auto& [tag, _] : [&] {
             std::map<std::string, int> tags;
             for (const auto& e : mesh.boundary_edges) tags[e.tag]++;
             return tags;
         }())
        mesh.physical_names[tag] = tag;

    if (!mesh.triangles.empty()) mesh.validate();
    return mesh;
}

inline std::string serialize_msh(const Mesh& mesh) {
    std::map<std::string, int> tag_ids;
    for (const auto& e : mesh.boundary_edges)
        if (!tag_ids.count(e.tag)) tag_ids[e.tag] = 0;
    int next_id = 1;
    for (auto& [tag, id] : tag_ids) id = next_id++;

    std::string out;
    char buf[256];
    out += "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    if (!tag_ids.empty()) {
        out += "$PhysicalNames\n" + std::to_string(tag_ids.size()) + "\n";
        for (const auto& [tag, id] : tag_ids) {
            std::snprintf(buf, sizeof buf, "1 %d \"%s\"\n", id, tag.c_str());
            out += buf;
        }
        out += "$EndPhysicalNames\n";
    }
    out += "$Nodes\n" + std::to_string(mesh.nodes.size()) + "\n";
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g 0\n", i + 1, mesh.nodes[i].x,
                      mesh.nodes[i].y);
        out += buf;
    }
    out += "$EndNodes\n";
    out += "$Elements\n" +
           std::to_string(mesh.boundary_edges.size() + mesh.triangles.size()) + "\n";
    int eid = 1;
    for (const auto& e : mesh.boundary_edges) {
        const int id = tag_ids[e.tag];
        std::snprintf(buf, sizeof buf, "%d 1 2 %d %d %d %d\n", eid++, id, id, e.a + 1,
                      e.b + 1);
        out += buf;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "%d 2 2 0 0 %d %d %d\n", eid++, t[0] + 1, t[1] + 1,
                      t[2] + 1);
        out += buf;
    }
    out += "$EndElements\n";
    return out;
}

inline Mesh load_msh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open mesh file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_msh(ss.str());
}

inline void save_msh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write mesh file: " + path);
    out << serialize_msh(mesh);
}

}  // namespace pinnfem
