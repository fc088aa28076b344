#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "pinnfem/msh_io.hpp"

using namespace pinnfem;

namespace {
const std::string kFixtureDir = std::string(PINNFEM_SOURCE_DIR) + "/fixtures/";
}

TEST_CASE("parse the shipped coarse square fixture") {
    const Mesh m = load_msh(kFixtureDir + "square_h0p5.msh");
    CHECK(m.num_nodes() == 9);
    CHECK(m.num_triangles() == 8);
    CHECK(m.boundary_edges.size() == 8);
    CHECK(m.physical_names.count("left") == 1);
    CHECK(m.area() == Catch::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("unsupported element type") {
    const std::string text =
        "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
        "$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 0 0 1\n$EndNodes\n"
        "$Elements\n1\n1 4 2 0 0 1 2 3 4\n$EndElements\n";
    CHECK_THROWS_AS(parse_msh(text), UnsupportedElementError);
}

TEST_CASE("empty elements section yields a valid empty mesh") {
    const std::string text =
        "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
        "$Nodes\n1\n1 0 0 0\n$EndNodes\n"
        "$Elements\n0\n$EndElements\n";
    const Mesh m = parse_msh(text);
    CHECK(m.num_nodes() == 1);
    CHECK(m.num_triangles() == 0);
}

TEST_CASE("malformed section header reports the line") {
    const std::string text =
        "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
        "$Nodes\nnot-a-count\n$EndNodes\n";
    try {
        parse_msh(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 5);
    }
}

TEST_CASE("dangling node reference") {
    const std::string text =
        "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
        "$Nodes\n3\n1 0 0 0\n2 1 0 0\n3 0 1 0\n$EndNodes\n"
        "$Elements\n1\n1 2 2 0 0 1 2 9\n$EndElements\n";
    CHECK_THROWS_AS(parse_msh(text), IndexError);
}

TEST_CASE("clockwise triangles are reoriented") {
    const std::string text =
        "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
        "$Nodes\n3\n1 0 0 0\n2 1 0 0\n3 0 1 0\n$EndNodes\n"
        "$Elements\n1\n1 2 2 0 0 1 3 2\n$EndElements\n";
    const Mesh m = parse_msh(text);
    CHECK(m.tri_signed_area(0) > 0.0);
}

TEST_CASE("round-trip on fixtures and generated meshes") {
    auto roundtrip = [](const Mesh& m) {
        const Mesh m2 = parse_msh(serialize_msh(m));
        REQUIRE(m2.num_nodes() == m.num_nodes());
        REQUIRE(m2.num_triangles() == m.num_triangles());
        REQUIRE(m2.boundary_edges.size() == m.boundary_edges.size());
        for (int i = 0; i < m.num_nodes(); ++i) {
            CHECK(m2.nodes[i].x == m.nodes[i].x);
            CHECK(m2.nodes[i].y == m.nodes[i].y);
        }
        for (int t = 0; t < m.num_triangles(); ++t) CHECK(m2.triangles[t] == m.triangles[t]);
        for (size_t e = 0; e < m.boundary_edges.size(); ++e) {
            CHECK(m2.boundary_edges[e].a == m.boundary_edges[e].a);
            CHECK(m2.boundary_edges[e].b == m.boundary_edges[e].b);
            CHECK(m2.boundary_edges[e].tag == m.boundary_edges[e].tag);
        }
    };

    roundtrip(structured_unit_square(0.5));
    roundtrip(structured_rectangle(0.0, 1.0, -0.25, 0.25, 0.25));
    for (const char* f : {"square_h0p5.msh", "square_hole_h0p1.msh", "square_crack_h0p1.msh"}) {
        const std::string path = kFixtureDir + f;
        if (!std::filesystem::exists(path)) continue;
        roundtrip(load_msh(path));
    }
}
