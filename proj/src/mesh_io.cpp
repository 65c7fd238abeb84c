#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "wgbiot/error.hpp"
#include "wgbiot/mesh.hpp"

namespace wgbiot {

void write_mesh(std::ostream& out, const Mesh& mesh) {
    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    out << std::setprecision(17);
    out << "wgbiot-mesh 1\n";
    out << "level " << mesh.level() << "\n";
    out << "points " << mesh.points().size() << "\n";
    for (const auto& p : mesh.points()) out << p.x() << ' ' << p.y() << '\n';
    out << "edges " << mesh.num_edges() << "\n";
    for (const auto& e : mesh.edges())
        out << e.vertices[0] << ' ' << e.vertices[1] << ' ' << to_string(e.u_tag) << ' ' << to_string(e.p_tag) << '\n';
    out << "elements " << mesh.num_elements() << "\n";
    for (const auto& el : mesh.elements()) {
        out << el.vertex_ids.size();
        for (int v : el.vertex_ids) out << ' ' << v;
        out << '\n';
    }
    out.flags(old_flags);
    out.precision(old_precision);
}

namespace {

void expect(std::istream& in, const std::string& keyword) {
    std::string word;
    if (!(in >> word) || word != keyword) throw ArgumentError("mesh dump: expected '" + keyword + "', got '" + word + "'");
}

}  // namespace

Mesh read_mesh(std::istream& in) {
    expect(in, "wgbiot-mesh");
    int version = 0;
    in >> version;
    if (version != 1) throw ArgumentError("mesh dump: unsupported version");
    int level = 0;
    expect(in, "level");
    in >> level;

    std::size_t n = 0;
    expect(in, "points");
    in >> n;
    std::vector<Point2> points(n);
    for (auto& p : points) in >> p.x() >> p.y();

    expect(in, "edges");
    in >> n;
    struct EdgeRecord {
        int a, b;
        std::string u, p;
    };
    std::vector<EdgeRecord> edges(n);
    for (auto& e : edges) in >> e.a >> e.b >> e.u >> e.p;

    expect(in, "elements");
    in >> n;
    std::vector<std::vector<int>> polygons(n);
    for (auto& poly : polygons) {
        std::size_t nv = 0;
        in >> nv;
        poly.resize(nv);
        for (auto& v : poly) in >> v;
    }
    if (!in) throw ArgumentError("mesh dump: truncated input");

    Mesh mesh = Mesh::from_polygons(std::move(points), polygons, level);
    if (static_cast<std::size_t>(mesh.num_edges()) != edges.size())
        throw ArgumentError("mesh dump: edge section does not match element connectivity");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        Edge& e = mesh.edges_[i];
        if (e.vertices[0] != edges[i].a || e.vertices[1] != edges[i].b)
            throw ArgumentError("mesh dump: edge " + std::to_string(i) + " endpoints do not match connectivity");
        e.u_tag = boundary_tag_from_string(edges[i].u);
        e.p_tag = boundary_tag_from_string(edges[i].p);
    }
    return mesh;
}

}  // namespace wgbiot
