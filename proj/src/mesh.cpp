#include "wgbiot/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "wgbiot/error.hpp"

namespace wgbiot {

namespace {

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect_properly(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

const char* to_string(BoundaryTag tag) {
    switch (tag) {
    case BoundaryTag::Interior: return "Interior";
    case BoundaryTag::Dirichlet: return "Dirichlet";
    case BoundaryTag::Natural: return "Natural";
    }
    return "?";
}

BoundaryTag boundary_tag_from_string(const std::string& name) {
    if (name == "Interior") return BoundaryTag::Interior;
    if (name == "Dirichlet") return BoundaryTag::Dirichlet;
    if (name == "Natural") return BoundaryTag::Natural;
    throw ArgumentError("unknown boundary tag '" + name + "'");
}

const char* to_string(CutStyle style) { return style == CutStyle::Chevron ? "chevron" : "stair-l"; }

CutStyle cut_style_from_string(const std::string& name) {
    if (name == "chevron" || name == "Chevron") return CutStyle::Chevron;
    if (name == "stair-l" || name == "StairL" || name == "stairl") return CutStyle::StairL;
    throw ArgumentError("unknown cut style '" + name + "'");
}

Point2 Edge::midpoint(std::span<const Point2> points) const {
    return 0.5 * (points[static_cast<std::size_t>(vertices[0])] + points[static_cast<std::size_t>(vertices[1])]);
}

double polygon_signed_area(std::span<const Point2> v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
}

Point2 polygon_centroid(std::span<const Point2> v) {
    // Shoelace moments relative to the first vertex to limit cancellation.
    const Point2 o = v[0];
    double a = 0.0;
    Point2 c = Point2::Zero();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2 p = v[i] - o;
        const Point2 q = v[(i + 1) % v.size()] - o;
        const double w = cross(p, q);
        a += w;
        c += w * (p + q);
    }
    if (a == 0.0) throw GeometryError("centroid of a zero-area polygon");
    return o + c / (3.0 * a);
}

double polygon_diameter(std::span<const Point2> v) {
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) d = std::max(d, (v[i] - v[j]).norm());
    return d;
}

bool classify_convexity(std::span<const Point2> v) {
    const double h = polygon_diameter(v);
    if (v.size() < 3 || !(std::abs(polygon_signed_area(v)) > 1e-14 * h * h))
        throw GeometryError("convexity of a degenerate (zero-area) polygon");
    const double eps = 1e-12 * h * h;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& prev = v[(i + n - 1) % n];
        const Point2& cur = v[i];
        const Point2& next = v[(i + 1) % n];
        if (cross(cur - prev, next - cur) < -eps) return false;
    }
    return true;
}

bool classify_convexity(const Mesh& mesh, int element_id) {
    const auto poly = mesh.polygon(element_id);
    return classify_convexity(poly);
}

Mesh Mesh::from_polygons(std::vector<Point2> points, const std::vector<std::vector<int>>& polygons, int level) {
    Mesh m;
    m.points_ = std::move(points);
    m.level_ = level;
    std::map<std::pair<int, int>, int> edge_index;
    m.elements_.reserve(polygons.size());
    for (std::size_t e = 0; e < polygons.size(); ++e) {
        const auto& ids = polygons[e];
        if (ids.size() < 3) throw GeometryError("element " + std::to_string(e) + " has fewer than 3 vertices");
        PolygonalElement el;
        el.vertex_ids = ids;
        const auto poly = [&] {
            std::vector<Point2> v;
            for (int id : ids) v.push_back(m.points_.at(static_cast<std::size_t>(id)));
            return v;
        }();
        el.area = polygon_signed_area(poly);
        el.diameter = polygon_diameter(poly);
        if (el.area > 0.0) {
            el.centroid = polygon_centroid(poly);
            el.is_convex = classify_convexity(poly);
        }
        const int n = static_cast<int>(ids.size());
        for (int i = 0; i < n; ++i) {
            const int a = ids[static_cast<std::size_t>(i)];
            const int b = ids[static_cast<std::size_t>((i + 1) % n)];
            const auto key = std::minmax(a, b);
            auto it = edge_index.find(key);
            if (it == edge_index.end()) {
                Edge edge;
                edge.vertices = {a, b};
                edge.elements = {static_cast<int>(e), -1};
                const Point2 t = m.points_[static_cast<std::size_t>(b)] - m.points_[static_cast<std::size_t>(a)];
                edge.length = t.norm();
                edge.normal = edge.length > 0.0 ? Point2(Point2(t.y(), -t.x()) / edge.length) : Point2(Point2::Zero());
                const int id = static_cast<int>(m.edges_.size());
                m.edges_.push_back(edge);
                edge_index.emplace(key, id);
                el.edge_ids.push_back(id);
            } else {
                Edge& edge = m.edges_[static_cast<std::size_t>(it->second)];
                if (edge.elements[1] >= 0)
                    throw GeometryError("edge shared by more than two elements at element " + std::to_string(e));
                edge.elements[1] = static_cast<int>(e);
                el.edge_ids.push_back(it->second);
            }
        }
        m.mesh_size_ = std::max(m.mesh_size_, el.diameter);
        m.elements_.push_back(std::move(el));
    }
    for (auto& edge : m.edges_) {
        const BoundaryTag t = edge.is_boundary() ? BoundaryTag::Dirichlet : BoundaryTag::Interior;
        edge.u_tag = t;
        edge.p_tag = t;
    }
    return m;
}

std::vector<Point2> Mesh::polygon(int element_id) const {
    std::vector<Point2> v;
    for (int id : element(element_id).vertex_ids) v.push_back(points_[static_cast<std::size_t>(id)]);
    return v;
}

Point2 Mesh::outward_normal(int edge_id, int element_id) const {
    const Edge& e = edge(edge_id);
    return e.elements[0] == element_id ? Point2(e.normal) : Point2(-e.normal);
}

Mesh Mesh::with_boundary_tags(const TagClassifier& classify) const {
    Mesh m = *this;
    for (auto& e : m.edges_) {
        if (!e.is_boundary()) continue;
        const auto [u, p] = classify(e.midpoint(m.points_));
        if (u == BoundaryTag::Interior || p == BoundaryTag::Interior)
            throw ArgumentError("boundary edge cannot be tagged Interior");
        e.u_tag = u;
        e.p_tag = p;
    }
    return m;
}

Mesh build_nonconvex_grid(int level, CutStyle style) {
    if (level < 1 || level > 8) throw ArgumentError("grid level must be in [1, 8], got " + std::to_string(level));
    const int n = 1 << level;
    // Lattice in units of a quarter cell; every generated vertex lies on it.
    const int q = 4 * n;
    using Lattice = std::pair<int, int>;
    std::vector<std::vector<Lattice>> cells;
    cells.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int x = 4 * i;
            const int y = 4 * j;
            auto at = [&](int dx, int dy) { return Lattice{x + dx, y + dy}; };
            if (style == CutStyle::Chevron) {
                cells.push_back({at(0, 0), at(2, 0), at(1, 2), at(2, 4), at(0, 4)});
                cells.push_back({at(2, 0), at(4, 0), at(4, 4), at(2, 4), at(1, 2)});
            } else {
                cells.push_back({at(0, 0), at(4, 0), at(4, 2), at(2, 2), at(2, 4), at(0, 4)});
                cells.push_back({at(2, 2), at(4, 2), at(4, 4), at(2, 4)});
            }
        }
    }
    std::set<Lattice> used;
    for (const auto& c : cells) used.insert(c.begin(), c.end());

    // Insert lattice points lying strictly inside polygon sides (hanging nodes).
    std::vector<std::vector<Lattice>> conforming;
    conforming.reserve(cells.size());
    for (const auto& c : cells) {
        std::vector<Lattice> out;
        for (std::size_t v = 0; v < c.size(); ++v) {
            const Lattice a = c[v];
            const Lattice b = c[(v + 1) % c.size()];
            out.push_back(a);
            const int dx = b.first - a.first;
            const int dy = b.second - a.second;
            const int g = std::gcd(std::abs(dx), std::abs(dy));
            for (int s = 1; s < g; ++s) {
                const Lattice p{a.first + s * dx / g, a.second + s * dy / g};
                if (used.count(p)) out.push_back(p);
            }
        }
        conforming.push_back(std::move(out));
    }

    std::map<Lattice, int> ids;
    std::vector<Point2> points;
    std::vector<std::vector<int>> polygons;
    polygons.reserve(conforming.size());
    for (const auto& c : conforming) {
        std::vector<int> poly;
        for (const auto& l : c) {
            auto [it, inserted] = ids.emplace(l, static_cast<int>(points.size()));
            if (inserted) points.emplace_back(static_cast<double>(l.first) / q, static_cast<double>(l.second) / q);
            poly.push_back(it->second);
        }
        polygons.push_back(std::move(poly));
    }
    return Mesh::from_polygons(std::move(points), polygons, level);
}

std::vector<MeshDefect> validate_mesh(const Mesh& mesh, double domain_area) {
    std::vector<MeshDefect> defects;
    auto element_defect = [&](int id, std::string msg) {
        defects.push_back({MeshDefect::Kind::Element, id, "element " + std::to_string(id) + ": " + std::move(msg)});
    };
    auto edge_defect = [&](int id, std::string msg) {
        defects.push_back({MeshDefect::Kind::Edge, id, "edge " + std::to_string(id) + ": " + std::move(msg)});
    };
    const auto& pts = mesh.points();

    double total_area = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto& el = mesh.element(t);
        const auto poly = mesh.polygon(t);
        const double area = polygon_signed_area(poly);
        total_area += area;
        if (!(area > 0.0)) element_defect(t, "non-positive area (vertices not counter-clockwise)");
        for (const auto& p : poly)
            if (!std::isfinite(p.x()) || !std::isfinite(p.y())) element_defect(t, "non-finite vertex coordinate");
        if (std::abs(polygon_diameter(poly) - el.diameter) > 1e-14 * std::max(1.0, el.diameter))
            element_defect(t, "stored diameter differs from max vertex distance");
        const std::size_t n = poly.size();
        bool simple = true;
        for (std::size_t i = 0; i < n && simple; ++i)
            for (std::size_t j = i + 2; j < n && simple; ++j) {
                if (i == 0 && j == n - 1) continue;
                if (segments_intersect_properly(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) simple = false;
            }
        if (!simple) element_defect(t, "self-intersecting polygon");
        if (area > 0.0 && el.is_convex != classify_convexity(poly)) element_defect(t, "is_convex flag inconsistent");
        if (el.edge_ids.size() != el.vertex_ids.size()) element_defect(t, "edge and vertex counts differ");
    }

    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Edge& edge = mesh.edge(e);
        const Point2& a = pts[static_cast<std::size_t>(edge.vertices[0])];
        const Point2& b = pts[static_cast<std::size_t>(edge.vertices[1])];
        const double len = (b - a).norm();
        if (!(len > 0.0)) {
            edge_defect(e, "zero-length edge");
            continue;
        }
        if (std::abs(len - edge.length) > 1e-14 * std::max(1.0, len)) edge_defect(e, "stored length is wrong");
        const Point2 expected = Point2((b - a).y(), -(b - a).x()) / len;
        if ((expected - edge.normal).norm() > 1e-12) edge_defect(e, "normal is not the outward normal of its first element");
        const bool interior = edge.elements[1] >= 0;
        const bool tags_interior = edge.u_tag == BoundaryTag::Interior && edge.p_tag == BoundaryTag::Interior;
        const bool tags_boundary = edge.u_tag != BoundaryTag::Interior && edge.p_tag != BoundaryTag::Interior;
        if (interior && !tags_interior) edge_defect(e, "interior edge carries a boundary tag");
        if (!interior && !tags_boundary) edge_defect(e, "boundary edge tagged Interior");
        if (interior) {
            // The second neighbour must traverse the edge in the opposite direction.
            const auto& nb = mesh.element(edge.elements[1]);
            bool reversed = false;
            const std::size_t n = nb.vertex_ids.size();
            for (std::size_t i = 0; i < n; ++i)
                if (nb.vertex_ids[i] == edge.vertices[1] && nb.vertex_ids[(i + 1) % n] == edge.vertices[0]) reversed = true;
            if (!reversed) edge_defect(e, "neighbours do not traverse the edge in opposite directions");
        }
    }

    if (domain_area > 0.0 && std::abs(total_area - domain_area) > 1e-12 * domain_area) {
        std::ostringstream os;
        os.precision(17);
        os << "element areas sum to " << total_area << " instead of " << domain_area;
        defects.push_back({MeshDefect::Kind::Mesh, -1, os.str()});
    }
    return defects;
}

int locate_point(const Mesh& mesh, const Point2& p) {
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto& el = mesh.element(t);
        const double tol = 1e-10 * el.diameter;
        const auto poly = mesh.polygon(t);
        const std::size_t n = poly.size();
        bool on_edge = false;
        int winding = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2& a = poly[i];
            const Point2& b = poly[(i + 1) % n];
            const Point2 ab = b - a;
            const double len = ab.norm();
            const double s = (p - a).dot(ab) / (len * len);
            if (s >= -1e-12 && s <= 1 + 1e-12 && std::abs(cross(ab, p - a)) / len <= tol) on_edge = true;
            if (a.y() <= p.y()) {
                if (b.y() > p.y() && cross(ab, p - a) > 0) ++winding;
            } else if (b.y() <= p.y() && cross(ab, p - a) < 0) {
                --winding;
            }
        }
        if (on_edge || winding != 0) return t;
    }
    return -1;
}

}  // namespace wgbiot
