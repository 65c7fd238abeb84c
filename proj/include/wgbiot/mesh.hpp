#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace wgbiot {

using Point2 = Eigen::Vector2d;

/// Boundary condition kind carried by an edge, independently for each field.
///
/// For the displacement, Dirichlet is the clamped part Gamma_c and Natural the
/// traction part Gamma_t. For the pressure the roles swap: Dirichlet is the
/// drained part Gamma_t (p prescribed) and Natural the no-flux part Gamma_c.
enum class BoundaryTag { Interior, Dirichlet, Natural };

const char* to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(const std::string& name);

struct Edge {
    /// Endpoints, ordered as traversed counter-clockwise by elements[0].
    std::array<int, 2> vertices{};
    /// elements[1] is -1 on the boundary.
    std::array<int, 2> elements{-1, -1};
    double length = 0.0;
    /// Unit normal pointing out of elements[0] (into elements[1]).
    Point2 normal = Point2::Zero();
    BoundaryTag u_tag = BoundaryTag::Interior;
    BoundaryTag p_tag = BoundaryTag::Interior;

    bool is_boundary() const { return elements[1] < 0; }
    Point2 midpoint(std::span<const Point2> points) const;
};

struct PolygonalElement {
    /// Counter-clockwise vertex ids; edge_ids[i] joins vertex_ids[i] and vertex_ids[i+1].
    std::vector<int> vertex_ids;
    std::vector<int> edge_ids;
    Point2 centroid = Point2::Zero();
    double area = 0.0;
    double diameter = 0.0;
    bool is_convex = true;

    int num_edges() const { return static_cast<int>(edge_ids.size()); }
};

/// Immutable-after-construction 2D polygonal mesh.
class Mesh {
public:
    Mesh() = default;

    /// Builds connectivity from vertex lists. Polygons must be counter-clockwise.
    /// All boundary edges start with both tags Dirichlet.
    static Mesh from_polygons(std::vector<Point2> points,
                              const std::vector<std::vector<int>>& polygons,
                              int level = 0);

    const std::vector<Point2>& points() const { return points_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<PolygonalElement>& elements() const { return elements_; }
    const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }
    const PolygonalElement& element(int id) const { return elements_[static_cast<std::size_t>(id)]; }
    int num_elements() const { return static_cast<int>(elements_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    double mesh_size() const { return mesh_size_; }
    int level() const { return level_; }

    /// Vertex coordinates of an element in counter-clockwise order.
    std::vector<Point2> polygon(int element_id) const;
    /// Outward unit normal of edge `edge_id` seen from element `element_id`.
    Point2 outward_normal(int edge_id, int element_id) const;

    /// Returns a copy whose boundary edges carry the tags produced by `classify`.
    /// Interior edges keep Interior for both fields.
    using TagClassifier = std::function<std::pair<BoundaryTag, BoundaryTag>(const Point2& midpoint)>;
    Mesh with_boundary_tags(const TagClassifier& classify) const;

    /// Mutable access for diagnostics tests that need to corrupt a mesh.
    std::vector<Edge>& mutable_edges() { return edges_; }
    std::vector<Point2>& mutable_points() { return points_; }

private:
    friend Mesh read_mesh(std::istream& in);

    std::vector<Point2> points_;
    std::vector<Edge> edges_;
    std::vector<PolygonalElement> elements_;
    double mesh_size_ = 0.0;
    int level_ = 0;
};

enum class CutStyle { Chevron, StairL };

CutStyle cut_style_from_string(const std::string& name);
const char* to_string(CutStyle style);

/// Unit square split into 2^level x 2^level cells, each cut into two polygons.
///
/// Chevron: the cut runs bottom midpoint -> (1/4, 1/2) of the cell -> top
/// midpoint, giving one non-convex and one convex pentagon per cell.
/// StairL: the top-right quarter of each cell is cut off, leaving an L-shaped
/// hexagon; hanging points of neighbouring cells are inserted as collinear
/// vertices so the partition stays conforming.
Mesh build_nonconvex_grid(int level, CutStyle style = CutStyle::Chevron);

double polygon_signed_area(std::span<const Point2> vertices);
Point2 polygon_centroid(std::span<const Point2> vertices);
double polygon_diameter(std::span<const Point2> vertices);

/// True iff every consecutive cross product is >= -1e-12 h^2.
/// Throws GeometryError for a zero-area polygon.
bool classify_convexity(std::span<const Point2> vertices);
bool classify_convexity(const Mesh& mesh, int element_id);

struct MeshDefect {
    enum class Kind { Element, Edge, Mesh };
    Kind kind = Kind::Mesh;
    int id = -1;
    std::string message;
};

/// Lists every violated mesh invariant. `domain_area` <= 0 skips the area check.
std::vector<MeshDefect> validate_mesh(const Mesh& mesh, double domain_area = 1.0);

/// Plain-text dump: points, edges (with both tags) and element vertex lists.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

/// Index of an element containing `p` (boundary points included, tolerance
/// relative to h_T), or -1.
int locate_point(const Mesh& mesh, const Point2& p);

}  // namespace wgbiot
