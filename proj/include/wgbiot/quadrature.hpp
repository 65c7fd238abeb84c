#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "wgbiot/mesh.hpp"

namespace wgbiot {

struct QuadratureRule {
    std::vector<Point2> points;
    std::vector<double> weights;
    int exact_degree = 0;

    std::size_t size() const { return points.size(); }
    double integrate(const std::function<double(const Point2&)>& f) const;
};

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

using Triangle = std::array<Point2, 3>;

/// Ear-clipping triangulation of a simple counter-clockwise polygon.
/// Collinear vertices are kept; no zero-area triangles are produced.
std::vector<Triangle> ear_clip(std::span<const Point2> polygon);

/// Collapsed tensor-Gauss rule on a triangle, exact to `degree`.
QuadratureRule triangle_rule(const Triangle& tri, int degree);

/// Triangulates by ear clipping and applies the triangle rule on each piece.
QuadratureRule polygon_rule(std::span<const Point2> polygon, int degree);
QuadratureRule polygon_rule(const Mesh& mesh, int element_id, int degree);

/// Gauss-Legendre with ceil((degree + 1) / 2) points on the segment [a, b].
QuadratureRule segment_rule(const Point2& a, const Point2& b, int degree);
QuadratureRule edge_rule(const Mesh& mesh, int edge_id, int degree);

}  // namespace wgbiot
