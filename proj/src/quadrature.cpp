#include "wgbiot/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wgbiot/error.hpp"

namespace wgbiot {

double QuadratureRule::integrate(const std::function<double(const Point2&)>& f) const {
    double s = 0.0;
    for (std::size_t q = 0; q < size(); ++q) s += weights[q] * f(points[q]);
    return s;
}

namespace {

constexpr int kMaxGaussPoints = 64;

GaussLegendre compute_gauss_legendre(int n) {
    GaussLegendre g;
    g.nodes.resize(static_cast<std::size_t>(n));
    g.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        g.nodes[lo] = -x;
        g.nodes[hi] = x;
        g.weights[lo] = w;
        g.weights[hi] = w;
    }
    if (n % 2 == 1) g.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return g;
}

double cross(const Point2& a, const Point2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool inside_or_on_triangle(const Point2& p, const Point2& a, const Point2& b, const Point2& c, double eps) {
    return cross(b - a, p - a) >= -eps && cross(c - b, p - b) >= -eps && cross(a - c, p - c) >= -eps;
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    static const std::vector<GaussLegendre> table = [] {
        std::vector<GaussLegendre> t(kMaxGaussPoints + 1);
        for (int k = 1; k <= kMaxGaussPoints; ++k) t[static_cast<std::size_t>(k)] = compute_gauss_legendre(k);
        return t;
    }();
    if (n < 1 || n > kMaxGaussPoints) throw ArgumentError("Gauss-Legendre point count out of range: " + std::to_string(n));
    return table[static_cast<std::size_t>(n)];
}

std::vector<Triangle> ear_clip(std::span<const Point2> polygon) {
    std::vector<Point2> v(polygon.begin(), polygon.end());
    if (v.size() < 3) throw GeometryError("ear clipping needs at least 3 vertices");
    double h2 = 0.0;
    for (const auto& p : v) h2 = std::max(h2, (p - v[0]).squaredNorm());
    const double eps = 1e-12 * h2;
    std::vector<Triangle> out;
    out.reserve(v.size() - 2);
    while (v.size() > 3) {
        const std::size_t n = v.size();
        bool clipped = false;
        for (std::size_t i = 0; i < n && !clipped; ++i) {
            const Point2& a = v[(i + n - 1) % n];
            const Point2& b = v[i];
            const Point2& c = v[(i + 1) % n];
            if (cross(b - a, c - b) <= eps) continue;  // reflex or collinear
            bool blocked = false;
            for (std::size_t j = 0; j < n && !blocked; ++j) {
                if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
                const Point2& p = v[j];
                if ((p - a).norm() < 1e-14 || (p - c).norm() < 1e-14) continue;
                blocked = inside_or_on_triangle(p, a, b, c, eps);
            }
            if (blocked) continue;
            out.push_back({a, b, c});
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
            clipped = true;
        }
        if (!clipped) throw GeometryError("ear clipping failed: polygon is not simple");
    }
    if (cross(v[1] - v[0], v[2] - v[1]) <= eps) throw GeometryError("ear clipping left a degenerate triangle");
    out.push_back({v[0], v[1], v[2]});
    return out;
}

QuadratureRule triangle_rule(const Triangle& tri, int degree) {
    // p(s, t) = a + s [(b - a) + t (c - b)], Jacobian 2|T| s on [0, 1]^2.
    const int ns = (degree + 3) / 2;
    const int nt = (degree + 2) / 2;
    const auto& gs = gauss_legendre(std::max(ns, 1));
    const auto& gt = gauss_legendre(std::max(nt, 1));
    const double twice_area = cross(tri[1] - tri[0], tri[2] - tri[0]);
    QuadratureRule rule;
    rule.exact_degree = degree;
    rule.points.reserve(gs.nodes.size() * gt.nodes.size());
    rule.weights.reserve(gs.nodes.size() * gt.nodes.size());
    for (std::size_t i = 0; i < gs.nodes.size(); ++i) {
        const double s = 0.5 * (gs.nodes[i] + 1.0);
        const double ws = 0.5 * gs.weights[i];
        for (std::size_t j = 0; j < gt.nodes.size(); ++j) {
            const double t = 0.5 * (gt.nodes[j] + 1.0);
            const double wt = 0.5 * gt.weights[j];
            rule.points.push_back(tri[0] + s * ((tri[1] - tri[0]) + t * (tri[2] - tri[1])));
            rule.weights.push_back(ws * wt * s * twice_area);
        }
    }
    return rule;
}

QuadratureRule polygon_rule(std::span<const Point2> polygon, int degree) {
    if (degree < 0 || degree > 40) throw ArgumentError("polygon quadrature degree out of range: " + std::to_string(degree));
    QuadratureRule rule;
    rule.exact_degree = degree;
    for (const auto& tri : ear_clip(polygon)) {
        auto part = triangle_rule(tri, degree);
        rule.points.insert(rule.points.end(), part.points.begin(), part.points.end());
        rule.weights.insert(rule.weights.end(), part.weights.begin(), part.weights.end());
    }
    return rule;
}

QuadratureRule polygon_rule(const Mesh& mesh, int element_id, int degree) {
    const auto poly = mesh.polygon(element_id);
    try {
        return polygon_rule(poly, degree);
    } catch (const GeometryError& e) {
        throw GeometryError("element " + std::to_string(element_id) + ": " + e.what());
    }
}

QuadratureRule segment_rule(const Point2& a, const Point2& b, int degree) {
    if (degree < 0 || degree > 60) throw ArgumentError("edge quadrature degree out of range: " + std::to_string(degree));
    const auto& g = gauss_legendre(degree / 2 + 1);
    const double half = 0.5 * (b - a).norm();
    QuadratureRule rule;
    rule.exact_degree = degree;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        rule.points.push_back(0.5 * (a + b) + 0.5 * g.nodes[i] * (b - a));
        rule.weights.push_back(half * g.weights[i]);
    }
    return rule;
}

QuadratureRule edge_rule(const Mesh& mesh, int edge_id, int degree) {
    const auto& e = mesh.edge(edge_id);
    return segment_rule(mesh.points()[static_cast<std::size_t>(e.vertices[0])],
                        mesh.points()[static_cast<std::size_t>(e.vertices[1])], degree);
}

}  // namespace wgbiot
