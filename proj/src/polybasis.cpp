#include "wgbiot/polybasis.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "wgbiot/error.hpp"
#include "wgbiot/quadrature.hpp"

namespace wgbiot {

std::pair<int, int> ElementBasis::exponents(int i) {
    int d = 0;
    while (poly_dim(d) <= i) ++d;
    const int offset = i - poly_dim(d - 1);
    return {d - offset, offset};
}

ElementBasis::ElementBasis(int degree, Point2 center, double scale)
    : degree_(degree), center_(std::move(center)), scale_(scale) {
    if (degree < 0) throw ArgumentError("negative polynomial degree");
    if (!(scale > 0.0)) throw ArgumentError("basis scale must be positive");
}

ElementBasis::ElementBasis(const Mesh& mesh, int element_id, int degree)
    : ElementBasis(degree, mesh.element(element_id).centroid, mesh.element(element_id).diameter) {}

Eigen::VectorXd ElementBasis::eval(const Point2& p) const {
    const double x = (p.x() - center_.x()) / scale_;
    const double y = (p.y() - center_.y()) / scale_;
    Eigen::VectorXd out(dim());
    out[0] = 1.0;
    int i = 1;
    for (int d = 1; d <= degree_; ++d) {
        // Degree-d block from the degree-(d-1) block: multiply by x, and the last by y.
        const int prev = poly_dim(d - 2);
        for (int j = 0; j < d; ++j) out[i++] = out[prev + j] * x;
        out[i++] = out[prev + d - 1] * y;
    }
    return out;
}

Eigen::MatrixXd ElementBasis::eval_grad(const Point2& p) const {
    const double x = (p.x() - center_.x()) / scale_;
    const double y = (p.y() - center_.y()) / scale_;
    Eigen::VectorXd xp(degree_ + 1);
    Eigen::VectorXd yp(degree_ + 1);
    xp[0] = yp[0] = 1.0;
    for (int i = 1; i <= degree_; ++i) {
        xp[i] = xp[i - 1] * x;
        yp[i] = yp[i - 1] * y;
    }
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim(), 2);
    int i = 1;
    for (int d = 1; d <= degree_; ++d) {
        for (int b = 0; b <= d; ++b, ++i) {
            const int a = d - b;
            if (a > 0) g(i, 0) = a * xp[a - 1] * yp[b] / scale_;
            if (b > 0) g(i, 1) = b * xp[a] * yp[b - 1] / scale_;
        }
    }
    return g;
}

EdgeBasis::EdgeBasis(int degree, Point2 a, Point2 b) : degree_(degree), a_(std::move(a)), b_(std::move(b)) {
    if (degree < 0) throw ArgumentError("negative polynomial degree");
}

EdgeBasis::EdgeBasis(const Mesh& mesh, int edge_id, int degree)
    : EdgeBasis(degree, mesh.points()[static_cast<std::size_t>(mesh.edge(edge_id).vertices[0])],
                mesh.points()[static_cast<std::size_t>(mesh.edge(edge_id).vertices[1])]) {}

double EdgeBasis::parameter(const Point2& p) const {
    const Point2 t = b_ - a_;
    return 2.0 * (p - a_).dot(t) / t.squaredNorm() - 1.0;
}

Eigen::VectorXd EdgeBasis::eval(const Point2& p) const {
    const double s = parameter(p);
    Eigen::VectorXd out(dim());
    out[0] = 1.0;
    for (int j = 1; j <= degree_; ++j) out[j] = out[j - 1] * s;
    return out;
}

Eigen::VectorXd eval_basis(const ElementBasis& basis, const Point2& p) { return basis.eval(p); }
Eigen::MatrixXd eval_grad(const ElementBasis& basis, const Point2& p) { return basis.eval_grad(p); }

Eigen::MatrixXd gram_matrix(const ElementBasis& basis, const QuadratureRule& rule) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd phi = basis.eval(rule.points[q]);
        g.selfadjointView<Eigen::Lower>().rankUpdate(phi, rule.weights[q]);
    }
    return g.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd gram_matrix(const EdgeBasis& basis, const QuadratureRule& rule) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd phi = basis.eval(rule.points[q]);
        g.noalias() += rule.weights[q] * phi * phi.transpose();
    }
    return g;
}

GramFactor::GramFactor(const Eigen::MatrixXd& gram, const std::string& context) {
    const Eigen::VectorXd diag = gram.diagonal();
    if (!(diag.minCoeff() > 0.0))
        throw ConditioningError("Gram matrix has a non-positive diagonal (" + context + ")");
    scale_ = diag.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd scaled = scale_.asDiagonal() * gram * scale_.asDiagonal();
    llt_.compute(scaled);
    if (llt_.info() == Eigen::Success) {
        const auto d = llt_.matrixLLT().diagonal().cwiseAbs();
        if (d.minCoeff() > std::sqrt(std::numeric_limits<double>::epsilon()) * 1e-3 * d.maxCoeff()) return;
    }
    cholesky_ = false;
    ldlt_.compute(scaled);
    const auto d = ldlt_.vectorD();
    if (ldlt_.info() != Eigen::Success || d.minCoeff() <= 0.0 ||
        d.minCoeff() < 1e2 * std::numeric_limits<double>::epsilon() * d.cwiseAbs().maxCoeff())
        throw ConditioningError("Gram matrix is singular to working precision (" + context + ")");
}

Eigen::MatrixXd GramFactor::solve(const Eigen::MatrixXd& rhs) const {
    const Eigen::MatrixXd b = scale_.asDiagonal() * rhs;
    const Eigen::MatrixXd y = cholesky_ ? Eigen::MatrixXd(llt_.solve(b)) : Eigen::MatrixXd(ldlt_.solve(b));
    return scale_.asDiagonal() * y;
}

}  // namespace wgbiot
