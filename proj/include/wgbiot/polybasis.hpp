#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "wgbiot/mesh.hpp"

namespace wgbiot {

struct QuadratureRule;

/// Number of monomials of total degree <= r in two variables.
constexpr int poly_dim(int r) { return r < 0 ? 0 : (r + 1) * (r + 2) / 2; }

/// Scaled monomials ((x - xc)/h)^a ((y - yc)/h)^b, a + b <= degree,
/// ordered by total degree and then by decreasing a:
/// 1, x, y, x^2, xy, y^2, x^3, ...
class ElementBasis {
public:
    ElementBasis() = default;
    ElementBasis(int degree, Point2 center, double scale);
    ElementBasis(const Mesh& mesh, int element_id, int degree);

    int degree() const { return degree_; }
    int dim() const { return poly_dim(degree_); }
    const Point2& center() const { return center_; }
    double scale() const { return scale_; }

    Eigen::VectorXd eval(const Point2& p) const;
    /// dim x 2, rows are the gradients of the basis functions.
    Eigen::MatrixXd eval_grad(const Point2& p) const;

    /// Exponents (a, b) of basis function i.
    static std::pair<int, int> exponents(int i);

private:
    int degree_ = 0;
    Point2 center_ = Point2::Zero();
    double scale_ = 1.0;
};

/// s^j, j = 0..degree, with s in [-1, 1] the affine parameter running from
/// the edge's first endpoint (s = -1) to its second (s = 1).
class EdgeBasis {
public:
    EdgeBasis() = default;
    EdgeBasis(int degree, Point2 a, Point2 b);
    EdgeBasis(const Mesh& mesh, int edge_id, int degree);

    int degree() const { return degree_; }
    int dim() const { return degree_ + 1; }
    double parameter(const Point2& p) const;
    Eigen::VectorXd eval(const Point2& p) const;

private:
    int degree_ = 0;
    Point2 a_ = Point2::Zero();
    Point2 b_ = Point2::Zero();
};

Eigen::VectorXd eval_basis(const ElementBasis& basis, const Point2& p);
Eigen::MatrixXd eval_grad(const ElementBasis& basis, const Point2& p);

/// G_ij = sum_q w_q m_i(x_q) m_j(x_q).
Eigen::MatrixXd gram_matrix(const ElementBasis& basis, const QuadratureRule& rule);
Eigen::MatrixXd gram_matrix(const EdgeBasis& basis, const QuadratureRule& rule);

/// Factorization of an SPD Gram matrix after symmetric diagonal scaling:
/// Cholesky, falling back to a pivoted LDL^T. Throws ConditioningError (with `context` in the message) when both fail.
class GramFactor {
public:
    GramFactor() = default;
    GramFactor(const Eigen::MatrixXd& gram, const std::string& context);

    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
    bool used_cholesky() const { return cholesky_; }

private:
    bool cholesky_ = true;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::LDLT<Eigen::MatrixXd> ldlt_;
    Eigen::VectorXd scale_;  // symmetric Jacobi scaling applied before factoring
};

}  // namespace wgbiot
