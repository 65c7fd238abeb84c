#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wgbiot/mesh.hpp"
#include "wgbiot/polybasis.hpp"
#include "wgbiot/quadrature.hpp"

namespace wgbiot {

using ScalarFunction = std::function<double(const Point2&)>;
using VectorFunction = std::function<Eigen::Vector2d(const Point2&)>;

/// Degree of the polynomial space the weak operators map into.
///   Theory:     k - 1 + 2N on non-convex elements, k - 1 + N on convex ones
///   FixedPlus1: k + 1
///   FixedPlus2: k + 2
enum class RPolicy { Theory, FixedPlus1, FixedPlus2 };

RPolicy r_policy_from_string(const std::string& name);
const char* to_string(RPolicy policy);

int choose_r(const PolygonalElement& element, int k, RPolicy policy);

/// Local ordering of a scalar weak function {q_0, q_b} on one element:
/// the dim P_k interior modes first, then k + 1 modes per edge in
/// element-local edge order. Vector functions stack the x component's
/// scalar layout in front of the y component's.
struct LocalDofLayout {
    int k = 1;
    int num_edges = 0;

    LocalDofLayout() = default;
    LocalDofLayout(int k_, int num_edges_) : k(k_), num_edges(num_edges_) {}

    int dim_interior() const { return poly_dim(k); }
    int edge_dim() const { return k + 1; }
    int edge_offset(int local_edge) const { return dim_interior() + local_edge * edge_dim(); }
    int scalar_size() const { return dim_interior() + num_edges * edge_dim(); }
    int vector_size() const { return 2 * scalar_size(); }
};

/// Per-element matrices taking local weak-function coefficients to the
/// P_r coefficients of the weak operators.
///
///   grad_u   4 dimP_r x vector_size, blocks (d_x v_x, d_y v_x, d_x v_y, d_y v_y)
///   div_u    dimP_r x vector_size
///   strain_u 3 dimP_r x vector_size, blocks (xx, yy, xy)
///   grad_p   2 dimP_r x scalar_size, blocks (d_x q, d_y q)
struct LocalOperatorSet {
    int element = -1;
    int r = 0;
    LocalDofLayout layout;
    ElementBasis basis_r;
    /// Gram matrix of basis_r; the leading dim P_k block is the P_k Gram matrix.
    Eigen::MatrixXd gram_r;
    Eigen::MatrixXd grad_u;
    Eigen::MatrixXd div_u;
    Eigen::MatrixXd strain_u;
    Eigen::MatrixXd grad_p;

    int dim_r() const { return basis_r.dim(); }
};

/// Per-element geometric data shared by the operator builders.
struct ElementGeometry {
    int element = -1;
    ElementBasis basis_k;
    ElementBasis basis_r;
    QuadratureRule cell_rule;
    std::vector<QuadratureRule> edge_rules;
    std::vector<EdgeBasis> edge_bases;
    std::vector<Point2> normals;
};

ElementGeometry element_geometry(const Mesh& mesh, int element_id, int k, int r);

/// Projection right-hand sides of the defining problems:
///   weak gradient  (grad_w q, phi)_T = -(q_0, div phi)_T + <q_b, phi . n>_dT
/// for phi = m_a e_j. Returns {R_x, R_y}, each dimP_r x scalar_size.
std::array<Eigen::MatrixXd, 2> weak_gradient_rhs(const ElementGeometry& geo, const LocalDofLayout& layout);

/// Scalar weak gradient, 2 dimP_r x scalar_size.
Eigen::MatrixXd scalar_weak_gradient_matrix(const ElementGeometry& geo, const LocalDofLayout& layout,
                                            const GramFactor& gram);
/// Vector weak gradient, 4 dimP_r x vector_size.
Eigen::MatrixXd weak_gradient_matrix(const ElementGeometry& geo, const LocalDofLayout& layout, const GramFactor& gram);
/// Weak divergence from its own defining problem
///   (div_w v, w)_T = -(v_0, grad w)_T + <v_b . n, w>_dT.
Eigen::MatrixXd weak_divergence_matrix(const ElementGeometry& geo, const LocalDofLayout& layout,
                                       const GramFactor& gram);
/// Symmetric part of the weak gradient stored as (xx, yy, xy).
Eigen::MatrixXd weak_strain_matrix(const Eigen::MatrixXd& grad_u, int dim_r);

LocalOperatorSet compute_local_operators(const Mesh& mesh, int element_id, int k, int r);

/// Operators for every element, r chosen per element by `policy`.
std::vector<LocalOperatorSet> build_local_operators(const Mesh& mesh, int k, RPolicy policy);

/// L2 projections. `quad_degree` < 0 selects 2 * degree + 12.
Eigen::VectorXd project_element(const ElementBasis& basis, const QuadratureRule& rule, const ScalarFunction& f);
Eigen::VectorXd project_interior(const Mesh& mesh, int element_id, int k, const ScalarFunction& f, int quad_degree = -1);
Eigen::VectorXd project_highorder(const Mesh& mesh, int element_id, int r, const ScalarFunction& f,
                                  int quad_degree = -1);
Eigen::VectorXd project_edge(const Mesh& mesh, int edge_id, int k, const ScalarFunction& f, int quad_degree = -1);

/// Text dump of one element's operator matrices (debugging aid).
void write_local_operators(std::ostream& out, const LocalOperatorSet& ops);

}  // namespace wgbiot
