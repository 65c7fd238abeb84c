#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wgbiot/dofspace.hpp"
#include "wgbiot/mesh.hpp"
#include "wgbiot/weakops.hpp"

namespace wgbiot {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct MaterialParams {
    double mu = 1.0;
    double lambda = 0.0;
    /// Hydraulic conductivity, one SPD tensor per element.
    std::vector<Eigen::Matrix2d> conductivity;

    /// Lame parameters from Young's modulus and Poisson ratio, K = 1 everywhere.
    static MaterialParams from_young_poisson(double young, double poisson, int num_elements);
    static MaterialParams lame(double mu, double lambda, int num_elements, double k_scalar = 1.0);
};

/// a(u, v) = 2 mu (eps_w u, eps_w v) + lambda (div_w u, div_w v), unconstrained, n_u x n_u.
SparseMatrix assemble_a(const Mesh& mesh, const GlobalDofMap& map, const std::vector<LocalOperatorSet>& ops,
                        const MaterialParams& params);
/// b(v, q) = (div_w v, q_0), n_p x n_u; only interior pressure rows are non-empty.
SparseMatrix assemble_b(const Mesh& mesh, const GlobalDofMap& map, const std::vector<LocalOperatorSet>& ops);
/// c(p, q) = (K grad_w p, grad_w q), n_p x n_p.
SparseMatrix assemble_c(const Mesh& mesh, const GlobalDofMap& map, const std::vector<LocalOperatorSet>& ops,
                        const MaterialParams& params);

/// Element contributions, exposed for element-level checks.
Eigen::MatrixXd element_a(const LocalOperatorSet& ops, double mu, double lambda);
Eigen::MatrixXd element_b(const LocalOperatorSet& ops);
Eigen::MatrixXd element_c(const LocalOperatorSet& ops, const Eigen::Matrix2d& conductivity);

/// Quadrature points and P_k basis values reused by every load assembly.
struct LoadQuadrature {
    int k = 1;
    std::vector<QuadratureRule> cells;
    std::vector<Eigen::MatrixXd> cell_basis;  // dim P_k x n_q
    std::vector<QuadratureRule> edges;
    std::vector<Eigen::MatrixXd> edge_basis;  // (k + 1) x n_q
};

/// Cell rules of degree 2 r_T + 2, edge rules of degree 2 k + 8.
LoadQuadrature build_load_quadrature(const Mesh& mesh, int k, const std::vector<LocalOperatorSet>& ops);

struct LoadVectors {
    Eigen::VectorXd rhs_u;  // (f, v_0) + <beta, v_b> on Natural-u boundary edges
    Eigen::VectorXd rhs_p;  // (g, q_0)
};

LoadVectors assemble_loads(const Mesh& mesh, const GlobalDofMap& map, const LoadQuadrature& quad,
                           const SpaceTimeVector& f, const SpaceTimeScalar& g, const SpaceTimeVector* beta, double t);

/// Line-based triplet export: "row col value" with 17 significant digits.
void write_triplets(std::ostream& out, const SparseMatrix& m);

}  // namespace wgbiot
