#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseLU>

#include "wgbiot/assembly.hpp"
#include "wgbiot/dofspace.hpp"

namespace wgbiot {

/// The unconstrained forms restricted to free DOFs, plus the index maps
/// needed to move constrained values to the right-hand side and back.
struct ReducedOperators {
    SparseMatrix a_full, b_full, c_full;
    SparseMatrix a, b, c;            // free x free blocks
    std::vector<int> free_u, free_p; // reduced index -> full index
    int n_u = 0;
    int n_p = 0;
};

std::shared_ptr<const ReducedOperators> reduce_operators(const SparseMatrix& a, const SparseMatrix& b,
                                                         const SparseMatrix& c, const GlobalDofMap& map);

/// One backward-Euler step on the free DOFs:
///
///   [  A    -B^T  ] [u]   [ rhs_u ]
///   [ -B  -dt C   ] [p] = [ rhs_p ]
///
/// with constrained values already folded into both right-hand sides.
struct SaddleSystem {
    std::shared_ptr<const ReducedOperators> ops;
    double dt = 0.0;
    Eigen::VectorXd rhs_u;
    Eigen::VectorXd rhs_p;
    /// Full-length vectors holding the prescribed values (zero at free DOFs).
    Eigen::VectorXd u_fixed;
    Eigen::VectorXd p_fixed;

    int n_free() const { return static_cast<int>(rhs_u.size() + rhs_p.size()); }
    SparseMatrix matrix() const;
    Eigen::VectorXd rhs() const;
};

/// rhs_u <- (f, v_0) + <beta, v_b>; rhs_p <- dt (g, q_0) - b(u_prev, q).
SaddleSystem build_step_system(std::shared_ptr<const ReducedOperators> ops, const LoadVectors& loads,
                               const Eigen::VectorXd& u_prev, double dt, const GlobalDofMap& map);
SaddleSystem build_step_system(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c,
                               const LoadVectors& loads, const Eigen::VectorXd& u_prev, double dt,
                               const GlobalDofMap& map);

struct SolveReport {
    double residual_norm = 0.0;  // ||M x - b|| / ||b|| (absolute when b = 0)
    double condition_estimate = 0.0;
    double factor_time = 0.0;
    double solve_time = 0.0;
    int n_free = 0;
};

struct SaddleSolution {
    Eigen::VectorXd u;  // full length, constrained values re-inserted
    Eigen::VectorXd p;
    SolveReport report;
};

/// Sparse LU of the symmetrically equilibrated block matrix. The factor is
/// reusable for every right-hand side sharing the same matrix.
class SaddleSolver {
public:
    explicit SaddleSolver(const SaddleSystem& system);

    SaddleSolution solve(const SaddleSystem& system) const;
    double condition_estimate() const { return condition_estimate_; }
    double factor_time() const { return factor_time_; }

    static constexpr double kMaxResidual = 1e-6;
    static constexpr double kMaxCondition = 1e13;

private:
    Eigen::VectorXd solve_scaled(const Eigen::VectorXd& rhs) const;

    SparseMatrix matrix_;
    Eigen::VectorXd scale_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    double condition_estimate_ = 0.0;
    double factor_time_ = 0.0;
};

SaddleSolution solve_saddle(const SaddleSystem& system);

}  // namespace wgbiot
