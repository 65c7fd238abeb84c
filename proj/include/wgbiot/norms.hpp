#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wgbiot/assembly.hpp"
#include "wgbiot/dofspace.hpp"
#include "wgbiot/stepper.hpp"
#include "wgbiot/weakops.hpp"

namespace wgbiot {

/// (sum_T 2 mu |eps_w v|^2 + lambda |div_w v|^2)^{1/2}
double energy_norm_u(const Eigen::VectorXd& u, const Mesh& mesh, const GlobalDofMap& map,
                     const std::vector<LocalOperatorSet>& ops, const MaterialParams& params);
/// (sum_T |K^{1/2} grad_w q|^2)^{1/2}
double energy_norm_p(const Eigen::VectorXd& p, const Mesh& mesh, const GlobalDofMap& map,
                     const std::vector<LocalOperatorSet>& ops, const MaterialParams& params);
/// L2 norm of the weak gradient (tensor for displacements, vector for pressures).
double weak_gradient_norm_u(const Eigen::VectorXd& u, const Mesh& mesh, const GlobalDofMap& map,
                            const std::vector<LocalOperatorSet>& ops);
double weak_gradient_norm_p(const Eigen::VectorXd& p, const Mesh& mesh, const GlobalDofMap& map,
                            const std::vector<LocalOperatorSet>& ops);

/// L2 norm of the interior components only; accepts scalar (n_p) or vector (n_u) fields.
double l2_interior_norm(const Eigen::VectorXd& field, const Mesh& mesh, const GlobalDofMap& map);

/// Discrete H1 semi-norms built from the interior polynomials and the
/// h_T^{-1}-weighted jump v_0 - v_b on element boundaries.
double discrete_h1_norm_u(const Eigen::VectorXd& u, const Mesh& mesh, const GlobalDofMap& map,
                          const MaterialParams& params);
double discrete_h1_norm_p(const Eigen::VectorXd& p, const Mesh& mesh, const GlobalDofMap& map,
                          const MaterialParams& params);

/// (|u|_{V_h}^2 + dt |p|_{W_h}^2 + |p_0|^2)^{1/2}, a diagnostic for the coupled step.
double weighted_step_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& p, double dt, const Mesh& mesh,
                          const GlobalDofMap& map, const std::vector<LocalOperatorSet>& ops,
                          const MaterialParams& params);

struct ConvergenceRecord {
    int level = 0;
    double h = 0.0;
    double err_l2_u = 0.0;      // |Q_0 u - u_0|
    double err_hw_u = 0.0;      // |grad_w (Q_h u - u_h)|
    double err_hw_p = 0.0;      // |grad_w (Q_h p - p_h)|
    double err_energy_u = 0.0;  // energy norm of Q_h u - u_h
    /// log2 ratios against the previous record (l2_u, hw_u, hw_p); empty on the
    /// first record or when the coarser error is zero.
    std::array<std::optional<double>, 3> orders;
};

/// Errors of a state against the scenario's exact solution at state.t,
/// measured against the projections Q_h u, Q_h p.
ConvergenceRecord errors_vs_exact(const TransientState& state, const Discretization& disc);

/// Supplementary true L2 error |u - u_0| by quadrature.
double true_l2_error_u(const TransientState& state, const Discretization& disc);

/// Fills `orders` in place: order = log2(err_{l-1} / err_l) scaled by the
/// actual h ratio when it is not exactly 1/2.
void compute_orders(std::vector<ConvergenceRecord>& records);

double round_order(double order);  // one decimal

/// level,h,err_l2_u,order_l2_u,err_hw_u,order_hw_u,err_hw_p,order_hw_p
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records);
/// Fixed-width table with 3-significant-digit errors and 1-decimal orders.
void write_convergence_table(std::ostream& out, const std::vector<ConvergenceRecord>& records);

}  // namespace wgbiot
