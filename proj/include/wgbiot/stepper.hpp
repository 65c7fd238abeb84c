#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "wgbiot/assembly.hpp"
#include "wgbiot/dofspace.hpp"
#include "wgbiot/error.hpp"
#include "wgbiot/scenarios.hpp"
#include "wgbiot/solver.hpp"
#include "wgbiot/weakops.hpp"

namespace wgbiot {

struct TransientState {
    double t = 0.0;
    int step_index = 0;
    Eigen::VectorXd u;
    Eigen::VectorXd p;
};

/// Q_h projections of the initial data, t = 0.
TransientState initialize(const Mesh& mesh, const GlobalDofMap& map, const VectorFunction& u0, const ScalarFunction& p0);

/// Everything that does not change between time steps: the tagged mesh,
/// DOF map, local operators and the assembled forms a, b, c.
class Discretization {
public:
    Discretization(const Scenario& scenario, const Mesh& mesh, int k, RPolicy policy);

    const Scenario& scenario() const { return scenario_; }
    const Mesh& mesh() const { return mesh_; }
    const GlobalDofMap& map() const { return map_; }
    const std::vector<LocalOperatorSet>& ops() const { return ops_; }
    const MaterialParams& params() const { return params_; }
    const SparseMatrix& a() const { return a_; }
    const SparseMatrix& b() const { return b_; }
    const SparseMatrix& c() const { return c_; }
    const LoadQuadrature& load_quadrature() const { return load_quad_; }
    int k() const { return map_.k; }
    RPolicy policy() const { return policy_; }

    /// DOF map with Dirichlet values of the scenario at time t.
    GlobalDofMap constrained_map(double t) const;
    LoadVectors loads(double t) const;

private:
    Scenario scenario_;
    Mesh mesh_;
    RPolicy policy_;
    GlobalDofMap map_;
    std::vector<LocalOperatorSet> ops_;
    MaterialParams params_;
    SparseMatrix a_, b_, c_;
    LoadQuadrature load_quad_;
};

class StepError : public SingularSystemError {
public:
    StepError(int step_index, const std::string& what);
    int step_index() const { return step_index_; }

private:
    int step_index_;
};

/// Backward Euler for the fully discrete scheme. The saddle-point matrix
/// depends only on dt, so factorizations are cached per dt.
class TimeStepper {
public:
    explicit TimeStepper(std::shared_ptr<const Discretization> disc);

    TransientState initialize() const;
    /// Advances to t + dt: loads and Dirichlet data at the new time,
    /// u_prev = state.u.
    TransientState step(const TransientState& state, double dt);

    using Observer = std::function<void(const TransientState&)>;
    TransientState run(TransientState state, double dt, int n_steps, const std::vector<Observer>& observers = {});

    const Discretization& discretization() const { return *disc_; }
    const SolveReport& last_report() const { return last_report_; }

private:
    std::shared_ptr<const Discretization> disc_;
    std::shared_ptr<const ReducedOperators> reduced_;
    std::map<double, std::unique_ptr<SaddleSolver>> solvers_;
    SolveReport last_report_;
};

}  // namespace wgbiot
