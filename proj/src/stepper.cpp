#include "wgbiot/stepper.hpp"

#include <string>

#include "wgbiot/error.hpp"

namespace wgbiot {

TransientState initialize(const Mesh& mesh, const GlobalDofMap& map, const VectorFunction& u0, const ScalarFunction& p0) {
    TransientState s;
    s.t = 0.0;
    s.step_index = 0;
    s.u = project_vector_field(mesh, map, u0);
    s.p = project_scalar_field(mesh, map, p0);
    return s;
}

Discretization::Discretization(const Scenario& scenario, const Mesh& mesh, int k, RPolicy policy)
    : scenario_(scenario), mesh_(scenario.bind(mesh)), policy_(policy) {
    map_ = build_dof_map(mesh_, k);
    ops_ = build_local_operators(mesh_, k, policy);
    params_ = scenario_.material(mesh_);
    a_ = assemble_a(mesh_, map_, ops_, params_);
    b_ = assemble_b(mesh_, map_, ops_);
    c_ = assemble_c(mesh_, map_, ops_, params_);
    load_quad_ = build_load_quadrature(mesh_, k, ops_);
}

GlobalDofMap Discretization::constrained_map(double t) const {
    return constrain_dirichlet(map_, mesh_, &scenario_.u_dirichlet, &scenario_.p_dirichlet, t);
}

LoadVectors Discretization::loads(double t) const {
    const SpaceTimeVector* beta = scenario_.beta ? &*scenario_.beta : nullptr;
    return assemble_loads(mesh_, map_, load_quad_, scenario_.f, scenario_.g, beta, t);
}

StepError::StepError(int step_index, const std::string& what)
    : SingularSystemError("step " + std::to_string(step_index) + ": " + what), step_index_(step_index) {}

TimeStepper::TimeStepper(std::shared_ptr<const Discretization> disc) : disc_(std::move(disc)) {
    reduced_ = reduce_operators(disc_->a(), disc_->b(), disc_->c(), disc_->constrained_map(0.0));
}

TransientState TimeStepper::initialize() const {
    return wgbiot::initialize(disc_->mesh(), disc_->map(), disc_->scenario().initial_u, disc_->scenario().initial_p);
}

TransientState TimeStepper::step(const TransientState& state, double dt) {
    if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
    const int index = state.step_index + 1;
    const double t_next = state.t + dt;
    try {
        const auto map = disc_->constrained_map(t_next);
        const auto system = build_step_system(reduced_, disc_->loads(t_next), state.u, dt, map);
        auto& solver = solvers_[dt];
        if (!solver) solver = std::make_unique<SaddleSolver>(system);
        auto sol = solver->solve(system);
        last_report_ = sol.report;
        return TransientState{t_next, index, std::move(sol.u), std::move(sol.p)};
    } catch (const SingularSystemError& e) {
        throw StepError(index, e.what());
    }
}

TransientState TimeStepper::run(TransientState state, double dt, int n_steps, const std::vector<Observer>& observers) {
    if (n_steps < 1) throw ArgumentError("run needs at least one step");
    for (int i = 0; i < n_steps; ++i) {
        state = step(state, dt);
        for (const auto& obs : observers) obs(state);
    }
    return state;
}

}  // namespace wgbiot
