#include "wgbiot/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "wgbiot/error.hpp"

namespace wgbiot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SparseMatrix restrict_matrix(const SparseMatrix& m, const std::vector<int>& row_map, const std::vector<int>& col_map,
                             int rows, int cols) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int i = 0; i < m.outerSize(); ++i) {
        const int ri = row_map[static_cast<std::size_t>(i)];
        if (ri < 0) continue;
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
            const int cj = col_map[static_cast<std::size_t>(it.col())];
            if (cj >= 0) trip.emplace_back(ri, cj, it.value());
        }
    }
    SparseMatrix out(rows, cols);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

std::vector<int> free_indices(const std::vector<char>& constrained, std::vector<int>& full_to_reduced) {
    std::vector<int> free;
    full_to_reduced.assign(constrained.size(), -1);
    for (std::size_t i = 0; i < constrained.size(); ++i)
        if (!constrained[i]) {
            full_to_reduced[i] = static_cast<int>(free.size());
            free.push_back(static_cast<int>(i));
        }
    return free;
}

Eigen::VectorXd gather(const Eigen::VectorXd& full, const std::vector<int>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = full[idx[i]];
    return out;
}

}  // namespace

std::shared_ptr<const ReducedOperators> reduce_operators(const SparseMatrix& a, const SparseMatrix& b,
                                                         const SparseMatrix& c, const GlobalDofMap& map) {
    if (a.rows() != map.n_u || b.rows() != map.n_p || b.cols() != map.n_u || c.rows() != map.n_p)
        throw InternalError("operator dimensions do not match the DOF map");
    auto ops = std::make_shared<ReducedOperators>();
    ops->a_full = a;
    ops->b_full = b;
    ops->c_full = c;
    ops->n_u = map.n_u;
    ops->n_p = map.n_p;
    std::vector<int> u_map;
    std::vector<int> p_map;
    ops->free_u = free_indices(map.u_constrained, u_map);
    ops->free_p = free_indices(map.p_constrained, p_map);
    const int nu = static_cast<int>(ops->free_u.size());
    const int np = static_cast<int>(ops->free_p.size());
    ops->a = restrict_matrix(a, u_map, u_map, nu, nu);
    ops->b = restrict_matrix(b, p_map, u_map, np, nu);
    ops->c = restrict_matrix(c, p_map, p_map, np, np);
    return ops;
}

SparseMatrix SaddleSystem::matrix() const {
    const auto& o = *ops;
    const int nu = static_cast<int>(o.free_u.size());
    const int np = static_cast<int>(o.free_p.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(o.a.nonZeros() + 2 * o.b.nonZeros() + o.c.nonZeros()));
    for (int i = 0; i < o.a.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(o.a, i); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i < o.b.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(o.b, i); it; ++it) {
            trip.emplace_back(nu + it.row(), it.col(), -it.value());
            trip.emplace_back(it.col(), nu + it.row(), -it.value());
        }
    for (int i = 0; i < o.c.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(o.c, i); it; ++it)
            trip.emplace_back(nu + it.row(), nu + it.col(), -dt * it.value());
    SparseMatrix m(nu + np, nu + np);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

Eigen::VectorXd SaddleSystem::rhs() const {
    Eigen::VectorXd r(rhs_u.size() + rhs_p.size());
    r << rhs_u, rhs_p;
    return r;
}

SaddleSystem build_step_system(std::shared_ptr<const ReducedOperators> ops, const LoadVectors& loads,
                               const Eigen::VectorXd& u_prev, double dt, const GlobalDofMap& map) {
    if (!(dt > 0.0)) throw ArgumentError("time step must be positive");
    if (u_prev.size() != map.n_u || loads.rhs_u.size() != map.n_u || loads.rhs_p.size() != map.n_p)
        throw InternalError("step data does not match the DOF map");
    SaddleSystem s;
    s.dt = dt;
    s.u_fixed = Eigen::VectorXd::Zero(map.n_u);
    s.p_fixed = Eigen::VectorXd::Zero(map.n_p);
    for (int i = 0; i < map.n_u; ++i)
        if (map.u_constrained[static_cast<std::size_t>(i)]) s.u_fixed[i] = map.u_prescribed[i];
    for (int i = 0; i < map.n_p; ++i)
        if (map.p_constrained[static_cast<std::size_t>(i)]) s.p_fixed[i] = map.p_prescribed[i];
    const auto& o = *ops;
    const Eigen::VectorXd ru = loads.rhs_u - o.a_full * s.u_fixed + o.b_full.transpose() * s.p_fixed;
    const Eigen::VectorXd rp =
        dt * loads.rhs_p - o.b_full * u_prev + o.b_full * s.u_fixed + dt * (o.c_full * s.p_fixed);
    s.rhs_u = gather(ru, o.free_u);
    s.rhs_p = gather(rp, o.free_p);
    s.ops = std::move(ops);
    return s;
}

SaddleSystem build_step_system(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c,
                               const LoadVectors& loads, const Eigen::VectorXd& u_prev, double dt,
                               const GlobalDofMap& map) {
    return build_step_system(reduce_operators(a, b, c, map), loads, u_prev, dt, map);
}

SaddleSolver::SaddleSolver(const SaddleSystem& system) {
    const auto start = Clock::now();
    if (system.n_free() == 0) throw ArgumentError("saddle system has no free DOFs");
    matrix_ = system.matrix();
    const Eigen::Index n = matrix_.rows();
    // Symmetric equilibration s_i = 1 / sqrt(max_j |M_ij|).
    scale_ = Eigen::VectorXd::Ones(n);
    for (int i = 0; i < matrix_.outerSize(); ++i) {
        double m = 0.0;
        for (SparseMatrix::InnerIterator it(matrix_, i); it; ++it) m = std::max(m, std::abs(it.value()));
        if (m > 0.0) scale_[i] = 1.0 / std::sqrt(m);
    }
    Eigen::SparseMatrix<double> scaled = scale_.asDiagonal() * matrix_ * scale_.asDiagonal();
    scaled.makeCompressed();
    lu_.analyzePattern(scaled);
    lu_.factorize(scaled);
    if (lu_.info() != Eigen::Success)
        throw SingularSystemError("saddle-point factorization failed: " + lu_.lastErrorMessage());

    // Inverse iteration for ||M~^{-1}||_2; ||M~||_2 <= ||M~||_1 for symmetric M~.
    double norm1 = 0.0;
    {
        Eigen::VectorXd colsum = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < scaled.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(scaled, k); it; ++it) colsum[it.col()] += std::abs(it.value());
        norm1 = colsum.maxCoeff();
    }
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = std::sin(1.0 + static_cast<double>(i));
    v.normalize();
    double inv_norm = 0.0;
    for (int it = 0; it < 4; ++it) {
        const Eigen::VectorXd y = lu_.solve(v);
        const double ny = y.norm();
        if (!std::isfinite(ny)) {
            inv_norm = std::numeric_limits<double>::infinity();
            break;
        }
        inv_norm = std::max(inv_norm, ny);
        v = y / ny;
    }
    condition_estimate_ = norm1 * inv_norm;
    factor_time_ = seconds_since(start);
    if (!(condition_estimate_ < kMaxCondition)) {
        std::ostringstream os;
        os << "saddle-point system is numerically singular (condition estimate " << condition_estimate_
           << "); check boundary conditions and the inf-sup pairing";
        throw SingularSystemError(os.str());
    }
}

Eigen::VectorXd SaddleSolver::solve_scaled(const Eigen::VectorXd& rhs) const {
    const Eigen::VectorXd y = lu_.solve(Eigen::VectorXd(scale_.cwiseProduct(rhs)));
    return scale_.cwiseProduct(y);
}

SaddleSolution SaddleSolver::solve(const SaddleSystem& system) const {
    const auto start = Clock::now();
    const Eigen::VectorXd b = system.rhs();
    if (b.size() != matrix_.rows()) throw InternalError("right-hand side does not match the factorized system");
    Eigen::VectorXd x = solve_scaled(b);
    Eigen::VectorXd r = b - matrix_ * x;
    // One step of iterative refinement.
    x += solve_scaled(r);
    r = b - matrix_ * x;
    const double bn = b.norm();
    SaddleSolution sol;
    sol.report.residual_norm = bn > 0.0 ? r.norm() / bn : r.norm();
    sol.report.condition_estimate = condition_estimate_;
    sol.report.factor_time = factor_time_;
    sol.report.n_free = static_cast<int>(b.size());
    if (!(sol.report.residual_norm <= kMaxResidual)) {
        std::ostringstream os;
        os << "saddle-point solve rejected: relative residual " << sol.report.residual_norm;
        throw SingularSystemError(os.str());
    }
    const auto& o = *system.ops;
    sol.u = system.u_fixed;
    sol.p = system.p_fixed;
    const Eigen::Index nu = static_cast<Eigen::Index>(o.free_u.size());
    for (std::size_t i = 0; i < o.free_u.size(); ++i) sol.u[o.free_u[i]] = x[static_cast<Eigen::Index>(i)];
    for (std::size_t i = 0; i < o.free_p.size(); ++i) sol.p[o.free_p[i]] = x[nu + static_cast<Eigen::Index>(i)];
    sol.report.solve_time = seconds_since(start);
    return sol;
}

SaddleSolution solve_saddle(const SaddleSystem& system) { return SaddleSolver(system).solve(system); }

}  // namespace wgbiot
