#include "wgbiot/assembly.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "wgbiot/error.hpp"

namespace wgbiot {

MaterialParams MaterialParams::from_young_poisson(double young, double poisson, int num_elements) {
    if (!(young > 0.0)) throw ArgumentError("Young's modulus must be positive");
    if (!(poisson > -1.0 && poisson < 0.5)) throw ArgumentError("Poisson ratio must lie in (-1, 1/2)");
    return lame(young / (2.0 * (1.0 + poisson)), poisson * young / ((1.0 + poisson) * (1.0 - 2.0 * poisson)),
                num_elements);
}

MaterialParams MaterialParams::lame(double mu, double lambda, int num_elements, double k_scalar) {
    if (!(mu > 0.0) || !(lambda >= 0.0)) throw ArgumentError("Lame parameters need mu > 0 and lambda >= 0");
    MaterialParams p;
    p.mu = mu;
    p.lambda = lambda;
    p.conductivity.assign(static_cast<std::size_t>(num_elements), k_scalar * Eigen::Matrix2d::Identity());
    return p;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter(Triplets& trip, const std::vector<int>& rows, const std::vector<int>& cols, const Eigen::MatrixXd& local) {
    if (local.rows() != static_cast<Eigen::Index>(rows.size()) || local.cols() != static_cast<Eigen::Index>(cols.size()))
        throw InternalError("element matrix does not match its DOF list");
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const double v = local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (v != 0.0) trip.emplace_back(rows[i], cols[j], v);
        }
}

void check_ops(const Mesh& mesh, const GlobalDofMap& map, const std::vector<LocalOperatorSet>& ops) {
    if (static_cast<int>(ops.size()) != mesh.num_elements()) throw InternalError("one operator set per element required");
    for (const auto& o : ops)
        if (o.layout.k != map.k) throw InternalError("operator degree k differs from the DOF map");
}

}  // namespace

Eigen::MatrixXd element_a(const LocalOperatorSet& ops, double mu, double lambda) {
    const int nr = ops.dim_r();
    const auto& g = ops.gram_r;
    const auto& s = ops.strain_u;
    Eigen::MatrixXd gs(3 * nr, s.cols());
    gs.topRows(nr).noalias() = g * s.topRows(nr);
    gs.middleRows(nr, nr).noalias() = g * s.middleRows(nr, nr);
    gs.bottomRows(nr).noalias() = 2.0 * g * s.bottomRows(nr);
    Eigen::MatrixXd a = 2.0 * mu * s.transpose() * gs;
    if (lambda != 0.0) a.noalias() += lambda * ops.div_u.transpose() * (g * ops.div_u);
    return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd element_b(const LocalOperatorSet& ops) {
    const int nk = ops.layout.dim_interior();
    return ops.gram_r.topRows(nk) * ops.div_u;
}

Eigen::MatrixXd element_c(const LocalOperatorSet& ops, const Eigen::Matrix2d& kappa) {
    const int nr = ops.dim_r();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(ops.grad_p.cols(), ops.grad_p.cols());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (kappa(i, j) != 0.0)
                c.noalias() += kappa(i, j) * ops.grad_p.middleRows(i * nr, nr).transpose() *
                               (ops.gram_r * ops.grad_p.middleRows(j * nr, nr));
    return 0.5 * (c + c.transpose());
}

SparseMatrix assemble_a(const Mesh& mesh, const GlobalDofMap& map, const std::vector<LocalOperatorSet>& ops,
                        const MaterialParams& params) {
    check_ops(mesh, map, ops);
    Triplets trip;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto dofs = map.vector_dofs(mesh, t);
        scatter(trip, dofs, dofs, element_a(ops[static_cast<std::size_t>(t)], params.mu, params.lambda));
    }
    SparseMatrix a(map.n_u, map.n_u);
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

SparseMatrix assemble_b(const Mesh& mesh, const GlobalDofMap& map, const std::vector<LocalOperatorSet>& ops) {
    check_ops(mesh, map, ops);
    Triplets trip;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        std::vector<int> rows(static_cast<std::size_t>(map.dim_interior()));
        for (int i = 0; i < map.dim_interior(); ++i) rows[static_cast<std::size_t>(i)] = map.interior_offset(t) + i;
        scatter(trip, rows, map.vector_dofs(mesh, t), element_b(ops[static_cast<std::size_t>(t)]));
    }
    SparseMatrix b(map.n_p, map.n_u);
    b.setFromTriplets(trip.begin(), trip.end());
    return b;
}

SparseMatrix assemble_c(const Mesh& mesh, const GlobalDofMap& map, const std::vector<LocalOperatorSet>& ops,
                        const MaterialParams& params) {
    check_ops(mesh, map, ops);
    if (static_cast<int>(params.conductivity.size()) != mesh.num_elements())
        throw InternalError("conductivity must be given per element");
    Triplets trip;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto dofs = map.scalar_dofs(mesh, t);
        scatter(trip, dofs, dofs,
                element_c(ops[static_cast<std::size_t>(t)], params.conductivity[static_cast<std::size_t>(t)]));
    }
    SparseMatrix c(map.n_p, map.n_p);
    c.setFromTriplets(trip.begin(), trip.end());
    return c;
}

LoadQuadrature build_load_quadrature(const Mesh& mesh, int k, const std::vector<LocalOperatorSet>& ops) {
    LoadQuadrature lq;
    lq.k = k;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const int r = ops.empty() ? k + 1 : ops[static_cast<std::size_t>(t)].r;
        auto rule = polygon_rule(mesh, t, 2 * r + 2);
        const ElementBasis basis(mesh, t, k);
        Eigen::MatrixXd values(basis.dim(), static_cast<Eigen::Index>(rule.size()));
        for (std::size_t q = 0; q < rule.size(); ++q) values.col(static_cast<Eigen::Index>(q)) = basis.eval(rule.points[q]);
        lq.cells.push_back(std::move(rule));
        lq.cell_basis.push_back(std::move(values));
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
        auto rule = edge_rule(mesh, e, 2 * k + 8);
        const EdgeBasis basis(mesh, e, k);
        Eigen::MatrixXd values(basis.dim(), static_cast<Eigen::Index>(rule.size()));
        for (std::size_t q = 0; q < rule.size(); ++q) values.col(static_cast<Eigen::Index>(q)) = basis.eval(rule.points[q]);
        lq.edges.push_back(std::move(rule));
        lq.edge_basis.push_back(std::move(values));
    }
    return lq;
}

LoadVectors assemble_loads(const Mesh& mesh, const GlobalDofMap& map, const LoadQuadrature& quad,
                           const SpaceTimeVector& f, const SpaceTimeScalar& g, const SpaceTimeVector* beta, double t) {
    if (quad.k != map.k) throw InternalError("load quadrature built for a different k");
    LoadVectors loads{Eigen::VectorXd::Zero(map.n_u), Eigen::VectorXd::Zero(map.n_p)};
    const int nk = map.dim_interior();
    for (int el = 0; el < mesh.num_elements(); ++el) {
        const auto& rule = quad.cells[static_cast<std::size_t>(el)];
        const auto& phi = quad.cell_basis[static_cast<std::size_t>(el)];
        Eigen::VectorXd fx = Eigen::VectorXd::Zero(nk);
        Eigen::VectorXd fy = Eigen::VectorXd::Zero(nk);
        Eigen::VectorXd gq = Eigen::VectorXd::Zero(nk);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::Vector2d fv = f(rule.points[q], t);
            const double gv = g(rule.points[q], t);
            if (!std::isfinite(fv.x()) || !std::isfinite(fv.y()) || !std::isfinite(gv))
                throw ScenarioError("non-finite source data in element " + std::to_string(el));
            const double w = rule.weights[q];
            const auto col = phi.col(static_cast<Eigen::Index>(q));
            fx += (w * fv.x()) * col;
            fy += (w * fv.y()) * col;
            gq += (w * gv) * col;
        }
        const int off = map.interior_offset(el);
        loads.rhs_u.segment(map.u_dof(0, off), nk) += fx;
        loads.rhs_u.segment(map.u_dof(1, off), nk) += fy;
        loads.rhs_p.segment(off, nk) += gq;
    }
    if (beta != nullptr) {
        for (int e = 0; e < mesh.num_edges(); ++e) {
            const Edge& edge = mesh.edge(e);
            if (!edge.is_boundary() || edge.u_tag != BoundaryTag::Natural) continue;
            const auto& rule = quad.edges[static_cast<std::size_t>(e)];
            const auto& psi = quad.edge_basis[static_cast<std::size_t>(e)];
            const int off = map.edge_offset(e);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const Eigen::Vector2d bv = (*beta)(rule.points[q], t);
                if (!std::isfinite(bv.x()) || !std::isfinite(bv.y()))
                    throw ScenarioError("non-finite traction data on edge " + std::to_string(e));
                const auto col = psi.col(static_cast<Eigen::Index>(q));
                loads.rhs_u.segment(map.u_dof(0, off), map.edge_dim()) += (rule.weights[q] * bv.x()) * col;
                loads.rhs_u.segment(map.u_dof(1, off), map.edge_dim()) += (rule.weights[q] * bv.y()) * col;
            }
        }
    }
    return loads;
}

void write_triplets(std::ostream& out, const SparseMatrix& m) {
    const auto old = out.precision(17);
    for (int i = 0; i < m.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(m, i); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    out.precision(old);
}

}  // namespace wgbiot
