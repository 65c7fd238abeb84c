#include "wgbiot/dofspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wgbiot/error.hpp"

namespace wgbiot {

std::vector<int> GlobalDofMap::scalar_dofs(const Mesh& mesh, int element) const {
    const auto& el = mesh.element(element);
    std::vector<int> dofs;
    dofs.reserve(static_cast<std::size_t>(dim_interior() + el.num_edges() * edge_dim()));
    for (int i = 0; i < dim_interior(); ++i) dofs.push_back(interior_offset(element) + i);
    for (int e : el.edge_ids)
        for (int j = 0; j < edge_dim(); ++j) dofs.push_back(edge_offset(e) + j);
    return dofs;
}

std::vector<int> GlobalDofMap::vector_dofs(const Mesh& mesh, int element) const {
    const auto s = scalar_dofs(mesh, element);
    std::vector<int> dofs;
    dofs.reserve(2 * s.size());
    for (int c = 0; c < 2; ++c)
        for (int d : s) dofs.push_back(u_dof(c, d));
    return dofs;
}

int GlobalDofMap::num_u_constrained() const {
    return static_cast<int>(std::count(u_constrained.begin(), u_constrained.end(), 1));
}

int GlobalDofMap::num_p_constrained() const {
    return static_cast<int>(std::count(p_constrained.begin(), p_constrained.end(), 1));
}

GlobalDofMap build_dof_map(const Mesh& mesh, int k) {
    if (k < 1) throw ArgumentError("k must be >= 1");
    GlobalDofMap map;
    map.k = k;
    map.num_elements = mesh.num_elements();
    map.num_edges = mesh.num_edges();
    map.n_p = map.num_elements * map.dim_interior() + map.num_edges * map.edge_dim();
    map.n_u = 2 * map.n_p;
    map.u_constrained.assign(static_cast<std::size_t>(map.n_u), 0);
    map.p_constrained.assign(static_cast<std::size_t>(map.n_p), 0);
    map.u_prescribed = Eigen::VectorXd::Zero(map.n_u);
    map.p_prescribed = Eigen::VectorXd::Zero(map.n_p);
    return map;
}

GlobalDofMap constrain_dirichlet(const GlobalDofMap& map, const Mesh& mesh, const SpaceTimeVector* u_data,
                                 const SpaceTimeScalar* p_data, double t) {
    GlobalDofMap out = map;
    std::fill(out.u_constrained.begin(), out.u_constrained.end(), 0);
    std::fill(out.p_constrained.begin(), out.p_constrained.end(), 0);
    out.u_prescribed.setZero();
    out.p_prescribed.setZero();
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Edge& edge = mesh.edge(e);
        if (!edge.is_boundary()) continue;
        const int off = map.edge_offset(e);
        if (edge.u_tag == BoundaryTag::Dirichlet) {
            for (int c = 0; c < 2; ++c) {
                Eigen::VectorXd coef = Eigen::VectorXd::Zero(map.edge_dim());
                if (u_data != nullptr) {
                    coef = project_edge(mesh, e, map.k, [&](const Point2& x) {
                        const double v = (*u_data)(x, t)[c];
                        if (!std::isfinite(v)) throw ScenarioError("non-finite displacement boundary data on edge " + std::to_string(e));
                        return v;
                    });
                }
                for (int j = 0; j < map.edge_dim(); ++j) {
                    const int dof = map.u_dof(c, off + j);
                    out.u_constrained[static_cast<std::size_t>(dof)] = 1;
                    out.u_prescribed[dof] = coef[j];
                }
            }
        }
        if (edge.p_tag == BoundaryTag::Dirichlet) {
            Eigen::VectorXd coef = Eigen::VectorXd::Zero(map.edge_dim());
            if (p_data != nullptr) {
                coef = project_edge(mesh, e, map.k, [&](const Point2& x) {
                    const double v = (*p_data)(x, t);
                    if (!std::isfinite(v)) throw ScenarioError("non-finite pressure boundary data on edge " + std::to_string(e));
                    return v;
                });
            }
            for (int j = 0; j < map.edge_dim(); ++j) {
                out.p_constrained[static_cast<std::size_t>(off + j)] = 1;
                out.p_prescribed[off + j] = coef[j];
            }
        }
    }
    return out;
}

Eigen::VectorXd project_scalar_field(const Mesh& mesh, const GlobalDofMap& map, const ScalarFunction& f) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(map.n_p);
    for (int t = 0; t < mesh.num_elements(); ++t)
        out.segment(map.interior_offset(t), map.dim_interior()) = project_interior(mesh, t, map.k, f);
    for (int e = 0; e < mesh.num_edges(); ++e) out.segment(map.edge_offset(e), map.edge_dim()) = project_edge(mesh, e, map.k, f);
    return out;
}

Eigen::VectorXd project_vector_field(const Mesh& mesh, const GlobalDofMap& map, const VectorFunction& f) {
    Eigen::VectorXd out(map.n_u);
    for (int c = 0; c < 2; ++c)
        out.segment(c * map.n_p, map.n_p) = project_scalar_field(mesh, map, [&](const Point2& x) { return f(x)[c]; });
    return out;
}

}  // namespace wgbiot
