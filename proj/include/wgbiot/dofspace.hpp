#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wgbiot/mesh.hpp"
#include "wgbiot/weakops.hpp"

namespace wgbiot {

/// Global numbering of the weak spaces.
///
/// A scalar (pressure) function has n_p coefficients: the dim P_k interior
/// modes of every element in element-id order, followed by the k + 1 modes
/// of every edge in edge-id order. Edge modes use the edge's own orientation
/// and are shared by both neighbours. A displacement has n_u = 2 n_p
/// coefficients, the x component's scalar numbering followed by the y
/// component's.
struct GlobalDofMap {
    int k = 1;
    int num_elements = 0;
    int num_edges = 0;
    int n_p = 0;
    int n_u = 0;

    /// Dirichlet flags and prescribed coefficients, one entry per DOF.
    std::vector<char> u_constrained;
    std::vector<char> p_constrained;
    Eigen::VectorXd u_prescribed;
    Eigen::VectorXd p_prescribed;

    int dim_interior() const { return poly_dim(k); }
    int edge_dim() const { return k + 1; }
    int interior_offset(int element) const { return element * dim_interior(); }
    int edge_offset(int edge) const { return num_elements * dim_interior() + edge * edge_dim(); }
    int u_dof(int component, int scalar_dof) const { return component * n_p + scalar_dof; }

    /// Global scalar DOF for each entry of the element's LocalDofLayout.
    std::vector<int> scalar_dofs(const Mesh& mesh, int element) const;
    /// Global displacement DOF for each entry of the element's vector layout.
    std::vector<int> vector_dofs(const Mesh& mesh, int element) const;

    int num_u_constrained() const;
    int num_p_constrained() const;
};

GlobalDofMap build_dof_map(const Mesh& mesh, int k);

/// Marks displacement DOFs of Dirichlet-u edges and pressure DOFs of
/// Dirichlet-p edges as constrained, with coefficients equal to the edge L2
/// projection of the data at time t. Absent data means homogeneous data.
using SpaceTimeScalar = std::function<double(const Point2&, double)>;
using SpaceTimeVector = std::function<Eigen::Vector2d(const Point2&, double)>;

GlobalDofMap constrain_dirichlet(const GlobalDofMap& map, const Mesh& mesh, const SpaceTimeVector* u_data,
                                 const SpaceTimeScalar* p_data, double t);

/// Q_h projection of a scalar field (interior Q_0 and edge Q_b).
Eigen::VectorXd project_scalar_field(const Mesh& mesh, const GlobalDofMap& map, const ScalarFunction& f);
/// Q_h projection of a vector field.
Eigen::VectorXd project_vector_field(const Mesh& mesh, const GlobalDofMap& map, const VectorFunction& f);

}  // namespace wgbiot
