#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "wgbiot/assembly.hpp"
#include "wgbiot/dofspace.hpp"
#include "wgbiot/mesh.hpp"

namespace wgbiot {

/// Closed-form data for one Biot problem on the unit square.
struct Scenario {
    std::string name;
    double young = 1.0;
    double poisson = 0.25;
    /// Conductivity as a function of position; sampled at element centroids.
    std::function<Eigen::Matrix2d(const Point2&)> conductivity;

    SpaceTimeVector f;
    SpaceTimeScalar g;
    std::optional<SpaceTimeVector> beta;

    std::optional<SpaceTimeVector> exact_u;
    std::optional<SpaceTimeScalar> exact_p;

    /// Data on Dirichlet-tagged edges (evaluated only there).
    SpaceTimeVector u_dirichlet;
    SpaceTimeScalar p_dirichlet;
    Mesh::TagClassifier boundary_tags;

    VectorFunction initial_u;
    ScalarFunction initial_p;

    double mu() const;
    double lambda() const;

    /// Copy of `mesh` carrying this scenario's boundary tags. Throws
    /// ArgumentError if an element straddles a conductivity discontinuity.
    Mesh bind(const Mesh& mesh) const;
    MaterialParams material(const Mesh& mesh) const;
};

/// u = e^{-t} sin(pi x) sin(pi y) (1, 1), p = e^{-t} (cos(pi y) + 1) with
/// E = 1, nu = nu0, K = 1; u = 0 on the whole boundary, p = 0 on y = 1 and
/// no flux elsewhere. Checks its own sources against the PDE on construction.
Scenario manufactured_biot(double nu0);

/// K = 1 outside [1/4, 3/4] x (0, 1) and K0 inside; f = 0, g = 0;
/// u = (-sin(pi y), 0) and p = 0 on x = 1, u = 0 on y = 0 and y = 1,
/// traction-free and no-flux on x = 0; initial u = (-sin(pi y), 0), p = 0.
Scenario heterogeneous_steady(double k0, double nu = 0.25);

/// Residuals (momentum x, momentum y, mass) of the manufactured solution,
/// with derivatives computed by forward-mode differentiation of u and p.
std::array<double, 3> manufactured_residual(const Scenario& scenario, const Point2& x, double t);

/// Builds a scenario by name: "manufactured" (param = nu0) or
/// "heterogeneous" (param = K0).
Scenario make_scenario(const std::string& name, double param, double nu = 0.25);

}  // namespace wgbiot
