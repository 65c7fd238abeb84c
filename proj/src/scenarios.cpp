#include "wgbiot/scenarios.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "wgbiot/error.hpp"

namespace wgbiot {

namespace {

constexpr double kPi = std::numbers::pi;

/// Value, gradient and Hessian in (x, y, t).
struct Jet {
    double v = 0.0;
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();

    static Jet constant(double c) { return Jet{c}; }
    static Jet variable(double value, int index) {
        Jet j{value};
        j.g[index] = 1.0;
        return j;
    }
};

Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.g + b.g, a.h + b.h}; }
Jet operator*(double s, const Jet& a) { return {s * a.v, s * a.g, s * a.h}; }
Jet operator*(const Jet& a, const Jet& b) {
    return {a.v * b.v, a.v * b.g + b.v * a.g, a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose()};
}
Jet apply(const Jet& a, double f0, double f1, double f2) {
    return {f0, f1 * a.g, f1 * a.h + f2 * a.g * a.g.transpose()};
}
Jet sin(const Jet& a) { return apply(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
Jet cos(const Jet& a) { return apply(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
Jet exp(const Jet& a) { return apply(a, std::exp(a.v), std::exp(a.v), std::exp(a.v)); }

// Exact fields of the manufactured problem, differentiated independently of f and g.
std::array<Jet, 2> manufactured_u(const Jet& x, const Jet& y, const Jet& t) {
    const Jet u = exp(-1.0 * t) * sin(kPi * x) * sin(kPi * y);
    return {u, u};
}

Jet manufactured_p(const Jet& y, const Jet& t) { return exp(-1.0 * t) * (cos(kPi * y) + Jet::constant(1.0)); }

bool on_line(double a, double b) { return std::abs(a - b) < 1e-12; }

}  // namespace

double Scenario::mu() const { return young / (2.0 * (1.0 + poisson)); }
double Scenario::lambda() const { return poisson * young / ((1.0 + poisson) * (1.0 - 2.0 * poisson)); }

Mesh Scenario::bind(const Mesh& mesh) const {
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto& el = mesh.element(t);
        const Eigen::Matrix2d kc = conductivity(el.centroid);
        for (const auto& p : mesh.polygon(t)) {
            const Point2 inside = p + 1e-9 * (el.centroid - p);
            if ((conductivity(inside) - kc).norm() > 1e-14 * kc.norm()) {
                std::ostringstream os;
                os << "element " << t << " straddles a conductivity discontinuity (scenario " << name
                   << "); refine the mesh";
                throw ArgumentError(os.str());
            }
        }
    }
    return mesh.with_boundary_tags(boundary_tags);
}

MaterialParams Scenario::material(const Mesh& mesh) const {
    MaterialParams p = MaterialParams::from_young_poisson(young, poisson, mesh.num_elements());
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const Eigen::Matrix2d k = conductivity(mesh.element(t).centroid);
        if ((k - k.transpose()).norm() > 1e-14 * k.norm() || k.determinant() <= 0.0 || k(0, 0) <= 0.0)
            throw ScenarioError("conductivity is not SPD in element " + std::to_string(t));
        p.conductivity[static_cast<std::size_t>(t)] = k;
    }
    return p;
}

std::array<double, 3> manufactured_residual(const Scenario& s, const Point2& x, double t) {
    const Jet jx = Jet::variable(x.x(), 0);
    const Jet jy = Jet::variable(x.y(), 1);
    const Jet jt = Jet::variable(t, 2);
    const auto u = manufactured_u(jx, jy, jt);
    const Jet p = manufactured_p(jy, jt);
    const double mu = s.mu();
    const double lambda = s.lambda();
    const double kappa = s.conductivity(x)(0, 0);
    // div u and its gradient from the Hessians of the components.
    const Eigen::Vector2d grad_div(u[0].h(0, 0) + u[1].h(1, 0), u[0].h(0, 1) + u[1].h(1, 1));
    const Eigen::Vector2d lap(u[0].h(0, 0) + u[0].h(1, 1), u[1].h(0, 0) + u[1].h(1, 1));
    // -div sigma = -mu lap u - (mu + lambda) grad div u
    const Eigen::Vector2d momentum =
        -mu * lap - (mu + lambda) * grad_div + Eigen::Vector2d(p.g[0], p.g[1]) - s.f(x, t);
    const double dt_div = u[0].h(0, 2) + u[1].h(1, 2);
    const double mass = -dt_div + kappa * (p.h(0, 0) + p.h(1, 1)) - s.g(x, t);
    return {momentum.x(), momentum.y(), mass};
}

Scenario manufactured_biot(double nu0) {
    if (!(nu0 > 0.0 && nu0 < 0.5)) throw ArgumentError("manufactured scenario needs 0 < nu0 < 1/2");
    Scenario s;
    s.name = "manufactured";
    s.young = 1.0;
    s.poisson = nu0;
    const double mu = s.mu();
    const double lambda = s.lambda();
    const double kappa = 1.0;
    s.conductivity = [kappa](const Point2&) -> Eigen::Matrix2d { return kappa * Eigen::Matrix2d::Identity(); };
    s.f = [mu, lambda](const Point2& x, double t) -> Eigen::Vector2d {
        const double sx = std::sin(kPi * x.x()), sy = std::sin(kPi * x.y());
        const double cx = std::cos(kPi * x.x()), cy = std::cos(kPi * x.y());
        const double f1 = kPi * kPi * ((3.0 * mu + lambda) * sx * sy - (lambda + mu) * cx * cy);
        const double e = std::exp(-t);
        return {e * f1, e * f1 - e * kPi * sy};
    };
    s.g = [kappa](const Point2& x, double t) {
        const double sx = std::sin(kPi * x.x()), sy = std::sin(kPi * x.y());
        const double cx = std::cos(kPi * x.x()), cy = std::cos(kPi * x.y());
        return std::exp(-t) * kPi * (cx * sy + sx * cy - kPi * kappa * cy);
    };
    s.exact_u = [](const Point2& x, double t) -> Eigen::Vector2d {
        const double u = std::exp(-t) * std::sin(kPi * x.x()) * std::sin(kPi * x.y());
        return {u, u};
    };
    s.exact_p = [](const Point2& x, double t) { return std::exp(-t) * (std::cos(kPi * x.y()) + 1.0); };
    s.u_dirichlet = *s.exact_u;
    s.p_dirichlet = *s.exact_p;
    s.boundary_tags = [](const Point2& m) {
        const BoundaryTag p = on_line(m.y(), 1.0) ? BoundaryTag::Dirichlet : BoundaryTag::Natural;
        return std::pair{BoundaryTag::Dirichlet, p};
    };
    s.initial_u = [u = *s.exact_u](const Point2& x) { return u(x, 0.0); };
    s.initial_p = [p = *s.exact_p](const Point2& x) { return p(x, 0.0); };

    // Guard the transcription of f and g against the exact solution.
    std::mt19937 rng(20240611u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        const Point2 x(unit(rng), unit(rng));
        const double t = unit(rng);
        const auto res = manufactured_residual(s, x, t);
        const double scale = 1.0 + s.f(x, t).norm() + std::abs(s.g(x, t));
        for (double r : res)
            if (!(std::abs(r) <= 1e-8 * scale))
                throw ScenarioError("manufactured sources do not satisfy the Biot equations");
    }
    return s;
}

Scenario heterogeneous_steady(double k0, double nu) {
    if (!(k0 > 0.0)) throw ArgumentError("K0 must be positive");
    if (!(nu > 0.0 && nu < 0.5)) throw ArgumentError("Poisson ratio must lie in (0, 1/2)");
    Scenario s;
    s.name = "heterogeneous";
    s.young = 1.0;
    s.poisson = nu;
    s.conductivity = [k0](const Point2& x) -> Eigen::Matrix2d {
        const bool band = x.x() >= 0.25 && x.x() <= 0.75;
        return (band ? k0 : 1.0) * Eigen::Matrix2d::Identity();
    };
    s.f = [](const Point2&, double) -> Eigen::Vector2d { return Eigen::Vector2d::Zero(); };
    s.g = [](const Point2&, double) { return 0.0; };
    s.beta = [](const Point2&, double) -> Eigen::Vector2d { return Eigen::Vector2d::Zero(); };
    s.u_dirichlet = [](const Point2& x, double) -> Eigen::Vector2d {
        if (on_line(x.x(), 1.0)) return {-std::sin(kPi * x.y()), 0.0};
        return Eigen::Vector2d::Zero();
    };
    s.p_dirichlet = [](const Point2&, double) { return 0.0; };
    s.boundary_tags = [](const Point2& m) {
        if (on_line(m.x(), 1.0)) return std::pair{BoundaryTag::Dirichlet, BoundaryTag::Dirichlet};
        if (on_line(m.x(), 0.0)) return std::pair{BoundaryTag::Natural, BoundaryTag::Natural};
        return std::pair{BoundaryTag::Dirichlet, BoundaryTag::Natural};
    };
    s.initial_u = [](const Point2& x) -> Eigen::Vector2d { return {-std::sin(kPi * x.y()), 0.0}; };
    s.initial_p = [](const Point2&) { return 0.0; };
    return s;
}

Scenario make_scenario(const std::string& name, double param, double nu) {
    if (name == "manufactured") return manufactured_biot(param);
    if (name == "heterogeneous") return heterogeneous_steady(param, nu);
    throw ConfigError("unknown scenario '" + name + "' (expected manufactured or heterogeneous)");
}

}  // namespace wgbiot
