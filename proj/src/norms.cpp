#include "wgbiot/norms.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "wgbiot/error.hpp"
#include "wgbiot/quadrature.hpp"

namespace wgbiot {

namespace {

Eigen::VectorXd local_values(const Eigen::VectorXd& global, const std::vector<int>& dofs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dofs.size()));
    for (std::size_t i = 0; i < dofs.size(); ++i) v[static_cast<Eigen::Index>(i)] = global[dofs[i]];
    return v;
}

double gram_norm2(const Eigen::MatrixXd& gram, const Eigen::VectorXd& c) { return c.dot(gram * c); }

void check_size(const Eigen::VectorXd& v, int expected, const char* what) {
    if (v.size() != expected) throw InternalError(std::string(what) + ": coefficient vector has the wrong length");
}

}  // namespace

double energy_norm_u(const Eigen::VectorXd& u, const Mesh& mesh, const GlobalDofMap& map,
                     const std::vector<LocalOperatorSet>& ops, const MaterialParams& params) {
    check_size(u, map.n_u, "energy_norm_u");
    double s = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto& o = ops[static_cast<std::size_t>(t)];
        const int nr = o.dim_r();
        const Eigen::VectorXd v = local_values(u, map.vector_dofs(mesh, t));
        const Eigen::VectorXd eps = o.strain_u * v;
        const double eps2 = gram_norm2(o.gram_r, eps.segment(0, nr)) + gram_norm2(o.gram_r, eps.segment(nr, nr)) +
                            2.0 * gram_norm2(o.gram_r, eps.segment(2 * nr, nr));
        s += 2.0 * params.mu * eps2 + params.lambda * gram_norm2(o.gram_r, o.div_u * v);
    }
    return std::sqrt(std::max(s, 0.0));
}

double energy_norm_p(const Eigen::VectorXd& p, const Mesh& mesh, const GlobalDofMap& map,
                     const std::vector<LocalOperatorSet>& ops, const MaterialParams& params) {
    check_size(p, map.n_p, "energy_norm_p");
    double s = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto& o = ops[static_cast<std::size_t>(t)];
        const int nr = o.dim_r();
        const Eigen::VectorXd g = o.grad_p * local_values(p, map.scalar_dofs(mesh, t));
        const Eigen::Matrix2d& k = params.conductivity[static_cast<std::size_t>(t)];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s += k(i, j) * g.segment(i * nr, nr).dot(o.gram_r * g.segment(j * nr, nr));
    }
    return std::sqrt(std::max(s, 0.0));
}

double weak_gradient_norm_u(const Eigen::VectorXd& u, const Mesh& mesh, const GlobalDofMap& map,
                            const std::vector<LocalOperatorSet>& ops) {
    check_size(u, map.n_u, "weak_gradient_norm_u");
    double s = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto& o = ops[static_cast<std::size_t>(t)];
        const int nr = o.dim_r();
        const Eigen::VectorXd g = o.grad_u * local_values(u, map.vector_dofs(mesh, t));
        for (int b = 0; b < 4; ++b) s += gram_norm2(o.gram_r, g.segment(b * nr, nr));
    }
    return std::sqrt(std::max(s, 0.0));
}

double weak_gradient_norm_p(const Eigen::VectorXd& p, const Mesh& mesh, const GlobalDofMap& map,
                            const std::vector<LocalOperatorSet>& ops) {
    check_size(p, map.n_p, "weak_gradient_norm_p");
    double s = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto& o = ops[static_cast<std::size_t>(t)];
        const int nr = o.dim_r();
        const Eigen::VectorXd g = o.grad_p * local_values(p, map.scalar_dofs(mesh, t));
        for (int b = 0; b < 2; ++b) s += gram_norm2(o.gram_r, g.segment(b * nr, nr));
    }
    return std::sqrt(std::max(s, 0.0));
}

double l2_interior_norm(const Eigen::VectorXd& field, const Mesh& mesh, const GlobalDofMap& map) {
    int components = 0;
    if (field.size() == map.n_p) components = 1;
    else if (field.size() == map.n_u) components = 2;
    else throw InternalError("l2_interior_norm: field length matches neither n_p nor n_u");
    const int nk = map.dim_interior();
    double s = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const ElementBasis basis(mesh, t, map.k);
        const Eigen::MatrixXd gram = gram_matrix(basis, polygon_rule(mesh, t, 2 * map.k));
        for (int c = 0; c < components; ++c)
            s += gram_norm2(gram, field.segment(c * map.n_p + map.interior_offset(t), nk));
    }
    return std::sqrt(std::max(s, 0.0));
}

namespace {

/// h_T^{-1} |v_0 - v_b|^2_{dT} for the scalar component stored at offset `base`.
double boundary_jump2(const Eigen::VectorXd& field, int base, const Mesh& mesh, const GlobalDofMap& map, int t,
                      const ElementBasis& basis) {
    const auto& el = mesh.element(t);
    const Eigen::VectorXd c0 = field.segment(base + map.interior_offset(t), map.dim_interior());
    double s = 0.0;
    for (int e : el.edge_ids) {
        const EdgeBasis eb(mesh, e, map.k);
        const auto rule = edge_rule(mesh, e, 2 * map.k);
        const Eigen::VectorXd cb = field.segment(base + map.edge_offset(e), map.edge_dim());
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double d = basis.eval(rule.points[q]).dot(c0) - eb.eval(rule.points[q]).dot(cb);
            s += rule.weights[q] * d * d;
        }
    }
    return s / el.diameter;
}

}  // namespace

double discrete_h1_norm_u(const Eigen::VectorXd& u, const Mesh& mesh, const GlobalDofMap& map,
                          const MaterialParams& params) {
    check_size(u, map.n_u, "discrete_h1_norm_u");
    double s = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const ElementBasis basis(mesh, t, map.k);
        const auto rule = polygon_rule(mesh, t, 2 * map.k);
        const Eigen::VectorXd cx = u.segment(map.interior_offset(t), map.dim_interior());
        const Eigen::VectorXd cy = u.segment(map.n_p + map.interior_offset(t), map.dim_interior());
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::MatrixXd g = basis.eval_grad(rule.points[q]);
            const Eigen::Vector2d gx = g.transpose() * cx;
            const Eigen::Vector2d gy = g.transpose() * cy;
            const double exy = 0.5 * (gx.y() + gy.x());
            const double eps2 = gx.x() * gx.x() + gy.y() * gy.y() + 2.0 * exy * exy;
            const double div = gx.x() + gy.y();
            s += rule.weights[q] * (2.0 * params.mu * eps2 + params.lambda * div * div);
        }
        s += boundary_jump2(u, 0, mesh, map, t, basis) + boundary_jump2(u, map.n_p, mesh, map, t, basis);
    }
    return std::sqrt(std::max(s, 0.0));
}

double discrete_h1_norm_p(const Eigen::VectorXd& p, const Mesh& mesh, const GlobalDofMap& map,
                          const MaterialParams& params) {
    check_size(p, map.n_p, "discrete_h1_norm_p");
    double s = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const ElementBasis basis(mesh, t, map.k);
        const auto rule = polygon_rule(mesh, t, 2 * map.k);
        const Eigen::VectorXd c = p.segment(map.interior_offset(t), map.dim_interior());
        const Eigen::Matrix2d& k = params.conductivity[static_cast<std::size_t>(t)];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::Vector2d g = basis.eval_grad(rule.points[q]).transpose() * c;
            s += rule.weights[q] * g.dot(k * g);
        }
        s += boundary_jump2(p, 0, mesh, map, t, basis);
    }
    return std::sqrt(std::max(s, 0.0));
}

double weighted_step_norm(const Eigen::VectorXd& u, const Eigen::VectorXd& p, double dt, const Mesh& mesh,
                          const GlobalDofMap& map, const std::vector<LocalOperatorSet>& ops,
                          const MaterialParams& params) {
    const double eu = energy_norm_u(u, mesh, map, ops, params);
    const double ep = energy_norm_p(p, mesh, map, ops, params);
    const double l2 = l2_interior_norm(p, mesh, map);
    return std::sqrt(eu * eu + dt * ep * ep + l2 * l2);
}

ConvergenceRecord errors_vs_exact(const TransientState& state, const Discretization& disc) {
    const auto& sc = disc.scenario();
    if (!sc.exact_u || !sc.exact_p)
        throw UnsupportedError("scenario '" + sc.name + "' has no exact solution to measure errors against");
    const double t = state.t;
    const auto& exact_u = *sc.exact_u;
    const auto& exact_p = *sc.exact_p;
    const Eigen::VectorXd qu =
        project_vector_field(disc.mesh(), disc.map(), [&](const Point2& x) { return exact_u(x, t); });
    const Eigen::VectorXd qp = project_scalar_field(disc.mesh(), disc.map(), [&](const Point2& x) { return exact_p(x, t); });
    const Eigen::VectorXd eu = qu - state.u;
    const Eigen::VectorXd ep = qp - state.p;
    ConvergenceRecord rec;
    rec.level = disc.mesh().level();
    rec.h = disc.mesh().mesh_size();
    rec.err_l2_u = l2_interior_norm(eu, disc.mesh(), disc.map());
    rec.err_hw_u = weak_gradient_norm_u(eu, disc.mesh(), disc.map(), disc.ops());
    rec.err_hw_p = weak_gradient_norm_p(ep, disc.mesh(), disc.map(), disc.ops());
    rec.err_energy_u = energy_norm_u(eu, disc.mesh(), disc.map(), disc.ops(), disc.params());
    return rec;
}

double true_l2_error_u(const TransientState& state, const Discretization& disc) {
    const auto& sc = disc.scenario();
    if (!sc.exact_u) throw UnsupportedError("scenario '" + sc.name + "' has no exact displacement");
    const auto& mesh = disc.mesh();
    const auto& map = disc.map();
    double s = 0.0;
    for (int t = 0; t < mesh.num_elements(); ++t) {
        const ElementBasis basis(mesh, t, map.k);
        const auto rule = polygon_rule(mesh, t, 2 * map.k + 8);
        const Eigen::VectorXd cx = state.u.segment(map.interior_offset(t), map.dim_interior());
        const Eigen::VectorXd cy = state.u.segment(map.n_p + map.interior_offset(t), map.dim_interior());
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Eigen::VectorXd phi = basis.eval(rule.points[q]);
            const Eigen::Vector2d d = (*sc.exact_u)(rule.points[q], state.t) - Eigen::Vector2d(phi.dot(cx), phi.dot(cy));
            s += rule.weights[q] * d.squaredNorm();
        }
    }
    return std::sqrt(s);
}

void compute_orders(std::vector<ConvergenceRecord>& records) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].orders = {};
        if (i == 0) continue;
        const auto& prev = records[i - 1];
        auto& cur = records[i];
        const double hr = std::log(prev.h / cur.h);
        if (!(hr > 0.0)) continue;
        const std::array<std::pair<double, double>, 3> pairs{{{prev.err_l2_u, cur.err_l2_u},
                                                              {prev.err_hw_u, cur.err_hw_u},
                                                              {prev.err_hw_p, cur.err_hw_p}}};
        for (std::size_t c = 0; c < 3; ++c) {
            const auto [coarse, fine] = pairs[c];
            if (coarse > 0.0 && fine > 0.0) cur.orders[c] = std::log(coarse / fine) / hr;
        }
    }
}

double round_order(double order) { return std::round(order * 10.0) / 10.0; }

namespace {

std::string format_order(const std::optional<double>& o) {
    if (!o) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", round_order(*o) + 0.0);
    return buf;
}

}  // namespace

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
    out << "level,h,err_l2_u,order_l2_u,err_hw_u,order_hw_u,err_hw_p,order_hw_p\n";
    char buf[64];
    auto full = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.10e", v);
        return std::string(buf);
    };
    auto order = [&](const std::optional<double>& o) { return o ? full(*o) : std::string(); };
    for (const auto& r : records)
        out << r.level << ',' << full(r.h) << ',' << full(r.err_l2_u) << ',' << order(r.orders[0]) << ','
            << full(r.err_hw_u) << ',' << order(r.orders[1]) << ',' << full(r.err_hw_p) << ',' << order(r.orders[2])
            << '\n';
}

void write_convergence_table(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
    char line[256];
    std::snprintf(line, sizeof line, "%5s | %12s %5s | %12s %5s | %12s %5s\n", "G_i", "|Qu-u_h|", "O(h^r)",
                  "|Dw(Qu-u_h)|", "O(h^r)", "|Dw(Qp-p_h)|", "O(h^r)");
    out << line;
    auto sci = [](double v) {
        // 0.XYZE-NN layout: three significant digits with a leading zero.
        char buf[32];
        if (v == 0.0) return std::string("0.000E+00");
        const int e = static_cast<int>(std::floor(std::log10(std::abs(v)))) + 1;
        double mant = v / std::pow(10.0, e);
        int exp10 = e;
        if (std::round(std::abs(mant) * 1000.0) >= 1000.0) {
            mant /= 10.0;
            ++exp10;
        }
        std::snprintf(buf, sizeof buf, "%.3fE%+03d", mant, exp10);
        return std::string(buf);
    };
    for (const auto& r : records) {
        std::snprintf(line, sizeof line, "%5d | %12s %5s | %12s %5s | %12s %5s\n", r.level, sci(r.err_l2_u).c_str(),
                      format_order(r.orders[0]).c_str(), sci(r.err_hw_u).c_str(), format_order(r.orders[1]).c_str(),
                      sci(r.err_hw_p).c_str(), format_order(r.orders[2]).c_str());
        out << line;
    }
}

}  // namespace wgbiot
