#include "wgbiot/weakops.hpp"

#include <ostream>
#include <string>

#include "wgbiot/error.hpp"

namespace wgbiot {

RPolicy r_policy_from_string(const std::string& name) {
    if (name == "Theory" || name == "theory") return RPolicy::Theory;
    if (name == "FixedPlus1" || name == "fixed-plus-1" || name == "plus1") return RPolicy::FixedPlus1;
    if (name == "FixedPlus2" || name == "fixed-plus-2" || name == "plus2") return RPolicy::FixedPlus2;
    throw ArgumentError("unknown r policy '" + name + "'");
}

const char* to_string(RPolicy policy) {
    switch (policy) {
    case RPolicy::Theory: return "Theory";
    case RPolicy::FixedPlus1: return "FixedPlus1";
    case RPolicy::FixedPlus2: return "FixedPlus2";
    }
    return "?";
}

int choose_r(const PolygonalElement& element, int k, RPolicy policy) {
    if (k < 1) throw ArgumentError("k must be >= 1");
    switch (policy) {
    case RPolicy::Theory:
        return element.is_convex ? k - 1 + element.num_edges() : k - 1 + 2 * element.num_edges();
    case RPolicy::FixedPlus1: return k + 1;
    case RPolicy::FixedPlus2: return k + 2;
    }
    return k + 1;
}

ElementGeometry element_geometry(const Mesh& mesh, int element_id, int k, int r) {
    ElementGeometry geo;
    geo.element = element_id;
    geo.basis_k = ElementBasis(mesh, element_id, k);
    geo.basis_r = ElementBasis(mesh, element_id, r);
    geo.cell_rule = polygon_rule(mesh, element_id, 2 * r + 2);
    const auto& el = mesh.element(element_id);
    for (int e : el.edge_ids) {
        geo.edge_rules.push_back(edge_rule(mesh, e, r + k + 2));
        geo.edge_bases.emplace_back(mesh, e, k);
        geo.normals.push_back(mesh.outward_normal(e, element_id));
    }
    return geo;
}

std::array<Eigen::MatrixXd, 2> weak_gradient_rhs(const ElementGeometry& geo, const LocalDofLayout& layout) {
    const int nr = geo.basis_r.dim();
    const int nk = layout.dim_interior();
    std::array<Eigen::MatrixXd, 2> rhs{Eigen::MatrixXd::Zero(nr, layout.scalar_size()),
                                       Eigen::MatrixXd::Zero(nr, layout.scalar_size())};
    const auto& rule = geo.cell_rule;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd mk = geo.basis_k.eval(rule.points[q]);
        const Eigen::MatrixXd dm = geo.basis_r.eval_grad(rule.points[q]);
        for (int j = 0; j < 2; ++j)
            rhs[static_cast<std::size_t>(j)].leftCols(nk).noalias() -= rule.weights[q] * dm.col(j) * mk.transpose();
    }
    for (int i = 0; i < layout.num_edges; ++i) {
        const auto& er = geo.edge_rules[static_cast<std::size_t>(i)];
        const auto& eb = geo.edge_bases[static_cast<std::size_t>(i)];
        const Point2& n = geo.normals[static_cast<std::size_t>(i)];
        const int off = layout.edge_offset(i);
        for (std::size_t q = 0; q < er.size(); ++q) {
            const Eigen::VectorXd mr = geo.basis_r.eval(er.points[q]);
            const Eigen::VectorXd psi = eb.eval(er.points[q]);
            const Eigen::MatrixXd outer = er.weights[q] * mr * psi.transpose();
            for (int j = 0; j < 2; ++j)
                rhs[static_cast<std::size_t>(j)].middleCols(off, layout.edge_dim()) += n[j] * outer;
        }
    }
    return rhs;
}

Eigen::MatrixXd scalar_weak_gradient_matrix(const ElementGeometry& geo, const LocalDofLayout& layout,
                                            const GramFactor& gram) {
    const auto rhs = weak_gradient_rhs(geo, layout);
    const int nr = geo.basis_r.dim();
    Eigen::MatrixXd g(2 * nr, layout.scalar_size());
    g.topRows(nr) = gram.solve(rhs[0]);
    g.bottomRows(nr) = gram.solve(rhs[1]);
    return g;
}

Eigen::MatrixXd weak_gradient_matrix(const ElementGeometry& geo, const LocalDofLayout& layout, const GramFactor& gram) {
    // Component i of v only enters row block (i, j) through its own scalar
    // layout, so each block is the scalar weak gradient of that component.
    const Eigen::MatrixXd gp = scalar_weak_gradient_matrix(geo, layout, gram);
    const int nr = geo.basis_r.dim();
    const int ns = layout.scalar_size();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4 * nr, 2 * ns);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) g.block((2 * i + j) * nr, i * ns, nr, ns) = gp.middleRows(j * nr, nr);
    return g;
}

Eigen::MatrixXd weak_divergence_matrix(const ElementGeometry& geo, const LocalDofLayout& layout,
                                       const GramFactor& gram) {
    const int nr = geo.basis_r.dim();
    const int nk = layout.dim_interior();
    const int ns = layout.scalar_size();
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nr, 2 * ns);
    const auto& rule = geo.cell_rule;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Eigen::VectorXd mk = geo.basis_k.eval(rule.points[q]);
        const Eigen::MatrixXd dw = geo.basis_r.eval_grad(rule.points[q]);
        // -(v_0, grad w): component i of v_0 pairs with d_i w.
        for (int i = 0; i < 2; ++i) rhs.middleCols(i * ns, nk).noalias() -= rule.weights[q] * dw.col(i) * mk.transpose();
    }
    for (int e = 0; e < layout.num_edges; ++e) {
        const auto& er = geo.edge_rules[static_cast<std::size_t>(e)];
        const auto& eb = geo.edge_bases[static_cast<std::size_t>(e)];
        const Point2& n = geo.normals[static_cast<std::size_t>(e)];
        for (std::size_t q = 0; q < er.size(); ++q) {
            const Eigen::VectorXd w = geo.basis_r.eval(er.points[q]);
            const Eigen::VectorXd psi = eb.eval(er.points[q]);
            for (int i = 0; i < 2; ++i)
                rhs.middleCols(i * ns + layout.edge_offset(e), layout.edge_dim()).noalias() +=
                    (er.weights[q] * n[i]) * w * psi.transpose();
        }
    }
    return gram.solve(rhs);
}

Eigen::MatrixXd weak_strain_matrix(const Eigen::MatrixXd& grad_u, int dim_r) {
    Eigen::MatrixXd s(3 * dim_r, grad_u.cols());
    s.topRows(dim_r) = grad_u.topRows(dim_r);
    s.middleRows(dim_r, dim_r) = grad_u.bottomRows(dim_r);
    s.bottomRows(dim_r) = 0.5 * (grad_u.middleRows(dim_r, dim_r) + grad_u.middleRows(2 * dim_r, dim_r));
    return s;
}

LocalOperatorSet compute_local_operators(const Mesh& mesh, int element_id, int k, int r) {
    if (r < k) throw ArgumentError("weak-operator degree r must be >= k");
    const auto geo = element_geometry(mesh, element_id, k, r);
    LocalOperatorSet ops;
    ops.element = element_id;
    ops.r = r;
    ops.layout = LocalDofLayout(k, mesh.element(element_id).num_edges());
    ops.basis_r = geo.basis_r;
    ops.gram_r = gram_matrix(geo.basis_r, geo.cell_rule);
    const GramFactor gram(ops.gram_r, "element " + std::to_string(element_id) + ", degree " + std::to_string(r));
    ops.grad_p = scalar_weak_gradient_matrix(geo, ops.layout, gram);
    ops.grad_u = weak_gradient_matrix(geo, ops.layout, gram);
    ops.div_u = weak_divergence_matrix(geo, ops.layout, gram);
    ops.strain_u = weak_strain_matrix(ops.grad_u, ops.dim_r());
    return ops;
}

std::vector<LocalOperatorSet> build_local_operators(const Mesh& mesh, int k, RPolicy policy) {
    const int n = mesh.num_elements();
    std::vector<LocalOperatorSet> ops(static_cast<std::size_t>(n));
    std::vector<std::string> failures(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 16)
    for (int t = 0; t < n; ++t) {
        try {
            ops[static_cast<std::size_t>(t)] = compute_local_operators(mesh, t, k, choose_r(mesh.element(t), k, policy));
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(t)] = e.what();
        }
    }
    for (const auto& f : failures)
        if (!f.empty()) throw ConditioningError(f);
    return ops;
}

Eigen::VectorXd project_element(const ElementBasis& basis, const QuadratureRule& rule, const ScalarFunction& f) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
    for (std::size_t q = 0; q < rule.size(); ++q) rhs += rule.weights[q] * f(rule.points[q]) * basis.eval(rule.points[q]);
    const GramFactor gram(gram_matrix(basis, rule), "projection");
    return gram.solve(rhs);
}

Eigen::VectorXd project_interior(const Mesh& mesh, int element_id, int k, const ScalarFunction& f, int quad_degree) {
    const ElementBasis basis(mesh, element_id, k);
    return project_element(basis, polygon_rule(mesh, element_id, quad_degree < 0 ? 2 * k + 12 : quad_degree), f);
}

Eigen::VectorXd project_highorder(const Mesh& mesh, int element_id, int r, const ScalarFunction& f, int quad_degree) {
    return project_interior(mesh, element_id, r, f, quad_degree);
}

Eigen::VectorXd project_edge(const Mesh& mesh, int edge_id, int k, const ScalarFunction& f, int quad_degree) {
    const EdgeBasis basis(mesh, edge_id, k);
    const auto rule = edge_rule(mesh, edge_id, quad_degree < 0 ? 2 * k + 12 : quad_degree);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
    for (std::size_t q = 0; q < rule.size(); ++q) rhs += rule.weights[q] * f(rule.points[q]) * basis.eval(rule.points[q]);
    return gram_matrix(basis, rule).llt().solve(rhs);
}

void write_local_operators(std::ostream& out, const LocalOperatorSet& ops) {
    const Eigen::IOFormat fmt(Eigen::FullPrecision, Eigen::DontAlignCols, " ", "\n");
    out << "element " << ops.element << " k " << ops.layout.k << " r " << ops.r << "\n";
    out << "grad_u " << ops.grad_u.rows() << ' ' << ops.grad_u.cols() << "\n" << ops.grad_u.format(fmt) << "\n";
    out << "div_u " << ops.div_u.rows() << ' ' << ops.div_u.cols() << "\n" << ops.div_u.format(fmt) << "\n";
    out << "strain_u " << ops.strain_u.rows() << ' ' << ops.strain_u.cols() << "\n" << ops.strain_u.format(fmt) << "\n";
    out << "grad_p " << ops.grad_p.rows() << ' ' << ops.grad_p.cols() << "\n" << ops.grad_p.format(fmt) << "\n";
}

}  // namespace wgbiot
