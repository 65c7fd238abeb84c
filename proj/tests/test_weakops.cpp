#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wgbiot/weakops.hpp"

using namespace wgbiot;

namespace {

const Mesh& level1() {
    static const Mesh m = build_nonconvex_grid(1);
    return m;
}

int first_nonconvex(const Mesh& m) {
    for (int t = 0; t < m.num_elements(); ++t)
        if (!m.element(t).is_convex) return t;
    return -1;
}

// Random polynomial of degree <= k evaluated through monomials in (x, y).
struct RandomPoly {
    int k;
    std::vector<double> c;
    RandomPoly(int k_, std::mt19937& rng) : k(k_) {
        std::uniform_real_distribution<double> u(-1, 1);
        for (int i = 0; i < poly_dim(k); ++i) c.push_back(u(rng));
    }
    double operator()(const Point2& x) const {
        double s = 0.0;
        for (int i = 0; i < poly_dim(k); ++i) {
            const auto [a, b] = ElementBasis::exponents(i);
            s += c[static_cast<std::size_t>(i)] * std::pow(x.x(), a) * std::pow(x.y(), b);
        }
        return s;
    }
    Point2 grad(const Point2& x) const {
        Point2 g = Point2::Zero();
        for (int i = 0; i < poly_dim(k); ++i) {
            const auto [a, b] = ElementBasis::exponents(i);
            const double ci = c[static_cast<std::size_t>(i)];
            if (a > 0) g.x() += ci * a * std::pow(x.x(), a - 1) * std::pow(x.y(), b);
            if (b > 0) g.y() += ci * b * std::pow(x.x(), a) * std::pow(x.y(), b - 1);
        }
        return g;
    }
};

Eigen::VectorXd vector_dofs(const oracle::Cell& c, const oracle::Scalar& fx, const oracle::Scalar& fy) {
    const Eigen::VectorXd a = oracle::project_local(c, fx);
    const Eigen::VectorXd b = oracle::project_local(c, fy);
    Eigen::VectorXd v(a.size() + b.size());
    v << a, b;
    return v;
}

// L2 norm of stacked P_r blocks, normalised by the element area.
double block_l2(const LocalOperatorSet& ops, const Eigen::VectorXd& coef, double area) {
    const int n = ops.dim_r();
    double sum = 0.0;
    for (int b = 0; b < coef.size() / n; ++b) {
        const Eigen::VectorXd blk = coef.segment(b * n, n);
        sum += blk.dot(ops.gram_r * blk);
    }
    return std::sqrt(sum / area);
}

}  // namespace

TEST(ChooseR, Examples) {
    const Mesh& m = level1();
    const int nc = first_nonconvex(m);
    ASSERT_GE(nc, 0);
    EXPECT_EQ(choose_r(m.element(nc), 1, RPolicy::Theory), 10);
    EXPECT_EQ(choose_r(m.element(nc), 2, RPolicy::FixedPlus1), 3);
    EXPECT_EQ(choose_r(m.element(nc), 2, RPolicy::FixedPlus2), 4);
    const Mesh sq = Mesh::from_polygons({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}});
    EXPECT_EQ(choose_r(sq.element(0), 1, RPolicy::Theory), 4);
}

TEST(ChooseR, PolicyNamesRoundTrip) {
    for (auto p : {RPolicy::Theory, RPolicy::FixedPlus1, RPolicy::FixedPlus2})
        EXPECT_EQ(r_policy_from_string(to_string(p)), p);
    EXPECT_THROW(r_policy_from_string("plus7"), std::runtime_error);
}

TEST(Projection, InteriorExamples) {
    const Mesh sq = Mesh::from_polygons({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}});
    // Polynomial in P_k reproduced.
    const ElementBasis b(sq, 0, 2);
    const auto f = [](const Point2& x) { return 1.0 + 2 * x.x() - x.y() + 0.5 * x.x() * x.y(); };
    const Eigen::VectorXd c = project_interior(sq, 0, 2, f);
    for (const Point2 p : {Point2(0.1, 0.2), Point2(0.9, 0.4), Point2(0.5, 0.5)}) EXPECT_NEAR(b.eval(p).dot(c), f(p), 1e-13);
    EXPECT_EQ(project_interior(sq, 0, 2, [](const Point2&) { return 0.0; }).norm(), 0.0);
    // sin(pi x) sin(pi y), k = 1, against a dense tensor-Gauss oracle.
    const auto s = [](const Point2& x) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); };
    const ElementBasis b1(sq, 0, 1);
    const auto& gl = gauss_legendre(30);
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            const Point2 p(0.5 * (gl.nodes[i] + 1), 0.5 * (gl.nodes[j] + 1));
            const double w = 0.25 * gl.weights[i] * gl.weights[j];
            const Eigen::Vector3d v = b1.eval(p);
            g += w * v * v.transpose();
            rhs += w * s(p) * v;
        }
    EXPECT_LT((project_interior(sq, 0, 1, s) - g.ldlt().solve(rhs)).norm(), 1e-10);
    // High-order projection follows the same pattern with degree r.
    const ElementBasis b4(sq, 0, 4);
    const auto quartic = [](const Point2& x) { return std::pow(x.x(), 4) - x.x() * x.y() * x.y(); };
    const Eigen::VectorXd c4 = project_highorder(sq, 0, 4, quartic);
    EXPECT_NEAR(b4.eval(Point2(0.3, 0.8)).dot(c4), quartic(Point2(0.3, 0.8)), 1e-12);
}

TEST(Projection, EdgeExamples) {
    const Mesh m = build_nonconvex_grid(2);
    for (int e = 0; e < m.num_edges(); e += 3) {
        const EdgeBasis eb(m, e, 1);
        const auto affine = [](const Point2& x) { return 2.0 - x.x() + 3 * x.y(); };
        const Eigen::VectorXd c = project_edge(m, e, 1, affine);
        const Point2 mid = m.edge(e).midpoint(m.points());
        EXPECT_NEAR(eb.eval(mid).dot(c), affine(mid), 1e-13);
        const Eigen::VectorXd one = project_edge(m, e, 2, [](const Point2&) { return 1.0; });
        EXPECT_NEAR(one[0], 1.0, 1e-14);
        EXPECT_NEAR(one[1], 0.0, 1e-14);
        EXPECT_NEAR(one[2], 0.0, 1e-14);
    }
    // cos(pi y) on a right boundary edge, k = 2, against a 1D Gauss oracle.
    int right = -1;
    for (int e = 0; e < m.num_edges(); ++e)
        if (m.edge(e).is_boundary() && std::abs(m.edge(e).midpoint(m.points()).x() - 1.0) < 1e-14) right = e;
    ASSERT_GE(right, 0);
    const auto f = [](const Point2& x) { return std::cos(M_PI * x.y()); };
    const EdgeBasis eb(m, right, 2);
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    const Point2 a = m.points()[static_cast<std::size_t>(m.edge(right).vertices[0])];
    const Point2 b = m.points()[static_cast<std::size_t>(m.edge(right).vertices[1])];
    const auto& gl = gauss_legendre(30);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double s = gl.nodes[i];
        const Point2 x = 0.5 * (a + b) + 0.5 * s * (b - a);
        const Eigen::Vector3d v(1, s, s * s);
        g += gl.weights[i] * v * v.transpose();
        rhs += gl.weights[i] * f(x) * v;
    }
    EXPECT_LT((project_edge(m, right, 2, f) - g.ldlt().solve(rhs)).norm(), 1e-12);
}

TEST(WeakGradient, ConstantHasZeroGradient) {
    const Mesh& m = level1();
    for (int k = 1; k <= 3; ++k)
        for (int t = 0; t < 2; ++t) {
            const auto ops = compute_local_operators(m, t, k, k + 1);
            const oracle::Cell c = oracle::make_cell(m, t, k, k + 1);
            const Eigen::VectorXd q = oracle::project_local(c, [](const Point2&) { return 2.5; });
            const auto l2 = [&](const Eigen::VectorXd& coef) { return block_l2(ops, coef, m.element(t).area); };
            EXPECT_LT(l2(ops.grad_p * q), 1e-10);
            Eigen::VectorXd v(2 * q.size());
            v << q, -q;
            EXPECT_LT(l2(ops.grad_u * v), 1e-10);
            EXPECT_LT(l2(ops.div_u * v), 1e-10);
        }
}

TEST(WeakGradient, PolynomialExactness) {
    // grad_w(Q_h u) = grad u, div_w(Q_h u) = div u, eps_w(Q_h u) = eps(u) for u in [P_k]^2.
    std::mt19937 rng(11);
    const Mesh& m = level1();
    for (int k = 1; k <= 3; ++k)
        for (int t : {0, 1}) {
            for (RPolicy pol : {RPolicy::FixedPlus1, RPolicy::FixedPlus2, RPolicy::Theory}) {
                const int r = choose_r(m.element(t), k, pol);
                const auto ops = compute_local_operators(m, t, k, r);
                const oracle::Cell c = oracle::make_cell(m, t, k, r);
                const RandomPoly ux(k, rng), uy(k, rng);
                const Eigen::VectorXd v = vector_dofs(c, ux, uy);
                const Eigen::VectorXd g = ops.grad_u * v, d = ops.div_u * v, s = ops.strain_u * v;
                const Eigen::VectorXd q = oracle::project_local(c, ux);
                const Eigen::VectorXd gp = ops.grad_p * q;
                const int n = ops.dim_r();
                double worst = 0.0;
                const auto check = [&](const Eigen::VectorXd& coef, double exact, const Point2& x) {
                    const double err = std::abs(oracle::eval_r(c, coef, x) - exact);
                    worst = std::max(worst, err / (1.0 + oracle::eval_r_scale(c, coef, x)));
                };
                for (const Point2& x : oracle::interior_samples(c)) {
                    const Point2 gx = ux.grad(x), gy = uy.grad(x);
                    check(g.segment(0, n), gx.x(), x);
                    check(g.segment(n, n), gx.y(), x);
                    check(g.segment(2 * n, n), gy.x(), x);
                    check(g.segment(3 * n, n), gy.y(), x);
                    check(d, gx.x() + gy.y(), x);
                    check(s.segment(0, n), gx.x(), x);
                    check(s.segment(n, n), gy.y(), x);
                    check(s.segment(2 * n, n), 0.5 * (gx.y() + gy.x()), x);
                    check(gp.segment(0, n), gx.x(), x);
                    check(gp.segment(n, n), gx.y(), x);
                }
                // Scaled monomial Gram matrices lose digits at high degree.
                EXPECT_LT(worst, r >= 10 ? 1e-9 : 1e-11) << "k " << k << " r " << r << " element " << t << " worst " << worst;
            }
        }
}

TEST(WeakGradient, DefiningEquationResiduals) {
    const Mesh m = build_nonconvex_grid(2);
    for (int k = 1; k <= 3; ++k)
        for (int t : {0, 1, 17}) {
            const int r = k + 2;
            const auto ops = compute_local_operators(m, t, k, r);
            const oracle::Cell c = oracle::make_cell(m, t, k, r);
            EXPECT_LT(oracle::scalar_gradient_residual(c, ops.grad_p), 1e-11) << "k " << k << " element " << t;
            EXPECT_LT(oracle::vector_operator_residual(c, ops.grad_u, ops.div_u), 1e-11) << "k " << k << " element " << t;
        }
}

TEST(WeakGradient, BruteForceOracleOnNonConvexPentagon) {
    // v_0 = 0, v_b = (s^2, 0) on one edge and zero elsewhere; k = 2 so that s^2
    // is an edge mode, r = 3.
    const Mesh& m = level1();
    const int t = first_nonconvex(m);
    const int k = 2, r = 3;
    const auto ops = compute_local_operators(m, t, k, r);
    const oracle::Cell c = oracle::make_cell(m, t, k, r);
    const LocalDofLayout layout(k, m.element(t).num_edges());
    const int edge = 2;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(layout.vector_size());
    v[layout.edge_offset(edge) + 2] = 1.0;
    oracle::ScalarWeak q = oracle::unit_dof(c, layout.edge_offset(edge) + 2);
    const Eigen::VectorXd expected = oracle::brute_force_gradient(c, q);
    const Eigen::VectorXd got = ops.grad_u * v;
    const int n = ops.dim_r();
    EXPECT_LT((got.segment(0, 2 * n) - expected).norm(), 1e-10);
    EXPECT_LT(got.segment(2 * n, 2 * n).norm(), 1e-12);
}

TEST(WeakGradient, ScalarBruteForceOracleSingleEdgeOne) {
    // q_0 = 0, q_b = 1 on one edge only.
    const Mesh& m = level1();
    const int t = first_nonconvex(m);
    for (int k = 1; k <= 2; ++k) {
        const int r = k + 1;
        const auto ops = compute_local_operators(m, t, k, r);
        const oracle::Cell c = oracle::make_cell(m, t, k, r);
        const LocalDofLayout layout(k, m.element(t).num_edges());
        Eigen::VectorXd q = Eigen::VectorXd::Zero(layout.scalar_size());
        q[layout.edge_offset(3)] = 1.0;
        const Eigen::VectorXd expected = oracle::brute_force_gradient(c, oracle::unit_dof(c, layout.edge_offset(3)));
        EXPECT_LT((ops.grad_p * q - expected).norm(), 1e-10);
    }
}

TEST(WeakDivergence, LinearFieldHasDivergenceTwo) {
    const Mesh& m = level1();
    for (int t : {0, 1}) {
        const int k = 1, r = 3;
        const auto ops = compute_local_operators(m, t, k, r);
        const oracle::Cell c = oracle::make_cell(m, t, k, r);
        const Eigen::VectorXd v =
            vector_dofs(c, [](const Point2& x) { return x.x(); }, [](const Point2& x) { return x.y(); });
        const Eigen::VectorXd d = ops.div_u * v;
        // The constant of the scaled basis carries the value; the rest vanish.
        EXPECT_NEAR(d[0], 2.0, 1e-10);
        EXPECT_LT(d.tail(d.size() - 1).norm(), 1e-10);
    }
}

TEST(WeakDivergence, TraceOfGradientIdentity) {
    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    const Mesh& m = level1();
    for (int t = 0; t < m.num_elements(); ++t)
        for (int k = 1; k <= 3; ++k) {
            const auto ops = compute_local_operators(m, t, k, k + 2);
            const int n = ops.dim_r();
            Eigen::VectorXd v(ops.layout.vector_size());
            for (int i = 0; i < v.size(); ++i) v[i] = nd(rng);
            const Eigen::VectorXd g = ops.grad_u * v;
            const Eigen::VectorXd d = ops.div_u * v;
            EXPECT_LT((g.segment(0, n) + g.segment(3 * n, n) - d).cwiseAbs().maxCoeff(), 1e-12 * (1 + d.norm()));
        }
}

TEST(WeakStrain, RigidModesAndLinearField) {
    const Mesh& m = level1();
    for (int t : {0, 1})
        for (int k = 1; k <= 3; ++k) {
            const int r = k + 1;
            const auto ops = compute_local_operators(m, t, k, r);
            const oracle::Cell c = oracle::make_cell(m, t, k, r);
            const auto zero = [](const Point2&) { return 0.0; };
            const auto one = [](const Point2&) { return 1.0; };
            for (const auto& v : {vector_dofs(c, one, zero), vector_dofs(c, zero, one),
                                  vector_dofs(c, [](const Point2& x) { return -x.y(); },
                                              [](const Point2& x) { return x.x(); })})
                EXPECT_LT(block_l2(ops, ops.strain_u * v, m.element(t).area), 1e-10);
            // eps(x, 0) = e_xx: the constant mode carries 1, everything else vanishes.
            Eigen::VectorXd s = ops.strain_u * vector_dofs(c, [](const Point2& x) { return x.x(); }, zero);
            s[0] -= 1.0;
            EXPECT_LT(block_l2(ops, s, m.element(t).area), 1e-10);
        }
}

TEST(WeakStrain, IsSymmetricPartOfGradient) {
    std::mt19937 rng(5);
    std::normal_distribution<double> nd;
    const Mesh& m = level1();
    const auto ops = compute_local_operators(m, 0, 2, 4);
    const int n = ops.dim_r();
    Eigen::VectorXd v(ops.layout.vector_size());
    for (int i = 0; i < v.size(); ++i) v[i] = nd(rng);
    const Eigen::VectorXd g = ops.grad_u * v, s = ops.strain_u * v;
    EXPECT_LT((s.segment(0, n) - g.segment(0, n)).norm(), 1e-14 * g.norm());
    EXPECT_LT((s.segment(n, n) - g.segment(3 * n, n)).norm(), 1e-14 * g.norm());
    EXPECT_LT((s.segment(2 * n, n) - 0.5 * (g.segment(n, n) + g.segment(2 * n, n))).norm(), 1e-14 * g.norm());
}

TEST(LocalOperators, ShapesFollowLayout) {
    const Mesh& m = level1();
    const auto all = build_local_operators(m, 2, RPolicy::Theory);
    ASSERT_EQ(static_cast<int>(all.size()), m.num_elements());
    for (const auto& ops : all) {
        const int n = ops.dim_r();
        EXPECT_EQ(ops.r, choose_r(m.element(ops.element), 2, RPolicy::Theory));
        EXPECT_EQ(ops.layout.scalar_size(), 6 + 3 * m.element(ops.element).num_edges());
        EXPECT_EQ(ops.grad_u.rows(), 4 * n);
        EXPECT_EQ(ops.grad_u.cols(), ops.layout.vector_size());
        EXPECT_EQ(ops.div_u.rows(), n);
        EXPECT_EQ(ops.strain_u.rows(), 3 * n);
        EXPECT_EQ(ops.grad_p.rows(), 2 * n);
        EXPECT_EQ(ops.grad_p.cols(), ops.layout.scalar_size());
    }
    EXPECT_THROW(compute_local_operators(m, 0, 2, 1), std::runtime_error);
}
