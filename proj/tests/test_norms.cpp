#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "properties.hpp"
#include "wgbiot/error.hpp"
#include "wgbiot/norms.hpp"

using namespace wgbiot;

namespace {

Mesh unit_square() { return Mesh::from_polygons({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}}); }

Eigen::VectorXd random_vector(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

ConvergenceRecord record(int level, double h, double l2, double hu, double hp) {
    ConvergenceRecord r;
    r.level = level;
    r.h = h;
    r.err_l2_u = l2;
    r.err_hw_u = hu;
    r.err_hw_p = hp;
    return r;
}

}  // namespace

TEST(EnergyNorm, SquareExamples) {
    const Mesh m = unit_square();
    const auto map = build_dof_map(m, 1);
    const auto ops = build_local_operators(m, 1, RPolicy::Theory);
    const auto params = MaterialParams::lame(0.5, 1.0, 1);
    EXPECT_EQ(energy_norm_u(Eigen::VectorXd::Zero(map.n_u), m, map, ops, params), 0.0);
    const auto v = project_vector_field(m, map, [](const Point2& x) { return Eigen::Vector2d(x.x(), 0.0); });
    EXPECT_NEAR(energy_norm_u(v, m, map, ops, params), std::sqrt(2.0), 1e-12);
    const auto rot = project_vector_field(m, map, [](const Point2& x) { return Eigen::Vector2d(1.0 - x.y(), 2.0 + x.x()); });
    EXPECT_LT(energy_norm_u(rot, m, map, ops, params), 1e-10);
    const auto q = project_scalar_field(m, map, [](const Point2& x) { return x.x(); });
    EXPECT_NEAR(energy_norm_p(q, m, map, ops, params), 1.0, 1e-12);
    const auto c = project_scalar_field(m, map, [](const Point2&) { return -4.0; });
    EXPECT_LT(energy_norm_p(c, m, map, ops, params), 1e-10);
}

TEST(EnergyNorm, CoincidesWithAssembledForms) {
    const auto d = props::manufactured_disc(2, 2, RPolicy::FixedPlus2, 0.3);
    const Eigen::VectorXd v = random_vector(d.map().n_u, 1), q = random_vector(d.map().n_p, 2);
    const double ev = energy_norm_u(v, d.mesh(), d.map(), d.ops(), d.params());
    const double ep = energy_norm_p(q, d.mesh(), d.map(), d.ops(), d.params());
    EXPECT_NEAR(ev * ev, v.dot(d.a() * v), 1e-12 * ev * ev);
    EXPECT_NEAR(ep * ep, q.dot(d.c() * q), 1e-12 * ep * ep);
}

TEST(L2Norm, Examples) {
    const Mesh m = build_nonconvex_grid(2);
    const auto map = build_dof_map(m, 2);
    EXPECT_EQ(l2_interior_norm(Eigen::VectorXd::Zero(map.n_p), m, map), 0.0);
    const auto c = project_scalar_field(m, map, [](const Point2&) { return -1.5; });
    EXPECT_NEAR(l2_interior_norm(c, m, map), 1.5, 1e-12);
    const Eigen::VectorXd r = random_vector(map.n_u, 3);
    double ref = 0.0;
    for (int t = 0; t < m.num_elements(); ++t) {
        const ElementBasis b(m, t, 2);
        for (int comp = 0; comp < 2; ++comp) {
            const Eigen::VectorXd ci = r.segment(comp * map.n_p + map.interior_offset(t), map.dim_interior());
            ref += oracle::area(m.polygon(t), [&](const Point2& x) { return std::pow(b.eval(x).dot(ci), 2); });
        }
    }
    EXPECT_NEAR(l2_interior_norm(r, m, map), std::sqrt(ref), 1e-12 * std::sqrt(ref));
    EXPECT_THROW(l2_interior_norm(Eigen::VectorXd::Zero(3), m, map), InternalError);
}

TEST(Errors, ProjectionOfExactIsErrorFree) {
    const auto d = props::manufactured_disc(2, 1, RPolicy::FixedPlus2);
    const double t = 0.3;
    TransientState s;
    s.t = t;
    s.u = project_vector_field(d.mesh(), d.map(), [&](const Point2& x) { return (*d.scenario().exact_u)(x, t); });
    s.p = project_scalar_field(d.mesh(), d.map(), [&](const Point2& x) { return (*d.scenario().exact_p)(x, t); });
    const auto r = errors_vs_exact(s, d);
    EXPECT_LE(r.err_l2_u, 1e-11);
    EXPECT_LE(r.err_hw_u, 1e-11);
    EXPECT_LE(r.err_hw_p, 1e-11);
    EXPECT_LE(r.err_energy_u, 1e-11);
    EXPECT_EQ(r.level, 2);
}

TEST(Errors, ScenarioWithoutExactSolution) {
    const Discretization d(heterogeneous_steady(1.0), build_nonconvex_grid(2), 1, RPolicy::FixedPlus2);
    TransientState s{0.0, 0, Eigen::VectorXd::Zero(d.map().n_u), Eigen::VectorXd::Zero(d.map().n_p)};
    EXPECT_THROW(errors_vs_exact(s, d), UnsupportedError);
}

TEST(Orders, Examples) {
    std::vector<ConvergenceRecord> r = {record(3, 0.25, 4e-2, 0.436, 1.0), record(4, 0.125, 1e-2, 0.204, 1.0)};
    compute_orders(r);
    EXPECT_FALSE(r[0].orders[0].has_value());
    EXPECT_NEAR(*r[1].orders[0], 2.0, 1e-14);
    EXPECT_EQ(round_order(*r[1].orders[1]), 1.1);
    EXPECT_EQ(round_order(*r[1].orders[2]), 0.0);
    std::vector<ConvergenceRecord> t = {record(3, 0.25, 0.896e-2, 1, 1), record(4, 0.125, 0.223e-2, 1, 1)};
    compute_orders(t);
    EXPECT_EQ(round_order(*t[1].orders[0]), 2.0);
}

TEST(Orders, ZeroCoarseErrorIsUndefined) {
    std::vector<ConvergenceRecord> r = {record(1, 0.5, 0.0, 1, 1), record(2, 0.25, 1e-3, 0.5, 0.25)};
    compute_orders(r);
    EXPECT_FALSE(r[1].orders[0].has_value());
    EXPECT_NEAR(*r[1].orders[2], 2.0, 1e-14);
}

TEST(Orders, ScaledByActualMeshRatio) {
    std::vector<ConvergenceRecord> r = {record(1, 0.3, 8.0, 1, 1), record(2, 0.1, 1.0, 1, 1)};
    compute_orders(r);
    EXPECT_NEAR(*r[1].orders[0], std::log(8.0) / std::log(3.0), 1e-14);
}

TEST(Output, CsvAndTable) {
    std::vector<ConvergenceRecord> r = {record(3, 0.25, 0.896e-2, 0.436, 0.0626), record(4, 0.125, 0.223e-2, 0.204, 0.0313)};
    compute_orders(r);
    std::ostringstream csv, table;
    write_convergence_csv(csv, r);
    write_convergence_table(table, r);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "level,h,err_l2_u,order_l2_u,err_hw_u,order_hw_u,err_hw_p,order_hw_p");
    std::getline(lines, line);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
    EXPECT_NE(table.str().find("0.896E-02"), std::string::npos);
    EXPECT_NE(table.str().find("0.223E-02"), std::string::npos);
    EXPECT_NE(table.str().find(" 2.0 "), std::string::npos);
    EXPECT_NE(table.str().find(" 1.1 "), std::string::npos);
}

TEST(NormEquivalence, RatiosStableAcrossLevels) {
    std::vector<props::RatioBand> u, p;
    for (int level = 1; level <= 3; ++level) {
        const auto d = props::manufactured_disc(level, 1, RPolicy::FixedPlus2);
        u.push_back(props::displacement_norm_ratio(d, 100, 17));
        p.push_back(props::pressure_norm_ratio(d, 100, 19));
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        EXPECT_GT(u[i].lo, 0.0);
        EXPECT_GT(p[i].lo, 0.0);
        EXPECT_LE(std::max(u[i].lo, u[0].lo) / std::min(u[i].lo, u[0].lo), 2.0);
        EXPECT_LE(std::max(u[i].hi, u[0].hi) / std::min(u[i].hi, u[0].hi), 2.0);
        EXPECT_LE(std::max(p[i].lo, p[0].lo) / std::min(p[i].lo, p[0].lo), 2.0);
        EXPECT_LE(std::max(p[i].hi, p[0].hi) / std::min(p[i].hi, p[0].hi), 2.0);
    }
}
