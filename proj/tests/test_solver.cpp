#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include <ricciflat/assembly.hpp>
#include <ricciflat/solver.hpp>

using namespace ricciflat;

namespace {

double scherk(Point p) { return std::log(std::cos(p.y)) - std::log(std::cos(p.x)); }

GridSolution solve_scherk(int n) {
    return solve_minimal(scherk, AmbientMetric::euclidean(), {n, n, -1.0, 1.0, -1.0, 1.0});
}

double max_error(const GridSolution& s) {
    double e = 0.0;
    for (int j = 0; j < s.grid.ny; ++j)
        for (int i = 0; i < s.grid.nx; ++i) e = std::max(e, std::abs(s.at(i, j) - scherk({s.grid.x(i), s.grid.y(j)})));
    return e;
}

} // namespace

TEST(Solver, LinearDataIsExact) {
    const GridSpec g{17, 13, -1.0, 2.0, 0.0, 1.5};
    const auto s = solve_minimal([](Point p) { return 2.0 * p.x - p.y; }, AmbientMetric::euclidean(), g);
    EXPECT_TRUE(s.converged);
    EXPECT_LE(s.residual_history.size(), 3u);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) EXPECT_NEAR(s.at(i, j), 2.0 * g.x(i) - g.y(j), 1e-12);
}

TEST(Solver, ConstantDataIsConstant) {
    const auto s = solve_minimal([](Point) { return 3.25; }, AmbientMetric{2.0, 1.0, 0.3, 1}, {9, 9, 0, 1, 0, 1});
    for (double v : s.values) EXPECT_NEAR(v, 3.25, 1e-14);
}

TEST(Solver, BoundaryNodesKeepTheData) {
    const auto s = solve_scherk(17);
    for (int i = 0; i < 17; ++i) {
        EXPECT_EQ(s.at(i, 0), scherk({s.grid.x(i), s.grid.y(0)}));
        EXPECT_EQ(s.at(0, i), scherk({s.grid.x(0), s.grid.y(i)}));
        EXPECT_EQ(s.at(16, i), scherk({s.grid.x(16), s.grid.y(i)}));
    }
}

TEST(Solver, ScherkConvergesAtSecondOrder) {
    const auto a = solve_scherk(33), b = solve_scherk(65);
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_LT(b.residual_history.back(), 1e-10);
    const double ratio = max_error(a) / max_error(b);
    EXPECT_GE(ratio, 3.5);
    EXPECT_LE(ratio, 4.5);
}

TEST(Solver, ResidualHistoryIsMonotoneAndQuadraticAtTheEnd) {
    const auto s = solve_scherk(33);
    const auto& h = s.residual_history;
    ASSERT_GE(h.size(), 3u);
    for (std::size_t k = 1; k < h.size(); ++k) EXPECT_LE(h[k], h[k - 1]);
    // r_{k+1} <= C r_k^2 over the last two steps
    const std::size_t n = h.size();
    const double c1 = h[n - 1] / (h[n - 2] * h[n - 2]);
    const double c2 = h[n - 2] / (h[n - 3] * h[n - 3]);
    EXPECT_LT(c1, 1e3);
    EXPECT_LT(c2, 1e3);
}

TEST(Solver, BudgetExhaustionKeepsTheIterate) {
    try {
        solve_minimal(scherk, AmbientMetric::euclidean(), {33, 33, -1, 1, -1, 1}, {1e-14, 1});
        FAIL() << "expected NoConvergence";
    } catch (const NoConvergence& e) {
        EXPECT_FALSE(e.solution.converged);
        EXPECT_EQ(e.solution.residual_history.size(), 2u);
    }
}

TEST(Solver, RejectsBadInput) {
    EXPECT_THROW(solve_minimal(scherk, AmbientMetric::euclidean(), {2, 5, 0, 1, 0, 1}), Error);
    EXPECT_THROW(solve_minimal(scherk, AmbientMetric::euclidean(), {5, 5, 0, 1, 0, 1}, {0.0, 5}), Error);
}

TEST(Solver, LorentzianDegeneracyIsReported) {
    // phi = 2y in diag(1,-1): rho = -3 everywhere
    EXPECT_THROW(solve_minimal([](Point p) { return 2.0 * p.y + 0.1 * p.x * p.x; }, AmbientMetric::lorentzian(),
                               {9, 9, -1, 1, -1, 1}),
                 SingularJacobian);
}

TEST(GridJets, LinearSolutionIsExact) {
    const auto s = solve_minimal([](Point p) { return 0.5 * p.x + 1.5 * p.y - 1.0; }, AmbientMetric::euclidean(),
                                 {21, 21, 0, 1, 0, 1});
    const Jet3 j = grid_jets(s, {0.5, 0.5});
    EXPECT_NEAR(j.partial(1, 0), 0.5, 1e-10);
    EXPECT_NEAR(j.partial(0, 1), 1.5, 1e-10);
    for (int k = 2; k <= 3; ++k)
        for (int i = 0; i <= k; ++i) EXPECT_NEAR(j.partial(k - i, i), 0.0, 1e-8);
    EXPECT_THROW(grid_jets(s, {0.06, 0.5}), TooCloseToBoundary);
}

TEST(GridJets, ScherkCoefficients) {
    const auto s = solve_scherk(129);
    const Jet3 j = grid_jets(s, {0.3, 0.2});
    const double h = s.grid.hx();
    const Point node{s.grid.x(static_cast<int>(std::lround((0.3 + 1.0) / h))),
                     s.grid.y(static_cast<int>(std::lround((0.2 + 1.0) / h)))};
    const Jet3 exact = make_scherk().jet_at(node);
    EXPECT_NEAR(j.value(), exact.value(), 1e-3);
    for (int k = 1; k <= 3; ++k)
        for (int i = 0; i <= k; ++i) EXPECT_NEAR(j.partial(k - i, i), exact.partial(k - i, i), 5e-2) << k << " " << i;
}

TEST(GridJets, RicciResidualShrinksUnderRefinement) {
    AssemblyConfig cfg;
    const auto coarse = grid_surface(solve_scherk(65)), fine = grid_surface(solve_scherk(129));
    double rc = 0.0, rf = 0.0;
    for (Point p : {Point{0.25, 0.25}, Point{-0.5, 0.25}, Point{0.5, -0.75}, Point{0.0, 0.5}}) {
        rc = std::max(rc, ricci(assemble(coarse, cfg, p)).max_abs_ricci);
        rf = std::max(rf, ricci(assemble(fine, cfg, p)).max_abs_ricci);
    }
    EXPECT_GT(rc / rf, 2.0);
}

TEST(Minsurf, RoundTrip) {
    const auto s = solve_scherk(9);
    std::stringstream ss;
    write_minsurf(ss, s);
    const auto r = read_minsurf(ss);
    EXPECT_EQ(r.grid.nx, 9);
    EXPECT_EQ(r.grid.x0, -1.0);
    EXPECT_EQ(r.ambient.eps, 1);
    EXPECT_TRUE(r.converged);
    ASSERT_EQ(r.values.size(), s.values.size());
    for (std::size_t k = 0; k < s.values.size(); ++k) EXPECT_EQ(r.values[k], s.values[k]);
}

TEST(Minsurf, Malformed) {
    for (const char* text : {"", "minsurf v2 3 3 0 1 0 1 1 1 0 1\n", "minsurf v1 3 3 0 1 0 1 1 1 0 1\n1 2 3\n",
                             "minsurf v1 3 3 0 1 0 1 1 1 0 1\n1 2 3\n4 5 6\n7 8 x\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(read_minsurf(in), Error) << text;
    }
    std::istringstream nc("minsurf v1 3 3 0 1 0 1 1 1 0 1\n1 2 3\n4 5 6\n7 8 9\n# converged=false iterations=3\n");
    EXPECT_FALSE(read_minsurf(nc).converged);
}
