#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include <ricciflat/jet.hpp>

#include "fd_oracle.hpp"

using namespace ricciflat;

namespace {

Jet3 X(double v) { return Jet3::variable(Axis::x, v); }
Jet3 Y(double v) { return Jet3::variable(Axis::y, v); }

void expect_matches_fd(const Jet3& jet, const fd::Fn& f, double x, double y) {
    for (int k = 0; k <= 3; ++k)
        for (int j = 0; j <= k; ++j) {
            const int i     = k - j;
            const double ex = k == 0 ? f(x, y) : fd::partial(f, x, y, i, j, fd::step_for(k));
            const double tol = (k == 3 ? 1e-4 : 1e-6) * std::max(1.0, std::abs(ex));
            EXPECT_NEAR(jet.partial(i, j), ex, tol) << "partial (" << i << "," << j << ") at " << x << "," << y;
        }
}

} // namespace

TEST(Jet, SeedsAndConstants) {
    const auto x = Jet3::variable(Axis::x, 2.0);
    EXPECT_EQ(x.value(), 2.0);
    EXPECT_EQ(x.partial(1, 0), 1.0);
    EXPECT_EQ(x.partial(0, 1), 0.0);
    EXPECT_EQ(x.partial(2, 0), 0.0);
    const auto c = Jet3::constant(5.0);
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(c.partial(k, 0), 0.0);
    EXPECT_EQ(c.partial(4, 0), 0.0);  // beyond the order
}

TEST(Jet, ProductOfSeeds) {
    // x*y at (2, 3): d_x = 3, d_y = 2, d_xy = 1
    const auto p = X(2.0) * Y(3.0);
    EXPECT_DOUBLE_EQ(p.value(), 6.0);
    EXPECT_DOUBLE_EQ(p.partial(1, 0), 3.0);
    EXPECT_DOUBLE_EQ(p.partial(0, 1), 2.0);
    EXPECT_DOUBLE_EQ(p.partial(1, 1), 1.0);
    EXPECT_DOUBLE_EQ(p.partial(2, 0), 0.0);
    // x^3 at 2: 8, 12, 12, 6
    const auto c = X(2.0) * X(2.0) * X(2.0);
    EXPECT_DOUBLE_EQ(c.partial(1, 0), 12.0);
    EXPECT_DOUBLE_EQ(c.partial(2, 0), 12.0);
    EXPECT_DOUBLE_EQ(c.partial(3, 0), 6.0);
}

TEST(Jet, TanTaylorAtZero) {
    // tan x = x + x^3/3 + ...
    const auto t = tan(X(0.0));
    EXPECT_NEAR(t.taylor(1, 0), 1.0, 1e-15);
    EXPECT_NEAR(t.taylor(2, 0), 0.0, 1e-15);
    EXPECT_NEAR(t.taylor(3, 0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(t.partial(3, 0), 2.0, 1e-14);
}

TEST(Jet, LogExpRoundTrip) {
    const auto a = X(0.4) * Y(-0.7) + sin(X(0.4));
    const auto b = log(exp(a));
    for (int k = 0; k <= 3; ++k)
        for (int j = 0; j <= k; ++j) EXPECT_NEAR(b.partial(k - j, j), a.partial(k - j, j), 1e-13);
}

TEST(Jet, DomainErrors) {
    EXPECT_THROW(log(X(-1.0)), DomainError);
    EXPECT_THROW(log(X(0.0)), DomainError);
    EXPECT_THROW(pow(X(-2.0), 0.5), DomainError);
    EXPECT_THROW(pow(X(0.0), -1.0), DomainError);
    EXPECT_NO_THROW(pow(X(-2.0), 3.0));
    try {
        log(X(-1.0));
    } catch (const DomainError& e) {
        EXPECT_EQ(e.code(), "LOG_DOMAIN");
    }
}

TEST(Jet, IntegerPowerOfNegativeBase) {
    const auto p = pow(X(-2.0), 3.0);
    EXPECT_NEAR(p.value(), -8.0, 1e-14);
    EXPECT_NEAR(p.partial(1, 0), 12.0, 1e-13);
    EXPECT_NEAR(p.partial(2, 0), -12.0, 1e-13);
    EXPECT_NEAR(p.partial(3, 0), 6.0, 1e-13);
}

TEST(Jet, DerivativeAndTruncate) {
    const auto a  = sin(X(0.3)) * cos(Y(0.5));
    const auto dx = derivative(a, Axis::x);
    EXPECT_NEAR(dx.value(), a.partial(1, 0), 1e-15);
    EXPECT_NEAR(dx.partial(1, 1), a.partial(2, 1), 1e-14);
    EXPECT_NEAR(dx.partial(0, 2), a.partial(1, 2), 1e-14);
    const auto t = truncate<1>(a);
    EXPECT_EQ(t.partial(0, 1), a.partial(0, 1));
    EXPECT_EQ(t.partial(2, 0), 0.0);
}

TEST(Jet, FieldAxioms) {
    const std::vector<Jet3> xs{X(0.3) * Y(0.1) + 2.0, sin(X(0.7)) - Y(1.2), exp(X(-0.2) * 0.5) * Y(0.9)};
    for (const auto& a : xs)
        for (const auto& b : xs)
            for (const auto& c : xs) {
                const auto ab = a * b, ba = b * a;
                const auto l = (a * b) * c, r = a * (b * c);
                const auto d1 = a * (b + c), d2 = a * b + a * c;
                for (int k = 0; k <= 3; ++k)
                    for (int j = 0; j <= k; ++j) {
                        EXPECT_NEAR(ab.taylor(k - j, j), ba.taylor(k - j, j), 1e-14);
                        EXPECT_NEAR(l.taylor(k - j, j), r.taylor(k - j, j), 1e-13);
                        EXPECT_NEAR(d1.taylor(k - j, j), d2.taylor(k - j, j), 1e-13);
                    }
            }
    const auto a = xs[0];
    const auto q = (a / xs[2]) * xs[2];
    for (int k = 0; k <= 3; ++k) EXPECT_NEAR(q.partial(k, 0), a.partial(k, 0), 1e-12);
}

TEST(Jet, ElementaryFunctionsAgainstFiniteDifferences) {
    struct Case {
        const char* name;
        std::function<Jet3(const Jet3&, const Jet3&)> jet;
        fd::Fn f;
    };
    const std::vector<Case> cases{
        {"exp", [](auto& x, auto& y) { return exp(x * y); }, [](double x, double y) { return std::exp(x * y); }},
        {"log", [](auto& x, auto& y) { return log(x * x + y * y); },
         [](double x, double y) { return std::log(x * x + y * y); }},
        {"pow", [](auto& x, auto& y) { return pow(x * x + y, 1.7); },
         [](double x, double y) { return std::pow(x * x + y, 1.7); }},
        {"sqrt", [](auto& x, auto& y) { return sqrt(x + y * y + 1.0); }, [](double x, double y) { return std::sqrt(x + y * y + 1.0); }},
        {"div", [](auto& x, auto& y) { return x / (y + 2.0); }, [](double x, double y) { return x / (y + 2.0); }},
        {"sin", [](auto& x, auto& y) { return sin(x * y); }, [](double x, double y) { return std::sin(x * y); }},
        {"cos", [](auto& x, auto& y) { return cos(x - y); }, [](double x, double y) { return std::cos(x - y); }},
        {"tan", [](auto& x, auto& y) { return tan(x + y); }, [](double x, double y) { return std::tan(x + y); }},
        {"sinh", [](auto& x, auto& y) { return sinh(x - y); }, [](double x, double y) { return std::sinh(x - y); }},
        {"cosh", [](auto& x, auto& y) { return cosh(x * y); }, [](double x, double y) { return std::cosh(x * y); }},
        {"atan", [](auto& x, auto& y) { return atan(x * y); }, [](double x, double y) { return std::atan(x * y); }},
        {"atan2", [](auto& x, auto& y) { return atan2(y, x); }, [](double x, double y) { return std::atan2(y, x); }},
        {"acosh", [](auto& x, auto& y) { return acosh(x * x + y * y + 1.0); },
         [](double x, double y) { return std::acosh(x * x + y * y + 1.0); }},
    };
    const std::vector<std::pair<double, double>> pts{{0.6, 0.3}, {0.9, -0.4}, {-0.7, 0.5}, {0.35, 0.8}};
    for (const auto& c : cases)
        for (auto [x, y] : pts) {
            SCOPED_TRACE(c.name);
            expect_matches_fd(c.jet(X(x), Y(y)), c.f, x, y);
        }
}

TEST(Jet, Atan2BranchesAgree) {
    // both branches of the implementation near the diagonal |x| = |y|
    for (double t : {0.78, 0.79, 2.35, 2.36, -0.78, -2.36}) {
        const double x = std::cos(t), y = std::sin(t);
        const auto a   = atan2(Y(y), X(x));
        EXPECT_NEAR(a.value(), std::atan2(y, x), 1e-15);
        // grad atan2 = (-y, x)/r^2 with r = 1
        EXPECT_NEAR(a.partial(1, 0), -y, 1e-14);
        EXPECT_NEAR(a.partial(0, 1), x, 1e-14);
        // harmonic
        EXPECT_NEAR(a.partial(2, 0) + a.partial(0, 2), 0.0, 1e-13);
    }
}
