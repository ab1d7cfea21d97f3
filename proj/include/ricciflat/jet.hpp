#pragma once

/*
    Truncated bivariate Taylor jets.

    A Jet<N> carries a function of (x, y) together with all of its partial
    derivatives through total order N at an implicit expansion point.  The
    point itself is not stored; whoever seeds the variables owns it.

        auto x = Jet3::variable(Axis::x, 0.3);
        auto y = Jet3::variable(Axis::y, 0.2);
        auto f = log(cos(y)) - log(cos(x));
        f.partial(2, 0);   // d^2 f / dx^2 at (0.3, 0.2)

    Internally the coefficients are Taylor coefficients t[i][j] =
    (d^i_x d^j_y f) / (i! j!), which turns multiplication into a plain
    truncated convolution.
*/

#include <array>
#include <cmath>
#include <cstddef>

#include "errors.hpp"

namespace ricciflat {

enum class Axis { x = 0, y = 1 };

namespace detail {

constexpr int jet_size(int order) { return (order + 1) * (order + 2) / 2; }

// Coefficients are grouped by total order k = i + j; inside a group by j.
constexpr int jet_index(int i, int j) {
    const int k = i + j;
    return k * (k + 1) / 2 + j;
}

constexpr double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

} // namespace detail

template <int N>
class Jet {
    static_assert(N >= 0, "jet order must be non-negative");

public:
    static constexpr int order = N;
    static constexpr int size  = detail::jet_size(N);

    constexpr Jet() = default;

    static constexpr Jet constant(double value) {
        Jet r;
        r.t_[0] = value;
        return r;
    }

    /// Seed for an independent variable: value plus unit slope on `axis`.
    static constexpr Jet variable(Axis axis, double value) {
        Jet r;
        r.t_[0] = value;
        if constexpr (N >= 1) {
            r.t_[axis == Axis::x ? detail::jet_index(1, 0) : detail::jet_index(0, 1)] = 1.0;
        }
        return r;
    }

    constexpr double value() const { return t_[0]; }

    /// d^i_x d^j_y of the represented function; zero beyond the jet order.
    constexpr double partial(int i, int j) const {
        if (i < 0 || j < 0 || i + j > N) return 0.0;
        return t_[detail::jet_index(i, j)] * detail::factorial(i) * detail::factorial(j);
    }

    constexpr void set_partial(int i, int j, double v) {
        t_[detail::jet_index(i, j)] = v / (detail::factorial(i) * detail::factorial(j));
    }

    constexpr double taylor(int i, int j) const {
        if (i < 0 || j < 0 || i + j > N) return 0.0;
        return t_[detail::jet_index(i, j)];
    }
    constexpr double& taylor(int i, int j) { return t_[detail::jet_index(i, j)]; }

    constexpr Jet operator-() const {
        Jet r;
        for (int k = 0; k < size; ++k) r.t_[k] = -t_[k];
        return r;
    }

    constexpr Jet& operator+=(const Jet& o) {
        for (int k = 0; k < size; ++k) t_[k] += o.t_[k];
        return *this;
    }
    constexpr Jet& operator-=(const Jet& o) {
        for (int k = 0; k < size; ++k) t_[k] -= o.t_[k];
        return *this;
    }
    constexpr Jet& operator+=(double s) {
        t_[0] += s;
        return *this;
    }
    constexpr Jet& operator-=(double s) {
        t_[0] -= s;
        return *this;
    }
    constexpr Jet& operator*=(double s) {
        for (auto& c : t_) c *= s;
        return *this;
    }
    constexpr Jet& operator*=(const Jet& o) {
        *this = *this * o;
        return *this;
    }

    friend constexpr Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= N; ++k) {
            for (int j = 0; j <= k; ++j) {
                const int i = k - j;
                double acc = 0.0;
                for (int ka = 0; ka <= k; ++ka) {
                    for (int ja = 0; ja <= ka; ++ja) {
                        const int ia = ka - ja;
                        const int ib = i - ia;
                        const int jb = j - ja;
                        if (ib < 0 || jb < 0) continue;
                        acc += a.t_[detail::jet_index(ia, ja)] * b.t_[detail::jet_index(ib, jb)];
                    }
                }
                r.t_[detail::jet_index(i, j)] = acc;
            }
        }
        return r;
    }

    friend constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend constexpr Jet operator+(Jet a, double s) { return a += s; }
    friend constexpr Jet operator+(double s, Jet a) { return a += s; }
    friend constexpr Jet operator-(Jet a, double s) { return a -= s; }
    friend constexpr Jet operator-(double s, const Jet& a) { return (-a) += s; }
    friend constexpr Jet operator*(Jet a, double s) { return a *= s; }
    friend constexpr Jet operator*(double s, Jet a) { return a *= s; }

    friend constexpr Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }

private:
    std::array<double, size> t_{};
};

using Jet3 = Jet<3>;

/// Composes a univariate function with a jet.  `derivs[k]` must hold the
/// k-th derivative of the outer function at a.value().
template <int N>
constexpr Jet<N> compose(const Jet<N>& a, const std::array<double, N + 1>& derivs) {
    Jet<N> delta = a;
    delta.taylor(0, 0) = 0.0;
    Jet<N> result = Jet<N>::constant(derivs[0]);
    Jet<N> power  = Jet<N>::constant(1.0);
    for (int k = 1; k <= N; ++k) {
        power = power * delta;
        result += power * (derivs[k] / detail::factorial(k));
    }
    return result;
}

/// Exact partial derivative along `axis`; one order is lost.
template <int N>
constexpr Jet<N - 1> derivative(const Jet<N>& a, Axis axis) {
    static_assert(N >= 1, "cannot differentiate an order-0 jet");
    Jet<N - 1> r;
    for (int k = 0; k < N; ++k) {
        for (int j = 0; j <= k; ++j) {
            const int i = k - j;
            if (axis == Axis::x) r.taylor(i, j) = (i + 1) * a.taylor(i + 1, j);
            else r.taylor(i, j) = (j + 1) * a.taylor(i, j + 1);
        }
    }
    return r;
}

template <int M, int N>
constexpr Jet<M> truncate(const Jet<N>& a) {
    static_assert(M <= N, "truncation cannot raise the order");
    Jet<M> r;
    for (int k = 0; k <= M; ++k)
        for (int j = 0; j <= k; ++j) r.taylor(k - j, j) = a.taylor(k - j, j);
    return r;
}

// ----------------------------------------------------------------------------
// Elementary functions

template <int N>
Jet<N> exp(const Jet<N>& a) {
    std::array<double, N + 1> d;
    d.fill(std::exp(a.value()));
    return compose(a, d);
}

template <int N>
Jet<N> log(const Jet<N>& a) {
    const double v = a.value();
    if (!(v > 0.0)) throw DomainError("log of non-positive value");
    std::array<double, N + 1> d;
    d[0]       = std::log(v);
    double inv = 1.0 / v;
    double p   = inv;
    for (int k = 1; k <= N; ++k) {
        d[k] = ((k % 2 == 1) ? 1.0 : -1.0) * detail::factorial(k - 1) * p;
        p *= inv;
    }
    return compose(a, d);
}

/// a^p for real p.  Non-integer p needs a positive base; integer p only a
/// non-zero one when p < 0.
template <int N>
Jet<N> pow(const Jet<N>& a, double p) {
    const double v          = a.value();
    const bool integer_expo = (p == std::floor(p));
    if (!integer_expo && !(v > 0.0)) throw DomainError("real power of non-positive base");
    if (p < 0.0 && v == 0.0) throw DomainError("negative power of zero");
    std::array<double, N + 1> d;
    double coeff = 1.0;
    for (int k = 0; k <= N; ++k) {
        d[k] = (coeff == 0.0) ? 0.0 : coeff * std::pow(v, p - k);
        coeff *= (p - k);
    }
    return compose(a, d);
}

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
    if (!(a.value() > 0.0)) throw DomainError("sqrt of non-positive value");
    return pow(a, 0.5);
}

template <int N>
Jet<N> reciprocal(const Jet<N>& a) {
    return pow(a, -1.0);
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
    return a * reciprocal(b);
}

template <int N>
Jet<N> operator/(double s, const Jet<N>& b) {
    return reciprocal(b) * s;
}

template <int N>
Jet<N> sin(const Jet<N>& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const std::array<double, 4> cycle{s, c, -s, -c};
    std::array<double, N + 1> d;
    for (int k = 0; k <= N; ++k) d[k] = cycle[k % 4];
    return compose(a, d);
}

template <int N>
Jet<N> cos(const Jet<N>& a) {
    const double s = std::sin(a.value()), c = std::cos(a.value());
    const std::array<double, 4> cycle{c, -s, -c, s};
    std::array<double, N + 1> d;
    for (int k = 0; k <= N; ++k) d[k] = cycle[k % 4];
    return compose(a, d);
}

template <int N>
Jet<N> tan(const Jet<N>& a) {
    const double c = std::cos(a.value());
    if (std::abs(c) < 1e-300) throw DomainError("tan at a pole");
    // derivatives of tan are polynomials in t = tan(a): P_{k+1}(t) = (1 + t^2) P_k'(t)
    const double t = std::tan(a.value());
    std::array<double, 8> poly{};  // coefficients of P_k in t
    poly[1] = 1.0;
    std::array<double, N + 1> d;
    for (int k = 0; k <= N; ++k) {
        double val = 0.0, tp = 1.0;
        for (double c0 : poly) {
            val += c0 * tp;
            tp *= t;
        }
        d[k] = val;
        std::array<double, 8> next{};
        for (int m = 1; m < 7; ++m) {
            const double dm = m * poly[m];  // coefficient of t^{m-1} in P'
            next[m - 1] += dm;
            if (m + 1 < 8) next[m + 1] += dm;
        }
        poly = next;
    }
    return compose(a, d);
}

template <int N>
Jet<N> sinh(const Jet<N>& a) {
    const double s = std::sinh(a.value()), c = std::cosh(a.value());
    std::array<double, N + 1> d;
    for (int k = 0; k <= N; ++k) d[k] = (k % 2 == 0) ? s : c;
    return compose(a, d);
}

template <int N>
Jet<N> cosh(const Jet<N>& a) {
    const double s = std::sinh(a.value()), c = std::cosh(a.value());
    std::array<double, N + 1> d;
    for (int k = 0; k <= N; ++k) d[k] = (k % 2 == 0) ? c : s;
    return compose(a, d);
}

template <int N>
Jet<N> atan(const Jet<N>& a) {
    // (d/du) atan u = 1 / (1 + u^2); its derivatives follow from the jet of
    // that rational function, so compose atan with itself one order down.
    static_assert(N <= 3, "atan is tabulated through order 3");
    const double u = a.value();
    const double q = 1.0 / (1.0 + u * u);
    std::array<double, 4> full{std::atan(u), q, -2.0 * u * q * q, (6.0 * u * u - 2.0) * q * q * q};
    std::array<double, N + 1> d;
    for (int k = 0; k <= N; ++k) d[k] = full[k];
    return compose(a, d);
}

/// Polar angle of (x, y) with derivatives of the smooth branch through
/// the value returned by std::atan2.
template <int N>
Jet<N> atan2(const Jet<N>& y, const Jet<N>& x) {
    const double theta = std::atan2(y.value(), x.value());
    if (x.value() == 0.0 && y.value() == 0.0) throw DomainError("atan2 at the origin");
    Jet<N> r = (std::abs(x.value()) >= std::abs(y.value())) ? atan(y / x) : -atan(x / y);
    r.taylor(0, 0) = theta;
    return r;
}

template <int N>
Jet<N> acosh(const Jet<N>& a) {
    static_assert(N <= 3, "acosh is tabulated through order 3");
    const double u = a.value();
    if (!(u > 1.0)) throw DomainError("acosh needs argument > 1");
    const double s = u * u - 1.0;
    const double r = 1.0 / std::sqrt(s);
    std::array<double, 4> full{std::acosh(u), r, -u * r * r * r, (2.0 * u * u + 1.0) * r * r * r * r * r};
    std::array<double, N + 1> d;
    for (int k = 0; k <= N; ++k) d[k] = full[k];
    return compose(a, d);
}

} // namespace ricciflat
