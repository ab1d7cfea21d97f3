#pragma once

/*
    Geometry of a graph surface S0 (metric h = g0 + eps dphi dphi) and of the
    conformally related surface S (metric g = h / sqrt(rho)), together with
    the residuals of the identities that hold on minimal graphs.

    Indices of phi-derivatives are raised with the constant metric g0.
*/

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "curvature.hpp"
#include "errors.hpp"
#include "jet.hpp"
#include "mat2.hpp"
#include "surfaces.hpp"

namespace ricciflat {

/// Factor mapping the curvature engine's scalar onto the R used by the
/// surface identities.  Pinned by the calibration test in test_geometry2d.
inline constexpr double kScalarConvention = 1.0;

/// Jet-valued fields of S0 and S at one point.  Everything that the
/// identities differentiate twice is carried as an order-2 jet.
struct SurfaceField {
    Point point;
    AmbientMetric ambient;
    Jet3 phi;
    std::array<Jet<2>, 2> grad;                // phi_{,mu}
    Mat2<Jet<1>> hess;                         // phi_{,mu nu}
    Mat2<Jet<2>> h, h_inv, g, g_inv;
    Jet<2> rho, sqrt_rho;
    Jet<2> w1, w2, xi1, xi2;
};

inline SurfaceField surface_field(const Jet3& phi, const AmbientMetric& amb, Point p = {}) {
    SurfaceField f;
    f.point   = p;
    f.ambient = amb;
    f.phi     = phi;
    f.grad    = {derivative(phi, Axis::x), derivative(phi, Axis::y)};
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) f.hess(m, n) = derivative(f.grad[m], n == 0 ? Axis::x : Axis::y);

    const Mat2<double> g0 = amb.g0(), g0i = amb.g0_inv();
    const double eps      = amb.eps;
    Jet<2> rho            = Jet<2>::constant(1.0);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
            f.h(m, n) = f.grad[m] * f.grad[n] * eps + g0(m, n);
            rho += f.grad[m] * f.grad[n] * (eps * g0i(m, n));
        }
    if (!(rho.value() > 0.0)) throw DomainError("rho <= 0 at sample point", "RHO_NONPOSITIVE");
    f.rho      = rho;
    f.sqrt_rho = sqrt(rho);

    // h^{mu nu} = g0^{mu nu} - (eps / rho) phi^mu phi^nu
    std::array<Jet<2>, 2> up;
    for (int m = 0; m < 2; ++m) up[m] = f.grad[0] * g0i(m, 0) + f.grad[1] * g0i(m, 1);
    const Jet<2> inv_rho = reciprocal(rho);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) f.h_inv(m, n) = g0i(m, n) - up[m] * up[n] * inv_rho * eps;

    const Jet<2> inv_sqrt = reciprocal(f.sqrt_rho);
    f.g     = f.h * inv_sqrt;
    f.g_inv = f.h_inv * f.sqrt_rho;
    f.w1    = f.h(0, 0);
    f.w2    = f.h(1, 1);
    f.xi1   = f.g_inv(0, 0);
    f.xi2   = f.g_inv(1, 1);
    return f;
}

inline SurfaceField surface_field(const SurfaceSpec& spec, Point p) {
    return surface_field(spec.jet_at(p), spec.ambient, p);
}

/// Pointwise values of every quantity defined on S0 and S.
struct TwoMetricSample {
    Mat2<double> h, h_inv, g, g_inv, r;
    double rho = 0.0;
    double K = 0.0, H = 0.0, lambda0 = 0.0;
    double xi1 = 0.0, xi2 = 0.0, w1 = 0.0, w2 = 0.0;
    double psi0 = 0.0;
};

namespace detail {

inline Mat2<double> values(const Mat2<Jet<2>>& m) {
    return map(m, [](const Jet<2>& j) { return j.value(); });
}

inline Mat2<double> hessian_values(const SurfaceField& f) {
    return map(f.hess, [](const Jet<1>& j) { return j.value(); });
}

// phi^mu_nu = g0^{mu a} phi_{a nu}
inline Mat2<double> mixed_hessian(const SurfaceField& f) {
    return f.ambient.g0_inv() * hessian_values(f);
}

inline double lambda0(const SurfaceField& f) {
    const Mat2<double> mixed = mixed_hessian(f);
    // phi^{ab} phi_{ab} = tr(mixed * mixed) for symmetric g0
    return 0.5 * (trace(mixed * mixed) - trace(mixed) * trace(mixed));
}

inline double gaussian_K(const SurfaceField& f) {
    const Mat2<double> mixed = mixed_hessian(f);
    const double rho         = f.rho.value();
    return f.ambient.eps / (rho * rho) * (trace(mixed) * trace(mixed) - trace(mixed * mixed));
}

inline Mat2<double> ricci_two(const SurfaceField& f) {
    const Mat2<double> hess  = hessian_values(f);
    const Mat2<double> mixed = mixed_hessian(f);
    const Mat2<double> hinv  = values(f.h_inv);
    const double eps = f.ambient.eps, rho = f.rho.value();
    double lap = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) lap += hinv(m, n) * hess(m, n);
    const double drho[2] = {f.rho.partial(1, 0), f.rho.partial(0, 1)};
    Mat2<double> r;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
            // phi_{,m}^{a} phi_{,n a}
            const double quad = mixed(0, m) * hess(n, 0) + mixed(1, m) * hess(n, 1);
            r(m, n) = eps / rho * lap * hess(m, n) - eps / rho * quad + drho[m] * drho[n] / (4.0 * rho * rho);
        }
    return r;
}

inline Axis axis_of(int i) { return i == 0 ? Axis::x : Axis::y; }

} // namespace detail

inline TwoMetricSample sample(const SurfaceField& f) {
    TwoMetricSample s;
    s.h       = detail::values(f.h);
    s.h_inv   = detail::values(f.h_inv);
    s.g       = detail::values(f.g);
    s.g_inv   = detail::values(f.g_inv);
    s.rho     = f.rho.value();
    s.r       = detail::ricci_two(f);
    s.K       = detail::gaussian_K(f);
    s.lambda0 = detail::lambda0(f);
    double tr = 0.0;
    const Mat2<double> hess = detail::hessian_values(f);
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) tr += s.h_inv(m, n) * hess(m, n);
    s.H    = tr / std::sqrt(s.rho);
    s.xi1  = f.xi1.value();
    s.xi2  = f.xi2.value();
    s.w1   = f.w1.value();
    s.w2   = f.w2.value();
    s.psi0 = -0.25 * std::log(s.rho);
    return s;
}

inline TwoMetricSample sample(const SurfaceSpec& spec, Point p) { return sample(surface_field(spec, p)); }

inline double gaussian_K(const SurfaceSpec& spec, Point p) { return detail::gaussian_K(surface_field(spec, p)); }

inline Mat2<double> ricci_two(const SurfaceSpec& spec, Point p) { return detail::ricci_two(surface_field(spec, p)); }

/// Value of a Laplace-Beltrami operator together with the size of the
/// individual divergence terms it was summed from.
struct LaplaceValue {
    double value = 0.0;
    double scale = 0.0;
};

/// |det m|^{-1/2} d_a (|det m|^{1/2} m^{ab} d_b f), by jet propagation.
template <int N, int M>
LaplaceValue laplace_beltrami(const Mat2<Jet<N>>& metric, const Jet<M>& f) {
    static_assert(N >= 1 && M >= 2, "need first derivatives of the metric and second of f");
    const Mat2<Jet<1>> m = map(metric, [](const Jet<N>& j) { return truncate<1>(j); });
    Jet<1> d             = det(m);
    if (std::abs(d.value()) < 1e-300) throw SingularMetric("Laplace-Beltrami: singular metric");
    if (d.value() < 0.0) d = -d;
    const Jet<1> s          = sqrt(d);
    const Mat2<Jet<1>> minv = inverse(m);
    const Jet<1> df[2]      = {truncate<1>(derivative(f, Axis::x)), truncate<1>(derivative(f, Axis::y))};
    LaplaceValue out;
    for (int a = 0; a < 2; ++a) {
        const Jet<1> flux = s * (minv(a, 0) * df[0] + minv(a, 1) * df[1]);
        const double term = derivative(flux, detail::axis_of(a)).value() / s.value();
        out.value += term;
        out.scale = std::max(out.scale, std::abs(term));
    }
    return out;
}

/// The arbitrary constants of the log-harmonic identities.
struct CheckConstants {
    double a0 = 1.0, a1 = 1.0, a2 = 1.0, b1 = 1.0, b2 = -1.0;
};

struct CheckResult {
    double raw     = 0.0;  ///< max |residual component|
    double scale   = 0.0;  ///< max |constituent term|
    bool skipped   = false;
    std::string reason;

    /// Residual relative to its terms once they exceed unity, absolute below.
    double normalized() const { return std::abs(raw) / std::max(1.0, scale); }
};

using CheckMap = std::map<std::string, CheckResult>;

namespace detail {

// Collects a residual that is a sum of terms.
struct Residual {
    double raw   = 0.0;
    double scale = 0.0;

    void add(double residual, std::initializer_list<double> terms) {
        raw = std::max(raw, std::abs(residual));
        for (double t : terms) scale = std::max(scale, std::abs(t));
    }
    CheckResult result() const { return {raw, scale, false, {}}; }
};

template <class F>
CheckResult guarded(F&& f) {
    try {
        return f();
    } catch (const DomainError& e) {
        return {0.0, 0.0, true, e.code()};
    } catch (const SingularMetric&) {
        return {0.0, 0.0, true, "NEAR_SINGULAR"};
    }
}

// g^{ab} tr[(d_a g^{-1}) d_b g]
inline double sigma_trace(const SurfaceField& f) {
    std::array<Mat2<double>, 2> dginv, dg;
    for (int a = 0; a < 2; ++a) {
        dginv[a] = map(f.g_inv, [&](const Jet<2>& j) { return derivative(j, axis_of(a)).value(); });
        dg[a]    = map(f.g, [&](const Jet<2>& j) { return derivative(j, axis_of(a)).value(); });
    }
    double t = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) t += f.g_inv(a, b).value() * trace(dginv[a] * dg[b]);
    return t;
}

} // namespace detail

/// Curvature of S from the generic engine; scalar already mapped through
/// kScalarConvention.
inline CurvatureReport conformal_curvature(const SurfaceField& f) {
    MetricJet m(2);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) m.set(i, j, f.g(i, j));
    m.point    = f.point;
    auto rep   = ricci(m);
    rep.scalar *= kScalarConvention;
    return rep;
}

/// R - sqrt(rho) r + 2 lap_h psi0 with the Laplacian of the induced metric
/// h.  This does not vanish on curved minimal graphs; kept as a diagnostic.
inline double scalar_relation_with_h_laplacian(const SurfaceField& f) {
    const auto rep  = conformal_curvature(f);
    const auto s    = sample(f);
    const Jet<2> psi0 = log(f.rho) * -0.25;
    double r_scalar = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) r_scalar += s.h_inv(a, b) * s.r(a, b);
    return rep.scalar - std::sqrt(s.rho) * r_scalar + 2.0 * laplace_beltrami(f.h, psi0).value;
}

/// Residuals of every surface identity at one point.  Keys:
///   P1 C1 C2a C2b P2a P2b CR P3a P3b P3c P4a P4b P4c MU CC1_psi1 CC1_mu XW P5 PHI-H
inline CheckMap check_identities(const SurfaceField& f, const CheckConstants& c = {}) {
    using detail::Residual;
    using detail::axis_of;
    CheckMap out;
    const TwoMetricSample s   = sample(f);
    const Mat2<double> g0     = f.ambient.g0();
    const Mat2<double> hess   = detail::hessian_values(f);
    const Mat2<double> mixed  = detail::mixed_hessian(f);
    const double eps          = f.ambient.eps;
    const double sqrt_rho     = std::sqrt(s.rho);

    out["P1"] = [&] {
        Residual r;
        for (int al = 0; al < 2; ++al)
            for (int mu = 0; mu < 2; ++mu)
                for (int be = 0; be < 2; ++be)
                    for (int ga = 0; ga < 2; ++ga) {
                        const double t1 = hess(al, mu) * hess(be, ga);
                        const double t2 = hess(al, be) * hess(mu, ga);
                        const double t3 = s.lambda0 * (g0(al, mu) * g0(be, ga) - g0(al, be) * g0(ga, mu));
                        r.add(t1 - t2 + t3, {t1, t2, t3});
                    }
        return r.result();
    }();

    out["C1"] = [&] {
        Residual r;
        for (int mu = 0; mu < 2; ++mu)
            for (int nu = 0; nu < 2; ++nu) {
                const double t1 = mixed(0, mu) * hess(0, nu) + mixed(1, mu) * hess(1, nu);
                const double t2 = trace(mixed) * hess(mu, nu);
                const double t3 = s.lambda0 * g0(mu, nu);
                r.add(t1 - t2 - t3, {t1, t2, t3});
            }
        return r.result();
    }();

    out["C2a"] = [&] {
        Residual r;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) r.add(s.r(a, b) - 0.5 * s.K * s.h(a, b), {s.r(a, b), 0.5 * s.K * s.h(a, b)});
        return r.result();
    }();

    out["C2b"] = [&] {
        Residual r;
        const double t = 0.5 * eps * s.rho * s.rho * s.K;
        r.add(s.lambda0 + t, {s.lambda0, t});
        return r.result();
    }();

    out["P2a"] = [&] {
        Residual r;
        double total = 0.0;
        std::array<double, 2> terms{};
        for (int a = 0; a < 2; ++a) {
            const Jet<2> flux = f.sqrt_rho * (f.h_inv(a, 0) * f.grad[0] + f.h_inv(a, 1) * f.grad[1]);
            terms[a]          = derivative(flux, axis_of(a)).value();
            total += terms[a];
        }
        r.add(total, {terms[0], terms[1]});
        return r.result();
    }();

    out["P2b"] = [&] {
        Residual r;
        for (int b = 0; b < 2; ++b) {
            const double t0 = derivative(f.sqrt_rho * f.h_inv(0, b), Axis::x).value();
            const double t1 = derivative(f.sqrt_rho * f.h_inv(1, b), Axis::y).value();
            r.add(t0 + t1, {t0, t1});
        }
        return r.result();
    }();

    // Curvature of S from the generic engine.
    const CurvatureReport curv = conformal_curvature(f);
    const double R             = curv.scalar;
    const double T             = detail::sigma_trace(f);
    const Jet<2> psi0          = log(f.rho) * -0.25;
    const LaplaceValue lap_psi0 = laplace_beltrami(f.g, psi0);

    out["CR"] = [&] {
        Residual r;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double t = lap_psi0.value * s.g(a, b);
                r.add(curv.ricci(a, b) - s.r(a, b) + t, {curv.ricci(a, b), s.r(a, b), t, lap_psi0.scale * s.g(a, b)});
            }
        return r.result();
    }();

    out["P3a"] = [&] {
        Residual r;
        r.add(R + 0.25 * T, {R, 0.25 * T});
        return r.result();
    }();

    out["P3b"] = [&] {
        Residual r;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double t = 0.5 * (s.rho - 1.0) * s.r(a, b);
                r.add(curv.ricci(a, b) + t, {curv.ricci(a, b), t});
            }
        return r.result();
    }();

    out["P3c"] = [&] {
        Residual r;
        double r_scalar = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) r_scalar += s.h_inv(a, b) * s.r(a, b);
        const double t1 = sqrt_rho * r_scalar;
        const double t2 = 2.0 * lap_psi0.value;
        r.add(R - t1 + t2, {R, t1, t2, 2.0 * lap_psi0.scale});
        return r.result();
    }();

    // log-harmonic functions built from rho, xi and w
    const double bsum = c.b1 + c.b2;

    out["P4a"] = detail::guarded([&] {
        Residual r;
        const Jet<2> zeta = log(f.rho) * (0.5 * c.a0);
        const auto lap    = laplace_beltrami(f.g, zeta);
        const double t2 = c.a0 * R, t3 = c.a0 * sqrt_rho * s.K;
        r.add(lap.value - t2 + t3, {lap.value, lap.scale, t2, t3});
        return r.result();
    });

    auto psi1 = [&] { return log(f.xi1) * c.a1 + log(f.xi2) * c.a2; };
    auto psi2 = [&] { return log(f.w1) * c.b1 + log(f.w2) * c.b2; };
    auto mu   = [&] { return log(f.rho) * (0.5 * c.a0 * bsum) - psi2() * c.a0; };

    out["P4b"] = detail::guarded([&] {
        Residual r;
        const auto lap  = laplace_beltrami(f.g, psi1());
        const double t2 = (c.a1 + c.a2) * R;
        r.add(lap.value - t2, {lap.value, lap.scale, t2});
        return r.result();
    });

    out["P4c"] = detail::guarded([&] {
        Residual r;
        const auto lap  = laplace_beltrami(f.g, psi2());
        const double t2 = 2.0 * bsum * R, t3 = bsum * sqrt_rho * s.K;
        r.add(lap.value - t2 + t3, {lap.value, lap.scale, t2, t3});
        return r.result();
    });

    out["MU"] = detail::guarded([&] {
        Residual r;
        const auto lap  = laplace_beltrami(f.g, mu());
        const double t2 = c.a0 * bsum * R;
        r.add(lap.value + t2, {lap.value, lap.scale, t2});
        return r.result();
    });

    // lap sigma = -(c / 4) T
    out["CC1_psi1"] = detail::guarded([&] {
        Residual r;
        const auto lap  = laplace_beltrami(f.g, psi1());
        const double t2 = 0.25 * (c.a1 + c.a2) * T;
        r.add(lap.value + t2, {lap.value, lap.scale, t2});
        return r.result();
    });

    out["CC1_mu"] = detail::guarded([&] {
        Residual r;
        const auto lap  = laplace_beltrami(f.g, mu());
        const double t2 = -0.25 * c.a0 * bsum * T;
        r.add(lap.value + t2, {lap.value, lap.scale, t2});
        return r.result();
    });

    out["XW"] = [&] {
        Residual r;
        const double detg0 = f.ambient.det();
        const double t1 = s.w2 / (detg0 * sqrt_rho), t2 = s.w1 / (detg0 * sqrt_rho);
        r.add(s.xi1 - t1, {s.xi1, t1});
        r.add(s.xi2 - t2, {s.xi2, t2});
        return r.result();
    }();

    // d_a [g^{ab} g^{-1} d_b g]
    out["P5"] = [&] {
        Residual r;
        const Mat2<Jet<1>> gi = map(f.g_inv, [](const Jet<2>& j) { return truncate<1>(j); });
        Mat2<double> total;
        std::array<std::array<Mat2<double>, 2>, 2> parts;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const Mat2<Jet<1>> dg = map(f.g, [&](const Jet<2>& j) { return derivative(j, axis_of(b)); });
                const Mat2<Jet<1>> inner = (gi * dg) * gi(a, b);
                parts[a][b] = map(inner, [&](const Jet<1>& j) { return derivative(j, axis_of(a)).value(); });
                total       = total + parts[a][b];
            }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.add(total(i, j), {parts[0][0](i, j), parts[0][1](i, j), parts[1][0](i, j), parts[1][1](i, j)});
        return r.result();
    }();

    out["PHI-H"] = [&] {
        Residual r;
        const auto lap = laplace_beltrami(f.g, f.phi);
        r.add(lap.value, {lap.scale});
        return r.result();
    }();

    return out;
}

inline CheckMap check_identities(const SurfaceSpec& spec, Point p, const CheckConstants& c = {}) {
    return check_identities(surface_field(spec, p), c);
}

} // namespace ricciflat
