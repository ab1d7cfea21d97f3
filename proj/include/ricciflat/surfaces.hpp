#pragma once

// Minimal graph surfaces x^3 = phi(x^1, x^2) over a flat ambient 3-space
// ds^2 = g0_{mu nu} dx^mu dx^nu + eps (dx^3)^2.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"
#include "mat2.hpp"

namespace ricciflat {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Rect {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;

    bool contains(Point p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
};

/// Constant part g0 = [[k1, k0], [k0, k2]] of the ambient metric and the
/// sign eps of the graph direction.
struct AmbientMetric {
    double k1  = 1.0;
    double k2  = 1.0;
    double k0  = 0.0;
    int eps    = 1;

    double det() const { return k1 * k2 - k0 * k0; }

    void validate() const {
        if (eps != 1 && eps != -1) throw DomainError("ambient eps must be +1 or -1");
        if (det() == 0.0) throw DomainError("ambient metric g0 is singular");
    }

    Mat2<double> g0() const { return Mat2<double>::from(k1, k0, k0, k2); }
    Mat2<double> g0_inv() const { return inverse(g0()); }

    static AmbientMetric euclidean() { return {1.0, 1.0, 0.0, 1}; }
    static AmbientMetric lorentzian() { return {1.0, -1.0, 0.0, 1}; }
};

struct SurfaceSpec {
    std::string name;
    /// Order-3 jet of phi expanded at the given point.
    std::function<Jet3(Point)> phi;
    AmbientMetric ambient;
    Rect domain;
    std::function<bool(Point)> admissible;
    bool non_minimal = false;

    bool is_admissible(Point p) const { return domain.contains(p) && (!admissible || admissible(p)); }

    Jet3 jet_at(Point p) const {
        if (!is_admissible(p)) {
            std::ostringstream os;
            os << "point (" << p.x << ", " << p.y << ") is not admissible for surface " << name;
            throw InadmissiblePoint(os.str());
        }
        return phi(p);
    }
};

/// Distance kept from every singular locus of a catalog surface.
inline constexpr double kCatalogMargin = 0.1;

using SurfaceParams = std::map<std::string, double>;

namespace detail {

inline double param_or(const SurfaceParams& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

inline std::pair<Jet3, Jet3> seed(Point p) {
    return {Jet3::variable(Axis::x, p.x), Jet3::variable(Axis::y, p.y)};
}

} // namespace detail

inline SurfaceSpec make_plane(double a, double b, double c) {
    SurfaceSpec s;
    s.name    = "plane";
    s.phi     = [=](Point p) {
        auto [x, y] = detail::seed(p);
        return x * a + y * b + c;
    };
    s.ambient = AmbientMetric::euclidean();
    s.domain  = {-1.0, 1.0, -1.0, 1.0};
    return s;
}

/// phi = log(cos y) - log(cos x).
inline SurfaceSpec make_scherk() {
    SurfaceSpec s;
    s.name = "scherk";
    s.phi  = [](Point p) {
        auto [x, y] = detail::seed(p);
        return log(cos(y)) - log(cos(x));
    };
    s.ambient        = AmbientMetric::euclidean();
    const double lim = std::numbers::pi / 2.0 - kCatalogMargin;
    s.domain         = {-lim, lim, -lim, lim};
    return s;
}

/// phi = c * arctan(y / x) on the half plane x > margin.
inline SurfaceSpec make_helicoid(double c) {
    SurfaceSpec s;
    s.name = "helicoid";
    s.phi  = [=](Point p) {
        auto [x, y] = detail::seed(p);
        return atan2(y, x) * c;
    };
    s.ambient = AmbientMetric::euclidean();
    s.domain  = {kCatalogMargin, 2.0, -2.0, 2.0};
    return s;
}

/// Upper half of the catenoid r = cosh z: phi = arccosh(sqrt(x^2 + y^2)).
inline SurfaceSpec make_catenoid() {
    SurfaceSpec s;
    s.name = "catenoid";
    s.phi  = [](Point p) {
        auto [x, y] = detail::seed(p);
        return acosh(sqrt(x * x + y * y));
    };
    s.ambient    = AmbientMetric::euclidean();
    s.domain     = {-3.0, 3.0, -3.0, 3.0};
    s.admissible = [](Point p) { return std::hypot(p.x, p.y) > 1.0 + kCatalogMargin; };
    return s;
}

enum class WaveProfile { sinh, linear, cubic };

/// Profile F(u) of a Born-Infeld wave, as a jet.
inline Jet3 wave_profile(WaveProfile profile, double slope, const Jet3& u) {
    switch (profile) {
    case WaveProfile::sinh: return sinh(u);
    case WaveProfile::linear: return u * slope;
    case WaveProfile::cubic: return u + u * u * u * (1.0 / 3.0);
    }
    return u;
}

/// phi = F(x + sign * y) in the ambient g0 = diag(1, -1), eps = +1.  Every
/// such phi solves the minimal equation: rho is identically 1.
inline SurfaceSpec make_born_infeld_wave(int sign, WaveProfile profile = WaveProfile::sinh, double slope = 2.0) {
    SurfaceSpec s;
    s.name = sign > 0 ? "bi_wave_plus" : "bi_wave_minus";
    s.phi  = [=](Point p) {
        auto [x, y] = detail::seed(p);
        return wave_profile(profile, slope, x + y * static_cast<double>(sign));
    };
    s.ambient = AmbientMetric::lorentzian();
    s.domain  = {-1.0, 1.0, -1.0, 1.0};
    // w2 = F'(u)^2 - 1 must stay away from zero.
    s.admissible = [=](Point p) {
        const double u  = p.x + sign * p.y;
        const double df = wave_profile(profile, slope, Jet3::variable(Axis::x, u)).partial(1, 0);
        return std::abs(df * df - 1.0) > kCatalogMargin * kCatalogMargin;
    };
    return s;
}

/// phi = x^2: not minimal; negative control for the verification suite.
inline SurfaceSpec make_nonminimal_x2() {
    SurfaceSpec s;
    s.name = "nonminimal_x2";
    s.phi  = [](Point p) {
        auto [x, y] = detail::seed(p);
        return x * x + y * 0.0;
    };
    s.ambient     = AmbientMetric::euclidean();
    s.domain      = {-1.0, 1.0, -1.0, 1.0};
    s.non_minimal = true;
    return s;
}

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"plane",        "scherk",        "helicoid",     "catenoid",
                                                "bi_wave_plus", "bi_wave_minus", "nonminimal_x2"};
    return names;
}

/// Builds a catalog surface by name.  Recognised parameters:
///   plane: a, b, c        helicoid: c        bi_wave_*: profile (0 sinh,
///   1 linear, 2 cubic), slope (linear profile only)
inline std::optional<SurfaceSpec> find_surface(const std::string& name, const SurfaceParams& params = {}) {
    using detail::param_or;
    if (name == "plane")
        return make_plane(param_or(params, "a", 0.4), param_or(params, "b", -0.3), param_or(params, "c", 0.1));
    if (name == "scherk") return make_scherk();
    if (name == "helicoid") return make_helicoid(param_or(params, "c", 1.0));
    if (name == "catenoid") return make_catenoid();
    if (name == "bi_wave_plus" || name == "bi_wave_minus") {
        const int profile_id = static_cast<int>(param_or(params, "profile", 0.0));
        if (profile_id < 0 || profile_id > 2) return std::nullopt;
        return make_born_infeld_wave(name == "bi_wave_plus" ? 1 : -1, static_cast<WaveProfile>(profile_id),
                                     param_or(params, "slope", 2.0));
    }
    if (name == "nonminimal_x2") return make_nonminimal_x2();
    return std::nullopt;
}

inline std::vector<SurfaceSpec> catalog() {
    std::vector<SurfaceSpec> out;
    for (const auto& name : catalog_names()) out.push_back(*find_surface(name));
    return out;
}

/// Left-hand side of the explicit minimal-surface equation:
/// [k2 + eps phi_y^2] phi_xx - 2 [k0 + eps phi_x phi_y] phi_xy + [k1 + eps phi_x^2] phi_yy.
inline double minimal_residual(const Jet3& phi, const AmbientMetric& g) {
    const double px = phi.partial(1, 0), py = phi.partial(0, 1);
    const double pxx = phi.partial(2, 0), pxy = phi.partial(1, 1), pyy = phi.partial(0, 2);
    return (g.k2 + g.eps * py * py) * pxx - 2.0 * (g.k0 + g.eps * px * py) * pxy + (g.k1 + g.eps * px * px) * pyy;
}

inline double minimal_residual(const SurfaceSpec& spec, Point p) {
    return minimal_residual(spec.jet_at(p), spec.ambient);
}

/// H = rho^{-1/2} h^{mu nu} phi_{,mu nu}.
inline double mean_curvature(const SurfaceSpec& spec, Point p) {
    const Jet3 phi       = spec.jet_at(p);
    const auto& amb      = spec.ambient;
    const Mat2<double> gi = amb.g0_inv();
    const double grad[2] = {phi.partial(1, 0), phi.partial(0, 1)};
    double up[2];
    for (int m = 0; m < 2; ++m) up[m] = gi(m, 0) * grad[0] + gi(m, 1) * grad[1];
    const double rho = 1.0 + amb.eps * (up[0] * grad[0] + up[1] * grad[1]);
    if (!(rho > 0.0)) throw DomainError("rho <= 0: mean curvature undefined on the real branch", "RHO_NONPOSITIVE");
    const double hess[2][2] = {{phi.partial(2, 0), phi.partial(1, 1)}, {phi.partial(1, 1), phi.partial(0, 2)}};
    double trace = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) trace += (gi(m, n) - amb.eps / rho * up[m] * up[n]) * hess[m][n];
    return trace / std::sqrt(rho);
}

} // namespace ricciflat
