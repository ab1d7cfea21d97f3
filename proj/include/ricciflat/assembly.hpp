#pragma once

/*
    Block metric on a (2 + 2n)-manifold built from a minimal graph:

        ds^2 = e^{2 Phi} g_ab dx^a dx^b + eps_1 g_ab dy_1^a dy_1^b + ... + eps_n g_ab dy_n^a dy_n^b

    with g = h / sqrt(rho) and

        e^{2 Phi} = e^{2 e0 phi} w1^{-2 m1} w2^{-2 m2} w1^{-2 n1} w2^{-2 n2} rho^{n1 + n2},
        m1 + m2 = 0,   n1 + n2 = (n - 1) / 2.
*/

#include <cmath>
#include <sstream>
#include <vector>

#include "curvature.hpp"
#include "errors.hpp"
#include "geometry2d.hpp"
#include "surfaces.hpp"

namespace ricciflat {

struct AssemblyConfig {
    int n = 1;
    std::vector<int> eps_blocks{1};
    double e0 = 0.0;
    double m1 = 0.0;
    double n1 = 0.0;

    double m2() const { return -m1; }
    double n2() const { return 0.5 * (n - 1) - n1; }
    int dimension() const { return 2 + 2 * n; }

    void validate() const {
        if (n < 1) throw Error("assembly: n must be positive");
        if (static_cast<int>(eps_blocks.size()) != n) {
            std::ostringstream os;
            os << "assembly: expected " << n << " block signs, got " << eps_blocks.size();
            throw Error(os.str());
        }
        for (int e : eps_blocks)
            if (e != 1 && e != -1) throw Error("assembly: block signs must be +1 or -1");
        if (!std::isfinite(e0) || !std::isfinite(m1) || !std::isfinite(n1)) throw Error("assembly: non-finite exponent");
    }
};

namespace detail {

inline bool is_integer(double v) { return v == std::floor(v); }

inline void check_base(double base, double expo, const char* what) {
    if (expo == 0.0) return;
    if (base == 0.0 || (!is_integer(expo) && base < 0.0)) {
        std::ostringstream os;
        os << "conformal factor: " << what << " = " << base << " raised to " << expo;
        throw DomainError(os.str(), "LOG_DOMAIN");
    }
}

inline double power_or_one(double base, double expo) { return expo == 0.0 ? 1.0 : std::pow(base, expo); }

template <int N>
Jet<N> power_or_one(const Jet<N>& base, double expo) {
    if (expo == 0.0) return Jet<N>::constant(1.0);
    return pow(base, expo);
}

} // namespace detail

/// e^{2 Phi} from pointwise values.  For n = 1 this is e^{2 psi}.
inline double conformal_factor(const TwoMetricSample& s, const AssemblyConfig& cfg, double phi_value) {
    const double ew1 = -2.0 * (cfg.m1 + cfg.n1);
    const double ew2 = -2.0 * (cfg.m2() + cfg.n2());
    const double er  = cfg.n1 + cfg.n2();
    detail::check_base(s.w1, ew1, "w1");
    detail::check_base(s.w2, ew2, "w2");
    detail::check_base(s.rho, er, "rho");
    return std::exp(2.0 * cfg.e0 * phi_value) * detail::power_or_one(s.w1, ew1) * detail::power_or_one(s.w2, ew2) *
           detail::power_or_one(s.rho, er);
}

/// Jet of e^{2 Phi} through second order.
inline Jet<2> conformal_factor(const SurfaceField& f, const AssemblyConfig& cfg) {
    const double ew1 = -2.0 * (cfg.m1 + cfg.n1);
    const double ew2 = -2.0 * (cfg.m2() + cfg.n2());
    const double er  = cfg.n1 + cfg.n2();
    detail::check_base(f.w1.value(), ew1, "w1");
    detail::check_base(f.w2.value(), ew2, "w2");
    detail::check_base(f.rho.value(), er, "rho");
    Jet<2> out = exp(truncate<2>(f.phi) * (2.0 * cfg.e0));
    out *= detail::power_or_one(f.w1, ew1);
    out *= detail::power_or_one(f.w2, ew2);
    out *= detail::power_or_one(f.rho, er);
    return out;
}

inline MetricJet assemble(const SurfaceField& f, const AssemblyConfig& cfg) {
    cfg.validate();
    const Jet<2> factor = conformal_factor(f, cfg);
    MetricJet m(cfg.dimension());
    m.point = f.point;
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            m.set(i, j, factor * f.g(i, j));
            for (int b = 0; b < cfg.n; ++b) {
                const int off = 2 + 2 * b;
                m.set(off + i, off + j, f.g(i, j) * static_cast<double>(cfg.eps_blocks[b]));
            }
        }
    return m;
}

inline MetricJet assemble(const SurfaceSpec& spec, const AssemblyConfig& cfg, Point p) {
    return assemble(surface_field(spec, p), cfg);
}

/// Component values only, as a field over the surface chart; feeds the
/// finite-difference oracle.
inline MetricField assembled_metric_field(const SurfaceSpec& spec, const AssemblyConfig& cfg) {
    return [spec, cfg](Point q) { return assemble(spec, cfg, q).g; };
}

inline int signature(const SurfaceSpec& spec, const AssemblyConfig& cfg, Point p) {
    return signature(assemble(spec, cfg, p).g);
}

/// Signature of the assembled space when S has signature `surface_signature`:
/// each of the 1 + n copies of g contributes it with its block sign.
inline int expected_signature(int surface_signature, const std::vector<int>& eps_blocks) {
    int s = 1;
    for (int e : eps_blocks) s += e;
    return surface_signature * s;
}

} // namespace ricciflat
