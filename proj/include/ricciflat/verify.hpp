#pragma once

// Sampling-based verification of an assembled metric: the surface identity
// suite, the Ricci tensor of the 2N-metric and its signature, at a
// reproducible set of admissible points.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "assembly.hpp"
#include "curvature.hpp"
#include "geometry2d.hpp"
#include "sampling.hpp"
#include "surfaces.hpp"

namespace ricciflat {

struct VerifyOptions {
    int samples          = 100;
    std::uint64_t seed   = 42;
    double ricci_tol     = 1e-7;
    double identity_tol  = 1e-9;
    bool oracle          = false;
    double oracle_step   = 1e-3;
    CheckConstants constants;
    unsigned threads     = 0;  ///< 0: hardware concurrency
};

struct SkippedPoint {
    Point point;
    std::string reason;
};

struct CheckSummary {
    double max_normalized = 0.0;
    double max_raw        = 0.0;
    std::optional<Point> worst;
    int evaluated = 0;
    int skipped   = 0;
};

struct RicciSummary {
    double max_abs        = 0.0;
    double max_normalized = 0.0;
    std::optional<Point> worst;
};

struct OracleSummary {
    double step         = 0.0;
    double max_abs_diff = 0.0;
    std::optional<Point> worst;
    int evaluated = 0;
};

struct VerificationReport {
    std::string surface;
    AssemblyConfig config;
    std::uint64_t seed   = 0;
    int points_requested = 0;
    int points_evaluated = 0;
    int points_skipped   = 0;
    std::vector<SkippedPoint> skipped;
    std::map<std::string, CheckSummary> per_check;
    RicciSummary ricci;
    std::optional<int> signature;
    bool signature_constant = true;
    std::optional<OracleSummary> oracle;
    double ricci_tol    = 0.0;
    double identity_tol = 0.0;
    bool pass           = false;
    std::int64_t wall_time_ms = 0;
};

namespace detail {

struct PointResult {
    Point point;
    std::optional<std::string> skip_reason;
    CheckMap checks;
    double ricci_abs  = 0.0;
    double ricci_norm = 0.0;
    int signature     = 0;
    std::optional<double> oracle_diff;
};

inline PointResult evaluate_point(const SurfaceSpec& spec, const AssemblyConfig& cfg, Point p, const VerifyOptions& opt) {
    PointResult r;
    r.point = p;
    try {
        const SurfaceField field = surface_field(spec, p);
        r.checks                 = check_identities(field, opt.constants);
        const MetricJet m        = assemble(field, cfg);
        const CurvatureReport rep = ricci(m);
        r.ricci_abs  = rep.max_abs_ricci;
        r.ricci_norm = rep.normalized_ricci;
        r.signature  = signature(m.g);
        if (opt.oracle) {
            try {
                const Eigen::MatrixXd fd = ricci_fd(assembled_metric_field(spec, cfg), p, opt.oracle_step);
                r.oracle_diff            = (fd - rep.ricci).cwiseAbs().maxCoeff();
            } catch (const Error&) {
                // stencil leaves the admissible set; no oracle value here
            }
        }
    } catch (const DomainError& e) {
        r.skip_reason = e.code();
    } catch (const SingularMetric&) {
        r.skip_reason = "NEAR_SINGULAR";
    } catch (const TooCloseToBoundary&) {
        r.skip_reason = "NEAR_SINGULAR";
    }
    return r;
}

inline double finite_or_inf(double v) { return std::isfinite(v) ? v : HUGE_VAL; }

} // namespace detail

/// Deterministic admissible sample points: Halton draws, inadmissible ones
/// re-drawn, at most 10x the requested count in total.
inline std::vector<Point> sample_points(const SurfaceSpec& spec, int count, std::uint64_t seed) {
    HaltonSampler sampler(spec.domain, seed);
    std::vector<Point> pts;
    const long budget = 10L * count;
    for (long draw = 0; draw < budget && static_cast<int>(pts.size()) < count; ++draw) {
        const Point p = sampler.next();
        if (spec.is_admissible(p)) pts.push_back(p);
    }
    return pts;
}

inline VerificationReport run_verification(const SurfaceSpec& spec, const AssemblyConfig& cfg, const VerifyOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    VerificationReport rep;
    rep.surface          = spec.name;
    rep.config           = cfg;
    rep.seed             = opt.seed;
    rep.points_requested = opt.samples;
    rep.ricci_tol        = opt.ricci_tol;
    rep.identity_tol     = opt.identity_tol;

    const std::vector<Point> pts = sample_points(spec, opt.samples, opt.seed);
    std::vector<detail::PointResult> results(pts.size());

    unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    workers          = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, pts.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < pts.size(); i += workers) results[i] = detail::evaluate_point(spec, cfg, pts[i], opt);
            });
    }

    // Points the sampler could not place count as skipped.
    for (int k = static_cast<int>(pts.size()); k < opt.samples; ++k) rep.skipped.push_back({{NAN, NAN}, "NEAR_SINGULAR"});

    using detail::finite_or_inf;
    if (opt.oracle) rep.oracle = OracleSummary{opt.oracle_step, 0.0, std::nullopt, 0};
    for (const auto& r : results) {
        if (r.skip_reason) {
            rep.skipped.push_back({r.point, *r.skip_reason});
            continue;
        }
        ++rep.points_evaluated;
        for (const auto& [name, res] : r.checks) {
            auto& sum = rep.per_check[name];
            if (res.skipped) {
                ++sum.skipped;
                continue;
            }
            ++sum.evaluated;
            const double nr = finite_or_inf(res.normalized());
            if (!sum.worst || nr > sum.max_normalized) {
                sum.max_normalized = nr;
                sum.worst          = r.point;
            }
            sum.max_raw = std::max(sum.max_raw, std::abs(res.raw));
        }
        rep.ricci.max_abs = std::max(rep.ricci.max_abs, finite_or_inf(r.ricci_abs));
        const double rn   = finite_or_inf(r.ricci_norm);
        if (!rep.ricci.worst || rn > rep.ricci.max_normalized) {
            rep.ricci.max_normalized = rn;
            rep.ricci.worst          = r.point;
        }
        if (!rep.signature) rep.signature = r.signature;
        else if (*rep.signature != r.signature) rep.signature_constant = false;
        if (rep.oracle && r.oracle_diff) {
            ++rep.oracle->evaluated;
            if (!rep.oracle->worst || *r.oracle_diff > rep.oracle->max_abs_diff) {
                rep.oracle->max_abs_diff = *r.oracle_diff;
                rep.oracle->worst        = r.point;
            }
        }
    }
    rep.points_skipped = static_cast<int>(rep.skipped.size());

    bool pass = rep.points_evaluated > 0 && rep.ricci.max_normalized < opt.ricci_tol;
    for (const auto& [name, sum] : rep.per_check)
        if (sum.evaluated > 0 && !(sum.max_normalized < opt.identity_tol)) pass = false;
    rep.pass = pass;

    rep.wall_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace ricciflat
