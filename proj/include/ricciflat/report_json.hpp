#pragma once

// JSON encodings of verification and curvature reports.  Key order is
// fixed (insertion order); see docs/report_schema.md.

#include <cmath>
#include <optional>

#include <json.hpp>

#include "curvature.hpp"
#include "verify.hpp"

namespace ricciflat {

using ordered_json = nlohmann::ordered_json;

inline ordered_json point_json(const std::optional<Point>& p) {
    if (!p || !std::isfinite(p->x) || !std::isfinite(p->y)) return nullptr;
    return ordered_json::array({p->x, p->y});
}

inline ordered_json number_json(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

inline ordered_json config_json(const AssemblyConfig& cfg) {
    ordered_json j;
    j["n"]          = cfg.n;
    j["eps_blocks"] = cfg.eps_blocks;
    j["e0"]         = cfg.e0;
    j["m1"]         = cfg.m1;
    j["m2"]         = cfg.m2();
    j["n1"]         = cfg.n1;
    j["n2"]         = cfg.n2();
    j["dimension"]  = cfg.dimension();
    return j;
}

inline ordered_json to_json(const VerificationReport& r) {
    ordered_json j;
    j["surface"]          = r.surface;
    j["config"]           = config_json(r.config);
    j["seed"]             = r.seed;
    j["points_requested"] = r.points_requested;
    j["points_evaluated"] = r.points_evaluated;
    j["points_skipped"]   = r.points_skipped;

    ordered_json skipped = ordered_json::array();
    for (const auto& s : r.skipped) skipped.push_back({{"point", point_json(s.point)}, {"reason", s.reason}});
    j["skipped"] = skipped;

    ordered_json checks = ordered_json::object();
    for (const auto& [name, c] : r.per_check) {
        ordered_json cj;
        cj["max_normalized_residual"] = number_json(c.max_normalized);
        cj["max_raw_residual"]        = number_json(c.max_raw);
        cj["worst_point"]             = point_json(c.worst);
        cj["evaluated"]               = c.evaluated;
        cj["skipped"]                 = c.skipped;
        checks[name]                  = cj;
    }
    j["per_check"] = checks;

    ordered_json ric;
    ric["max_abs"]        = number_json(r.ricci.max_abs);
    ric["max_normalized"] = number_json(r.ricci.max_normalized);
    ric["worst_point"]    = point_json(r.ricci.worst);
    j["ricci"]            = ric;

    j["signature"]          = r.signature ? ordered_json(*r.signature) : ordered_json(nullptr);
    j["signature_constant"] = r.signature_constant;

    if (r.oracle) {
        ordered_json o;
        o["step"]         = r.oracle->step;
        o["max_abs_diff"] = number_json(r.oracle->max_abs_diff);
        o["worst_point"]  = point_json(r.oracle->worst);
        o["evaluated"]    = r.oracle->evaluated;
        j["oracle"]       = o;
    } else {
        j["oracle"] = nullptr;
    }

    j["tolerances"]   = {{"ricci", r.ricci_tol}, {"identities", r.identity_tol}};
    j["pass"]         = r.pass;
    j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

inline ordered_json matrix_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(number_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

inline ordered_json to_json(const CurvatureReport& r, const MetricJet& m) {
    ordered_json j;
    j["point"]  = point_json(r.point);
    j["dim"]    = m.dim;
    j["metric"] = matrix_json(m.g);
    ordered_json gam = ordered_json::array();
    for (int a = 0; a < r.christoffel.dim; ++a) {
        Eigen::MatrixXd slice(r.christoffel.dim, r.christoffel.dim);
        for (int b = 0; b < r.christoffel.dim; ++b)
            for (int c = 0; c < r.christoffel.dim; ++c) slice(b, c) = r.christoffel(a, b, c);
        gam.push_back(matrix_json(slice));
    }
    j["christoffel"]      = gam;
    j["ricci"]            = matrix_json(r.ricci);
    j["scalar"]           = number_json(r.scalar);
    j["max_abs_ricci"]    = number_json(r.max_abs_ricci);
    j["normalized_ricci"] = number_json(r.normalized_ricci);
    return j;
}

} // namespace ricciflat
