#pragma once

/*
    Levi-Civita curvature of a metric that depends on the first two
    coordinates only.

    Conventions:
        Gamma^a_{bc} = 1/2 g^{ad} (d_b g_{dc} + d_c g_{db} - d_d g_{bc})
        R^a_{bcd}    = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
                       + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
        R_{bd}       = R^a_{bad},   R = g^{bd} R_{bd}
    With these the round sphere of radius a has R = 2 / a^2.

    Derivatives in coordinates 2..dim-1 are identically zero; the loops
    below only run the derivative index over {0, 1}.
*/

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "jet.hpp"
#include "surfaces.hpp"

namespace ricciflat {

inline constexpr int kDerivDirs = 2;

/// Metric components with exact first and second derivatives along x^1, x^2.
struct MetricJet {
    int dim = 0;
    Eigen::MatrixXd g;
    std::array<Eigen::MatrixXd, 2> d1;
    std::array<std::array<Eigen::MatrixXd, 2>, 2> d2;
    Point point;

    explicit MetricJet(int n = 0) : dim(n), g(Eigen::MatrixXd::Zero(n, n)) {
        for (int e = 0; e < 2; ++e) {
            d1[e] = Eigen::MatrixXd::Zero(n, n);
            for (int f = 0; f < 2; ++f) d2[e][f] = Eigen::MatrixXd::Zero(n, n);
        }
    }

    /// Fills component (i, j) and its mirror from a jet of order >= 2.
    template <int N>
    void set(int i, int j, const Jet<N>& c) {
        static_assert(N >= 2, "curvature needs second derivatives");
        const double dx  = c.partial(1, 0), dy = c.partial(0, 1);
        const double dxx = c.partial(2, 0), dxy = c.partial(1, 1), dyy = c.partial(0, 2);
        for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
            g(a, b)        = c.value();
            d1[0](a, b)    = dx;
            d1[1](a, b)    = dy;
            d2[0][0](a, b) = dxx;
            d2[0][1](a, b) = dxy;
            d2[1][0](a, b) = dxy;
            d2[1][1](a, b) = dyy;
        }
    }
};

/// Gamma^a_{bc}, stored densely.
struct Christoffel {
    int dim = 0;
    std::vector<double> data;

    explicit Christoffel(int n = 0) : dim(n), data(static_cast<std::size_t>(n) * n * n, 0.0) {}

    double& operator()(int a, int b, int c) { return data[(a * dim + b) * dim + c]; }
    double operator()(int a, int b, int c) const { return data[(a * dim + b) * dim + c]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data) m = std::max(m, std::abs(v));
        return m;
    }
};

struct CurvatureReport {
    Christoffel christoffel;
    Eigen::MatrixXd ricci;
    double scalar = 0.0;
    double max_abs_ricci = 0.0;
    /// max|R_ab| / (1 + max|d^2 g| + max|Gamma|^2)
    double normalized_ricci = 0.0;
    Point point;
};

namespace detail {

inline Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& g) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(g);
    if (!(lu.rcond() > 1e-14)) throw SingularMetric("metric is not invertible");
    return lu.inverse();
}

struct Connection {
    Eigen::MatrixXd ginv;
    Christoffel gamma;
    // dgamma[e] = d_e Gamma^a_{bc} for e in {0, 1}
    std::array<Christoffel, 2> dgamma;
};

inline Connection connection(const MetricJet& m) {
    const int n = m.dim;
    Connection c{checked_inverse(m.g), Christoffel(n), {Christoffel(n), Christoffel(n)}};

    auto dg = [&](int e, int i, int j) { return e < kDerivDirs ? m.d1[e](i, j) : 0.0; };
    auto ddg = [&](int e, int f, int i, int j) { return (e < kDerivDirs && f < kDerivDirs) ? m.d2[e][f](i, j) : 0.0; };

    // lowered symbols Gamma_{d,bc} and their x-derivatives
    Christoffel low(n);
    std::array<Christoffel, 2> dlow{Christoffel(n), Christoffel(n)};
    for (int d = 0; d < n; ++d)
        for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc) {
                low(d, b, cc) = 0.5 * (dg(b, d, cc) + dg(cc, d, b) - dg(d, b, cc));
                for (int e = 0; e < kDerivDirs; ++e)
                    dlow[e](d, b, cc) = 0.5 * (ddg(e, b, d, cc) + ddg(e, cc, d, b) - ddg(e, d, b, cc));
            }

    std::array<Eigen::MatrixXd, 2> dginv;
    for (int e = 0; e < kDerivDirs; ++e) dginv[e] = -c.ginv * m.d1[e] * c.ginv;

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc) {
                double s = 0.0;
                std::array<double, 2> ds{0.0, 0.0};
                for (int d = 0; d < n; ++d) {
                    s += c.ginv(a, d) * low(d, b, cc);
                    for (int e = 0; e < kDerivDirs; ++e)
                        ds[e] += dginv[e](a, d) * low(d, b, cc) + c.ginv(a, d) * dlow[e](d, b, cc);
                }
                c.gamma(a, b, cc) = s;
                for (int e = 0; e < kDerivDirs; ++e) c.dgamma[e](a, b, cc) = ds[e];
            }
    return c;
}

inline double max_second_derivative(const MetricJet& m) {
    double mx = 0.0;
    for (const auto& row : m.d2)
        for (const auto& d : row) mx = std::max(mx, d.cwiseAbs().maxCoeff());
    return mx;
}

} // namespace detail

inline Christoffel christoffel(const MetricJet& m) { return detail::connection(m).gamma; }

/// Full Riemann tensor R^a_{bcd}, flattened as ((a*n + b)*n + c)*n + d.
inline std::vector<double> riemann(const MetricJet& m) {
    const int n   = m.dim;
    const auto cn = detail::connection(m);
    auto dG = [&](int e, int a, int b, int c) { return e < kDerivDirs ? cn.dgamma[e](a, b, c) : 0.0; };
    std::vector<double> r(static_cast<std::size_t>(n) * n * n * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double s = dG(c, a, d, b) - dG(d, a, c, b);
                    for (int e = 0; e < n; ++e) s += cn.gamma(a, c, e) * cn.gamma(e, d, b) - cn.gamma(a, d, e) * cn.gamma(e, c, b);
                    r[((a * n + b) * n + c) * n + d] = s;
                }
    return r;
}

inline CurvatureReport ricci(const MetricJet& m) {
    const int n   = m.dim;
    const auto cn = detail::connection(m);
    CurvatureReport rep{cn.gamma, Eigen::MatrixXd::Zero(n, n), 0.0, 0.0, 0.0, m.point};
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
            double s = 0.0;
            for (int a = 0; a < kDerivDirs; ++a) s += cn.dgamma[a](a, d, b);
            if (d < kDerivDirs)
                for (int a = 0; a < n; ++a) s -= cn.dgamma[d](a, a, b);
            for (int a = 0; a < n; ++a)
                for (int e = 0; e < n; ++e) s += cn.gamma(a, a, e) * cn.gamma(e, d, b) - cn.gamma(a, d, e) * cn.gamma(e, a, b);
            rep.ricci(b, d) = s;
        }
    rep.scalar        = (cn.ginv.cwiseProduct(rep.ricci)).sum();
    rep.max_abs_ricci = rep.ricci.cwiseAbs().maxCoeff();
    const double gmax = cn.gamma.max_abs();
    rep.normalized_ricci = rep.max_abs_ricci / (1.0 + detail::max_second_derivative(m) + gmax * gmax);
    return rep;
}

using MetricField = std::function<Eigen::MatrixXd(Point)>;

namespace detail {

// Christoffel symbols from central differences of the components.
inline Christoffel christoffel_fd(const MetricField& field, Point p, double h) {
    const Eigen::MatrixXd g = field(p);
    const int n             = static_cast<int>(g.rows());
    const Eigen::MatrixXd gi = checked_inverse(g);
    std::vector<Eigen::MatrixXd> dg(n, Eigen::MatrixXd::Zero(n, n));
    dg[0] = (field({p.x + h, p.y}) - field({p.x - h, p.y})) / (2.0 * h);
    if (n > 1) dg[1] = (field({p.x, p.y + h}) - field({p.x, p.y - h})) / (2.0 * h);
    Christoffel gam(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                double s = 0.0;
                for (int d = 0; d < n; ++d) s += gi(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
                gam(a, b, c) = 0.5 * s;
            }
    return gam;
}

} // namespace detail

/// Finite-difference Ricci tensor: Christoffel symbols from central
/// differences of the metric, their derivatives from central differences of
/// those.  Second-order accurate in `step`; shares no code with ricci().
inline Eigen::MatrixXd ricci_fd(const MetricField& field, Point p, double step) {
    const Christoffel gam = detail::christoffel_fd(field, p, step);
    const int n           = gam.dim;
    std::array<Christoffel, 2> dgam{Christoffel(n), Christoffel(n)};
    const Christoffel xp = detail::christoffel_fd(field, {p.x + step, p.y}, step);
    const Christoffel xm = detail::christoffel_fd(field, {p.x - step, p.y}, step);
    const Christoffel yp = detail::christoffel_fd(field, {p.x, p.y + step}, step);
    const Christoffel ym = detail::christoffel_fd(field, {p.x, p.y - step}, step);
    for (std::size_t k = 0; k < gam.data.size(); ++k) {
        dgam[0].data[k] = (xp.data[k] - xm.data[k]) / (2.0 * step);
        dgam[1].data[k] = (yp.data[k] - ym.data[k]) / (2.0 * step);
    }
    auto dG = [&](int e, int a, int b, int c) { return e < 2 ? dgam[e](a, b, c) : 0.0; };
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
                s += dG(a, a, d, b) - dG(d, a, a, b);
                for (int e = 0; e < n; ++e) s += gam(a, a, e) * gam(e, d, b) - gam(a, d, e) * gam(e, a, b);
            }
            ric(b, d) = s;
        }
    return ric;
}

/// max_b |g^{ac} nabla_c (R_ab - R g_ab / 2)| with the outer derivative taken
/// by central differences of the exact Einstein tensor.  Diagnostic only.
inline double bianchi_residual(const std::function<MetricJet(Point)>& field, Point p, double step) {
    auto einstein = [&](Point q) {
        const MetricJet m = field(q);
        const auto rep    = ricci(m);
        return Eigen::MatrixXd(rep.ricci - 0.5 * rep.scalar * m.g);
    };
    const MetricJet m     = field(p);
    const int n           = m.dim;
    const auto cn         = detail::connection(m);
    const Eigen::MatrixXd G = einstein(p);
    std::array<Eigen::MatrixXd, 2> dG{(einstein({p.x + step, p.y}) - einstein({p.x - step, p.y})) / (2.0 * step),
                                      (einstein({p.x, p.y + step}) - einstein({p.x, p.y - step})) / (2.0 * step)};
    double worst = 0.0;
    for (int b = 0; b < n; ++b) {
        double div = 0.0;
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                double cov = c < 2 ? dG[c](a, b) : 0.0;
                for (int e = 0; e < n; ++e) cov -= cn.gamma(e, c, a) * G(e, b) + cn.gamma(e, c, b) * G(a, e);
                div += cn.ginv(a, c) * cov;
            }
        worst = std::max(worst, std::abs(div));
    }
    return worst;
}

/// (#positive - #negative) eigenvalues; an eigenvalue within 1e-10 of zero
/// (relative to the largest) means the point is degenerate.
inline int signature(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const auto& ev     = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    int sig            = 0;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i]) < 1e-10 * scale) throw SingularMetric("metric has a (near-)zero eigenvalue");
        sig += ev[i] > 0.0 ? 1 : -1;
    }
    return sig;
}

} // namespace ricciflat
