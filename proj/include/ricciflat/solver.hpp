#pragma once

/*
    Damped Newton solver for the Dirichlet problem of the explicit minimal
    surface equation

        [k2 + eps phi_y^2] phi_xx - 2 [k0 + eps phi_x phi_y] phi_xy + [k1 + eps phi_x^2] phi_yy = 0

    on a rectangle, discretised with second-order central differences
    (9-point stencil because of the mixed term).
*/

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "errors.hpp"
#include "jet.hpp"
#include "surfaces.hpp"

namespace ricciflat {

struct GridSpec {
    int nx = 3, ny = 3;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    double hx() const { return (x1 - x0) / (nx - 1); }
    double hy() const { return (y1 - y0) / (ny - 1); }
    double x(int i) const { return x0 + i * hx(); }
    double y(int j) const { return y0 + j * hy(); }
};

/// Nodal values, row-major with rows along y: values[j * nx + i] = phi(x_i, y_j).
struct GridSolution {
    GridSpec grid;
    std::vector<double> values;
    AmbientMetric ambient;
    std::vector<double> residual_history;
    bool converged = false;

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, GridSolution partial) : Error(what), solution(std::move(partial)) {}
    GridSolution solution;
};

using BoundaryData = std::function<double(Point)>;

struct SolverOptions {
    double tol   = 1e-10;
    int max_iter = 50;
};

namespace detail {

struct Stencil {
    double px, py, pxx, pyy, pxy;
};

inline Stencil stencil(const GridSolution& s, int i, int j) {
    const double hx = s.grid.hx(), hy = s.grid.hy();
    return {(s.at(i + 1, j) - s.at(i - 1, j)) / (2.0 * hx),
            (s.at(i, j + 1) - s.at(i, j - 1)) / (2.0 * hy),
            (s.at(i + 1, j) - 2.0 * s.at(i, j) + s.at(i - 1, j)) / (hx * hx),
            (s.at(i, j + 1) - 2.0 * s.at(i, j) + s.at(i, j - 1)) / (hy * hy),
            (s.at(i + 1, j + 1) - s.at(i + 1, j - 1) - s.at(i - 1, j + 1) + s.at(i - 1, j - 1)) / (4.0 * hx * hy)};
}

inline int unknown(const GridSpec& g, int i, int j) { return (j - 1) * (g.nx - 2) + (i - 1); }

inline Eigen::VectorXd residual(const GridSolution& s) {
    const auto& g = s.grid;
    const auto& a = s.ambient;
    Eigen::VectorXd r((g.nx - 2) * (g.ny - 2));
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            const Stencil st = stencil(s, i, j);
            r[unknown(g, i, j)] = (a.k2 + a.eps * st.py * st.py) * st.pxx - 2.0 * (a.k0 + a.eps * st.px * st.py) * st.pxy +
                                  (a.k1 + a.eps * st.px * st.px) * st.pyy;
        }
    return r;
}

inline Eigen::SparseMatrix<double> jacobian(const GridSolution& s) {
    const auto& g  = s.grid;
    const auto& a  = s.ambient;
    const double hx = g.hx(), hy = g.hy(), eps = a.eps;
    const int n    = (g.nx - 2) * (g.ny - 2);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(n) * 9);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            const Stencil st = stencil(s, i, j);
            const int row    = unknown(g, i, j);
            const double A = a.k2 + eps * st.py * st.py;
            const double B = a.k0 + eps * st.px * st.py;
            const double C = a.k1 + eps * st.px * st.px;
            const double dpx = -2.0 * eps * st.py * st.pxy + 2.0 * eps * st.px * st.pyy;
            const double dpy = 2.0 * eps * st.py * st.pxx - 2.0 * eps * st.px * st.pxy;
            auto put = [&](int ii, int jj, double v) {
                if (ii <= 0 || jj <= 0 || ii >= g.nx - 1 || jj >= g.ny - 1 || v == 0.0) return;
                trips.emplace_back(row, unknown(g, ii, jj), v);
            };
            put(i, j, -2.0 * A / (hx * hx) - 2.0 * C / (hy * hy));
            put(i + 1, j, A / (hx * hx) + dpx / (2.0 * hx));
            put(i - 1, j, A / (hx * hx) - dpx / (2.0 * hx));
            put(i, j + 1, C / (hy * hy) + dpy / (2.0 * hy));
            put(i, j - 1, C / (hy * hy) - dpy / (2.0 * hy));
            const double cross = -2.0 * B / (4.0 * hx * hy);
            put(i + 1, j + 1, cross);
            put(i - 1, j - 1, cross);
            put(i + 1, j - 1, -cross);
            put(i - 1, j + 1, -cross);
        }
    Eigen::SparseMatrix<double> J(n, n);
    J.setFromTriplets(trips.begin(), trips.end());
    return J;
}

inline void check_rho(const GridSolution& s) {
    const auto& a          = s.ambient;
    const Mat2<double> gi  = a.g0_inv();
    for (int j = 1; j < s.grid.ny - 1; ++j)
        for (int i = 1; i < s.grid.nx - 1; ++i) {
            const Stencil st = stencil(s, i, j);
            const double rho =
                1.0 + a.eps * (gi(0, 0) * st.px * st.px + 2.0 * gi(0, 1) * st.px * st.py + gi(1, 1) * st.py * st.py);
            if (!(rho > 0.0)) throw SingularJacobian("discrete rho is non-positive; the equation degenerates");
        }
}

} // namespace detail

/// Coons patch of the boundary data: exact on the four edges.
inline GridSolution initial_guess(const BoundaryData& boundary, const AmbientMetric& ambient, const GridSpec& grid) {
    GridSolution s;
    s.grid    = grid;
    s.ambient = ambient;
    s.values.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);
    const double c00 = boundary({grid.x0, grid.y0}), c10 = boundary({grid.x1, grid.y0});
    const double c01 = boundary({grid.x0, grid.y1}), c11 = boundary({grid.x1, grid.y1});
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i), y = grid.y(j);
            const double u = static_cast<double>(i) / (grid.nx - 1), v = static_cast<double>(j) / (grid.ny - 1);
            if (i == 0 || j == 0 || i == grid.nx - 1 || j == grid.ny - 1) {
                s.at(i, j) = boundary({x, y});
                continue;
            }
            const double edges = (1 - v) * boundary({x, grid.y0}) + v * boundary({x, grid.y1}) +
                                 (1 - u) * boundary({grid.x0, y}) + u * boundary({grid.x1, y});
            const double corners = (1 - u) * (1 - v) * c00 + u * (1 - v) * c10 + (1 - u) * v * c01 + u * v * c11;
            s.at(i, j) = edges - corners;
        }
    return s;
}

inline double max_norm(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Newton iteration with Armijo backtracking on 0.5 |F|^2 (halving at most
/// 20 times).  Throws NoConvergence with the last iterate when the budget
/// runs out or no step decreases the merit function.
inline GridSolution solve_minimal(const BoundaryData& boundary, const AmbientMetric& ambient, const GridSpec& grid,
                                  const SolverOptions& opt = {}) {
    if (grid.nx < 3 || grid.ny < 3) throw Error("solver: grid needs at least 3 nodes per direction");
    if (!(opt.tol > 0.0)) throw Error("solver: tolerance must be positive");
    ambient.validate();

    GridSolution s = initial_guess(boundary, ambient, grid);
    Eigen::VectorXd F = detail::residual(s);
    s.residual_history.push_back(max_norm(F));
    constexpr double kArmijo = 1e-4;

    for (int it = 0; it < opt.max_iter; ++it) {
        if (s.residual_history.back() < opt.tol) {
            s.converged = true;
            return s;
        }
        detail::check_rho(s);
        Eigen::SparseMatrix<double> J = detail::jacobian(s);
        J.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) throw SingularJacobian("solver: Jacobian factorisation failed");
        const Eigen::VectorXd step = lu.solve(-F);
        if (lu.info() != Eigen::Success || !step.allFinite()) throw SingularJacobian("solver: linear solve failed");

        const double merit = 0.5 * F.squaredNorm();
        double t           = 1.0;
        bool accepted      = false;
        GridSolution trial = s;
        Eigen::VectorXd Ft;
        for (int halving = 0; halving <= 20; ++halving, t *= 0.5) {
            for (int j = 1; j < grid.ny - 1; ++j)
                for (int i = 1; i < grid.nx - 1; ++i) trial.at(i, j) = s.at(i, j) + t * step[detail::unknown(grid, i, j)];
            Ft = detail::residual(trial);
            if (0.5 * Ft.squaredNorm() <= (1.0 - 2.0 * kArmijo * t) * merit) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            throw NoConvergence("solver: line search could not decrease the residual", s);
        }
        s.values = std::move(trial.values);
        F        = Ft;
        s.residual_history.push_back(max_norm(F));
    }
    if (s.residual_history.back() < opt.tol) {
        s.converged = true;
        return s;
    }
    throw NoConvergence("solver: iteration budget exhausted", s);
}

/// Jet of phi at the grid node nearest to p, from central differences.
/// Orders 1 and 2 (and the third-order stencils) are second-order accurate in h.
inline Jet3 grid_jets(const GridSolution& s, Point p) {
    const auto& g = s.grid;
    const int i   = static_cast<int>(std::lround((p.x - g.x0) / g.hx()));
    const int j   = static_cast<int>(std::lround((p.y - g.y0) / g.hy()));
    if (i < 2 || j < 2 || i > g.nx - 3 || j > g.ny - 3)
        throw TooCloseToBoundary("grid_jets: point is within two nodes of the boundary");
    const double hx = g.hx(), hy = g.hy();
    auto u = [&](int di, int dj) { return s.at(i + di, j + dj); };
    auto dxx = [&](int dj) { return (u(1, dj) - 2.0 * u(0, dj) + u(-1, dj)) / (hx * hx); };
    auto dyy = [&](int di) { return (u(di, 1) - 2.0 * u(di, 0) + u(di, -1)) / (hy * hy); };

    Jet3 jet;
    jet.set_partial(0, 0, u(0, 0));
    jet.set_partial(1, 0, (u(1, 0) - u(-1, 0)) / (2.0 * hx));
    jet.set_partial(0, 1, (u(0, 1) - u(0, -1)) / (2.0 * hy));
    jet.set_partial(2, 0, dxx(0));
    jet.set_partial(0, 2, dyy(0));
    jet.set_partial(1, 1, (u(1, 1) - u(1, -1) - u(-1, 1) + u(-1, -1)) / (4.0 * hx * hy));
    jet.set_partial(3, 0, (u(2, 0) - 2.0 * u(1, 0) + 2.0 * u(-1, 0) - u(-2, 0)) / (2.0 * hx * hx * hx));
    jet.set_partial(0, 3, (u(0, 2) - 2.0 * u(0, 1) + 2.0 * u(0, -1) - u(0, -2)) / (2.0 * hy * hy * hy));
    jet.set_partial(2, 1, (dxx(1) - dxx(-1)) / (2.0 * hy));
    jet.set_partial(1, 2, (dyy(1) - dyy(-1)) / (2.0 * hx));
    return jet;
}

/// Wraps a grid solution as a surface; phi is evaluated at the nearest node.
inline SurfaceSpec grid_surface(GridSolution sol, std::string name = "grid") {
    auto shared = std::make_shared<const GridSolution>(std::move(sol));
    const auto& g = shared->grid;
    SurfaceSpec s;
    s.name    = std::move(name);
    s.ambient = shared->ambient;
    // keep the rounding window of every admissible point two nodes inside
    s.domain  = {g.x0 + 2.0 * g.hx(), g.x1 - 2.0 * g.hx(), g.y0 + 2.0 * g.hy(), g.y1 - 2.0 * g.hy()};
    s.phi     = [shared](Point p) { return grid_jets(*shared, p); };
    return s;
}

// ----------------------------------------------------------------------------
// minsurf v1 text format

inline void write_minsurf(std::ostream& os, const GridSolution& s) {
    const auto& g = s.grid;
    const auto& a = s.ambient;
    os << std::setprecision(17);
    os << "minsurf v1 " << g.nx << ' ' << g.ny << ' ' << g.x0 << ' ' << g.x1 << ' ' << g.y0 << ' ' << g.y1 << ' ' << a.k1
       << ' ' << a.k2 << ' ' << a.k0 << ' ' << a.eps << '\n';
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) os << (i ? " " : "") << s.at(i, j);
        os << '\n';
    }
    os << "# converged=" << (s.converged ? "true" : "false") << " iterations=" << (s.residual_history.empty() ? 0 : s.residual_history.size() - 1)
       << '\n';
}

inline GridSolution read_minsurf(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error("minsurf: empty input");
    std::istringstream header(line);
    std::string magic, version;
    GridSolution s;
    auto& g = s.grid;
    auto& a = s.ambient;
    if (!(header >> magic >> version >> g.nx >> g.ny >> g.x0 >> g.x1 >> g.y0 >> g.y1 >> a.k1 >> a.k2 >> a.k0 >> a.eps) ||
        magic != "minsurf" || version != "v1")
        throw Error("minsurf: malformed header");
    if (g.nx < 3 || g.ny < 3) throw Error("minsurf: grid too small");
    a.validate();
    const std::size_t total = static_cast<std::size_t>(g.nx) * g.ny;
    s.values.reserve(total);
    s.converged = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] == '#') {
            if (line.find("converged=false") != std::string::npos) s.converged = false;
            continue;
        }
        std::istringstream row(line);
        double v;
        while (row >> v) s.values.push_back(v);
        if (!row.eof()) throw Error("minsurf: malformed value");
    }
    if (s.values.size() != total) throw Error("minsurf: wrong number of values");
    return s;
}

} // namespace ricciflat
