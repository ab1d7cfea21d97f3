#pragma once

// Finite-difference partials of plain double functions.  Independent of
// the jet arithmetic; used as the test oracle for it.

#include <cmath>
#include <functional>

namespace fd {

using Fn = std::function<double(double, double)>;

// Central weights for the k-th derivative on offsets -2..2.
inline void weights(int k, double h, double w[5]) {
    for (int i = 0; i < 5; ++i) w[i] = 0.0;
    switch (k) {
    case 0: w[2] = 1.0; break;
    case 1: w[1] = -0.5 / h; w[3] = 0.5 / h; break;
    case 2: w[1] = 1.0 / (h * h); w[2] = -2.0 / (h * h); w[3] = 1.0 / (h * h); break;
    case 3:
        w[0] = -0.5 / (h * h * h); w[1] = 1.0 / (h * h * h);
        w[3] = -1.0 / (h * h * h); w[4] = 0.5 / (h * h * h);
        break;
    }
}

/// d^i_x d^j_y f at (x, y), tensor-product stencil.
inline double partial(const Fn& f, double x, double y, int i, int j, double h) {
    double wx[5], wy[5];
    weights(i, h, wx);
    weights(j, h, wy);
    double acc = 0.0;
    for (int a = 0; a < 5; ++a) {
        if (wx[a] == 0.0) continue;
        for (int b = 0; b < 5; ++b) {
            if (wy[b] == 0.0) continue;
            acc += wx[a] * wy[b] * f(x + (a - 2) * h, y + (b - 2) * h);
        }
    }
    return acc;
}

/// Step suited to the total order: balances truncation against round-off.
inline double step_for(int order) {
    switch (order) {
    case 1: return 1e-5;
    case 2: return 1e-4;
    default: return 1e-3;
    }
}

} // namespace fd
