#pragma once

#include <cstdint>
#include <random>

#include "surfaces.hpp"

namespace ricciflat {

/// Radical inverse of `index` in `base`.
inline double radical_inverse(std::uint64_t index, std::uint32_t base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

/// 2-D Halton sequence (bases 2, 3) with a seeded Cranley-Patterson
/// rotation, mapped onto a rectangle.  Same seed, same points, on every
/// platform: the shift uses the raw mt19937_64 output, not a distribution.
class HaltonSampler {
public:
    HaltonSampler(Rect domain, std::uint64_t seed) : domain_(domain) {
        std::mt19937_64 rng(seed);
        shift_x_ = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        shift_y_ = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }

    Point next() {
        ++index_;
        double u = radical_inverse(index_, 2) + shift_x_;
        double v = radical_inverse(index_, 3) + shift_y_;
        u -= static_cast<double>(u >= 1.0);
        v -= static_cast<double>(v >= 1.0);
        return {domain_.x_min + u * (domain_.x_max - domain_.x_min), domain_.y_min + v * (domain_.y_max - domain_.y_min)};
    }

private:
    Rect domain_;
    double shift_x_ = 0.0, shift_y_ = 0.0;
    std::uint64_t index_ = 0;
};

} // namespace ricciflat
