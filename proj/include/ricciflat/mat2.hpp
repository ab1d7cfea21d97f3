#pragma once

#include <array>

namespace ricciflat {

/// Dense 2x2 matrix over any ring-like scalar (double or Jet<N>).
template <class T>
struct Mat2 {
    std::array<std::array<T, 2>, 2> a{};

    T& operator()(int i, int j) { return a[i][j]; }
    const T& operator()(int i, int j) const { return a[i][j]; }

    static Mat2 from(T m00, T m01, T m10, T m11) {
        Mat2 r;
        r.a = {{{m00, m01}, {m10, m11}}};
        return r;
    }
};

template <class T>
T det(const Mat2<T>& m) {
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <class T>
T trace(const Mat2<T>& m) {
    return m(0, 0) + m(1, 1);
}

template <class T>
Mat2<T> inverse(const Mat2<T>& m) {
    const T inv_det = 1.0 / det(m);
    return Mat2<T>::from(m(1, 1) * inv_det, -m(0, 1) * inv_det, -m(1, 0) * inv_det, m(0, 0) * inv_det);
}

template <class T>
Mat2<T> operator*(const Mat2<T>& l, const Mat2<T>& r) {
    Mat2<T> out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = l(i, 0) * r(0, j) + l(i, 1) * r(1, j);
    return out;
}

template <class T, class S>
Mat2<T> operator*(const Mat2<T>& m, const S& s) {
    Mat2<T> out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = m(i, j) * s;
    return out;
}

template <class T>
Mat2<T> operator+(const Mat2<T>& l, const Mat2<T>& r) {
    Mat2<T> out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = l(i, j) + r(i, j);
    return out;
}

template <class T>
Mat2<T> operator-(const Mat2<T>& l, const Mat2<T>& r) {
    Mat2<T> out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = l(i, j) - r(i, j);
    return out;
}

/// Elementwise map, e.g. to take values or derivatives of a jet matrix.
template <class T, class F>
auto map(const Mat2<T>& m, F&& f) {
    using U = decltype(f(m(0, 0)));
    Mat2<U> out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = f(m(i, j));
    return out;
}

} // namespace ricciflat
