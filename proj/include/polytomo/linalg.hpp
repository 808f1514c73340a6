#pragma once

#include "polytomo/common.hpp"

#include <array>

namespace polytomo {

struct Vec2 {
    real x{0}, y{0};

    Vec2() = default;
    Vec2(real a, real b) : x(a), y(b) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(real s) const { return {x * s, y * s}; }
    Vec2 operator/(real s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    real& operator[](int i) { return i == 0 ? x : y; }
    real operator[](int i) const { return i == 0 ? x : y; }
};

inline Vec2 operator*(real s, Vec2 v) { return v * s; }
inline real dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline real norm(Vec2 a) { return std::sqrt(dot(a, a)); }

// Symmetric 2x2 matrix (a metric block, a Hessian, ...).
struct Mat2 {
    real a11{0}, a12{0}, a22{0};

    static Mat2 identity() { return {1, 0, 1}; }

    real operator()(int i, int j) const {
        if (i == 0 && j == 0) return a11;
        if (i == 1 && j == 1) return a22;
        return a12;
    }

    Mat2 operator+(Mat2 o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
    Mat2 operator-(Mat2 o) const { return {a11 - o.a11, a12 - o.a12, a22 - o.a22}; }
    Mat2 operator*(real s) const { return {a11 * s, a12 * s, a22 * s}; }

    real det() const { return a11 * a22 - a12 * a12; }
    real trace() const { return a11 + a22; }

    Mat2 inverse() const {
        const real d = det();
        if (!(std::abs(d) > 0)) throw definiteness_error("Mat2: singular matrix");
        return {a22 / d, -a12 / d, a11 / d};
    }

    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y}; }

    real quad(Vec2 v) const { return v.x * (a11 * v.x + a12 * v.y) + v.y * (a12 * v.x + a22 * v.y); }

    // Smaller eigenvalue of the symmetric matrix.
    real eig_min() const {
        const real tr = trace(), dd = det();
        const real disc = std::sqrt(std::max<real>(0, tr * tr / 4 - dd));
        return tr / 2 - disc;
    }
};

inline Mat2 operator*(real s, Mat2 m) { return m * s; }

// Bilinear (not sesquilinear) extension of a symmetric form to complex
// vectors; this is the <zeta,eta>_g convention used throughout for complex
// phases.
struct CVec2 {
    cplx x{0}, y{0};
};

inline cplx bilinear(const Mat2& g, CVec2 a, CVec2 b) {
    return a.x * (g.a11 * b.x + g.a12 * b.y) + a.y * (g.a12 * b.x + g.a22 * b.y);
}

}  // namespace polytomo
