#pragma once

#include <complex>

namespace erbm {

// Planar points, tangents, normals and gradients are all carried as
// std::complex<double>; multiplication by i is the 90-degree rotation.
using Point = std::complex<double>;

inline double dot(Point a, Point b) { return a.real() * b.real() + a.imag() * b.imag(); }
inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double norm2(Point a) { return a.real() * a.real() + a.imag() * a.imag(); }

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

}  // namespace erbm
