#pragma once

// Fourth-order central difference stencils over the 2n real coordinates
// x = (Re z_1, Im z_1, ..., Re z_n, Im z_n) of a point z in C^n, and the
// Wirtinger assembly d/dz = (d/dx - i d/dy) / 2, d/dzbar = (d/dx + i d/dy) / 2.
//
// The value type V only needs V + V and V * double (Eigen matrices, Complex).

#include <array>
#include <type_traits>
#include <vector>

#include "chernlab/tensor.hpp"

namespace chernlab::fd {

inline constexpr std::array<double, 4> kOffsets{-2.0, -1.0, 1.0, 2.0};
inline constexpr std::array<double, 4> kWeights{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};

// Largest real-coordinate displacement touched by nested_second().
inline constexpr double kNestedReach = 4.0;

inline ComplexVector shifted(const ComplexVector& z, int axis, double t) {
  ComplexVector w = z;
  const int i = axis / 2;
  if (axis % 2 == 0) {
    w(i) += Complex(t, 0.0);
  } else {
    w(i) += Complex(0.0, t);
  }
  return w;
}

template <class Fn>
using value_t = std::decay_t<std::invoke_result_t<const Fn&, const ComplexVector&>>;

// d f / d x_axis.
template <class Fn>
value_t<Fn> first(const Fn& f, const ComplexVector& z, int axis, double h) {
  value_t<Fn> acc = f(shifted(z, axis, kOffsets[0] * h)) * (kWeights[0] / h);
  for (std::size_t s = 1; s < kOffsets.size(); ++s) {
    acc = acc + f(shifted(z, axis, kOffsets[s] * h)) * (kWeights[s] / h);
  }
  return acc;
}

// d^2 f / d x_a d x_b by applying the first-derivative stencil twice.
template <class Fn>
value_t<Fn> nested_second(const Fn& f, const ComplexVector& z, int a, int b, double h) {
  auto inner = [&](const ComplexVector& w) -> value_t<Fn> { return first(f, w, b, h); };
  return first(inner, z, a, h);
}

// All d f / d x_a, a = 0..2n-1.
template <class Fn>
auto all_first(const Fn& f, const ComplexVector& z, double h) {
  using V = value_t<Fn>;
  const int d = 2 * static_cast<int>(z.size());
  std::vector<V> out;
  out.reserve(d);
  for (int a = 0; a < d; ++a) out.push_back(first(f, z, a, h));
  return out;
}

// Symmetric table of second real derivatives, out[a * 2n + b]; each unordered
// pair is computed once so the table is exactly symmetric.
template <class Fn>
auto all_second(const Fn& f, const ComplexVector& z, double h) {
  using V = value_t<Fn>;
  const int d = 2 * static_cast<int>(z.size());
  std::vector<V> out(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      out[a * d + b] = nested_second(f, z, a, b, h);
      if (b != a) out[b * d + a] = out[a * d + b];
    }
  }
  return out;
}

template <class V>
V wirtinger_dz(const std::vector<V>& d1, int i) {
  return (d1[2 * i] + d1[2 * i + 1] * Complex(0.0, -1.0)) * 0.5;
}

template <class V>
V wirtinger_dzbar(const std::vector<V>& d1, int j) {
  return (d1[2 * j] + d1[2 * j + 1] * Complex(0.0, 1.0)) * 0.5;
}

// d^2 / dz_i dzbar_j assembled from the real second-derivative table.
template <class V>
V wirtinger_ddbar(const std::vector<V>& d2, int n, int i, int j) {
  const int d = 2 * n;
  const int xi = 2 * i, yi = 2 * i + 1, xj = 2 * j, yj = 2 * j + 1;
  const V real_part = d2[xi * d + xj] + d2[yi * d + yj];
  const V imag_part = d2[xi * d + yj] + d2[yi * d + xj] * (-1.0);
  return (real_part + imag_part * Complex(0.0, 1.0)) * 0.25;
}

}  // namespace chernlab::fd
