#pragma once

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "kslab/rational.hpp"

namespace kslab {

struct AllZeroRay : std::invalid_argument {
  AllZeroRay() : std::invalid_argument("ray has no nonzero component") {}
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A projective direction held as a primitive integer vector with the
// first nonzero component positive. Ray equality is ray identity.
struct Ray {
  std::vector<long long> components;

  auto operator<=>(const Ray&) const = default;
  std::size_t dimension() const { return components.size(); }
};

inline Ray canonical_ray(std::vector<long long> components) {
  long long g = 0;
  for (long long c : components) g = std::gcd(g, std::llabs(c));
  if (g == 0) throw AllZeroRay{};
  long long sign = 0;
  for (long long c : components) {
    if (c != 0) {
      sign = c > 0 ? 1 : -1;
      break;
    }
  }
  for (long long& c : components) c = c * sign / g;
  return Ray{std::move(components)};
}

inline Rational inner_product(const Ray& u, const Ray& v) {
  if (u.dimension() != v.dimension())
    throw DimensionMismatch("inner_product: dimensions differ");
  Integer acc = 0;
  for (std::size_t i = 0; i < u.components.size(); ++i)
    acc += Integer(u.components[i]) * v.components[i];
  return Rational(acc);
}

inline bool orthogonal(const Ray& u, const Ray& v) {
  return inner_product(u, v) == 0;
}

using Matrix = std::vector<std::vector<Rational>>;

inline Matrix zero_matrix(std::size_t n) {
  return Matrix(n, std::vector<Rational>(n, Rational(0)));
}

inline Matrix identity_matrix(std::size_t n) {
  Matrix m = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix out = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

// Rank-1 projector v v^T / (v.v) with exact rational entries.
struct Projector {
  Matrix entries;

  bool operator==(const Projector&) const = default;
  std::size_t dimension() const { return entries.size(); }
};

inline Projector projector_from_ray(const Ray& v) {
  const std::size_t n = v.dimension();
  const Rational norm = inner_product(v, v);
  Matrix m = zero_matrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = Rational(Integer(v.components[i]) * v.components[j]) / norm;
  return Projector{std::move(m)};
}

inline bool commutes(const Projector& p, const Projector& q) {
  if (p.dimension() != q.dimension())
    throw DimensionMismatch("commutes: dimensions differ");
  return mat_mul(p.entries, q.entries) == mat_mul(q.entries, p.entries);
}

inline bool sum_is_identity(const std::vector<Projector>& ps) {
  if (ps.empty()) throw std::invalid_argument("sum_is_identity: empty list");
  const std::size_t n = ps.front().dimension();
  Matrix sum = zero_matrix(n);
  for (const Projector& p : ps) {
    if (p.dimension() != n)
      throw DimensionMismatch("sum_is_identity: dimensions differ");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum[i][j] += p.entries[i][j];
  }
  return sum == identity_matrix(n);
}

inline std::string ray_to_string(const Ray& r) {
  std::string s = "(";
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(r.components[i]);
  }
  return s + ")";
}

}  // namespace kslab
