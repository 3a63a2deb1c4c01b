// SPDX-License-Identifier: Apache-2.0
//
// Test-only helpers: a fixed-seed generator and independent finite-difference
// geometry computed straight from the embedding formulas.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace testing_support {

// splitmix64; fixed seeds keep property tests reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * (next() >> 11) * 0x1.0p-53; }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

 private:
  std::uint64_t state_;
};

inline Eigen::MatrixXcd random_matrix(Rng& rng, int n) {
  Eigen::MatrixXcd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return M;
}

inline Eigen::MatrixXcd random_hermitian(Rng& rng, int n) {
  const Eigen::MatrixXcd A = random_matrix(rng, n);
  return (A + A.adjoint()) / 2.0;
}

// Ellipsoid embedding on the normalized interval z in [-1, 1].
struct Embedding {
  double a1, a2, a3;
  Eigen::Vector3d operator()(double z, double t) const {
    const double r = std::sqrt(1.0 - z * z);
    return {a1 * r * std::cos(t), a2 * r * std::sin(t), a3 * z};
  }
};

// sqrt(g11 g22 - g12^2) from central differences of the embedding.
inline double fd_area_density(const Embedding& e, double z, double t, double h = 1e-5) {
  const Eigen::Vector3d dz = (e(z + h, t) - e(z - h, t)) / (2 * h);
  const Eigen::Vector3d dt = (e(z, t + h) - e(z, t - h)) / (2 * h);
  const double g11 = dz.dot(dz), g22 = dt.dot(dt), g12 = dz.dot(dt);
  return std::sqrt(g11 * g22 - g12 * g12);
}

// Laplace-Beltrami of a theta-independent f on a surface of revolution:
// (1/sqrt g) d/dz (sqrt g g^{zz} f'), all pieces by nested differences.
template <class F>
double fd_laplace_zonal(const Embedding& e, F f, double z, double h = 1e-4) {
  auto flux = [&](double s) {
    const double sg = fd_area_density(e, s, 0.0);
    const Eigen::Vector3d dz = (e(s + 1e-6, 0.0) - e(s - 1e-6, 0.0)) / 2e-6;
    const double fp = (f(s + 1e-6) - f(s - 1e-6)) / 2e-6;
    return sg / dz.dot(dz) * fp;
  };
  return (flux(z + h) - flux(z - h)) / (2 * h) / fd_area_density(e, z, 0.0);
}

inline std::vector<double> sorted_by_magnitude(std::vector<double> v) {
  std::sort(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  return v;
}

}  // namespace testing_support
