// SPDX-License-Identifier: Apache-2.0
#include "nclaplace/reference_oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nclaplace/errors.hpp"

namespace nclap {

namespace {

constexpr double kPi = 3.14159265358979323846;

void sort_entries(std::vector<ClassicalEntry>& e) {
  std::stable_sort(e.begin(), e.end(), [](const ClassicalEntry& a, const ClassicalEntry& b) {
    const double ma = std::abs(a.eigenvalue);
    const double mb = std::abs(b.eigenvalue);
    if (ma != mb) return ma < mb;
    return a.mode < b.mode;
  });
}

}  // namespace

std::string to_string(SpectrumSource s) { return s == SpectrumSource::analytic ? "analytic" : "sturm_liouville"; }

std::vector<double> ClassicalSpectrum::values() const {
  std::vector<double> v;
  for (const auto& e : entries) v.push_back(e.eigenvalue);
  return v;
}

std::vector<ReferenceCluster> ClassicalSpectrum::clusters(double tol) const {
  std::vector<ReferenceCluster> out;
  double weight = 0.0;
  for (const auto& e : entries) {
    if (!out.empty() && std::abs(e.eigenvalue - out.back().value) <= tol) {
      const double w = weight + e.multiplicity;
      out.back().value = (out.back().value * weight + e.eigenvalue * e.multiplicity) / w;
      out.back().multiplicity += e.multiplicity;
      weight = w;
    } else {
      out.push_back({e.eigenvalue, e.multiplicity});
      weight = e.multiplicity;
    }
  }
  return out;
}

ClassicalSpectrum analytic_sphere_spectrum(int k_max, double radius) {
  if (k_max < 0) throw ArgumentError("k_max must be nonnegative");
  if (!(radius > 0.0)) throw ArgumentError("radius must be positive");
  ClassicalSpectrum out;
  out.surface = "sphere";
  for (int k = 0; k <= k_max; ++k) {
    const double v = -static_cast<double>(k) * (k + 1) / (radius * radius);
    out.entries.push_back({v == 0.0 ? 0.0 : v, 2 * k + 1, SpectrumSource::analytic, k, 0.0});
  }
  return out;
}

std::vector<double> sturm_liouville_mode(const SurfaceDescriptor& s, int m, int cells, int how_many) {
  if (!s.is_revolution()) throw ArgumentError("the Sturm-Liouville oracle needs a surface of revolution");
  if (m < 0) throw ArgumentError("azimuthal mode must be nonnegative");
  if (cells < 4) throw ArgumentError("at least four cells are required");
  how_many = std::min(how_many, cells);
  if (how_many < 1) return {};

  // z = c - rho cos(phi) clusters cells at the poles where r vanishes.
  const double c = 0.5 * (s.interval().lo + s.interval().hi);
  const double rho = 0.5 * s.interval().length();
  const double slope = s.height_slope();
  const double dphi = kPi / cells;
  const double fd = 1e-6;

  auto r_of = [&](double phi) { return s.radius(c - rho * std::cos(phi)); };
  auto speed = [&](double phi) {
    const double lo = std::max(phi - fd, 0.0);
    const double hi = std::min(phi + fd, kPi);
    const double dr = (r_of(hi) - r_of(lo)) / (hi - lo);
    const double dh = slope * rho * std::sin(phi);
    return std::sqrt(dr * dr + dh * dh);
  };

  // face coefficients p = r / s at phi_{i+1/2}; p vanishes at both poles
  std::vector<double> p(cells + 1, 0.0);
  for (int i = 1; i < cells; ++i) {
    const double phi = i * dphi;
    p[i] = r_of(phi) / speed(phi);
  }
  std::vector<double> diag(cells), off(cells > 1 ? cells - 1 : 0);
  std::vector<double> w(cells);
  const double inv2 = 1.0 / (dphi * dphi);
  for (int i = 0; i < cells; ++i) {
    const double phi = (i + 0.5) * dphi;
    const double r = r_of(phi);
    const double sp = speed(phi);
    w[i] = r * sp;
    diag[i] = (p[i] + p[i + 1]) * inv2 + static_cast<double>(m) * m * sp / r;
  }
  for (int i = 0; i + 1 < cells; ++i) off[i] = -p[i + 1] * inv2;
  // symmetric form W^{-1/2} A W^{-1/2}
  for (int i = 0; i < cells; ++i) diag[i] /= w[i];
  for (int i = 0; i + 1 < cells; ++i) off[i] /= std::sqrt(w[i] * w[i + 1]);

  std::vector<double> eig(cells);
  std::vector<lapack_int> iblock(cells), isplit(cells);
  lapack_int found = 0;
  lapack_int nsplit = 0;
  const lapack_int info = LAPACKE_dstebz('I', 'E', cells, 0.0, 0.0, 1, how_many, 0.0, diag.data(), off.data(), &found,
                                         &nsplit, eig.data(), iblock.data(), isplit.data());
  if (info != 0) {
    std::ostringstream msg;
    msg << "dstebz failed with info " << info;
    throw ConvergenceError(msg.str());
  }
  std::vector<double> out(eig.begin(), eig.begin() + found);
  for (double& v : out) v = v == 0.0 ? 0.0 : -v;
  return out;
}

namespace {

std::vector<std::vector<double>> all_modes(const SurfaceDescriptor& s, int m_max, int cells, int count) {
  std::vector<std::vector<double>> modes;
  for (int m = 0; m <= m_max; ++m) modes.push_back(sturm_liouville_mode(s, m, cells, count));
  return modes;
}

ClassicalSpectrum merge(const SurfaceDescriptor& s, const std::vector<std::vector<double>>& modes,
                        const std::vector<std::vector<double>>& errors, int count) {
  ClassicalSpectrum out;
  out.surface = s.name();
  out.m_max = static_cast<int>(modes.size()) - 1;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    for (std::size_t j = 0; j < modes[m].size(); ++j) {
      out.entries.push_back(
          {modes[m][j], m == 0 ? 1 : 2, SpectrumSource::sturm_liouville, static_cast<int>(m), errors[m][j]});
    }
  }
  sort_entries(out.entries);
  if (out.entries.size() > static_cast<std::size_t>(count)) out.entries.resize(count);
  return out;
}

}  // namespace

ClassicalSpectrum revolution_spectrum(const SurfaceDescriptor& s, int m_max, int grid_points, int count) {
  if (m_max < 0) throw ArgumentError("m_max must be nonnegative");
  if (count < 1) throw ArgumentError("count must be at least 1");
  if (grid_points < 2 * count + 8) {
    std::ostringstream msg;
    msg << grid_points << " grid points cannot resolve " << count << " eigenvalues";
    throw ResolutionError(msg.str());
  }
  const auto fine = all_modes(s, m_max, grid_points, count + 1);
  const auto coarse = all_modes(s, m_max, grid_points / 2, count + 1);
  std::vector<std::vector<double>> errors(fine.size());
  for (std::size_t m = 0; m < fine.size(); ++m) {
    const auto& f = fine[m];
    errors[m].resize(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
      // second order: the fine error is a third of the coarse-fine difference
      const double err = j < coarse[m].size() ? std::abs(f[j] - coarse[m][j]) / 3.0 : 0.0;
      errors[m][j] = err;
      double spacing = std::numeric_limits<double>::infinity();
      if (j > 0) spacing = std::min(spacing, std::abs(f[j] - f[j - 1]));
      if (j + 1 < f.size()) spacing = std::min(spacing, std::abs(f[j + 1] - f[j]));
      if (j + 1 < f.size() && err > 0.1 * spacing) {
        std::ostringstream msg;
        msg << "grid of " << grid_points << " points does not resolve mode " << m << " eigenvalue " << j
            << " (error estimate " << err << ", spacing " << spacing << ")";
        throw ResolutionError(msg.str());
      }
    }
  }
  ClassicalSpectrum out = merge(s, fine, errors, count);
  out.grid_points = grid_points;
  return out;
}

ClassicalSpectrum richardson_spectrum(const SurfaceDescriptor& s, int m_max, int count, std::vector<int> grids) {
  if (grids.size() != 3) throw ArgumentError("Richardson extrapolation uses exactly three grids");
  std::sort(grids.begin(), grids.end());
  const auto a = all_modes(s, m_max, grids[0], count);
  const auto b = all_modes(s, m_max, grids[1], count);
  const auto c = all_modes(s, m_max, grids[2], count);
  const double ratio = static_cast<double>(grids[1]) / grids[0];
  const double f = ratio * ratio;
  std::vector<std::vector<double>> ext(a.size()), err(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) {
    const std::size_t n = std::min({a[m].size(), b[m].size(), c[m].size()});
    for (std::size_t j = 0; j < n; ++j) {
      const double r1 = (f * b[m][j] - a[m][j]) / (f - 1.0);
      const double r2 = (f * c[m][j] - b[m][j]) / (f - 1.0);
      ext[m].push_back(r2);
      err[m].push_back(std::abs(r2 - r1));
    }
  }
  ClassicalSpectrum out = merge(s, ext, err, count);
  out.grid_points = grids[2];
  out.richardson_grids = grids;
  return out;
}

std::vector<Cluster> cluster_multiplicities(const std::vector<double>& eigs, double gap) {
  return cluster_values(eigs, gap);
}

}  // namespace nclap
