// SPDX-License-Identifier: Apache-2.0
//
// Classical references for the low Laplace-Beltrami spectrum: the round
// sphere in closed form and a separated Sturm-Liouville solver for surfaces
// of revolution. Eigenvalues carry the sign of the Laplacian (nonpositive).
#pragma once

#include <string>
#include <vector>

#include "nclaplace/nc_laplacian.hpp"
#include "nclaplace/surface.hpp"

namespace nclap {

enum class SpectrumSource { analytic, sturm_liouville };
std::string to_string(SpectrumSource s);

struct ClassicalEntry {
  double eigenvalue = 0.0;
  int multiplicity = 1;
  SpectrumSource source = SpectrumSource::analytic;
  /// Azimuthal mode (Sturm-Liouville) or degree (analytic).
  int mode = 0;
  /// Estimated discretization error; zero for closed forms.
  double error_estimate = 0.0;
};

/// Entries ordered by increasing |eigenvalue|.
struct ClassicalSpectrum {
  std::string surface;
  std::vector<ClassicalEntry> entries;
  int grid_points = 0;
  int m_max = 0;
  /// Grids combined by Richardson extrapolation, empty for a single grid.
  std::vector<int> richardson_grids;

  std::vector<double> values() const;
  /// Entries closer than tol merged with summed multiplicity.
  std::vector<ReferenceCluster> clusters(double tol = 1e-6) const;
};

/// -k(k+1)/R^2 with multiplicity 2k+1, k = 0..k_max.
ClassicalSpectrum analytic_sphere_spectrum(int k_max, double radius = 1.0);

/// Lowest `how_many` eigenvalues of the mode-m problem on `cells` finite
/// volumes, ordered by increasing magnitude.
std::vector<double> sturm_liouville_mode(const SurfaceDescriptor& s, int m, int cells, int how_many);

/// Modes 0..m_max merged; multiplicity 2 for m >= 1. Throws ResolutionError
/// when halving the grid moves an eigenvalue by more than a tenth of its
/// spacing to the neighbouring eigenvalue of the same mode.
ClassicalSpectrum revolution_spectrum(const SurfaceDescriptor& s, int m_max, int grid_points, int count);

/// Second-order Richardson extrapolation over three successively doubled grids.
ClassicalSpectrum richardson_spectrum(const SurfaceDescriptor& s, int m_max, int count,
                                      std::vector<int> grids = {2000, 4000, 8000});

/// Greedy clustering on the running mean; eigs sorted.
std::vector<Cluster> cluster_multiplicities(const std::vector<double>& eigs, double gap);

}  // namespace nclap
