// SPDX-License-Identifier: Apache-2.0
//
// Drivers shared by the C API and the command line: surface specs, the
// built-in test functions, axiom and trace tables, reference selection.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nclaplace/nc_laplacian.hpp"
#include "nclaplace/reference_oracle.hpp"

namespace nclap {

/// kind: sphere (axes {} or {R}), spheroid ({equatorial, polar} or three
/// axes with a1 == a2), ellipsoid ({a1, a2, a3}).
SurfaceDescriptor make_surface(const std::string& kind, const std::vector<double>& axes);

/// JSON file {"kind": "...", "semi_axes": [...]}.
SurfaceDescriptor load_surface_config(const std::string& path);

/// Names: 1, z, z2, x2, xy (z^2, x^2, x*y also accepted).
BandLimitedFunction builtin_function(const SurfaceDescriptor& s, const std::string& name);
std::vector<std::string> builtin_function_names();

struct TraceCheck {
  std::string function;
  int N = 0;
  double beta = 0.0;
  double hbar = 0.0;
  /// 2 pi hbar Re Tr T_N(f).
  double trace = 0.0;
  /// beta * int f dz dtheta, the limit of the trace.
  double integral = 0.0;
  /// int f dA, for reference.
  double area_integral = 0.0;
  double abs_error = 0.0;
};

TraceCheck trace_check(const SurfaceDescriptor& s, const QuantizationGrid& grid, const std::string& function);

struct AxiomRow {
  int N = 0;
  int i = 0;
  int j = 0;
  std::string pair;
  AxiomDefects defects;
  /// norm_bound(f) * norm_bound(g).
  double norm_bound = 0.0;
};

struct AxiomTable {
  std::string surface;
  GridOffset offset = GridOffset::paper;
  std::optional<double> beta;
  std::vector<AxiomRow> rows;
  std::vector<TraceCheck> trace_rows;
};

/// Pairs are written "x,y"; default (x,y), (y,z), (z,x), (z,z). One trace row
/// (f = 1) per N.
AxiomTable axiom_table(const SurfaceDescriptor& s, const std::vector<int>& Ns, std::optional<double> beta,
                       GridOffset offset, std::vector<std::pair<int, int>> pairs = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Analytic spectrum for spheres, Richardson-extrapolated Sturm-Liouville
/// spectrum for other surfaces of revolution. Throws ArgumentError otherwise.
ClassicalSpectrum reference_spectrum(const SurfaceDescriptor& s, int count);

QuantizationGrid make_grid(const SurfaceDescriptor& s, int N, std::optional<double> beta,
                           GridOffset offset = GridOffset::paper);

}  // namespace nclap
