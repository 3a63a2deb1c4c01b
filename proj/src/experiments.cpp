// SPDX-License-Identifier: Apache-2.0
#include "nclaplace/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nclaplace/errors.hpp"

namespace nclap {

SurfaceDescriptor make_surface(const std::string& kind, const std::vector<double>& axes) {
  for (double a : axes)
    if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("semi-axes must be positive finite numbers");
  if (kind == "sphere") {
    if (axes.empty()) return SurfaceDescriptor::unit_sphere();
    if (axes.size() == 1) return SurfaceDescriptor::sphere(axes[0]);
    if (axes.size() == 3 && axes[0] == axes[1] && axes[1] == axes[2]) return SurfaceDescriptor::sphere(axes[0]);
    throw ArgumentError("sphere takes one radius or three equal semi-axes");
  }
  if (kind == "spheroid") {
    if (axes.empty()) return SurfaceDescriptor::spheroid(1.0, 2.0);
    if (axes.size() == 2) return SurfaceDescriptor::spheroid(axes[0], axes[1]);
    if (axes.size() == 3 && axes[0] == axes[1]) return SurfaceDescriptor::spheroid(axes[0], axes[2]);
    throw ArgumentError("spheroid takes {equatorial, polar} or three semi-axes with a1 == a2");
  }
  if (kind == "ellipsoid") {
    if (axes.size() != 3) throw ArgumentError("ellipsoid takes three semi-axes, e.g. --axes 1,2,3");
    return SurfaceDescriptor::ellipsoid({axes[0], axes[1], axes[2]});
  }
  throw ArgumentError("surface kind must be sphere, spheroid or ellipsoid, got '" + kind + "'");
}

SurfaceDescriptor load_surface_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open surface config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError("surface config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("kind") || !j["kind"].is_string()) throw ArgumentError("surface config needs a string 'kind'");
  std::vector<double> axes;
  if (j.contains("semi_axes")) {
    try {
      axes = j["semi_axes"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      throw ArgumentError("'semi_axes' must be an array of numbers");
    }
  }
  return make_surface(j["kind"].get<std::string>(), axes);
}

std::vector<std::string> builtin_function_names() { return {"1", "z", "z2", "x2", "xy"}; }

BandLimitedFunction builtin_function(const SurfaceDescriptor& s, const std::string& name) {
  if (name == "1") return BandLimitedFunction::constant(s.interval(), 1.0);
  if (name == "z") return s.z();
  if (name == "z2" || name == "z^2") return s.z() * s.z();
  if (name == "x2" || name == "x^2") return s.x() * s.x();
  if (name == "xy" || name == "x*y") return s.x() * s.y();
  throw ArgumentError("unknown function '" + name + "'; choose one of 1, z, z2, x2, xy");
}

QuantizationGrid make_grid(const SurfaceDescriptor& s, int N, std::optional<double> beta, GridOffset offset) {
  const double b = beta ? *beta : default_beta(s);
  return QuantizationGrid::build(N, s.interval().lo, s.interval().hi, b, offset);
}

TraceCheck trace_check(const SurfaceDescriptor& s, const QuantizationGrid& grid, const std::string& function) {
  const BandLimitedFunction f = builtin_function(s, function);
  TraceCheck t;
  t.function = function;
  t.N = grid.size();
  t.beta = grid.beta();
  t.hbar = grid.hbar();
  t.trace = trace_functional(quantize(f, grid), grid);
  const QuadratureResult param = integrate_parameter(f);
  const QuadratureResult area = integrate_area(s, f);
  t.integral = grid.beta() * param.value;
  t.area_integral = area.value;
  t.abs_error = std::abs(t.trace - t.integral);
  return t;
}

AxiomTable axiom_table(const SurfaceDescriptor& s, const std::vector<int>& Ns, std::optional<double> beta,
                       GridOffset offset, std::vector<std::pair<int, int>> pairs) {
  if (Ns.empty()) throw ArgumentError("axiom table needs at least one N");
  if (pairs.empty()) pairs = {{0, 1}, {1, 2}, {2, 0}, {2, 2}};
  static const char* names[] = {"x", "y", "z"};
  AxiomTable table;
  table.surface = s.name();
  table.offset = offset;
  table.beta = beta;
  for (int N : Ns) {
    const QuantizationGrid grid = make_grid(s, N, beta, offset);
    for (const auto& [i, j] : pairs) {
      if (i < 0 || i > 2 || j < 0 || j > 2) throw ArgumentError("coordinate pair indices must lie in 0..2");
      AxiomRow row;
      row.N = N;
      row.i = i;
      row.j = j;
      row.pair = std::string(names[i]) + "," + names[j];
      row.defects = axiom_defects(s.coordinate(i), s.coordinate(j), grid);
      row.norm_bound = norm_bound(s.coordinate(i), grid) * norm_bound(s.coordinate(j), grid);
      table.rows.push_back(row);
    }
    table.trace_rows.push_back(trace_check(s, grid, "1"));
  }
  return table;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ArgumentError("slope fit needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ClassicalSpectrum reference_spectrum(const SurfaceDescriptor& s, int count) {
  if (s.kind() == SurfaceKind::sphere) {
    int k = 0;
    while ((k + 1) * (k + 1) < count) ++k;
    return analytic_sphere_spectrum(k + 1, s.semi_axes().a1);
  }
  if (!s.is_revolution())
    throw ArgumentError("no classical reference for a triaxial ellipsoid; use a sphere or spheroid");
  const int m_max = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count)))) + 1;
  return richardson_spectrum(s, m_max, count + 2);
}

}  // namespace nclap
