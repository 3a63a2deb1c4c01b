// SPDX-License-Identifier: Apache-2.0
#include "nclaplace/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nclaplace/errors.hpp"

namespace nclap {

std::string to_string(GridOffset offset) { return offset == GridOffset::paper ? "paper" : "symmetric"; }

GridOffset grid_offset_from_string(const std::string& name) {
  if (name == "paper") return GridOffset::paper;
  if (name == "symmetric") return GridOffset::symmetric;
  throw ArgumentError("grid offset must be 'paper' or 'symmetric', got '" + name + "'");
}

QuantizationGrid::QuantizationGrid(int n, double a, double b, double beta, GridOffset offset)
    : n_(n), a_(a), b_(b), beta_(beta), hbar_((b - a) * beta / n), offset_(offset) {}

QuantizationGrid QuantizationGrid::build(int N, double a, double b, double beta, GridOffset offset) {
  if (N < 2) throw ArgumentError("grid size N must be at least 2");
  if (!(a < b)) throw ArgumentError("grid interval must satisfy a < b");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ArgumentError("beta must be a positive finite number");
  return QuantizationGrid(N, a, b, beta, offset);
}

double QuantizationGrid::midpoint(int n, int m) const {
  const int twice = offset_ == GridOffset::paper ? n + m : n + m - 1;
  return a_ + (b_ - a_) * twice / (2.0 * n_);
}

double default_beta(const SurfaceDescriptor& s) {
  double area = 0.0;
  if (auto cached = s.cached_area()) {
    area = *cached;
  } else {
    const QuadratureResult q = surface_area(s);
    if (!q.converged) {
      std::ostringstream msg;
      msg << "surface area quadrature did not converge (estimate " << q.value << ", error " << q.error_estimate << ")";
      throw ConsistencyError(msg.str());
    }
    area = q.value;
  }
  return area / (kTwoPi * s.interval().length());
}

CSparse quantize(const BandLimitedFunction& f, const QuantizationGrid& grid) {
  const int N = grid.size();
  if (f.max_mode() >= N) {
    std::ostringstream msg;
    msg << "band limit " << f.max_mode() << " must be below N = " << N;
    throw ArgumentError(msg.str());
  }
  std::vector<Eigen::Triplet<Complex>> entries;
  for (const auto& [j, _] : f.modes()) {
    // entry (n, m) with n - m = j
    for (int n = std::max(1, 1 + j); n <= std::min(N, N + j); ++n) {
      const int m = n - j;
      const Complex v = f.mode_value(j, grid.midpoint(n, m));
      if (v != Complex{}) entries.emplace_back(n - 1, m - 1, v);
    }
  }
  CSparse out(N, N);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

const CSparse& CoordinateMatrices::operator[](int i) const {
  switch (i) {
    case 0:
      return X;
    case 1:
      return Y;
    case 2:
      return Z;
    default:
      throw ArgumentError("coordinate index must be 0, 1 or 2");
  }
}

namespace {

bool only_unit_modes(const BandLimitedFunction& f) {
  return std::all_of(f.modes().begin(), f.modes().end(), [](const auto& kv) { return std::abs(kv.first) == 1; });
}

}  // namespace

CoordinateMatrices coordinate_matrices(std::shared_ptr<const SurfaceDescriptor> surface,
                                       const QuantizationGrid& grid) {
  if (!surface) throw ArgumentError("coordinate_matrices: null surface");
  const SurfaceDescriptor& s = *surface;
  CoordinateMatrices out{quantize(s.x(), grid), quantize(s.y(), grid), quantize(s.z(), grid), grid, surface, false};
  if (only_unit_modes(s.x()) && only_unit_modes(s.y())) {
    out.Y = CSparse(out.Y.conjugate());
    out.closed_form = true;
  }
  return out;
}

double trace_functional(const CMatrix& F, const QuantizationGrid& grid) {
  return kTwoPi * grid.hbar() * F.trace().real();
}

double trace_functional(const CSparse& F, const QuantizationGrid& grid) {
  Complex tr{};
  for (int k = 0; k < F.outerSize(); ++k) tr += F.coeff(k, k);
  return kTwoPi * grid.hbar() * tr.real();
}

double spectral_norm(const CMatrix& A) {
  if (A.size() == 0) return 0.0;
  if (!A.allFinite()) return std::numeric_limits<double>::quiet_NaN();
  Eigen::BDCSVD<CMatrix> svd(A);
  return svd.singularValues()(0);
}

AxiomDefects axiom_defects(const BandLimitedFunction& f, const BandLimitedFunction& g, const QuantizationGrid& grid) {
  const CSparse Tf = quantize(f, grid);
  const CSparse Tg = quantize(g, grid);
  const CSparse Tfg = quantize(f * g, grid);
  const CSparse Tbr = quantize(bracket_function(f, g).scaled(1.0 / grid.beta()), grid);
  const CSparse prod = Tf * Tg;
  const CSparse comm = prod - CSparse(Tg * Tf);
  const Complex inv_ihbar = 1.0 / Complex(0.0, grid.hbar());
  const CMatrix product = CMatrix(prod - Tfg);
  const CMatrix bracket = CMatrix(comm * inv_ihbar - Tbr);
  return {spectral_norm(product), spectral_norm(bracket), product.norm(), bracket.norm()};
}

double norm_bound(const BandLimitedFunction& f, const QuantizationGrid& grid) {
  const int N = grid.size();
  double bound = 0.0;
  for (const auto& [j, prof] : f.modes()) {
    double best = 0.0;
    for (int n = std::max(1, 1 + j); n <= std::min(N, N + j); ++n) {
      best = std::max(best, std::abs(prof(grid.midpoint(n, n - j))));
    }
    bound += best;
  }
  return bound;
}

SampledFunction dequantize(const CMatrix& F, const QuantizationGrid& grid, int max_mode, double drop_tol) {
  const int N = grid.size();
  if (F.rows() != N || F.cols() != N) throw ArgumentError("dequantize: matrix size does not match the grid");
  if (max_mode < 0 || max_mode >= N) throw ArgumentError("dequantize: max_mode must lie in [0, N)");
  SampledFunction out;
  for (int j = -max_mode; j <= max_mode; ++j) {
    std::vector<std::pair<double, Complex>> samples;
    double peak = 0.0;
    for (int n = std::max(1, 1 + j); n <= std::min(N, N + j); ++n) {
      const int m = n - j;
      const Complex v = F(n - 1, m - 1);
      peak = std::max(peak, std::abs(v));
      samples.emplace_back(grid.midpoint(n, m), v);
    }
    if (peak > drop_tol) out.modes.emplace(j, std::move(samples));
  }
  return out;
}

}  // namespace nclap
