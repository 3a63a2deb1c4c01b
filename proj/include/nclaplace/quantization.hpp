// SPDX-License-Identifier: Apache-2.0
//
// The quantization map T_N: band-limited functions on an axisymmetric surface
// to N x N matrices, entry (n, m) = f_{n-m}(z(n, m)).
#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "nclaplace/surface.hpp"

namespace nclap {

using CMatrix = Eigen::MatrixXcd;
using CSparse = Eigen::SparseMatrix<Complex>;

enum class GridOffset {
  paper,      // z(n) = a + (b-a) n / N, n = 1..N; reaches b, excludes a
  symmetric,  // z(n) = a + (b-a) (n - 1/2) / N
};

std::string to_string(GridOffset offset);
GridOffset grid_offset_from_string(const std::string& name);

/// Height discretization and quantization parameter.
///
/// Nodes always tile [a, b] with spacing (b-a)/N. The quantization parameter
/// hbar = (b-a) beta / N differs from the spacing by the factor beta, which
/// plays the role of a constant symplectic density: the commutator
/// (1/(i hbar)) [T(f), T(g)] approximates T({f,g}) / beta.
class QuantizationGrid {
 public:
  static QuantizationGrid build(int N, double a, double b, double beta, GridOffset offset = GridOffset::paper);

  int size() const { return n_; }
  double lo() const { return a_; }
  double hi() const { return b_; }
  double beta() const { return beta_; }
  double hbar() const { return hbar_; }
  GridOffset offset() const { return offset_; }
  double spacing() const { return (b_ - a_) / n_; }

  /// z(n), 1-based.
  double node(int n) const { return midpoint(n, n); }
  /// z(n, m) = z((n + m) / 2), 1-based.
  double midpoint(int n, int m) const;

 private:
  QuantizationGrid(int n, double a, double b, double beta, GridOffset offset);

  int n_;
  double a_;
  double b_;
  double beta_;
  double hbar_;
  GridOffset offset_;
};

/// beta = area / (2 pi (b - a)), which makes 2 pi hbar Tr T_N(1) equal the area.
double default_beta(const SurfaceDescriptor& s);

/// T_N(f). Requires max_mode(f) < N.
CSparse quantize(const BandLimitedFunction& f, const QuantizationGrid& grid);

/// Quantized embedding coordinates.
struct CoordinateMatrices {
  CSparse X;
  CSparse Y;
  CSparse Z;
  QuantizationGrid grid;
  std::shared_ptr<const SurfaceDescriptor> surface;
  /// True when assembled from the closed-form tridiagonal example formulas.
  bool closed_form = false;

  const CSparse& operator[](int i) const;
};

/// X, Y, Z for a surface. Surfaces carrying only modes +-1 in x and y use the
/// closed-form entries
///   X_{n,n+1} = (a1/2) r(z(n,n+1)),  Y_{n,n+1} = (a2/2i) r(z(n,n+1)),
/// which is T_N(x) and the complex conjugate of T_N(y). The sign of Y drops out
/// of every commutator square, so gamma and the Laplacian are unaffected.
CoordinateMatrices coordinate_matrices(std::shared_ptr<const SurfaceDescriptor> surface, const QuantizationGrid& grid);

/// 2 pi hbar Re Tr F.
double trace_functional(const CMatrix& F, const QuantizationGrid& grid);
double trace_functional(const CSparse& F, const QuantizationGrid& grid);

/// Largest singular value.
double spectral_norm(const CMatrix& A);

struct AxiomDefects {
  double product_defect = 0.0;  // ||T(f)T(g) - T(fg)||_2
  double bracket_defect = 0.0;  // ||(1/(i hbar))[T(f),T(g)] - T({f,g})/beta||_2
  double product_frobenius = 0.0;
  double bracket_frobenius = 0.0;
};

AxiomDefects axiom_defects(const BandLimitedFunction& f, const BandLimitedFunction& g, const QuantizationGrid& grid);

/// sum_j max_{grid} |f_j|, an upper bound proxy for ||T_N(f)||.
double norm_bound(const BandLimitedFunction& f, const QuantizationGrid& grid);

/// Profiles read back from a matrix: mode j sampled at z(n, n-j) with the
/// value F(n, n-j).
struct SampledFunction {
  std::map<int, std::vector<std::pair<double, Complex>>> modes;
};

/// Left inverse of quantize on band-limited inputs. Modes whose samples are all
/// at most drop_tol in magnitude are omitted.
SampledFunction dequantize(const CMatrix& F, const QuantizationGrid& grid, int max_mode, double drop_tol = 0.0);

}  // namespace nclap
