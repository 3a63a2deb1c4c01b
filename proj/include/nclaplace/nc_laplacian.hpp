// SPDX-License-Identifier: Apache-2.0
//
// Metric matrix gamma_N, the noncommutative Laplacian
//   Delta_N(F) = -(1/hbar^2) sum_i gamma^{-1} [X_i, gamma^{-1} [X_i, F]]
// and its low-lying spectrum.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nclaplace/quantization.hpp"

namespace nclap {

/// gamma = sqrt(S), S = -sum_{i>j} ([X_i, X_j] / hbar)^2.
struct GammaMatrix {
  CMatrix matrix;
  /// Eigenvalues of S, ascending, after clamping.
  Eigen::VectorXd s_eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // empty when diagonal
  bool diagonal = false;
  /// Most negative eigenvalue of S before clamping.
  double s_min = 0.0;
  double s_norm = 0.0;
};

/// S as a sparse matrix.
CSparse metric_square(const CoordinateMatrices& coords, double hbar);

/// Principal square root of S. Throws ConsistencyError when S has an
/// eigenvalue below -1e-10 ||S||.
GammaMatrix build_gamma(const CoordinateMatrices& coords, double hbar);

struct GammaInverse {
  CMatrix matrix;
  int truncated_modes = 0;
};

/// Pseudo-inverse keeping eigenvalues >= epsilon * max eigenvalue.
GammaInverse gamma_inverse(const GammaMatrix& gamma, double epsilon = 1e-12);
/// Same for an arbitrary hermitian PSD matrix.
GammaInverse gamma_inverse(const CMatrix& gamma, double epsilon = 1e-12);

class QuantizedOperatorSet {
 public:
  static std::shared_ptr<const QuantizedOperatorSet> assemble(std::shared_ptr<const SurfaceDescriptor> surface,
                                                              const QuantizationGrid& grid, double epsilon = 1e-12);

  const CoordinateMatrices& coords() const { return coords_; }
  const QuantizationGrid& grid() const { return coords_.grid; }
  const SurfaceDescriptor& surface() const { return *coords_.surface; }
  int size() const { return coords_.grid.size(); }
  double hbar() const { return coords_.grid.hbar(); }
  double regularization_epsilon() const { return epsilon_; }
  bool surface_is_revolution() const { return revolution_; }

  const GammaMatrix& gamma() const { return gamma_; }
  const CMatrix& gamma_inv() const { return gamma_inv_.matrix; }
  int truncated_modes() const { return gamma_inv_.truncated_modes; }
  /// gamma^{-1} diagonal (set when gamma is diagonal).
  bool gamma_diagonal() const { return gamma_.diagonal; }
  const Eigen::VectorXd& gamma_inv_diagonal() const { return inv_diag_; }
  /// Hermitian square root of gamma^{-1} (dense).
  CMatrix gamma_inv_sqrt() const;

 private:
  QuantizedOperatorSet(CoordinateMatrices coords, double epsilon);

  CoordinateMatrices coords_;
  double epsilon_ = 1e-12;
  bool revolution_ = false;
  GammaMatrix gamma_;
  GammaInverse gamma_inv_;
  Eigen::VectorXd inv_diag_;
};

using OperatorPtr = std::shared_ptr<const QuantizedOperatorSet>;

/// Delta_N(F) for a dense N x N matrix.
CMatrix apply_laplacian(const QuantizedOperatorSet& ops, const CMatrix& F);
/// Sparse variant; requires a diagonal gamma.
CSparse apply_laplacian(const QuantizedOperatorSet& ops, const CSparse& F);

/// M(F) = sum_i [X_i, gamma^{-1} [X_i, F]], so that Delta_N = -(1/hbar^2) gamma^{-1} M.
CMatrix apply_stiffness(const QuantizedOperatorSet& ops, const CMatrix& F);

/// Default size cap of the dense superoperator.
inline constexpr int kDenseCap = 40;

/// N^2 x N^2 matrix of Delta_N on row-major vectorized matrices.
CMatrix assemble_dense_superoperator(const QuantizedOperatorSet& ops, int cap = kDenseCap);

/// Restriction of Delta_N to matrices supported on the diagonal offset k
/// (entries (n, n-k)). Vector index i maps to row n = i + max(1, 1+k).
struct OffsetBlock {
  int offset = 0;
  int dimension = 0;
  CSparse op;
};

/// Row (1-based) of element i in offset k.
inline int offset_row(int k, int i) { return i + (k > 0 ? 1 + k : 1); }
CSparse embed_offset(int N, int k, const Eigen::VectorXcd& v);

/// Blocks k = -K..K, in that order. Throws NotRevolutionError when gamma is
/// not diagonal or the operator leaks out of an offset.
std::vector<OffsetBlock> block_decompose(const QuantizedOperatorSet& ops, int max_offset);
OffsetBlock build_offset_block(const QuantizedOperatorSet& ops, int k);

enum class Strategy { auto_select, dense, blocks, iterative };
std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct SpectrumOptions {
  Strategy strategy = Strategy::auto_select;
  int count = 9;
  /// Largest offset; negative picks one adaptively.
  int max_offset = -1;
  double tolerance = 1e-8;
  /// Cluster gap; non-positive means 10 hbar.
  double cluster_gap = 0.0;
  int dense_cap = kDenseCap;
  int max_iterations = 4000;
  /// Worker threads for block solves; 0 reads NCLAPLACE_THREADS.
  int threads = 0;
};

struct Eigenpair {
  double value = 0.0;
  double imag = 0.0;
  double residual = 0.0;
  /// Offset of the block that produced it; 0 for dense/iterative.
  int block = 0;
  int cluster = 0;
  bool converged = true;
  bool imaginary_flag = false;
};

struct Cluster {
  double mean = 0.0;
  int multiplicity = 0;
};

struct SpectrumReport {
  std::string surface;
  SemiAxes semi_axes;
  int N = 0;
  double beta = 0.0;
  double hbar = 0.0;
  GridOffset grid_offset = GridOffset::paper;
  double epsilon = 0.0;
  Strategy strategy = Strategy::dense;
  int requested = 0;
  int max_offset = 0;
  double tolerance = 0.0;
  double cluster_gap = 0.0;
  std::vector<Eigenpair> eigenpairs;
  std::vector<Cluster> clusters;
  double imaginary_leakage = 0.0;
  int truncated_modes = 0;
  bool converged = true;

  std::vector<double> values() const;
  double max_residual() const;
};

Strategy resolve_strategy(const QuantizedOperatorSet& ops, Strategy requested, int dense_cap = kDenseCap);

SpectrumReport spectrum(const QuantizedOperatorSet& ops, const SpectrumOptions& options);

/// Greedy clustering of values in the given order: a value joins the current
/// cluster when within gap of its running mean.
std::vector<Cluster> cluster_values(const std::vector<double>& values, double gap);

struct ReferenceCluster {
  double value = 0.0;
  int multiplicity = 1;
};

struct ConvergenceRow {
  int N = 0;
  double hbar = 0.0;
  int cluster = 0;
  double lambda = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
  std::optional<double> fitted_order;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<SpectrumReport> reports;
};

/// Matches the computed eigenvalues of each N against reference clusters
/// (consumed in order by multiplicity) and fits p = log(e1/e2)/log(N2/N1).
ConvergenceTable convergence_table(const std::vector<SpectrumReport>& reports,
                                   const std::vector<ReferenceCluster>& reference);

/// Spectra over a list of N (beta = nullopt picks default_beta) tabulated
/// against the reference.
ConvergenceTable convergence_study(std::shared_ptr<const SurfaceDescriptor> surface, const std::vector<int>& Ns,
                                   std::optional<double> beta, GridOffset offset, const SpectrumOptions& options,
                                   const std::vector<ReferenceCluster>& reference, double epsilon = 1e-12);

}  // namespace nclap
