// SPDX-License-Identifier: Apache-2.0
#include "nclaplace/nc_laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "krylov.hpp"
#include "nclaplace/errors.hpp"

namespace nclap {

namespace {

using RowMajorC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

CSparse commutator(const CSparse& A, const CSparse& B) { return CSparse(A * B) - CSparse(B * A); }

double offdiagonal_norm(const CSparse& S) {
  double acc = 0.0;
  for (int c = 0; c < S.outerSize(); ++c)
    for (CSparse::InnerIterator it(S, c); it; ++it)
      if (it.row() != it.col()) acc += std::norm(it.value());
  return std::sqrt(acc);
}

int bandwidth(const CSparse& A) {
  int bw = 0;
  for (int c = 0; c < A.outerSize(); ++c)
    for (CSparse::InnerIterator it(A, c); it; ++it) bw = std::max(bw, static_cast<int>(std::abs(it.row() - it.col())));
  return bw;
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NCLAPLACE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

CSparse metric_square(const CoordinateMatrices& coords, double hbar) {
  const CSparse cxy = commutator(coords.X, coords.Y);
  const CSparse cyz = commutator(coords.Y, coords.Z);
  const CSparse czx = commutator(coords.Z, coords.X);
  CSparse S = CSparse(cxy * cxy) + CSparse(cyz * cyz) + CSparse(czx * czx);
  S *= Complex(-1.0 / (hbar * hbar));
  S.prune(Complex{}, 0.0);
  return S;
}

GammaMatrix build_gamma(const CoordinateMatrices& coords, double hbar) {
  const CSparse S = metric_square(coords, hbar);
  const int N = static_cast<int>(S.rows());
  GammaMatrix g;
  const CSparse Sh = S.adjoint();
  const double fro = S.norm();
  if ((S - Sh).norm() > 1e-10 * std::max(fro, 1e-300)) throw ConsistencyError("metric square is not hermitian");

  if (offdiagonal_norm(S) <= 1e-10 * fro) {
    g.diagonal = true;
    Eigen::VectorXd d(N);
    for (int i = 0; i < N; ++i) d(i) = S.coeff(i, i).real();
    g.s_norm = d.cwiseAbs().maxCoeff();
    g.s_min = d.minCoeff();
    g.s_eigenvalues = d;
  } else {
    const CMatrix dense = (CMatrix(S) + CMatrix(Sh)) * 0.5;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(dense);
    g.s_eigenvalues = es.eigenvalues();
    g.eigenvectors = es.eigenvectors();
    g.s_norm = g.s_eigenvalues.cwiseAbs().maxCoeff();
    g.s_min = g.s_eigenvalues.minCoeff();
  }
  if (g.s_min < -1e-10 * g.s_norm) {
    std::ostringstream msg;
    msg << "metric square has eigenvalue " << g.s_min << " below -1e-10 ||S|| (||S|| = " << g.s_norm
        << "); check hbar and the coordinate matrices";
    throw ConsistencyError(msg.str());
  }
  g.s_eigenvalues = g.s_eigenvalues.cwiseMax(0.0);
  const Eigen::VectorXd root = g.s_eigenvalues.cwiseSqrt();
  if (g.diagonal) {
    g.matrix = root.cast<Complex>().asDiagonal();
    // eigenvalue order for the diagonal case is the row order
  } else {
    g.matrix = g.eigenvectors * root.cast<Complex>().asDiagonal() * g.eigenvectors.adjoint();
  }
  return g;
}

namespace {

GammaInverse invert_spectrum(const Eigen::VectorXd& eig, const CMatrix* vectors, double epsilon) {
  const Eigen::Index n = eig.size();
  const double top = n ? eig.maxCoeff() : 0.0;
  if (!(top > 0.0)) throw DegenerateMetricError("metric matrix has no positive eigenvalue");
  const double cut = epsilon * top;
  Eigen::VectorXd inv(n);
  int truncated = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig(i) >= cut && eig(i) > 0.0) {
      inv(i) = 1.0 / eig(i);
    } else {
      inv(i) = 0.0;
      ++truncated;
    }
  }
  if (truncated == n) throw DegenerateMetricError("every metric eigenvalue is below the inversion threshold");
  GammaInverse out;
  out.truncated_modes = truncated;
  if (vectors)
    out.matrix = *vectors * inv.cast<Complex>().asDiagonal() * vectors->adjoint();
  else
    out.matrix = inv.cast<Complex>().asDiagonal();
  return out;
}

}  // namespace

GammaInverse gamma_inverse(const GammaMatrix& gamma, double epsilon) {
  const Eigen::VectorXd root = gamma.s_eigenvalues.cwiseSqrt();
  return invert_spectrum(root, gamma.diagonal ? nullptr : &gamma.eigenvectors, epsilon);
}

GammaInverse gamma_inverse(const CMatrix& gamma, double epsilon) {
  if (gamma.rows() != gamma.cols()) throw ArgumentError("gamma_inverse: matrix must be square");
  const CMatrix off = gamma - CMatrix(gamma.diagonal().asDiagonal());
  if (off.norm() == 0.0) return invert_spectrum(gamma.diagonal().real(), nullptr, epsilon);
  Eigen::SelfAdjointEigenSolver<CMatrix> es((gamma + gamma.adjoint()) * 0.5);
  const CMatrix vectors = es.eigenvectors();
  return invert_spectrum(es.eigenvalues(), &vectors, epsilon);
}

QuantizedOperatorSet::QuantizedOperatorSet(CoordinateMatrices coords, double epsilon)
    : coords_(std::move(coords)), epsilon_(epsilon) {
  revolution_ = coords_.surface->is_revolution();
  gamma_ = build_gamma(coords_, coords_.grid.hbar());
  gamma_inv_ = gamma_inverse(gamma_, epsilon_);
  if (gamma_.diagonal) inv_diag_ = gamma_inv_.matrix.diagonal().real();
}

std::shared_ptr<const QuantizedOperatorSet> QuantizedOperatorSet::assemble(
    std::shared_ptr<const SurfaceDescriptor> surface, const QuantizationGrid& grid, double epsilon) {
  if (!(epsilon > 0.0) || epsilon >= 1.0) throw ArgumentError("regularization epsilon must lie in (0, 1)");
  const Interval& iv = surface->interval();
  for (int n : {1, grid.size()}) {
    if (!iv.contains(grid.node(n))) throw DomainError("grid nodes fall outside the parameter interval of the surface");
  }
  return std::shared_ptr<const QuantizedOperatorSet>(
      new QuantizedOperatorSet(coordinate_matrices(std::move(surface), grid), epsilon));
}

CMatrix QuantizedOperatorSet::gamma_inv_sqrt() const {
  const Eigen::VectorXd root = gamma_.s_eigenvalues.cwiseSqrt();
  const double cut = epsilon_ * root.maxCoeff();
  Eigen::VectorXd d(root.size());
  for (Eigen::Index i = 0; i < root.size(); ++i) d(i) = root(i) >= cut && root(i) > 0.0 ? 1.0 / std::sqrt(root(i)) : 0.0;
  if (gamma_.diagonal) return CMatrix(d.cast<Complex>().asDiagonal());
  return gamma_.eigenvectors * d.cast<Complex>().asDiagonal() * gamma_.eigenvectors.adjoint();
}

CMatrix apply_stiffness(const QuantizedOperatorSet& ops, const CMatrix& F) {
  const int N = ops.size();
  if (F.rows() != N || F.cols() != N) throw ArgumentError("apply_laplacian: matrix size does not match N");
  CMatrix out = CMatrix::Zero(N, N);
  for (int i = 0; i < 3; ++i) {
    const CSparse& X = ops.coords()[i];
    CMatrix C = X * F - F * X;
    if (ops.gamma_diagonal())
      C = ops.gamma_inv_diagonal().asDiagonal() * C;
    else
      C = ops.gamma_inv() * C;
    out += X * C - C * X;
  }
  return out;
}

CMatrix apply_laplacian(const QuantizedOperatorSet& ops, const CMatrix& F) {
  const double h = ops.hbar();
  CMatrix M = apply_stiffness(ops, F);
  if (ops.gamma_diagonal()) return (-1.0 / (h * h)) * (ops.gamma_inv_diagonal().asDiagonal() * M);
  return (-1.0 / (h * h)) * (ops.gamma_inv() * M);
}

CSparse apply_laplacian(const QuantizedOperatorSet& ops, const CSparse& F) {
  if (!ops.gamma_diagonal()) throw ArgumentError("sparse apply_laplacian requires a diagonal metric matrix");
  const int N = ops.size();
  if (F.rows() != N || F.cols() != N) throw ArgumentError("apply_laplacian: matrix size does not match N");
  const Eigen::VectorXcd g = ops.gamma_inv_diagonal().cast<Complex>();
  CSparse out(N, N);
  for (int i = 0; i < 3; ++i) {
    const CSparse& X = ops.coords()[i];
    CSparse C = commutator(X, F);
    C = g.asDiagonal() * C;
    out += commutator(X, C);
  }
  const double h = ops.hbar();
  CSparse res = g.asDiagonal() * out;
  res *= Complex(-1.0 / (h * h));
  return res;
}

CMatrix assemble_dense_superoperator(const QuantizedOperatorSet& ops, int cap) {
  const int N = ops.size();
  if (N > cap) {
    std::ostringstream msg;
    msg << "dense superoperator refused for N = " << N << " > cap " << cap
        << "; use the blocks strategy (surfaces of revolution) or the iterative strategy";
    throw ArgumentError(msg.str());
  }
  const int D = N * N;
  CMatrix out(D, D);
  CMatrix E = CMatrix::Zero(N, N);
  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      E(a, b) = 1.0;
      const RowMajorC col = apply_laplacian(ops, E);
      out.col(a * N + b) = Eigen::Map<const Eigen::VectorXcd>(col.data(), D);
      E(a, b) = 0.0;
    }
  }
  return out;
}

CSparse embed_offset(int N, int k, const Eigen::VectorXcd& v) {
  const int dim = N - std::abs(k);
  if (dim <= 0 || v.size() != dim) throw ArgumentError("embed_offset: vector length must be N - |k|");
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    const int n = offset_row(k, i);
    t.emplace_back(n - 1, n - k - 1, v(i));
  }
  CSparse F(N, N);
  F.setFromTriplets(t.begin(), t.end());
  return F;
}

OffsetBlock build_offset_block(const QuantizedOperatorSet& ops, int k) {
  const int N = ops.size();
  if (std::abs(k) >= N) throw ArgumentError("offset must satisfy |k| < N");
  if (!ops.gamma_diagonal()) {
    const CMatrix& g = ops.gamma().matrix;
    const double leak = (g - CMatrix(g.diagonal().asDiagonal())).norm() / g.norm();
    std::ostringstream msg;
    msg << "surface metric is not rotation invariant: gamma carries relative off-diagonal mass " << leak
        << "; offset blocks do not exist, use --strategy dense or iterative";
    throw NotRevolutionError(msg.str(), leak);
  }
  const int dim = N - std::abs(k);
  int bw = 0;
  for (int i = 0; i < 3; ++i) bw = std::max(bw, bandwidth(ops.coords()[i]));
  const int reach = 2 * bw;
  // one basis vector per color when the block is narrower than the stencil
  const bool separate = dim <= 2 * reach + 1;
  const int colors = separate ? dim : 2 * reach + 1;

  std::vector<Eigen::Triplet<Complex>> entries;
  double leak2 = 0.0;
  double total2 = 0.0;
  for (int c = 0; c < colors; ++c) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (int i = c; i < dim; i += colors) v(i) = 1.0;
    const CSparse R = apply_laplacian(ops, embed_offset(N, k, v));
    for (int col = 0; col < R.outerSize(); ++col) {
      for (CSparse::InnerIterator it(R, col); it; ++it) {
        const double mag2 = std::norm(it.value());
        total2 += mag2;
        const int n = static_cast<int>(it.row()) + 1;
        const int m = static_cast<int>(it.col()) + 1;
        if (n - m != k) {
          leak2 += mag2;
          continue;
        }
        const int target = n - offset_row(k, 0);
        // the unique source of this color within reach
        const int base = target - ((target - c) % colors + colors) % colors;
        int source = base;
        if (separate)
          source = c;
        else if (target - base > reach)
          source = base + colors;
        if (source < 0 || source >= dim || std::abs(source - target) > reach) {
          leak2 += mag2;
          continue;
        }
        entries.emplace_back(target, source, it.value());
      }
    }
  }
  const double leakage = total2 > 0.0 ? std::sqrt(leak2 / total2) : 0.0;
  if (leakage > 1e-12) {
    std::ostringstream msg;
    msg << "offset " << k << " leaks into other offsets (relative " << leakage << ")";
    throw NotRevolutionError(msg.str(), leakage);
  }
  OffsetBlock out;
  out.offset = k;
  out.dimension = dim;
  out.op = CSparse(dim, dim);
  out.op.setFromTriplets(entries.begin(), entries.end());
  return out;
}

std::vector<OffsetBlock> block_decompose(const QuantizedOperatorSet& ops, int max_offset) {
  if (max_offset < 0 || max_offset >= ops.size()) throw ArgumentError("block range K must satisfy 0 <= K < N");
  std::vector<OffsetBlock> out;
  for (int k = -max_offset; k <= max_offset; ++k) out.push_back(build_offset_block(ops, k));
  return out;
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::auto_select:
      return "auto";
    case Strategy::dense:
      return "dense";
    case Strategy::blocks:
      return "blocks";
    case Strategy::iterative:
      return "iterative";
  }
  return "auto";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "auto") return Strategy::auto_select;
  if (name == "dense") return Strategy::dense;
  if (name == "blocks") return Strategy::blocks;
  if (name == "iterative") return Strategy::iterative;
  throw ArgumentError("strategy must be auto, dense, blocks or iterative, got '" + name + "'");
}

std::vector<double> SpectrumReport::values() const {
  std::vector<double> v;
  v.reserve(eigenpairs.size());
  for (const auto& e : eigenpairs) v.push_back(e.value);
  return v;
}

double SpectrumReport::max_residual() const {
  double r = 0.0;
  for (const auto& e : eigenpairs) r = std::max(r, e.residual);
  return r;
}

Strategy resolve_strategy(const QuantizedOperatorSet& ops, Strategy requested, int dense_cap) {
  if (requested != Strategy::auto_select) return requested;
  if (ops.surface_is_revolution() && ops.gamma_diagonal()) return Strategy::blocks;
  if (ops.size() <= dense_cap) return Strategy::dense;
  return Strategy::iterative;
}

std::vector<Cluster> cluster_values(const std::vector<double>& values, double gap) {
  std::vector<Cluster> out;
  double sum = 0.0;
  for (double v : values) {
    if (!out.empty() && std::abs(v - out.back().mean) <= gap) {
      sum += v;
      ++out.back().multiplicity;
      out.back().mean = sum / out.back().multiplicity;
    } else {
      out.push_back({v, 1});
      sum = v;
    }
  }
  return out;
}

namespace {

struct RawPair {
  Complex lambda;
  double residual;
  int block;
  bool converged;
};

double matrix_residual(const QuantizedOperatorSet& ops, const CMatrix& F, Complex lambda) {
  const CMatrix R = apply_laplacian(ops, F) - lambda * F;
  return R.norm() / F.norm();
}

double sparse_residual(const QuantizedOperatorSet& ops, const CSparse& F, Complex lambda) {
  const CSparse R = apply_laplacian(ops, F) - CSparse(lambda * F);
  return R.norm() / F.norm();
}

std::vector<RawPair> dense_pairs(const QuantizedOperatorSet& ops, const SpectrumOptions& opt) {
  const int N = ops.size();
  const CMatrix S = assemble_dense_superoperator(ops, opt.dense_cap);
  Eigen::ComplexEigenSolver<CMatrix> es(S);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
  const Eigen::VectorXcd ev = es.eigenvalues();
  std::vector<Eigen::Index> order(ev.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(ev(a)) < std::abs(ev(b)); });
  std::vector<RawPair> out;
  for (int i = 0; i < opt.count; ++i) {
    const Eigen::Index c = order[i];
    const Eigen::VectorXcd v = es.eigenvectors().col(c);
    const CMatrix F = Eigen::Map<const RowMajorC>(v.data(), N, N);
    out.push_back({ev(c), matrix_residual(ops, F, ev(c)), 0, true});
  }
  return out;
}

std::vector<RawPair> block_pairs(const OffsetBlock& block, const QuantizedOperatorSet& ops, int nev, double tol) {
  const int N = ops.size();
  nev = std::min(nev, block.dimension);
  std::vector<RawPair> out;
  if (block.dimension <= 256) {
    Eigen::ComplexEigenSolver<CMatrix> es{CMatrix(block.op)};
    const Eigen::VectorXcd ev = es.eigenvalues();
    std::vector<Eigen::Index> order(ev.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(ev(a)) < std::abs(ev(b)); });
    for (int i = 0; i < nev; ++i) {
      const Eigen::Index c = order[i];
      const CSparse F = embed_offset(N, block.offset, es.eigenvectors().col(c));
      out.push_back({ev(c), sparse_residual(ops, F, ev(c)), block.offset, true});
    }
    return out;
  }
  const detail::KrylovPairs kp = detail::shift_invert_arnoldi(block.op, Complex(1.0, 0.0), nev, tol);
  for (std::size_t i = 0; i < kp.values.size(); ++i) {
    const CSparse F = embed_offset(N, block.offset, kp.vectors.col(static_cast<Eigen::Index>(i)));
    out.push_back({kp.values[i], sparse_residual(ops, F, kp.values[i]), block.offset, kp.converged[i]});
  }
  return out;
}

double smallest_magnitude(const std::vector<RawPair>& pairs) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) best = std::min(best, std::abs(p.lambda));
  return best;
}

std::vector<RawPair> blocks_strategy(const QuantizedOperatorSet& ops, const SpectrumOptions& opt, int& K_used) {
  const int N = ops.size();
  const int threads = thread_count(opt.threads);
  std::map<int, std::vector<RawPair>> solved;
  std::mutex mu;
  std::exception_ptr failure;

  auto solve = [&](const std::vector<int>& offsets) {
    std::vector<int> todo;
    for (int k : offsets)
      if (!solved.count(k)) todo.push_back(k);
    std::size_t next = 0;
    auto worker = [&] {
      for (;;) {
        int k;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (failure || next >= todo.size()) return;
          k = todo[next++];
        }
        try {
          auto pairs = block_pairs(build_offset_block(ops, k), ops, opt.count, opt.tolerance);
          std::lock_guard<std::mutex> lock(mu);
          solved[k] = std::move(pairs);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const int nthreads = std::min<int>(threads, static_cast<int>(todo.size()));
    if (nthreads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
  };

  auto cutoff = [&] {
    std::vector<double> mags;
    for (const auto& [k, pairs] : solved)
      for (const auto& p : pairs) mags.push_back(std::abs(p.lambda));
    std::sort(mags.begin(), mags.end());
    return mags.size() >= static_cast<std::size_t>(opt.count) ? mags[opt.count - 1]
                                                               : std::numeric_limits<double>::infinity();
  };

  int K;
  if (opt.max_offset >= 0) {
    K = std::min(opt.max_offset, N - 1);
    std::vector<int> all;
    for (int k = -K; k <= K; ++k) all.push_back(k);
    solve(all);
  } else {
    K = std::min(N - 1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(opt.count)))));
    std::vector<int> all;
    for (int k = -K; k <= K; ++k) all.push_back(k);
    solve(all);
    // widen while the outermost blocks still reach below the cutoff
    while (K < N - 1 && std::min(smallest_magnitude(solved[K]), smallest_magnitude(solved[-K])) <= cutoff()) {
      ++K;
      solve({-K, K});
    }
  }
  K_used = K;
  std::vector<RawPair> out;
  for (auto& [k, pairs] : solved) out.insert(out.end(), pairs.begin(), pairs.end());
  return out;
}

std::vector<RawPair> iterative_pairs(const QuantizedOperatorSet& ops, const SpectrumOptions& opt, bool& all_converged) {
  const int N = ops.size();
  const double h2 = ops.hbar() * ops.hbar();
  const CMatrix Q = ops.gamma_inv_sqrt();
  const bool diag = ops.gamma_diagonal();
  const Eigen::VectorXcd qd = Q.diagonal();
  auto apply = [&](const detail::VecC& w, detail::VecC& out) {
    const CMatrix W = Eigen::Map<const RowMajorC>(w.data(), N, N);
    const CMatrix QW = diag ? CMatrix(qd.asDiagonal() * W) : CMatrix(Q * W);
    const CMatrix MW = apply_stiffness(ops, QW);
    const RowMajorC R = diag ? RowMajorC(qd.asDiagonal() * MW) : RowMajorC(Q * MW);
    out = Eigen::Map<const Eigen::VectorXcd>(R.data(), static_cast<Eigen::Index>(N) * N);
  };
  const Eigen::Index dim = static_cast<Eigen::Index>(N) * N;
  const int m = static_cast<int>(std::min<Eigen::Index>(dim, std::max(3 * opt.count + 40, 80)));
  const int restarts = std::max(1, opt.max_iterations / std::max(1, m / 2));
  const detail::KrylovPairs kp = detail::thick_restart_lanczos(apply, dim, opt.count, opt.tolerance, h2, restarts);
  all_converged = true;
  std::vector<RawPair> out;
  for (std::size_t i = 0; i < kp.values.size(); ++i) {
    const Complex lambda = -kp.values[i] / h2;
    const detail::VecC w = kp.vectors.col(static_cast<Eigen::Index>(i));
    const CMatrix W = Eigen::Map<const RowMajorC>(w.data(), N, N);
    const CMatrix F = diag ? CMatrix(qd.asDiagonal() * W) : CMatrix(Q * W);
    out.push_back({lambda, matrix_residual(ops, F, lambda), 0, kp.converged[i]});
    all_converged = all_converged && kp.converged[i];
  }
  return out;
}

}  // namespace

SpectrumReport spectrum(const QuantizedOperatorSet& ops, const SpectrumOptions& options) {
  const int N = ops.size();
  if (options.count < 1) throw ArgumentError("count must be at least 1");
  if (static_cast<long long>(options.count) > static_cast<long long>(N) * N)
    throw ArgumentError("count exceeds the N^2 available eigenvalues");
  if (!(options.tolerance > 0.0)) throw ArgumentError("solver tolerance must be positive");

  SpectrumReport rep;
  rep.surface = ops.surface().name();
  rep.semi_axes = ops.surface().semi_axes();
  rep.N = N;
  rep.beta = ops.grid().beta();
  rep.hbar = ops.hbar();
  rep.grid_offset = ops.grid().offset();
  rep.epsilon = ops.regularization_epsilon();
  rep.strategy = resolve_strategy(ops, options.strategy, options.dense_cap);
  rep.requested = options.count;
  rep.tolerance = options.tolerance;
  rep.cluster_gap = options.cluster_gap > 0.0 ? options.cluster_gap : 10.0 * ops.hbar();
  rep.truncated_modes = ops.truncated_modes();

  std::vector<RawPair> raw;
  switch (rep.strategy) {
    case Strategy::dense:
      raw = dense_pairs(ops, options);
      break;
    case Strategy::blocks: {
      int K = 0;
      raw = blocks_strategy(ops, options, K);
      rep.max_offset = K;
      break;
    }
    case Strategy::iterative: {
      bool ok = true;
      raw = iterative_pairs(ops, options, ok);
      rep.converged = ok;
      break;
    }
    case Strategy::auto_select:
      break;
  }

  std::stable_sort(raw.begin(), raw.end(), [](const RawPair& a, const RawPair& b) {
    const double ma = std::abs(a.lambda.real());
    const double mb = std::abs(b.lambda.real());
    if (ma != mb) return ma < mb;
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.block < b.block;
  });
  if (raw.size() > static_cast<std::size_t>(options.count)) raw.resize(options.count);

  for (const auto& p : raw) {
    Eigenpair e;
    e.value = p.lambda.real();
    e.imag = p.lambda.imag();
    e.residual = p.residual;
    e.block = p.block;
    e.converged = p.converged;
    e.imaginary_flag = std::abs(e.imag) > 1e-8 * (1.0 + std::abs(e.value));
    rep.imaginary_leakage = std::max(rep.imaginary_leakage, std::abs(e.imag));
    rep.converged = rep.converged && p.converged;
    rep.eigenpairs.push_back(e);
  }
  rep.clusters = cluster_values(rep.values(), rep.cluster_gap);
  std::size_t idx = 0;
  for (std::size_t c = 0; c < rep.clusters.size(); ++c)
    for (int j = 0; j < rep.clusters[c].multiplicity; ++j) rep.eigenpairs[idx++].cluster = static_cast<int>(c);
  return rep;
}

ConvergenceTable convergence_table(const std::vector<SpectrumReport>& reports,
                                   const std::vector<ReferenceCluster>& reference) {
  ConvergenceTable table;
  table.reports = reports;
  std::map<int, std::pair<int, double>> previous;  // cluster -> (N, error)
  for (const auto& rep : reports) {
    const std::vector<double> vals = rep.values();
    std::size_t pos = 0;
    for (std::size_t c = 0; c < reference.size(); ++c) {
      const int mult = reference[c].multiplicity;
      if (pos + mult > vals.size()) break;
      double mean = 0.0;
      for (int j = 0; j < mult; ++j) mean += vals[pos + j];
      mean /= mult;
      pos += mult;
      ConvergenceRow row;
      row.N = rep.N;
      row.hbar = rep.hbar;
      row.cluster = static_cast<int>(c);
      row.lambda = mean;
      row.reference = reference[c].value;
      row.abs_error = std::abs(mean - reference[c].value);
      auto it = previous.find(row.cluster);
      if (it != previous.end() && it->second.first != rep.N && it->second.second > 0.0 && row.abs_error > 0.0) {
        row.fitted_order = std::log(it->second.second / row.abs_error) /
                           std::log(static_cast<double>(rep.N) / it->second.first);
      }
      previous[row.cluster] = {rep.N, row.abs_error};
      table.rows.push_back(row);
    }
  }
  return table;
}

ConvergenceTable convergence_study(std::shared_ptr<const SurfaceDescriptor> surface, const std::vector<int>& Ns,
                                   std::optional<double> beta, GridOffset offset, const SpectrumOptions& options,
                                   const std::vector<ReferenceCluster>& reference, double epsilon) {
  if (Ns.size() < 2) throw ArgumentError("a convergence study needs at least two values of N");
  std::vector<int> sorted = Ns;
  std::sort(sorted.begin(), sorted.end());
  const double b = beta ? *beta : default_beta(*surface);
  std::vector<SpectrumReport> reports;
  for (int N : sorted) {
    const auto grid = QuantizationGrid::build(N, surface->interval().lo, surface->interval().hi, b, offset);
    const auto ops = QuantizedOperatorSet::assemble(surface, grid, epsilon);
    reports.push_back(spectrum(*ops, options));
  }
  return convergence_table(reports, reference);
}

}  // namespace nclap
