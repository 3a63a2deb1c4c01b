// SPDX-License-Identifier: Apache-2.0
//
// Internal Krylov eigensolvers.
#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace nclap::detail {

using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using SpC = Eigen::SparseMatrix<std::complex<double>>;

struct KrylovPairs {
  std::vector<std::complex<double>> values;
  MatC vectors;  // unit columns
  std::vector<double> residuals;
  std::vector<bool> converged;
  int operator_applications = 0;
};

inline VecC start_vector(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VecC v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {1.0 + 0.25 * u(rng), 0.0};
  return v.normalized();
}

// Appends w to the orthonormal columns V(:, 0..j) with two passes of
// classical Gram-Schmidt; returns the projection coefficients.
inline VecC orthogonalize(const MatC& V, Eigen::Index j, VecC& w) {
  VecC h = V.leftCols(j + 1).adjoint() * w;
  w.noalias() -= V.leftCols(j + 1) * h;
  const VecC h2 = V.leftCols(j + 1).adjoint() * w;
  w.noalias() -= V.leftCols(j + 1) * h2;
  return h + h2;
}

/// Eigenvalues of the sparse matrix B closest to sigma by shift-invert
/// Arnoldi, growing the subspace until the requested pairs satisfy
/// ||Bx - lambda x|| <= tol * max(1, |lambda|) or a rounding floor.
inline KrylovPairs shift_invert_arnoldi(const SpC& B, std::complex<double> sigma, int nev, double tol) {
  const Eigen::Index n = B.rows();
  SpC shifted = B;
  SpC id(n, n);
  id.setIdentity();
  shifted -= sigma * id;
  shifted.makeCompressed();
  Eigen::SparseLU<SpC> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) {
    sigma *= 1.0 + 1e-3;
    shifted = B - sigma * id;
    shifted.makeCompressed();
    lu.compute(shifted);
  }
  const double b_norm = [&] {
    double best = 0.0;
    for (int c = 0; c < B.outerSize(); ++c) {
      double s = 0.0;
      for (SpC::InnerIterator it(B, c); it; ++it) s += std::abs(it.value());
      best = std::max(best, s);
    }
    return best;
  }();
  const double floor = 200.0 * std::numeric_limits<double>::epsilon() * b_norm;

  KrylovPairs out;
  Eigen::Index m = std::min<Eigen::Index>(n, std::max(2 * nev + 24, 48));
  for (;;) {
    MatC V = MatC::Zero(n, m + 1);
    MatC H = MatC::Zero(m + 1, m);
    V.col(0) = start_vector(n, 0x5eedu + static_cast<unsigned>(n));
    Eigen::Index built = m;
    for (Eigen::Index j = 0; j < m; ++j) {
      VecC w = lu.solve(V.col(j));
      ++out.operator_applications;
      const VecC h = orthogonalize(V, j, w);
      H.col(j).head(j + 1) = h;
      const double beta = w.norm();
      H(j + 1, j) = beta;
      if (beta < 1e-14 * h.norm()) {
        built = j + 1;
        break;
      }
      V.col(j + 1) = w / beta;
    }
    Eigen::ComplexEigenSolver<MatC> es(H.topLeftCorner(built, built));
    const VecC mu = es.eigenvalues();
    std::vector<Eigen::Index> order(built);
    for (Eigen::Index i = 0; i < built; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(mu(a)) > std::abs(mu(b)); });
    const int take = static_cast<int>(std::min<Eigen::Index>(nev, built));
    out.values.assign(take, {});
    out.vectors = MatC(n, take);
    out.residuals.assign(take, 0.0);
    out.converged.assign(take, false);
    bool all = true;
    for (int i = 0; i < take; ++i) {
      const Eigen::Index c = order[i];
      const std::complex<double> lambda = sigma + 1.0 / mu(c);
      VecC x = V.leftCols(built) * es.eigenvectors().col(c);
      x.normalize();
      const double r = (B * x - lambda * x).norm();
      out.values[i] = lambda;
      out.vectors.col(i) = x;
      out.residuals[i] = r;
      out.converged[i] = r <= std::max(tol * std::max(1.0, std::abs(lambda)), floor);
      all = all && out.converged[i];
    }
    if ((all && take == nev) || built < m || m == n) return out;
    m = std::min<Eigen::Index>(n, 2 * m);
  }
}

/// Smallest eigenvalues of a hermitian operator by thick-restart Lanczos with
/// full reorthogonalization. A Ritz pair converges once its residual is below
/// tol * max(unit, |theta|) or a rounding floor tied to the largest Ritz value.
inline KrylovPairs thick_restart_lanczos(const std::function<void(const VecC&, VecC&)>& apply, Eigen::Index n, int nev,
                                         double tol, double unit, int max_restarts) {
  KrylovPairs out;
  const Eigen::Index m = std::min<Eigen::Index>(n, std::max<Eigen::Index>(3 * nev + 40, 80));
  const int keep = static_cast<int>(std::min<Eigen::Index>(m - 1, nev + (m - nev) / 2));
  MatC V = MatC::Zero(n, m + 1);
  MatC H = MatC::Zero(m, m);
  V.col(0) = start_vector(n, 0x1a2bu + static_cast<unsigned>(n));
  Eigen::Index k = 0;  // columns of V already carrying A-images in H
  double scale = 0.0;
  VecC w(n);
  for (int restart = 0; restart <= max_restarts; ++restart) {
    Eigen::Index built = m;
    double beta = 0.0;
    for (Eigen::Index j = k; j < m; ++j) {
      apply(V.col(j), w);
      ++out.operator_applications;
      const VecC h = orthogonalize(V, j, w);
      H.col(j).head(j + 1) = h;
      H.row(j).head(j + 1) = h.adjoint();
      beta = w.norm();
      if (beta < 1e-14 * std::max(1.0, h.norm())) {
        built = j + 1;
        beta = 0.0;
        break;
      }
      V.col(j + 1) = w / beta;
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(H.topLeftCorner(built, built));
    const Eigen::VectorXd theta = es.eigenvalues();
    scale = std::max({scale, std::abs(theta(0)), std::abs(theta(built - 1))});
    const int take = static_cast<int>(std::min<Eigen::Index>(nev, built));
    bool all = true;
    out.values.assign(take, {});
    out.residuals.assign(take, 0.0);
    out.converged.assign(take, false);
    for (int i = 0; i < take; ++i) {
      out.values[i] = theta(i);
      out.residuals[i] = beta * std::abs(es.eigenvectors()(built - 1, i));
      const double floor = 200.0 * std::numeric_limits<double>::epsilon() * scale;
      out.converged[i] = out.residuals[i] <= std::max(tol * std::max(unit, std::abs(theta(i))), floor);
      all = all && out.converged[i];
    }
    if (all || built < m || restart == max_restarts) {
      out.vectors = V.leftCols(built) * es.eigenvectors().leftCols(take);
      for (int i = 0; i < take; ++i) out.vectors.col(i).normalize();
      return out;
    }
    // Thick restart: keep the lowest Ritz vectors plus the residual direction.
    const MatC Y = es.eigenvectors().leftCols(keep);
    const MatC kept = V.leftCols(m) * Y;
    const VecC next = V.col(m);
    V.setZero();
    V.leftCols(keep) = kept;
    V.col(keep) = next;
    H.setZero();
    for (int i = 0; i < keep; ++i) {
      H(i, i) = theta(i);
      H(keep, i) = beta * std::conj(Y(m - 1, i));
      H(i, keep) = std::conj(H(keep, i));
    }
    // Column keep needs its own A-image; the coupling entries above are its
    // projections onto the kept vectors.
    apply(V.col(keep), w);
    ++out.operator_applications;
    const VecC h = orthogonalize(V, keep, w);
    H.col(keep).head(keep + 1) = h;
    H.row(keep).head(keep + 1) = h.adjoint();
    const double b = w.norm();
    if (b < 1e-14) {
      k = keep + 1;
      continue;
    }
    V.col(keep + 1) = w / b;
    k = keep + 1;
  }
  return out;
}

}  // namespace nclap::detail
