// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <memory>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "nclaplace/errors.hpp"
#include "nclaplace/nc_laplacian.hpp"
#include "support.hpp"

using namespace nclap;
using testing_support::Rng;

namespace {

OperatorPtr make_ops(SurfaceDescriptor s, int N, double beta = 1.0, GridOffset off = GridOffset::paper) {
  auto sp = std::make_shared<const SurfaceDescriptor>(std::move(s));
  return QuantizedOperatorSet::assemble(sp, QuantizationGrid::build(N, sp->interval().lo, sp->interval().hi, beta, off));
}

std::vector<Complex> sorted_eigs(const CMatrix& A) {
  Eigen::ComplexEigenSolver<CMatrix> es(A, false);
  std::vector<Complex> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  return v;
}

std::vector<Complex> block_union(const std::vector<OffsetBlock>& blocks) {
  std::vector<Complex> all;
  for (const auto& b : blocks) {
    const auto e = sorted_eigs(CMatrix(b.op));
    all.insert(all.end(), e.begin(), e.end());
  }
  std::sort(all.begin(), all.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  return all;
}

// Tr(A^* gamma B)
Complex gamma_inner(const QuantizedOperatorSet& ops, const CMatrix& A, const CMatrix& B) {
  return (A.adjoint() * ops.gamma().matrix * B).trace();
}

}  // namespace

TEST_SUITE("nc_laplacian") {
  TEST_CASE("metric at N = 2 by hand") {
    // X = a sigma_x, Y = a sigma_y, Z = diag(0, 1) with a = sqrt(3)/4.
    const double a = std::sqrt(3.0) / 4.0;
    CMatrix X(2, 2), Y(2, 2), Z(2, 2);
    X << 0, a, a, 0;
    Y << 0, Complex(0, -a), Complex(0, a), 0;
    Z << 0, 0, 0, 1;
    auto c = [](const CMatrix& P, const CMatrix& Q) { return CMatrix(P * Q - Q * P); };
    const CMatrix S_hand = -(c(X, Y) * c(X, Y) + c(Y, Z) * c(Y, Z) + c(Z, X) * c(Z, X));
    CHECK((S_hand - 0.515625 * CMatrix::Identity(2, 2)).norm() < 1e-15);

    const auto ops = make_ops(SurfaceDescriptor::unit_sphere(), 2);
    CHECK(ops->hbar() == doctest::Approx(1.0));
    CHECK((CMatrix(metric_square(ops->coords(), ops->hbar())) - S_hand).norm() < 1e-15);
    CHECK((ops->gamma().matrix - std::sqrt(0.515625) * CMatrix::Identity(2, 2)).norm() < 1e-15);
  }

  TEST_CASE("gamma inverse thresholding") {
    const auto id = gamma_inverse(CMatrix(CMatrix::Identity(4, 4)));
    CHECK((id.matrix - CMatrix::Identity(4, 4)).norm() < 1e-15);
    CHECK(id.truncated_modes == 0);
    CMatrix g = CMatrix::Zero(3, 3);
    g.diagonal() << 2.0, 1.0, 1e-18;
    const auto inv = gamma_inverse(g, 1e-12);
    CMatrix expected = CMatrix::Zero(3, 3);
    expected.diagonal() << 0.5, 1.0, 0.0;
    CHECK((inv.matrix - expected).norm() < 1e-15);
    CHECK(inv.truncated_modes == 1);
    CHECK_THROWS_AS(gamma_inverse(CMatrix(CMatrix::Zero(2, 2))), DegenerateMetricError);
  }

  TEST_CASE("sphere metric is close to the identity") {
    const int N = 100;
    const auto ops = make_ops(SurfaceDescriptor::unit_sphere(), N);
    CHECK(ops->gamma_diagonal());
    CHECK(ops->truncated_modes() == 0);
    const CMatrix& g = ops->gamma().matrix;
    for (int i = N / 4; i < 3 * N / 4; ++i) {
      CHECK(std::abs(g(i, i) - 1.0) <= 1.0 / N);
      for (int j = 0; j < N; ++j)
        if (j != i) CHECK(std::abs(g(i, j)) <= 1.0 / (N * N));
    }
  }

  TEST_CASE("spheroid metric follows the area density") {
    const int N = 200;
    const auto s = SurfaceDescriptor::spheroid(1, 2);
    const auto ops = make_ops(s, N);
    for (int n = N / 4; n <= 3 * N / 4; ++n) {
      const double z = ops->grid().node(n);
      CHECK(std::abs(ops->gamma().matrix(n - 1, n - 1).real() - metric_sqrt_det(s, SurfacePoint(z, 0))) <= 10.0 / N);
    }
  }

  TEST_CASE("identity is in the kernel") {
    Rng rng(31);
    for (int t = 0; t < 6; ++t) {
      const auto s = SurfaceDescriptor::ellipsoid({rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2)});
      const int N = rng.integer(2, 24);
      const auto ops = make_ops(s, N, rng.uniform(0.5, 2.0));
      const CMatrix out = apply_laplacian(*ops, CMatrix(CMatrix::Identity(N, N)));
      CHECK(out.norm() < 1e-12 / (ops->hbar() * ops->hbar()));
    }
  }

  TEST_CASE("degree-one harmonics") {
    const int N = 200;
    const auto s = SurfaceDescriptor::unit_sphere();
    const auto ops = make_ops(s, N);
    for (int i : {0, 2}) {
      const CMatrix T = CMatrix(quantize(s.coordinate(i), ops->grid()));
      const CMatrix D = apply_laplacian(*ops, T);
      // Interior block, away from the endpoint rows.
      const int lo = N / 8, len = 3 * N / 4;
      const double err = spectral_norm(CMatrix((D + 2.0 * T).block(lo, lo, len, len)));
      CHECK(err <= 5.0 / N);
    }
  }

  TEST_CASE("Laplacian is self-adjoint in the metric inner product") {
    Rng rng(32);
    for (int t = 0; t < 6; ++t) {
      const bool triaxial = t % 2 == 1;
      const auto s = triaxial ? SurfaceDescriptor::ellipsoid({1.0, rng.uniform(1.2, 2), rng.uniform(0.5, 2)})
                              : SurfaceDescriptor::spheroid(rng.uniform(0.5, 2), rng.uniform(0.5, 2));
      const int N = rng.integer(4, 16);
      const auto ops = make_ops(s, N, 1.0, GridOffset::symmetric);
      REQUIRE(ops->truncated_modes() == 0);
      const CMatrix A = testing_support::random_matrix(rng, N);
      const CMatrix B = testing_support::random_matrix(rng, N);
      const Complex lhs = gamma_inner(*ops, A, apply_laplacian(*ops, B));
      const Complex rhs = gamma_inner(*ops, apply_laplacian(*ops, A), B);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * (std::abs(lhs) + 1.0));
      CHECK(gamma_inner(*ops, A, apply_laplacian(*ops, A)).real() <= 1e-9);
    }
  }

  TEST_CASE("dense superoperator") {
    const auto ops = make_ops(SurfaceDescriptor::unit_sphere(), 2);
    const CMatrix L = assemble_dense_superoperator(*ops);
    CHECK(L.rows() == 4);
    Eigen::VectorXcd vecI(4);
    vecI << 1, 0, 0, 1;
    CHECK((L * vecI).norm() < 1e-14);

    Rng rng(33);
    const auto ops5 = make_ops(SurfaceDescriptor::spheroid(1, 1.5), 5);
    const CMatrix L5 = assemble_dense_superoperator(*ops5);
    const CMatrix F = testing_support::random_matrix(rng, 5);
    const CMatrix D = apply_laplacian(*ops5, F);
    Eigen::VectorXcd vF(25);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) vF(5 * i + j) = F(i, j);
    const Eigen::VectorXcd out = L5 * vF;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) CHECK(std::abs(out(5 * i + j) - D(i, j)) < 1e-12 * (1 + D.norm()));

    CHECK_THROWS_AS(assemble_dense_superoperator(*make_ops(SurfaceDescriptor::unit_sphere(), 41)), ArgumentError);
  }

  TEST_CASE("blocks at N = 6") {
    const auto ops = make_ops(SurfaceDescriptor::unit_sphere(), 6);
    const auto blocks = block_decompose(*ops, 5);
    REQUIRE(blocks.size() == 11);
    std::vector<int> dims;
    for (const auto& b : blocks) dims.push_back(b.dimension);
    std::sort(dims.rbegin(), dims.rend());
    CHECK(dims == std::vector<int>{6, 5, 5, 4, 4, 3, 3, 2, 2, 1, 1});

    const auto dense = sorted_eigs(assemble_dense_superoperator(*ops));
    const auto from_blocks = block_union(blocks);
    REQUIRE(dense.size() == from_blocks.size());
    for (std::size_t i = 0; i < dense.size(); ++i) CHECK(std::abs(dense[i] - from_blocks[i]) <= 1e-10);
    CHECK(std::abs(dense.back()) < 1e-12);

    const OffsetBlock& zero = blocks[5];
    REQUIRE(zero.offset == 0);
    const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(6);
    CHECK((CMatrix(zero.op) * ones).norm() < 1e-12);
  }

  TEST_CASE("offset grading on random spheroids") {
    Rng rng(34);
    for (int t = 0; t < 6; ++t) {
      const int N = rng.integer(6, 30);
      const auto ops = make_ops(SurfaceDescriptor::spheroid(rng.uniform(0.5, 2), rng.uniform(0.5, 2)), N);
      const int k = rng.integer(-(N - 1), N - 1);
      Eigen::VectorXcd v(N - std::abs(k));
      for (int i = 0; i < v.size(); ++i) v(i) = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const CMatrix out = CMatrix(apply_laplacian(*ops, embed_offset(N, k, v)));
      double on = 0.0, off = 0.0;
      for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) (n - m == k ? on : off) += std::norm(out(n, m));
      CHECK(std::sqrt(off) <= 1e-12 * std::sqrt(on));
    }
  }

  TEST_CASE("triaxial ellipsoids are not graded") {
    const auto ops = make_ops(SurfaceDescriptor::ellipsoid({1, 2, 3}), 8);
    CHECK_FALSE(ops->surface_is_revolution());
    CHECK_THROWS_AS(block_decompose(*ops, 3), NotRevolutionError);
    SpectrumOptions o;
    o.strategy = Strategy::blocks;
    CHECK_THROWS_AS(spectrum(*ops, o), NotRevolutionError);
  }

  TEST_CASE("strategies agree") {
    for (auto s : {SurfaceDescriptor::unit_sphere(), SurfaceDescriptor::spheroid(1, 2)}) {
      const auto ops = make_ops(s, 12);
      SpectrumOptions o;
      o.count = 12;
      o.strategy = Strategy::dense;
      const auto dense = spectrum(*ops, o);
      o.strategy = Strategy::blocks;
      o.max_offset = 11;
      const auto blocks = spectrum(*ops, o);
      o.strategy = Strategy::iterative;
      const auto iter = spectrum(*ops, o);
      REQUIRE(dense.eigenpairs.size() == 12);
      for (std::size_t i = 0; i < 12; ++i) {
        CHECK(blocks.eigenpairs[i].value == doctest::Approx(dense.eigenpairs[i].value).epsilon(1e-10));
        CHECK(iter.eigenpairs[i].value == doctest::Approx(dense.eigenpairs[i].value).epsilon(1e-7));
      }
    }
    const auto tri = make_ops(SurfaceDescriptor::ellipsoid({1, 2, 3}), 8);
    SpectrumOptions o;
    o.count = 6;
    o.strategy = Strategy::dense;
    const auto dense = spectrum(*tri, o);
    o.strategy = Strategy::iterative;
    const auto iter = spectrum(*tri, o);
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(iter.eigenpairs[i].value == doctest::Approx(dense.eigenpairs[i].value).epsilon(1e-7));
  }

  TEST_CASE("spectrum report") {
    const auto ops = make_ops(SurfaceDescriptor::unit_sphere(), 60);
    SpectrumOptions o;
    o.count = 16;
    const auto r = spectrum(*ops, o);
    CHECK(r.strategy == Strategy::blocks);
    REQUIRE(r.eigenpairs.size() == 16);
    CHECK(std::abs(r.eigenpairs[0].value) < 1e-10);
    CHECK(r.eigenpairs[0].residual < 1e-10);
    for (std::size_t i = 1; i < r.eigenpairs.size(); ++i) {
      CHECK(std::abs(r.eigenpairs[i].value) >= std::abs(r.eigenpairs[i - 1].value));
      CHECK(r.eigenpairs[i].value < 0.0);
    }
    std::vector<int> mult;
    for (const auto& c : r.clusters) mult.push_back(c.multiplicity);
    CHECK(mult == std::vector<int>{1, 3, 5, 7});
    CHECK(r.cluster_gap == doctest::Approx(10.0 * ops->hbar()));
  }

  TEST_CASE("dense cap and strategy selection") {
    const auto big = make_ops(SurfaceDescriptor::ellipsoid({1, 2, 3}), 50);
    CHECK(resolve_strategy(*big, Strategy::auto_select) == Strategy::iterative);
    CHECK(resolve_strategy(*make_ops(SurfaceDescriptor::ellipsoid({1, 2, 3}), 20), Strategy::auto_select) ==
          Strategy::dense);
    CHECK(resolve_strategy(*make_ops(SurfaceDescriptor::unit_sphere(), 50), Strategy::auto_select) ==
          Strategy::blocks);
    SpectrumOptions o;
    o.strategy = Strategy::dense;
    CHECK_THROWS_AS(spectrum(*big, o), ArgumentError);
    CHECK(strategy_from_string("blocks") == Strategy::blocks);
    CHECK_THROWS_AS(strategy_from_string("lanczos"), ArgumentError);
  }

  TEST_CASE("cluster values") {
    const auto c = cluster_values({0.0, -2.00001, -2.00002, -2.00009}, 0.01);
    REQUIRE(c.size() == 2);
    CHECK(c[0].mean == 0.0);
    CHECK(c[0].multiplicity == 1);
    CHECK(c[1].mean == doctest::Approx(-2.00004).epsilon(1e-12));
    CHECK(c[1].multiplicity == 3);
    CHECK(cluster_values({}, 0.01).empty());
    const auto five = cluster_values({-6.000039, -6.000046, -6.000075, -6.000154, -6.000400}, 0.01);
    REQUIRE(five.size() == 1);
    CHECK(five[0].multiplicity == 5);
  }

  TEST_CASE("cluster multiplicities add up") {
    Rng rng(35);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> v(rng.integer(0, 40));
      for (auto& x : v) x = -static_cast<double>(rng.integer(0, 5)) + rng.uniform(-1e-4, 1e-4);
      std::sort(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
      const auto c = cluster_values(v, 0.01);
      int total = 0;
      for (const auto& x : c) total += x.multiplicity;
      CHECK(total == static_cast<int>(v.size()));
      for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i].mean - c[i - 1].mean) > 0.01);
    }
  }

  TEST_CASE("convergence on the sphere") {
    auto s = std::make_shared<const SurfaceDescriptor>(SurfaceDescriptor::unit_sphere());
    SpectrumOptions o;
    o.count = 9;
    const auto t = convergence_study(s, {250, 500, 1000, 2000}, 1.0, GridOffset::paper, o,
                                     {{0.0, 1}, {-2.0, 3}, {-6.0, 5}});
    std::vector<double> e0, e2;
    for (const auto& r : t.rows) {
      if (r.cluster == 0) e0.push_back(r.abs_error);
      if (r.cluster == 1) e2.push_back(r.abs_error);
    }
    REQUIRE(e2.size() == 4);
    for (double e : e0) CHECK(e < 1e-10);
    for (std::size_t i = 1; i < e2.size(); ++i) CHECK(e2[i] < e2[i - 1]);
  }
}
