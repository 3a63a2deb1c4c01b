// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <memory>
#include <numbers>

#include "doctest.h"
#include "nclaplace/errors.hpp"
#include "nclaplace/experiments.hpp"
#include "nclaplace/quantization.hpp"
#include "support.hpp"

using namespace nclap;
using testing_support::Rng;

namespace {

std::shared_ptr<const SurfaceDescriptor> shared(SurfaceDescriptor s) {
  return std::make_shared<const SurfaceDescriptor>(std::move(s));
}

const Complex kI{0.0, 1.0};

}  // namespace

TEST_SUITE("quantization") {
  TEST_CASE("grid nodes and hbar") {
    const auto g = QuantizationGrid::build(4, -1, 1, 1);
    CHECK(g.hbar() == doctest::Approx(0.5));
    CHECK(g.node(1) == doctest::Approx(-0.5));
    CHECK(g.node(2) == doctest::Approx(0.0));
    CHECK(g.node(3) == doctest::Approx(0.5));
    CHECK(g.node(4) == doctest::Approx(1.0));
    CHECK(g.midpoint(1, 2) == doctest::Approx(-0.25));
    CHECK(QuantizationGrid::build(2000, -1, 1, 1).hbar() == doctest::Approx(0.001).epsilon(1e-14));

    const auto s = QuantizationGrid::build(4, -1, 1, 1, GridOffset::symmetric);
    CHECK(s.node(1) == doctest::Approx(-0.75));
    CHECK(s.node(4) == doctest::Approx(0.75));
  }

  TEST_CASE("grid validation") {
    CHECK_THROWS_AS(QuantizationGrid::build(1, -1, 1, 1), ArgumentError);
    CHECK_THROWS_AS(QuantizationGrid::build(4, 1, -1, 1), ArgumentError);
    CHECK_THROWS_AS(QuantizationGrid::build(4, -1, 1, 0), ArgumentError);
    CHECK_THROWS_AS(grid_offset_from_string("middle"), ArgumentError);
  }

  TEST_CASE("default beta") {
    CHECK(default_beta(SurfaceDescriptor::unit_sphere()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(default_beta(SurfaceDescriptor::sphere(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
    const auto sp = SurfaceDescriptor::spheroid(1, 2);
    CHECK(default_beta(sp) == doctest::Approx(surface_area(sp).value / (4.0 * std::numbers::pi)).epsilon(1e-12));
  }

  TEST_CASE("quantize simple functions") {
    const auto s = SurfaceDescriptor::unit_sphere();
    const auto g4 = QuantizationGrid::build(4, -1, 1, 1);
    const CMatrix one = CMatrix(quantize(BandLimitedFunction::constant(s.interval(), 1.0), g4));
    CHECK((one - CMatrix::Identity(4, 4)).norm() == doctest::Approx(0.0));
    const CMatrix z = CMatrix(quantize(s.z(), g4));
    Eigen::VectorXcd expected(4);
    expected << -0.5, 0.0, 0.5, 1.0;
    CHECK((z - CMatrix(expected.asDiagonal())).norm() < 1e-15);

    const auto g2 = QuantizationGrid::build(2, -1, 1, 1);
    const CMatrix x = CMatrix(quantize(s.x(), g2));
    CHECK(x(0, 1).real() == doctest::Approx(0.4330127019).epsilon(1e-10));
    CHECK(x(1, 0).real() == doctest::Approx(0.4330127019).epsilon(1e-10));
    CHECK(std::abs(x(0, 0)) == 0.0);
  }

  TEST_CASE("coordinate matrices at N = 2") {
    const double r3 = std::sqrt(3.0) / 4.0;
    const auto g = QuantizationGrid::build(2, -1, 1, 1);
    const auto c = coordinate_matrices(shared(SurfaceDescriptor::unit_sphere()), g);
    CHECK(c.closed_form);
    CHECK(std::abs(c.X.coeff(0, 1) - Complex(r3)) < 1e-15);
    CHECK(std::abs(c.Y.coeff(0, 1) - (-kI * r3)) < 1e-15);
    CHECK(std::abs(c.Z.coeff(0, 0)) < 1e-15);
    CHECK(std::abs(c.Z.coeff(1, 1) - 1.0) < 1e-15);

    const auto e = coordinate_matrices(shared(SurfaceDescriptor::ellipsoid({2, 3, 1})), g);
    CHECK(std::abs(e.X.coeff(0, 1) - Complex(2 * r3)) < 1e-15);
    CHECK(std::abs(e.Y.coeff(0, 1) - (-3.0 * kI * r3)) < 1e-15);
    CHECK(std::abs(e.Z.coeff(1, 1) - 1.0) < 1e-15);
  }

  TEST_CASE("X peaks at one half near the equator") {
    const auto g = QuantizationGrid::build(2000, -1, 1, 1);
    const auto c = coordinate_matrices(shared(SurfaceDescriptor::unit_sphere()), g);
    double peak = 0.0;
    for (int n = 1; n < 2000; ++n) peak = std::max(peak, std::abs(c.X.coeff(n - 1, n)));
    double scan = 0.0;
    for (int n = 1; n < 2000; ++n) {
      const double z = g.midpoint(n, n + 1);
      scan = std::max(scan, 0.5 * std::sqrt(1 - z * z));
    }
    CHECK(peak == doctest::Approx(scan).epsilon(1e-15));
    CHECK(peak == doctest::Approx(0.5).epsilon(1e-6));
  }

  TEST_CASE("quantized coordinates are hermitian and linear") {
    Rng rng(21);
    for (int t = 0; t < 10; ++t) {
      const auto s = SurfaceDescriptor::ellipsoid({rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2)});
      const auto g = QuantizationGrid::build(rng.integer(3, 30), -1, 1, rng.uniform(0.2, 3));
      for (int i = 0; i < 3; ++i) {
        const CMatrix T = CMatrix(quantize(s.coordinate(i), g));
        CHECK((T - T.adjoint()).norm() < 1e-14);
      }
      const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
      const CMatrix lhs = CMatrix(quantize(s.x().scaled(a) + s.z().scaled(b), g));
      const CMatrix rhs = a * CMatrix(quantize(s.x(), g)) + b * CMatrix(quantize(s.z(), g));
      CHECK((lhs - rhs).norm() < 1e-13);
    }
  }

  TEST_CASE("band limit must fit the matrix") {
    const auto s = SurfaceDescriptor::unit_sphere();
    CHECK_THROWS_AS(quantize(s.x() * s.x() * s.x(), QuantizationGrid::build(3, -1, 1, 1)), ArgumentError);
  }

  TEST_CASE("trace functional") {
    const auto s = SurfaceDescriptor::unit_sphere();
    const auto g = QuantizationGrid::build(10, -1, 1, 1);
    CHECK(trace_functional(CMatrix(CMatrix::Identity(10, 10)), g) ==
          doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
    double riemann = 0.0;
    for (int n = 1; n <= 10; ++n) riemann += g.node(n);
    CHECK(trace_functional(quantize(s.z(), g), g) == doctest::Approx(2 * std::numbers::pi * g.hbar() * riemann));
  }

  TEST_CASE("trace of z^2 converges to the integral") {
    const auto s = SurfaceDescriptor::unit_sphere();
    const double exact = 4.0 * std::numbers::pi / 3.0;
    double prev = 0.0;
    for (int N : {100, 200, 400}) {
      const auto g = QuantizationGrid::build(N, -1, 1, 1);
      double sum = 0.0;
      for (int n = 1; n <= N; ++n) sum += g.node(n) * g.node(n);
      const double tr = trace_functional(quantize(s.z() * s.z(), g), g);
      CHECK(tr == doctest::Approx(2 * std::numbers::pi * g.hbar() * sum).epsilon(1e-13));
      const double err = std::abs(tr - exact);
      if (prev > 0.0) CHECK(prev / err >= 2.0);
      prev = err;
    }
  }

  TEST_CASE("trace identity with default beta on random ellipsoids") {
    Rng rng(22);
    for (int t = 0; t < 8; ++t) {
      const auto s = SurfaceDescriptor::ellipsoid({rng.uniform(0.5, 3), rng.uniform(0.5, 3), rng.uniform(0.5, 3)});
      const int N = rng.integer(2, 500);
      const auto g = QuantizationGrid::build(N, -1, 1, default_beta(s));
      const double tr = trace_functional(CMatrix(CMatrix::Identity(N, N)), g);
      CHECK(std::abs(tr - surface_area(s).value) <= 1e-10);
    }
  }

  TEST_CASE("axiom defects") {
    const auto s = SurfaceDescriptor::unit_sphere();
    const auto g = QuantizationGrid::build(100, -1, 1, 1);
    const auto zz = axiom_defects(s.z(), s.z(), g);
    CHECK(zz.product_defect < 1e-14);
    CHECK(zz.bracket_defect == 0.0);
    const auto xy = axiom_defects(s.x(), s.y(), g);
    CHECK(xy.product_defect < 0.1);
    CHECK(std::isfinite(xy.bracket_defect));

    // The symmetric grid keeps the last node off the pole and the bracket exact.
    const auto gs = QuantizationGrid::build(100, -1, 1, 1, GridOffset::symmetric);
    const auto xys = axiom_defects(s.x(), s.y(), gs);
    CHECK(xys.product_defect < 0.1);
    CHECK(xys.bracket_defect < 1e-10);

    const auto xz1 = axiom_defects(s.x(), s.z(), g);
    const auto xz2 = axiom_defects(s.x(), s.z(), QuantizationGrid::build(200, -1, 1, 1));
    CHECK((xz2.bracket_defect <= xz1.bracket_defect / 2.0 || xz2.bracket_defect < 1e-10));
    CHECK(xz2.product_defect <= 0.55 * xz1.product_defect);
  }

  TEST_CASE("dequantize inverts quantize") {
    Rng rng(23);
    for (int t = 0; t < 10; ++t) {
      const auto s = SurfaceDescriptor::ellipsoid({rng.uniform(0.5, 2), rng.uniform(0.5, 2), rng.uniform(0.5, 2)});
      const int N = rng.integer(4, 40);
      const auto g = QuantizationGrid::build(N, -1, 1, 1, rng.integer(0, 1) ? GridOffset::paper : GridOffset::symmetric);
      const auto f = s.x() * s.y() + s.z();
      const auto d = dequantize(CMatrix(quantize(f, g)), g, 3, 1e-15);
      CHECK(d.modes.count(1) == 0);
      CHECK(d.modes.count(3) == 0);
      for (int j : {-2, 0, 2}) {
        REQUIRE(d.modes.count(j) == 1);
        for (const auto& [z, v] : d.modes.at(j)) CHECK(std::abs(v - f.mode_value(j, z)) < 1e-14);
      }
    }
    const auto g = QuantizationGrid::build(5, -1, 1, 1);
    const auto id = dequantize(CMatrix(CMatrix::Identity(5, 5)), g, 4);
    for (const auto& [j, samples] : id.modes) {
      for (const auto& [z, v] : samples) CHECK(std::abs(v - (j == 0 ? 1.0 : 0.0)) == 0.0);
    }
    CHECK(dequantize(CMatrix(CMatrix::Identity(5, 5)), g, 4, 0.5).modes.size() == 1);
  }

  TEST_CASE("spectral norm") {
    CMatrix A = CMatrix::Zero(3, 3);
    A(0, 0) = 3.0;
    A(1, 2) = Complex(0, -4.0);
    CHECK(spectral_norm(A) == doctest::Approx(4.0));
    CHECK(spectral_norm(CMatrix::Zero(3, 3)) == 0.0);
    A(2, 2) = std::nan("");
    CHECK(std::isnan(spectral_norm(A)));
  }
}
