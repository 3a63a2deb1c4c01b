// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nclaplace/errors.hpp"
#include "nclaplace/surface.hpp"
#include "support.hpp"

using namespace nclap;
using testing_support::Embedding;
using testing_support::Rng;

namespace {

double prolate_area(double a, double c) {
  const double e = std::sqrt(1.0 - a * a / (c * c));
  return 2.0 * std::numbers::pi * a * a * (1.0 + c / (a * e) * std::asin(e));
}

}  // namespace

TEST_SUITE("surface") {
  TEST_CASE("bracket of a function with itself vanishes") {
    const auto s = SurfaceDescriptor::unit_sphere();
    Rng rng(11);
    for (int t = 0; t < 10; ++t) {
      const SurfacePoint p(rng.uniform(-0.95, 0.95), rng.uniform(0, 6.28));
      CHECK(std::abs(poisson_bracket(s.z(), s.z(), p)) == doctest::Approx(0.0));
      CHECK(std::abs(poisson_bracket(s.x(), s.x(), p)) < 1e-14);
    }
  }

  TEST_CASE("sphere coordinate brackets against finite differences") {
    const auto s = SurfaceDescriptor::unit_sphere();
    const Embedding e{1, 1, 1};
    Rng rng(12);
    const double h = 1e-6;
    for (int t = 0; t < 10; ++t) {
      const double z = rng.uniform(-0.9, 0.9), th = rng.uniform(0, 6.28);
      const SurfacePoint p(z, th);
      // {f,h} = d_theta f d_z h - d_z f d_theta h from raw embedding differences
      auto d = [&](int i, double dz, double dt) { return (e(z + dz, th + dt)(i) - e(z - dz, th - dt)(i)) / (2 * h); };
      auto fd_bracket = [&](int i, int j) { return d(i, 0, h) * d(j, h, 0) - d(i, h, 0) * d(j, 0, h); };
      CHECK(poisson_bracket(s.x(), s.y(), p).real() == doctest::Approx(z).epsilon(1e-9));
      CHECK(poisson_bracket(s.x(), s.y(), p).real() == doctest::Approx(fd_bracket(0, 1)).epsilon(1e-6));
      CHECK(poisson_bracket(s.y(), s.z(), p).real() == doctest::Approx(e(z, th)(0)).epsilon(1e-9));
      CHECK(poisson_bracket(s.y(), s.z(), p).real() == doctest::Approx(fd_bracket(1, 2)).epsilon(1e-6));
      CHECK(std::abs(poisson_bracket(s.x(), s.y(), p).imag()) < 1e-14);
    }
  }

  TEST_CASE("area density") {
    const auto sphere = SurfaceDescriptor::unit_sphere();
    Rng rng(13);
    for (int t = 0; t < 10; ++t) {
      const SurfacePoint p(rng.uniform(-0.95, 0.95), rng.uniform(0, 6.28));
      CHECK(metric_sqrt_det(sphere, p) == doctest::Approx(1.0).epsilon(1e-12));
      const double x = sphere.x()(p).real(), y = sphere.y()(p).real(), z = sphere.z()(p).real();
      CHECK(x * x + y * y + z * z == doctest::Approx(1.0).epsilon(1e-14));
    }
    const auto spheroid = SurfaceDescriptor::ellipsoid({1, 1, 2});
    CHECK(metric_sqrt_det(spheroid, SurfacePoint(0, 0)) ==
          doctest::Approx(testing_support::fd_area_density({1, 1, 2}, 0, 0)).epsilon(1e-8));
  }

  TEST_CASE("area density matches the pullback metric on random ellipsoids") {
    Rng rng(14);
    for (int t = 0; t < 20; ++t) {
      const SemiAxes a{rng.uniform(0.5, 3), rng.uniform(0.5, 3), rng.uniform(0.5, 3)};
      const auto s = SurfaceDescriptor::ellipsoid(a);
      const double z = rng.uniform(-0.9, 0.9), th = rng.uniform(0, 6.28);
      const double fd = testing_support::fd_area_density({a.a1, a.a2, a.a3}, z, th);
      CHECK(metric_sqrt_det(s, SurfacePoint(z, th)) == doctest::Approx(fd).epsilon(1e-7));
    }
  }

  TEST_CASE("Laplace-Beltrami on degree-one harmonics") {
    const auto s = SurfaceDescriptor::unit_sphere();
    Rng rng(15);
    for (int t = 0; t < 10; ++t) {
      const SurfacePoint p(rng.uniform(-0.9, 0.9), rng.uniform(0, 6.28));
      CHECK(laplace_beltrami_apply(s, s.z(), p).real() == doctest::Approx(-2.0 * p.z()).epsilon(1e-9));
      CHECK(laplace_beltrami_apply(s, s.x(), p).real() ==
            doctest::Approx(-2.0 * s.x()(p).real()).epsilon(1e-9).scale(1.0));
    }
  }

  TEST_CASE("Laplace-Beltrami on a spheroid against a finite-difference stencil") {
    const auto s = SurfaceDescriptor::ellipsoid({1, 1, 2});
    const Embedding e{1, 1, 2};
    const double expected = testing_support::fd_laplace_zonal(e, [](double z) { return 2.0 * z; }, 0.3);
    CHECK(laplace_beltrami_apply(s, s.z(), SurfacePoint(0.3, 0)).real() == doctest::Approx(expected).epsilon(1e-5));
  }

  TEST_CASE("Laplace-Beltrami refuses the poles") {
    const auto s = SurfaceDescriptor::unit_sphere();
    CHECK_THROWS_AS(laplace_beltrami_apply(s, s.z(), SurfacePoint(1.0, 0)), SingularPointError);
  }

  TEST_CASE("evaluation outside the interval") {
    const auto s = SurfaceDescriptor::unit_sphere();
    CHECK_THROWS_AS(s.z()(SurfacePoint(1.5, 0)), DomainError);
  }

  TEST_CASE("surface areas") {
    const double four_pi = 4.0 * std::numbers::pi;
    CHECK(surface_area(SurfaceDescriptor::unit_sphere()).value == doctest::Approx(four_pi).epsilon(1e-10));
    CHECK(surface_area(SurfaceDescriptor::ellipsoid({1, 1, 1})).value == doctest::Approx(four_pi).epsilon(1e-10));
    CHECK(surface_area(SurfaceDescriptor::sphere(2.0)).value == doctest::Approx(4.0 * four_pi).epsilon(1e-10));
    CHECK(surface_area(SurfaceDescriptor::ellipsoid({1, 1, 2})).value ==
          doctest::Approx(prolate_area(1, 2)).epsilon(1e-10));
    CHECK(surface_area(SurfaceDescriptor::spheroid(1, 2)).value == doctest::Approx(prolate_area(1, 2)).epsilon(1e-10));
  }

  TEST_CASE("integrals") {
    const auto s = SurfaceDescriptor::unit_sphere();
    CHECK(integrate_area(s, s.z() * s.z()).value == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-10));
    CHECK(std::abs(integrate_area(s, s.z()).value) < 1e-12);
    CHECK(integrate_parameter(BandLimitedFunction::constant(s.interval(), 1.0)).value ==
          doctest::Approx(2.0 * 2.0 * std::numbers::pi));
  }

  TEST_CASE("mode convolution of products") {
    const auto s = SurfaceDescriptor::unit_sphere();
    const auto xy = s.x() * s.y();
    CHECK(xy.max_mode() == 2);
    Rng rng(16);
    for (int t = 0; t < 10; ++t) {
      const SurfacePoint p(rng.uniform(-1, 1), rng.uniform(0, 6.28));
      CHECK(std::abs(xy(p) - s.x()(p) * s.y()(p)) < 1e-14);
    }
  }

  TEST_CASE("revolution flag") {
    CHECK(SurfaceDescriptor::unit_sphere().is_revolution());
    CHECK(SurfaceDescriptor::spheroid(1, 2).is_revolution());
    CHECK_FALSE(SurfaceDescriptor::ellipsoid({1, 2, 3}).is_revolution());
    CHECK(SurfaceDescriptor::sphere(2.0).radius(0.0) == doctest::Approx(2.0));
  }
}
