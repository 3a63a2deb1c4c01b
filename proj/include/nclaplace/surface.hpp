// SPDX-License-Identifier: Apache-2.0
//
// Axisymmetric embedded surfaces described in (z, theta) coordinates, the
// band-limited functions living on them, and the classical differential
// quantities (Poisson bracket, area density, Laplace-Beltrami) used as
// references for the matrix regularization.
#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace nclap {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Closed parameter interval [lo, hi] of the height coordinate.
struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double z, double rel_tol = 1e-12) const {
    const double slack = rel_tol * length();
    return z >= lo - slack && z <= hi + slack;
  }
};

/// Point of the parameter domain. theta is reduced to [0, 2pi).
class SurfacePoint {
 public:
  SurfacePoint(double z, double theta);
  double z() const { return z_; }
  double theta() const { return theta_; }

 private:
  double z_;
  double theta_;
};

/// A complex profile z -> f(z) with optional closed-form first and second
/// derivatives. Missing derivatives fall back to central differences.
class Profile {
 public:
  using Fn = std::function<Complex(double)>;

  Profile() = default;
  explicit Profile(Fn value, Fn d1 = {}, Fn d2 = {});

  Complex operator()(double z) const { return value_(z); }
  Complex d1(double z, double step) const;
  Complex d2(double z, double step) const;
  bool has_analytic_derivatives() const { return static_cast<bool>(d1_) && static_cast<bool>(d2_); }

  static Profile constant(Complex c);
  /// scale * z
  static Profile linear(double scale);
  /// amplitude * sqrt(1 - (z/half_width)^2), radicand clamped at zero.
  static Profile cap(Complex amplitude, double half_width);

  Profile scaled(Complex c) const;
  Profile conjugated() const;
  /// (amplitude, half_width) when this is a cap profile.
  const std::optional<std::pair<Complex, double>>& cap_form() const { return cap_; }
  friend Profile operator+(const Profile& a, const Profile& b);
  friend Profile operator*(const Profile& a, const Profile& b);

 private:
  Fn value_;
  Fn d1_;
  Fn d2_;
  std::optional<std::pair<Complex, double>> cap_;
};

/// Value and first/second partial derivatives in (z, theta) at one point.
struct Jet {
  Complex value;
  Complex dz;
  Complex dt;
  Complex dzz;
  Complex dzt;
  Complex dtt;
};

/// f(z, theta) = sum_j f_j(z) exp(i j theta) with finitely many modes.
class BandLimitedFunction {
 public:
  BandLimitedFunction(Interval interval, std::map<int, Profile> modes, bool real_valued);

  static BandLimitedFunction constant(Interval interval, double c);
  /// scale * z as a single mode-0 profile.
  static BandLimitedFunction height(Interval interval, double scale = 1.0);

  const Interval& interval() const { return interval_; }
  const std::map<int, Profile>& modes() const { return modes_; }
  const Profile* mode(int j) const;
  /// Band limit delta: largest |j| carried.
  int max_mode() const;
  bool real_valued() const { return real_valued_; }
  /// Step used when a profile lacks closed-form derivatives.
  double fd_step() const { return interval_.length() * 1e-6; }
  bool uses_numeric_derivatives() const;

  Complex operator()(const SurfacePoint& p) const;
  Jet jet(const SurfacePoint& p) const;
  /// Mode-j profile value with a domain check.
  Complex mode_value(int j, double z) const;

  BandLimitedFunction scaled(double c) const;
  friend BandLimitedFunction operator+(const BandLimitedFunction& a, const BandLimitedFunction& b);
  /// Pointwise product by mode convolution; band limits add.
  friend BandLimitedFunction operator*(const BandLimitedFunction& a, const BandLimitedFunction& b);

 private:
  void check_domain(double z) const;

  Interval interval_;
  std::map<int, Profile> modes_;
  bool real_valued_;
};

/// Unweighted bracket {f,h} = d_theta f d_z h - d_z f d_theta h as a
/// band-limited function (exact mode convolution).
BandLimitedFunction bracket_function(const BandLimitedFunction& f, const BandLimitedFunction& h);

enum class SurfaceKind { sphere, ellipsoid, spheroid };

std::string to_string(SurfaceKind kind);

struct SemiAxes {
  double a1 = 1.0;
  double a2 = 1.0;
  double a3 = 1.0;
};

/// Surface x = a1 sqrt(1-(z/w)^2) cos(theta), y = a2 sqrt(1-(z/w)^2) sin(theta),
/// third coordinate (a3/w) z, parametrized by z in [-w, w].
class SurfaceDescriptor {
 public:
  static SurfaceDescriptor unit_sphere();
  /// Round sphere parametrized by its geometric height, z in [-R, R].
  static SurfaceDescriptor sphere(double radius);
  /// Ellipsoid on the normalized parameter interval [-1, 1].
  static SurfaceDescriptor ellipsoid(SemiAxes axes);
  /// Ellipsoid with a1 = a2 = equatorial, a3 = polar.
  static SurfaceDescriptor spheroid(double equatorial, double polar);

  const std::string& name() const { return name_; }
  SurfaceKind kind() const { return kind_; }
  const SemiAxes& semi_axes() const { return axes_; }
  const Interval& interval() const { return interval_; }

  const BandLimitedFunction& x() const { return x_; }
  const BandLimitedFunction& y() const { return y_; }
  const BandLimitedFunction& z() const { return z_; }
  /// Embedding coordinate 0, 1 or 2.
  const BandLimitedFunction& coordinate(int i) const;

  /// Metric independent of theta (a1 == a2).
  bool is_revolution() const;
  /// Axial radius r(z) of a surface of revolution.
  double radius(double z) const;
  /// Derivative of the third embedding coordinate with respect to z.
  double height_slope() const { return axes_.a3 / half_width_; }

  std::optional<double> cached_area() const { return area_; }

 private:
  SurfaceDescriptor(std::string name, SurfaceKind kind, SemiAxes axes, double half_width);

  std::string name_;
  SurfaceKind kind_;
  SemiAxes axes_;
  double half_width_;
  Interval interval_;
  BandLimitedFunction x_;
  BandLimitedFunction y_;
  BandLimitedFunction z_;
  std::optional<double> area_;
};

Complex poisson_bracket(const BandLimitedFunction& f, const BandLimitedFunction& h, const SurfacePoint& p);

/// sqrt(sum_{i>j} {x_i, x_j}^2), the area density in (z, theta).
double metric_sqrt_det(const SurfaceDescriptor& s, const SurfacePoint& p);

/// Bracket form sum_i g^{-1/2} {x_i, g^{-1/2} {x_i, f}}. Throws
/// SingularPointError where the area density drops below 1e-10.
Complex laplace_beltrami_apply(const SurfaceDescriptor& s, const BandLimitedFunction& f, const SurfacePoint& p);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

/// Integral of the area density over the parameter domain, relative
/// tolerance 1e-10.
QuadratureResult surface_area(const SurfaceDescriptor& s);

/// Integral of a band-limited function against the area form.
QuadratureResult integrate_area(const SurfaceDescriptor& s, const BandLimitedFunction& f);

/// Integral of f against dz dtheta (the symplectic form with unit density).
QuadratureResult integrate_parameter(const BandLimitedFunction& f);

}  // namespace nclap
