// SPDX-License-Identifier: Apache-2.0
#include "nclaplace/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>

#include "nclaplace/errors.hpp"

namespace nclap {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex central_d1(const Profile::Fn& f, double z, double h) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

Complex central_d2(const Profile::Fn& f, double z, double h) {
  return (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
}

}  // namespace

SurfacePoint::SurfacePoint(double z, double theta) : z_(z) {
  theta_ = std::fmod(theta, kTwoPi);
  if (theta_ < 0.0) theta_ += kTwoPi;
}

// ---------------------------------------------------------------- Profile

Profile::Profile(Fn value, Fn d1, Fn d2) : value_(std::move(value)), d1_(std::move(d1)), d2_(std::move(d2)) {}

Complex Profile::d1(double z, double step) const {
  return d1_ ? d1_(z) : central_d1(value_, z, step);
}

Complex Profile::d2(double z, double step) const {
  return d2_ ? d2_(z) : central_d2(value_, z, step);
}

Profile Profile::constant(Complex c) {
  return Profile([c](double) { return c; }, [](double) { return Complex{}; }, [](double) { return Complex{}; });
}

Profile Profile::linear(double scale) {
  return Profile([scale](double z) { return Complex{scale * z}; }, [scale](double) { return Complex{scale}; },
                 [](double) { return Complex{}; });
}

Profile Profile::cap(Complex amplitude, double half_width) {
  const double w = half_width;
  auto value = [amplitude, w](double z) {
    const double u = z / w;
    return amplitude * std::sqrt(std::max(0.0, 1.0 - u * u));
  };
  auto d1 = [amplitude, w](double z) {
    const double u = z / w;
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    return amplitude * (-u / (w * s));
  };
  auto d2 = [amplitude, w](double z) {
    const double u = z / w;
    const double q = std::max(0.0, 1.0 - u * u);
    return amplitude * (-1.0 / (w * w * q * std::sqrt(q)));
  };
  Profile out(value, d1, d2);
  out.cap_ = std::make_pair(amplitude, w);
  return out;
}

Profile Profile::scaled(Complex c) const {
  Fn v = value_;
  Fn a = d1_;
  Fn b = d2_;
  Profile out([v, c](double z) { return c * v(z); });
  if (a) out.d1_ = [a, c](double z) { return c * a(z); };
  if (b) out.d2_ = [b, c](double z) { return c * b(z); };
  if (cap_) out.cap_ = std::make_pair(c * cap_->first, cap_->second);
  return out;
}

Profile Profile::conjugated() const {
  Fn v = value_;
  Fn a = d1_;
  Fn b = d2_;
  Profile out([v](double z) { return std::conj(v(z)); });
  if (a) out.d1_ = [a](double z) { return std::conj(a(z)); };
  if (b) out.d2_ = [b](double z) { return std::conj(b(z)); };
  if (cap_) out.cap_ = std::make_pair(std::conj(cap_->first), cap_->second);
  return out;
}

Profile operator+(const Profile& a, const Profile& b) {
  Profile out([av = a.value_, bv = b.value_](double z) { return av(z) + bv(z); });
  if (a.has_analytic_derivatives() && b.has_analytic_derivatives()) {
    out.d1_ = [x = a.d1_, y = b.d1_](double z) { return x(z) + y(z); };
    out.d2_ = [x = a.d2_, y = b.d2_](double z) { return x(z) + y(z); };
  }
  return out;
}

Profile operator*(const Profile& a, const Profile& b) {
  // Two caps of one width multiply to a polynomial; the generic rule would
  // hit 0 * inf at the poles.
  if (a.cap_ && b.cap_ && a.cap_->second == b.cap_->second) {
    const Complex c = a.cap_->first * b.cap_->first;
    const double w2 = a.cap_->second * a.cap_->second;
    return Profile([c, w2](double z) { return c * (1.0 - z * z / w2); }, [c, w2](double z) { return -2.0 * c * z / w2; },
                   [c, w2](double) { return -2.0 * c / w2; });
  }
  Profile out([av = a.value_, bv = b.value_](double z) { return av(z) * bv(z); });
  if (a.has_analytic_derivatives() && b.has_analytic_derivatives()) {
    out.d1_ = [av = a.value_, ad = a.d1_, bv = b.value_, bd = b.d1_](double z) {
      return ad(z) * bv(z) + av(z) * bd(z);
    };
    out.d2_ = [av = a.value_, ad = a.d1_, add = a.d2_, bv = b.value_, bd = b.d1_, bdd = b.d2_](double z) {
      return add(z) * bv(z) + 2.0 * ad(z) * bd(z) + av(z) * bdd(z);
    };
  }
  return out;
}

// ---------------------------------------------------- BandLimitedFunction

BandLimitedFunction::BandLimitedFunction(Interval interval, std::map<int, Profile> modes, bool real_valued)
    : interval_(interval), modes_(std::move(modes)), real_valued_(real_valued) {
  if (!(interval_.lo < interval_.hi)) throw ArgumentError("band-limited function: interval must satisfy a < b");
}

BandLimitedFunction BandLimitedFunction::constant(Interval interval, double c) {
  return BandLimitedFunction(interval, {{0, Profile::constant(c)}}, true);
}

BandLimitedFunction BandLimitedFunction::height(Interval interval, double scale) {
  return BandLimitedFunction(interval, {{0, Profile::linear(scale)}}, true);
}

const Profile* BandLimitedFunction::mode(int j) const {
  auto it = modes_.find(j);
  return it == modes_.end() ? nullptr : &it->second;
}

int BandLimitedFunction::max_mode() const {
  int delta = 0;
  for (const auto& [j, _] : modes_) delta = std::max(delta, std::abs(j));
  return delta;
}

bool BandLimitedFunction::uses_numeric_derivatives() const {
  return std::any_of(modes_.begin(), modes_.end(),
                     [](const auto& kv) { return !kv.second.has_analytic_derivatives(); });
}

void BandLimitedFunction::check_domain(double z) const {
  if (!interval_.contains(z)) {
    std::ostringstream msg;
    msg << "evaluation at z = " << z << " outside [" << interval_.lo << ", " << interval_.hi << "]";
    throw DomainError(msg.str());
  }
}

Complex BandLimitedFunction::mode_value(int j, double z) const {
  check_domain(z);
  const Profile* p = mode(j);
  return p ? (*p)(z) : Complex{};
}

Complex BandLimitedFunction::operator()(const SurfacePoint& p) const {
  check_domain(p.z());
  Complex sum{};
  for (const auto& [j, prof] : modes_) sum += prof(p.z()) * std::exp(kI * (j * p.theta()));
  return sum;
}

Jet BandLimitedFunction::jet(const SurfacePoint& p) const {
  check_domain(p.z());
  const double h = fd_step();
  Jet out{};
  for (const auto& [j, prof] : modes_) {
    const Complex e = std::exp(kI * (j * p.theta()));
    const Complex ij = kI * static_cast<double>(j);
    const Complex v = prof(p.z());
    const Complex d1 = prof.d1(p.z(), h);
    const Complex d2 = prof.d2(p.z(), h);
    out.value += v * e;
    out.dz += d1 * e;
    out.dt += ij * v * e;
    out.dzz += d2 * e;
    out.dzt += ij * d1 * e;
    out.dtt += ij * ij * v * e;
  }
  return out;
}

BandLimitedFunction BandLimitedFunction::scaled(double c) const {
  std::map<int, Profile> out;
  for (const auto& [j, prof] : modes_) out.emplace(j, prof.scaled(c));
  return BandLimitedFunction(interval_, std::move(out), real_valued_);
}

BandLimitedFunction operator+(const BandLimitedFunction& a, const BandLimitedFunction& b) {
  std::map<int, Profile> out = a.modes_;
  for (const auto& [j, prof] : b.modes_) {
    auto it = out.find(j);
    if (it == out.end()) {
      out.emplace(j, prof);
    } else {
      it->second = it->second + prof;
    }
  }
  return BandLimitedFunction(a.interval_, std::move(out), a.real_valued_ && b.real_valued_);
}

BandLimitedFunction operator*(const BandLimitedFunction& a, const BandLimitedFunction& b) {
  std::map<int, Profile> out;
  for (const auto& [i, fa] : a.modes_) {
    for (const auto& [k, fb] : b.modes_) {
      const int j = i + k;
      Profile term = fa * fb;
      auto it = out.find(j);
      if (it == out.end()) {
        out.emplace(j, std::move(term));
      } else {
        it->second = it->second + term;
      }
    }
  }
  return BandLimitedFunction(a.interval_, std::move(out), a.real_valued_ && b.real_valued_);
}

BandLimitedFunction bracket_function(const BandLimitedFunction& f, const BandLimitedFunction& h) {
  std::map<int, std::vector<std::pair<int, int>>> pairs;
  for (const auto& [i, _] : f.modes()) {
    for (const auto& [k, __] : h.modes()) pairs[i + k].emplace_back(i, k);
  }
  const double step = f.fd_step();
  std::map<int, Profile> out;
  for (const auto& [j, list] : pairs) {
    std::vector<std::tuple<int, int, Profile, Profile>> terms;
    for (auto [i, k] : list) terms.emplace_back(i, k, *f.mode(i), *h.mode(k));
    out.emplace(j, Profile([terms, step](double z) {
                  Complex sum{};
                  for (const auto& [i, k, fi, hk] : terms) {
                    const auto& cf = fi.cap_form();
                    const auto& ch = hk.cap_form();
                    if (cf && ch && cf->second == ch->second) {
                      // cap * cap' = -A B z / w^2, finite at the poles
                      const double w = cf->second;
                      sum += kI * static_cast<double>(i - k) * cf->first * ch->first * (-z / (w * w));
                      continue;
                    }
                    sum += kI * static_cast<double>(i) * fi(z) * hk.d1(z, step);
                    sum -= fi.d1(z, step) * kI * static_cast<double>(k) * hk(z);
                  }
                  return sum;
                }));
  }
  return BandLimitedFunction(f.interval(), std::move(out), f.real_valued() && h.real_valued());
}

// ------------------------------------------------------ SurfaceDescriptor

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::sphere:
      return "sphere";
    case SurfaceKind::ellipsoid:
      return "ellipsoid";
    case SurfaceKind::spheroid:
      return "spheroid";
  }
  return "unknown";
}

namespace {

BandLimitedFunction make_x(Interval iv, double a1, double w) {
  const Profile half = Profile::cap(0.5 * a1, w);
  return BandLimitedFunction(iv, {{-1, half}, {1, half}}, true);
}

BandLimitedFunction make_y(Interval iv, double a2, double w) {
  // a2 r sin(theta) = a2 r (e^{i theta} - e^{-i theta}) / 2i
  const Profile half = Profile::cap(0.5 * a2, w);
  return BandLimitedFunction(iv, {{1, half.scaled(-kI)}, {-1, half.scaled(kI)}}, true);
}

}  // namespace

SurfaceDescriptor::SurfaceDescriptor(std::string name, SurfaceKind kind, SemiAxes axes, double half_width)
    : name_(std::move(name)),
      kind_(kind),
      axes_(axes),
      half_width_(half_width),
      interval_{-half_width, half_width},
      x_(make_x(interval_, axes.a1, half_width)),
      y_(make_y(interval_, axes.a2, half_width)),
      z_(BandLimitedFunction::height(interval_, axes.a3 / half_width)) {
  if (!(axes.a1 > 0.0 && axes.a2 > 0.0 && axes.a3 > 0.0)) throw ArgumentError("semi-axes must be positive");
  const QuadratureResult area = surface_area(*this);
  if (area.converged) area_ = area.value;
}

SurfaceDescriptor SurfaceDescriptor::unit_sphere() { return {"sphere", SurfaceKind::sphere, {1.0, 1.0, 1.0}, 1.0}; }

SurfaceDescriptor SurfaceDescriptor::sphere(double radius) {
  return {"sphere", SurfaceKind::sphere, {radius, radius, radius}, radius};
}

SurfaceDescriptor SurfaceDescriptor::ellipsoid(SemiAxes axes) {
  return {"ellipsoid", SurfaceKind::ellipsoid, axes, 1.0};
}

SurfaceDescriptor SurfaceDescriptor::spheroid(double equatorial, double polar) {
  return {"spheroid", SurfaceKind::spheroid, {equatorial, equatorial, polar}, 1.0};
}

const BandLimitedFunction& SurfaceDescriptor::coordinate(int i) const {
  switch (i) {
    case 0:
      return x_;
    case 1:
      return y_;
    case 2:
      return z_;
    default:
      throw ArgumentError("coordinate index must be 0, 1 or 2");
  }
}

bool SurfaceDescriptor::is_revolution() const {
  return std::abs(axes_.a1 - axes_.a2) <= 1e-14 * std::max(axes_.a1, axes_.a2);
}

double SurfaceDescriptor::radius(double z) const {
  const double u = z / half_width_;
  return axes_.a1 * std::sqrt(std::max(0.0, 1.0 - u * u));
}

// ----------------------------------------------------- classical operators

Complex poisson_bracket(const BandLimitedFunction& f, const BandLimitedFunction& h, const SurfacePoint& p) {
  const Jet a = f.jet(p);
  const Jet b = h.jet(p);
  return a.dt * b.dz - a.dz * b.dt;
}

namespace {

struct BracketJet {
  Complex value;
  Complex dz;
  Complex dt;
};

BracketJet bracket_jet(const Jet& f, const Jet& h) {
  return {f.dt * h.dz - f.dz * h.dt, f.dzt * h.dz + f.dt * h.dzz - f.dzz * h.dt - f.dz * h.dzt,
          f.dtt * h.dz + f.dt * h.dzt - f.dzt * h.dt - f.dz * h.dtt};
}

struct AreaDensity {
  double value;
  double dz;
  double dt;
};

AreaDensity area_density(const std::array<Jet, 3>& x) {
  const std::array<BracketJet, 3> b = {bracket_jet(x[0], x[1]), bracket_jet(x[1], x[2]), bracket_jet(x[2], x[0])};
  Complex radicand{};
  Complex half_dz{};
  Complex half_dt{};
  for (const auto& bj : b) {
    radicand += bj.value * bj.value;
    half_dz += bj.value * bj.dz;
    half_dt += bj.value * bj.dt;
  }
  const double scale = std::max(1.0, std::abs(radicand));
  if (radicand.real() < -1e-12 * scale || std::abs(radicand.imag()) > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "metric radicand " << radicand << " is not a nonnegative real";
    throw ConsistencyError(msg.str());
  }
  const double s = std::sqrt(std::max(0.0, radicand.real()));
  return {s, s > 0.0 ? half_dz.real() / s : 0.0, s > 0.0 ? half_dt.real() / s : 0.0};
}

std::array<Jet, 3> coordinate_jets(const SurfaceDescriptor& s, const SurfacePoint& p) {
  return {s.x().jet(p), s.y().jet(p), s.z().jet(p)};
}

}  // namespace

double metric_sqrt_det(const SurfaceDescriptor& s, const SurfacePoint& p) {
  return area_density(coordinate_jets(s, p)).value;
}

Complex laplace_beltrami_apply(const SurfaceDescriptor& s, const BandLimitedFunction& f, const SurfacePoint& p) {
  const auto x = coordinate_jets(s, p);
  const AreaDensity g = area_density(x);
  if (g.value < 1e-10) {
    std::ostringstream msg;
    msg << "area density " << g.value << " vanishes at z = " << p.z();
    throw SingularPointError(msg.str());
  }
  const Jet fj = f.jet(p);
  Complex sum{};
  for (const Jet& xi : x) {
    // u = {x_i, f} / sqrt|g|; outer bracket needs its z and theta derivatives.
    const BracketJet inner = bracket_jet(xi, fj);
    const double s2 = g.value * g.value;
    const Complex u_z = (inner.dz * g.value - inner.value * g.dz) / s2;
    const Complex u_t = (inner.dt * g.value - inner.value * g.dt) / s2;
    sum += (xi.dt * u_z - xi.dz * u_t) / g.value;
  }
  return sum;
}

// ------------------------------------------------------------- quadrature

namespace {

// z = c - rho cos(phi) removes the square-root endpoint behaviour of the
// profiles; theta is integrated by the (spectrally accurate) periodic
// trapezoidal rule.
template <class F>
QuadratureResult integrate_surface(const Interval& iv, F&& integrand, double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  using boost::math::quadrature::trapezoidal;
  const double c = 0.5 * (iv.lo + iv.hi);
  const double rho = 0.5 * iv.length();
  bool theta_ok = true;
  auto outer = [&](double phi) {
    const double z = c - rho * std::cos(phi);
    const double jac = rho * std::sin(phi);
    double err = 0.0;
    const double inner = trapezoidal([&](double theta) { return integrand(z, theta); }, 0.0, kTwoPi, 1e-14, 14, &err);
    if (!std::isfinite(inner)) theta_ok = false;
    return inner * jac;
  };
  double err = 0.0;
  const double value = gauss_kronrod<double, 61>::integrate(outer, 0.0, M_PI, 20, rel_tol * 1e-2, &err);
  QuadratureResult out;
  out.value = value;
  out.error_estimate = err;
  out.converged = theta_ok && std::isfinite(value) && err <= rel_tol * std::max(1.0, std::abs(value));
  return out;
}

}  // namespace

QuadratureResult surface_area(const SurfaceDescriptor& s) {
  return integrate_surface(
      s.interval(), [&](double z, double theta) { return metric_sqrt_det(s, SurfacePoint(z, theta)); }, 1e-10);
}

QuadratureResult integrate_area(const SurfaceDescriptor& s, const BandLimitedFunction& f) {
  return integrate_surface(
      s.interval(),
      [&](double z, double theta) {
        const SurfacePoint p(z, theta);
        return f(p).real() * metric_sqrt_det(s, p);
      },
      1e-10);
}

QuadratureResult integrate_parameter(const BandLimitedFunction& f) {
  const Profile* f0 = f.mode(0);
  QuadratureResult out;
  out.converged = true;
  if (f0 == nullptr) return out;
  const Interval& iv = f.interval();
  const double c = 0.5 * (iv.lo + iv.hi);
  const double rho = 0.5 * iv.length();
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double phi) { return (*f0)(c - rho * std::cos(phi)).real() * rho * std::sin(phi); }, 0.0, M_PI, 20, 1e-12,
      &err);
  out.value = kTwoPi * value;
  out.error_estimate = kTwoPi * err;
  out.converged = std::isfinite(value) && out.error_estimate <= 1e-10 * std::max(1.0, std::abs(out.value));
  return out;
}

}  // namespace nclap
