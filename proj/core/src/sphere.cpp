#include "hurwitz/sphere.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hurwitz {

Vec3 to_sphere(cplx w) {
  const double r2 = std::norm(w);
  const double d = 1.0 + r2;
  return {2.0 * w.real() / d, 2.0 * w.imag() / d, (r2 - 1.0) / d};
}

Vec3 to_sphere(const Projective& p) {
  const double n1 = std::norm(p.z1);
  const double n2 = std::norm(p.z2);
  const double d = n1 + n2;
  const cplx m = p.z1 * std::conj(p.z2);
  return {2.0 * m.real() / d, 2.0 * m.imag() / d, (n1 - n2) / d};
}

Projective from_sphere(const Vec3& x) {
  if (x.z() <= 0.0) return Projective::finite(cplx(x.x(), x.y()) / (1.0 - x.z()));
  return {1.0, cplx(x.x(), -x.y()) / (1.0 + x.z())};
}

cplx affine(const Vec3& x) {
  if (x.z() >= 1.0) throw std::domain_error("affine: north pole has no affine coordinate");
  // (x + iy)/(1 - z) and (1 + z)/(x - iy) agree; pick the better conditioned one.
  if (x.z() <= 0.0) return cplx(x.x(), x.y()) / (1.0 - x.z());
  return (1.0 + x.z()) / cplx(x.x(), -x.y());
}

double chordal_distance(cplx a, cplx b) {
  return 2.0 * std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

namespace {

void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(order), 0.0);
  w.assign(static_cast<std::size_t>(order), 0.0);
  for (int i = 0; i < order; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = t;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

double target_area_by_quadrature(int order) {
  if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  // omega_Y = h i dw^dwbar = 2 h dx dy; polar coordinates, r = t/(1-t), t in [0,1).
  double sum = 0.0;
  for (int i = 0; i < order; ++i) {
    const double t = 0.5 * (x[static_cast<std::size_t>(i)] + 1.0);
    const double r = t / (1.0 - t);
    const double dr = 1.0 / ((1.0 - t) * (1.0 - t));
    double angular = 0.0;
    for (int j = 0; j < order; ++j) {
      const double th = std::numbers::pi * (x[static_cast<std::size_t>(j)] + 1.0);
      angular += std::numbers::pi * w[static_cast<std::size_t>(j)] * 2.0 * target_density(std::polar(r, th));
    }
    sum += 0.5 * w[static_cast<std::size_t>(i)] * angular * r * dr;
  }
  return sum;
}

SphereRotation::SphereRotation(cplx a, cplx b) : a_(a), b_(b) {
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  if (!(n > 0.0)) throw std::invalid_argument("SphereRotation: zero matrix");
  a_ /= n;
  b_ /= n;
}

SphereRotation SphereRotation::polar(double angle) { return {std::polar(1.0, 0.5 * angle), 0.0}; }

SphereRotation SphereRotation::about_axis(const Vec3& axis, double angle) {
  // The SU(2) element cos(t/2) - i sin(t/2) (n . sigma), expressed in the
  // stereographic convention used by to_sphere (checked by the unit tests).
  const Vec3 n = axis.normalized();
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  const cplx a(c, s * n.z());
  const cplx b = cplx(0.0, s) * cplx(n.x(), -n.y());
  return {a, b};
}

SphereRotation SphereRotation::to_north(const Vec3& from) {
  // The denominator -conj(b) z1 + conj(a) z2 vanishes at (z1 : z2) when
  // a = conj(z1), b = conj(z2).
  const auto p = from_sphere(from);
  return {std::conj(p.z1), std::conj(p.z2)};
}

Projective SphereRotation::apply(const Projective& p) const {
  return {a_ * p.z1 + b_ * p.z2, -std::conj(b_) * p.z1 + std::conj(a_) * p.z2};
}

cplx SphereRotation::apply(cplx w) const { return (a_ * w + b_) / (-std::conj(b_) * w + std::conj(a_)); }

Vec3 SphereRotation::apply(const Vec3& x) const { return to_sphere(apply(from_sphere(x))); }

cplx SphereRotation::derivative(cplx w) const {
  const cplx d = -std::conj(b_) * w + std::conj(a_);
  return 1.0 / (d * d);
}

SphereRotation SphereRotation::inverse() const { return {std::conj(a_), -b_}; }

SphereRotation SphereRotation::operator*(const SphereRotation& o) const {
  // [[a, b], [-b*, a*]] [[c, d], [-d*, c*]]
  return {a_ * o.a_ - b_ * std::conj(o.b_), a_ * o.b_ + b_ * std::conj(o.a_)};
}

}  // namespace hurwitz
