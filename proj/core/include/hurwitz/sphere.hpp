#ifndef HURWITZ_SPHERE_HPP
#define HURWITZ_SPHERE_HPP

#include <complex>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace hurwitz {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

/// Point of P1 in homogeneous coordinates (z1 : z2); w = z1 / z2.
struct Projective {
  cplx z1{0.0};
  cplx z2{1.0};
  static Projective finite(cplx w) { return {w, 1.0}; }
  static Projective infinity() { return {1.0, 0.0}; }
};

/// Stereographic embedding onto the unit sphere; 0 -> south pole, inf -> north pole.
Vec3 to_sphere(cplx w);
Vec3 to_sphere(const Projective& p);
/// Inverse of to_sphere, choosing the chart that keeps the coordinate bounded.
Projective from_sphere(const Vec3& x);
/// Affine coordinate w; the caller must know the point is not the north pole.
cplx affine(const Vec3& x);

/// Euclidean distance of the sphere images.
double chordal_distance(cplx a, cplx b);

/// Density of the round metric omega_Y = h(w) i dw ^ dwbar of curvature +1
/// and total area 4 pi. The formula is the same in the chart 1/w.
inline double target_density(cplx w) {
  const double r2 = std::norm(w);
  return 2.0 / ((1.0 + r2) * (1.0 + r2));
}

/// Closed form of d_w d_wbar log h.
inline double target_log_laplacian(cplx w) {
  const double r2 = std::norm(w);
  return -2.0 / ((1.0 + r2) * (1.0 + r2));
}

/// Integral of omega_Y over P1 by Gauss-Legendre quadrature in (t, theta)
/// with r = t / (1 - t); should return 4 pi.
double target_area_by_quadrature(int order);

/// Rotation of the round sphere as an SU(2) Moebius map
/// w -> (a w + b) / (-conj(b) w + conj(a)), |a|^2 + |b|^2 = 1.
class SphereRotation {
public:
  SphereRotation() = default;
  SphereRotation(cplx a, cplx b);

  static SphereRotation identity() { return {}; }
  /// Rotation w -> e^{i angle} w about the polar axis.
  static SphereRotation polar(double angle);
  /// Rotation by `angle` about the unit vector `axis`.
  static SphereRotation about_axis(const Vec3& axis, double angle);
  /// Rotation taking the point `from` to the north pole (infinity).
  static SphereRotation to_north(const Vec3& from);

  Projective apply(const Projective& p) const;
  cplx apply(cplx w) const;
  Vec3 apply(const Vec3& x) const;
  /// Complex derivative of the Moebius map at a finite point.
  cplx derivative(cplx w) const;

  SphereRotation inverse() const;
  /// (this * other)(w) = this(other(w)).
  SphereRotation operator*(const SphereRotation& other) const;

  cplx a() const { return a_; }
  cplx b() const { return b_; }

private:
  cplx a_{1.0};
  cplx b_{0.0};
};

}  // namespace hurwitz

#endif
