#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace polartomo {

/// Absolute tolerance, in degrees, for comparing angles computed along
/// different arithmetic paths.
inline constexpr double kAngleTolerance = 1e-9;

/// Orientation on the fixed polarization plane, in degrees modulo 180.
///
/// A polarizer cannot tell theta from theta + 180, so every value is kept in
/// the half-open range [0, 180). Construction from a non-finite number throws
/// std::invalid_argument.
class Angle {
 public:
  constexpr Angle() = default;

  static Angle degrees(double value);

  constexpr double value() const { return value_; }

  friend constexpr bool operator==(Angle, Angle) = default;
  friend constexpr auto operator<=>(Angle, Angle) = default;

 private:
  constexpr explicit Angle(double normalized) : value_(normalized) {}

  double value_ = 0.0;
};

Angle normalize_angle(double degrees);

/// Angle addition on the half-turn circle. Planar rotations commute, so this
/// is also the composition of two polarization rotators.
Angle compose_rotations(Angle a, Angle b);

/// The rotation r' with compose_rotations(r, r') == 0.
Angle inverse_rotation(Angle r);

/// Shortest separation on the half-turn circle, in [0, 90].
double angular_distance(Angle a, Angle b);

bool approx_equal(Angle a, Angle b, double tolerance = kAngleTolerance);

/// The negotiated family of n = 2^m evenly spaced angles k * 180 / n.
class AngleSet {
 public:
  /// Throws std::invalid_argument unless n is a power of two and n >= 4.
  explicit AngleSet(std::size_t n);

  std::size_t size() const { return angles_.size(); }
  /// m with size() == 2^m.
  int exponent() const { return exponent_; }
  double step() const { return 180.0 / static_cast<double>(angles_.size()); }

  std::span<const Angle> angles() const { return angles_; }
  Angle operator[](std::size_t k) const { return angles_[k]; }

  auto begin() const { return angles_.begin(); }
  auto end() const { return angles_.end(); }

 private:
  int exponent_ = 0;
  std::vector<Angle> angles_;
};

AngleSet make_angle_set(std::size_t n);

}  // namespace polartomo
