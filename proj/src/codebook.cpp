#include "polartomo/codebook.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace polartomo {

Angle Angle::degrees(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("angle must be finite");
  }
  // fmod is exact, so values on a dyadic grid survive any number of
  // compose/inverse round trips bit for bit.
  double r = std::fmod(value, 180.0);
  if (r < 0.0) r += 180.0;
  if (r >= 180.0 || r == 0.0) r = 0.0;  // also folds -0.0
  return Angle(r);
}

Angle normalize_angle(double degrees) { return Angle::degrees(degrees); }

Angle compose_rotations(Angle a, Angle b) {
  return Angle::degrees(a.value() + b.value());
}

Angle inverse_rotation(Angle r) { return Angle::degrees(-r.value()); }

double angular_distance(Angle a, Angle b) {
  const double d = std::fabs(a.value() - b.value());
  return d > 90.0 ? 180.0 - d : d;
}

bool approx_equal(Angle a, Angle b, double tolerance) {
  return angular_distance(a, b) <= tolerance;
}

AngleSet::AngleSet(std::size_t n) {
  if (n < 4 || !std::has_single_bit(n)) {
    throw std::invalid_argument("angle set size must be a power of two >= 4, got " +
                                std::to_string(n));
  }
  exponent_ = std::countr_zero(n);
  angles_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    angles_.push_back(Angle::degrees(static_cast<double>(k) * 180.0 /
                                     static_cast<double>(n)));
  }
}

AngleSet make_angle_set(std::size_t n) { return AngleSet(n); }

}  // namespace polartomo
