#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "polartomo/codebook.hpp"

namespace polartomo {

using Rng = std::mt19937_64;

/// Ordered polarizing filters behind the beamsplitters. Component j of every
/// intensity vector is the count behind filters()[j].
class FilterBank {
 public:
  /// Throws std::invalid_argument when empty or when two filters coincide
  /// after half-turn normalization.
  explicit FilterBank(std::vector<Angle> filters);

  std::size_t size() const { return filters_.size(); }
  std::span<const Angle> filters() const { return filters_; }
  Angle operator[](std::size_t j) const { return filters_[j]; }

  auto begin() const { return filters_.begin(); }
  auto end() const { return filters_.end(); }

  friend bool operator==(const FilterBank&, const FilterBank&) = default;

 private:
  std::vector<Angle> filters_;
};

FilterBank make_filter_bank(std::span<const double> degrees);

/// Photons delivered to each filter arm.
class PhotonBudget {
 public:
  explicit PhotonBudget(int per_filter);

  int per_filter() const { return per_filter_; }

  friend bool operator==(PhotonBudget, PhotonBudget) = default;

 private:
  int per_filter_;
};

/// Photon counts, one per filter, in bank order.
using IntensityVector = std::vector<int>;

/// Malus's law, cos^2(theta - phi).
///
/// Offsets of 0, 30, 45, 60 and 90 degrees return the exact rationals so
/// that N * transmission lands exactly on quantization ties. For any pair,
/// transmission(theta, phi) + transmission(theta, phi + 90) == 1 whenever
/// the offset is representable without rounding.
double transmission(Angle theta, Angle phi);

/// Round to nearest, exact halves to even. Throws on negative or non-finite.
int quantize(double x);

IntensityVector expected_vector(Angle theta, const FilterBank& bank,
                                PhotonBudget budget);

/// Independent Binomial(N, transmission) draws per filter, reproducible from
/// the seed alone.
IntensityVector sample_vector(Angle theta, const FilterBank& bank,
                              PhotonBudget budget, std::uint64_t seed);

enum class DetectorModel {
  /// Each arm reports quantize(sum of cos^2 over its photons). For a pure
  /// pulse of N photons per arm this equals expected_vector.
  kIntensity,
  /// Each photon passes its filter with probability cos^2.
  kPhotonCounting,
};

/// Splits a pulse across the bank (photon i goes to arm i mod size) and
/// measures every arm.
IntensityVector measure_pulse(std::span<const Angle> photons,
                              const FilterBank& bank, DetectorModel model,
                              Rng& rng);

/// Uniform orientation on [0, 180), drawn on a 2^-40 degree lattice so that
/// sums and differences of drawn angles stay exact in double precision.
Angle uniform_angle(Rng& rng);

}  // namespace polartomo
