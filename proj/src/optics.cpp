#include "polartomo/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace polartomo {

FilterBank::FilterBank(std::vector<Angle> filters) : filters_(std::move(filters)) {
  if (filters_.empty()) {
    throw std::invalid_argument("filter bank needs at least one filter");
  }
  for (std::size_t i = 0; i < filters_.size(); ++i) {
    for (std::size_t j = i + 1; j < filters_.size(); ++j) {
      if (approx_equal(filters_[i], filters_[j])) {
        throw std::invalid_argument("duplicate filter angle " +
                                    std::to_string(filters_[i].value()));
      }
    }
  }
}

FilterBank make_filter_bank(std::span<const double> degrees) {
  std::vector<Angle> filters;
  filters.reserve(degrees.size());
  for (double d : degrees) filters.push_back(Angle::degrees(d));
  return FilterBank(std::move(filters));
}

PhotonBudget::PhotonBudget(int per_filter) : per_filter_(per_filter) {
  if (per_filter < 1) {
    throw std::invalid_argument("photon budget must be >= 1 per filter");
  }
}

namespace {

double cos_squared(double degrees) {
  const double c = std::cos(degrees * std::numbers::pi / 180.0);
  return c * c;
}

// cos^2 on [0, 45], where the result is >= 0.5.
double upper_half(double e) {
  if (e == 0.0) return 1.0;
  if (e == 30.0) return 0.75;
  return cos_squared(e);
}

}  // namespace

double transmission(Angle theta, Angle phi) {
  const double d = std::fabs(theta.value() - phi.value());
  const double e = d > 90.0 ? 180.0 - d : d;  // folded offset in [0, 90]
  if (e == 45.0) return 0.5;
  if (e < 45.0) return upper_half(e);
  // 1 - c is exact for c in [0.5, 1], which pins the orthogonal complement.
  return 1.0 - upper_half(90.0 - e);
}

int quantize(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw std::invalid_argument("quantize expects a finite non-negative value");
  }
  // Default floating-point environment rounds half to even.
  return static_cast<int>(std::nearbyint(x));
}

IntensityVector expected_vector(Angle theta, const FilterBank& bank,
                                PhotonBudget budget) {
  IntensityVector v;
  v.reserve(bank.size());
  for (Angle phi : bank) {
    v.push_back(quantize(budget.per_filter() * transmission(theta, phi)));
  }
  return v;
}

IntensityVector sample_vector(Angle theta, const FilterBank& bank,
                              PhotonBudget budget, std::uint64_t seed) {
  Rng rng(seed);
  IntensityVector v;
  v.reserve(bank.size());
  for (Angle phi : bank) {
    std::binomial_distribution<int> draw(budget.per_filter(),
                                         transmission(theta, phi));
    v.push_back(draw(rng));
  }
  return v;
}

IntensityVector measure_pulse(std::span<const Angle> photons,
                              const FilterBank& bank, DetectorModel model,
                              Rng& rng) {
  const std::size_t arms = bank.size();
  IntensityVector v(arms, 0);
  if (model == DetectorModel::kIntensity) {
    std::vector<double> intensity(arms, 0.0);
    for (std::size_t i = 0; i < photons.size(); ++i) {
      intensity[i % arms] += transmission(photons[i], bank[i % arms]);
    }
    std::transform(intensity.begin(), intensity.end(), v.begin(), quantize);
    return v;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < photons.size(); ++i) {
    const double p = transmission(photons[i], bank[i % arms]);
    if (unit(rng) < p) ++v[i % arms];
  }
  return v;
}

Angle uniform_angle(Rng& rng) {
  constexpr double kLattice = 1.0 / 1099511627776.0;  // 2^-40
  constexpr std::uint64_t kTicks = 180ULL << 40;
  std::uniform_int_distribution<std::uint64_t> tick(0, kTicks - 1);
  return Angle::degrees(static_cast<double>(tick(rng)) * kLattice);
}

}  // namespace polartomo
