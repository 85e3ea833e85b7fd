#include "polartomo/tomography.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>

namespace polartomo {

namespace {

std::string describe(const std::vector<Collision>& collisions) {
  std::ostringstream s;
  s.precision(12);
  s << "codebook not uniquely decodable:";
  for (const auto& c : collisions) {
    s << " (" << c.first.value() << ", " << c.second.value() << ")";
  }
  return s.str();
}

}  // namespace

CodebookNotDecodable::CodebookNotDecodable(std::vector<Collision> collisions)
    : std::runtime_error(describe(collisions)),
      collisions_(std::move(collisions)) {}

StoredCodebook::StoredCodebook(FilterBank bank, PhotonBudget budget,
                               std::vector<CodebookEntry> entries)
    : bank_(std::move(bank)), budget_(budget), entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw std::invalid_argument("codebook needs at least one entry");
  }
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k].vector.size() != bank_.size()) {
      throw std::invalid_argument("stored vector length differs from bank size");
    }
    if (k > 0 && !(entries_[k - 1].angle < entries_[k].angle)) {
      throw std::invalid_argument("codebook angles must be strictly increasing");
    }
  }
  // Every later entry is paired with the first angle that owns its vector.
  std::map<IntensityVector, Angle> first_owner;
  for (const auto& e : entries_) {
    auto [it, inserted] = first_owner.emplace(e.vector, e.angle);
    if (!inserted) collisions_.push_back({it->second, e.angle, e.vector});
  }
}

StoredCodebook build_codebook(std::span<const Angle> angles,
                              const FilterBank& bank, PhotonBudget budget) {
  std::vector<CodebookEntry> entries;
  entries.reserve(angles.size());
  for (Angle a : angles) entries.push_back({a, expected_vector(a, bank, budget)});
  return StoredCodebook(bank, budget, std::move(entries));
}

StoredCodebook build_codebook(const AngleSet& angle_set, const FilterBank& bank,
                              PhotonBudget budget) {
  return build_codebook(angle_set.angles(), bank, budget);
}

long squared_distance(const IntensityVector& u, const IntensityVector& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("intensity vectors differ in length (" +
                                std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()) + ")");
  }
  long sum = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const long d = static_cast<long>(u[j]) - v[j];
    sum += d * d;
  }
  return sum;
}

double euclidean_distance(const IntensityVector& u, const IntensityVector& v) {
  return std::sqrt(static_cast<double>(squared_distance(u, v)));
}

DecodeResult nearest_entry(const IntensityVector& v,
                           const StoredCodebook& codebook) {
  if (v.size() != codebook.bank().size()) {
    throw std::invalid_argument("vector length " + std::to_string(v.size()) +
                                " does not match codebook length " +
                                std::to_string(codebook.bank().size()));
  }
  constexpr long kNone = std::numeric_limits<long>::max();
  long best = kNone;
  long runner_up = kNone;
  Angle best_angle;
  // Entries are in increasing angle order; strict < keeps the smaller angle.
  for (const auto& e : codebook.entries()) {
    const long d = squared_distance(v, e.vector);
    if (d < best) {
      runner_up = best;
      best = d;
      best_angle = e.angle;
    } else if (d < runner_up) {
      runner_up = d;
    }
  }
  DecodeResult r;
  r.angle = best_angle;
  r.distance = std::sqrt(static_cast<double>(best));
  r.exact = best == 0;
  r.margin = runner_up == kNone
                 ? std::numeric_limits<double>::infinity()
                 : std::sqrt(static_cast<double>(runner_up)) - r.distance;
  return r;
}

DecodeResult decode(const IntensityVector& v, const StoredCodebook& codebook) {
  if (!codebook.is_unique()) {
    throw CodebookNotDecodable(
        {codebook.collisions().begin(), codebook.collisions().end()});
  }
  return nearest_entry(v, codebook);
}

long min_squared_separation(const StoredCodebook& codebook) {
  const auto entries = codebook.entries();
  long best = -1;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const long d = squared_distance(entries[i].vector, entries[j].vector);
      if (best < 0 || d < best) best = d;
    }
  }
  return best;
}

double margin(const StoredCodebook& codebook) {
  const long sq = min_squared_separation(codebook);
  if (sq < 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(static_cast<double>(sq));
}

double decode_accuracy(const StoredCodebook& codebook, NoiseModel noise,
                       std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (!(noise.jitter_sigma >= 0.0)) {
    throw std::invalid_argument("jitter sigma must be >= 0");
  }
  const auto entries = codebook.entries();
  const std::size_t photons =
      static_cast<std::size_t>(codebook.budget().per_filter()) *
      codebook.bank().size();
  std::size_t correct = 0;
  std::vector<Angle> pulse(photons);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed + t);
    std::uniform_int_distribution<std::size_t> pick(0, entries.size() - 1);
    const Angle truth = entries[pick(rng)].angle;
    std::normal_distribution<double> jitter(0.0, noise.jitter_sigma);
    for (auto& p : pulse) {
      p = noise.jitter_sigma > 0.0 ? Angle::degrees(truth.value() + jitter(rng))
                                   : truth;
    }
    const auto v = measure_pulse(pulse, codebook.bank(), noise.detector, rng);
    if (decode(v, codebook).angle == truth) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(trials);
}

}  // namespace polartomo
