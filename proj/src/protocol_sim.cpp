#include "polartomo/protocol_sim.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace polartomo {

namespace {

PhotonBudget eve_budget(int siphoned, const FilterBank& bank) {
  return PhotonBudget(std::max(1, siphoned / static_cast<int>(bank.size())));
}

Angle nearest_codebook_angle(Angle state, const AngleSet& set) {
  Angle best = set[0];
  for (Angle a : set) {
    if (angular_distance(a, state) < angular_distance(best, state)) best = a;
  }
  return best;
}

bool contains(const AngleSet& set, Angle a) {
  for (Angle b : set) {
    if (approx_equal(a, b)) return true;
  }
  return false;
}

}  // namespace

ProtocolConfig ProtocolConfig::standard(std::size_t n, FilterBank bank,
                                        PhotonBudget budget) {
  ProtocolConfig c;
  c.angle_set = AngleSet(n);
  c.photons_per_pulse = budget.per_filter() * static_cast<int>(bank.size());
  c.bank = std::move(bank);
  c.budget = budget;
  return c;
}

void ProtocolConfig::validate() const {
  if (approx_equal(bit0_angle, bit1_angle)) {
    throw std::invalid_argument("bit angles must differ");
  }
  if (!contains(angle_set, bit0_angle) || !contains(angle_set, bit1_angle)) {
    throw std::invalid_argument("bit angles must belong to the angle set");
  }
  if (photons_per_pulse < static_cast<int>(bank.size())) {
    throw std::invalid_argument("pulse must carry at least one photon per filter");
  }
}

void ChannelModel::validate() const {
  if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma)) {
    throw std::invalid_argument("jitter sigma must be finite and >= 0");
  }
  if (!(loss_prob >= 0.0 && loss_prob < 1.0)) {
    throw std::invalid_argument("loss probability must be in [0, 1)");
  }
}

void EveModel::validate() const {
  if (link < 1 || link > 3) throw std::invalid_argument("eve link must be 1, 2 or 3");
  if (!(siphon_fraction >= 0.0 && siphon_fraction <= 1.0)) {
    throw std::invalid_argument("siphon fraction must be in [0, 1]");
  }
}

int EveModel::siphoned_count(int photons) const {
  return static_cast<int>(std::nearbyint(siphon_fraction * photons));
}

ThreeStageSimulator::ThreeStageSimulator(ProtocolConfig config, ChannelModel channel,
                                         std::optional<EveModel> eve)
    : config_(std::move(config)),
      channel_(channel),
      eve_(eve),
      bob_codebook_(build_codebook(config_.angle_set, config_.bank, config_.budget)) {
  config_.validate();
  channel_.validate();
  if (!bob_codebook_.is_unique()) {
    throw CodebookNotDecodable(
        {bob_codebook_.collisions().begin(), bob_codebook_.collisions().end()});
  }
  if (eve_) {
    eve_->validate();
    const int k = eve_->siphoned_count(config_.photons_per_pulse);
    if (k > 0) {
      eve_codebook_ =
          build_codebook(config_.angle_set, config_.bank, eve_budget(k, config_.bank));
    }
  }
}

BitOutcome ThreeStageSimulator::run_bit(std::uint64_t seed) const {
  Rng rng(seed);
  BitOutcome out;
  out.bit = std::uniform_int_distribution<int>(0, 1)(rng);
  const Angle theta_a = uniform_angle(rng);
  const Angle theta_b = uniform_angle(rng);

  // Rotation applied before each link: +A, +B, -A. Bob removes B at the end.
  const Angle before_link[3] = {theta_a, theta_b, inverse_rotation(theta_a)};
  Angle nominal = out.bit ? config_.bit1_angle : config_.bit0_angle;
  std::vector<Angle> pulse(static_cast<std::size_t>(config_.photons_per_pulse), nominal);

  std::bernoulli_distribution lost(channel_.loss_prob);
  std::normal_distribution<double> jitter(0.0, channel_.jitter_sigma);

  for (int link = 0; link < 3; ++link) {
    nominal = compose_rotations(nominal, before_link[link]);
    for (Angle& p : pulse) p = compose_rotations(p, before_link[link]);
    out.link_state[link] = nominal;

    if (channel_.loss_prob > 0.0) {
      std::erase_if(pulse, [&](Angle) { return lost(rng); });
    }
    if (channel_.jitter_sigma > 0.0) {
      for (Angle& p : pulse) p = Angle::degrees(p.value() + jitter(rng));
    }

    if (eve_ && eve_->link == link + 1 && eve_codebook_) {
      const std::size_t k = std::min<std::size_t>(
          static_cast<std::size_t>(eve_->siphoned_count(config_.photons_per_pulse)),
          pulse.size());
      // Partial Fisher-Yates over positions: the first k indices are a uniform
      // random subset, and injected photons take the siphoned photons' slots.
      std::vector<std::size_t> slot(pulse.size());
      std::iota(slot.begin(), slot.end(), std::size_t{0});
      for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, slot.size() - 1);
        std::swap(slot[i], slot[pick(rng)]);
      }
      if (k > 0) {
        std::vector<Angle> siphoned(k);
        for (std::size_t i = 0; i < k; ++i) siphoned[i] = pulse[slot[i]];
        const auto v = measure_pulse(siphoned, config_.bank, config_.detector, rng);
        out.eve_decode = nearest_entry(v, *eve_codebook_);
        out.eve_correct = out.eve_decode->angle ==
                          nearest_codebook_angle(nominal, config_.angle_set);
      }
      for (std::size_t i = 0; i < k; ++i) pulse[slot[i]] = uniform_angle(rng);
    }
  }

  const Angle undo_b = inverse_rotation(theta_b);
  out.final_state = compose_rotations(nominal, undo_b);
  for (Angle& p : pulse) p = compose_rotations(p, undo_b);

  out.bob_vector = measure_pulse(pulse, config_.bank, config_.detector, rng);
  out.bob_decode = decode(out.bob_vector, bob_codebook_);
  // Bob maps the decoded state to the nearer bit angle; equidistant goes to 0.
  out.decided_bit = angular_distance(out.bob_decode.angle, config_.bit1_angle) <
                            angular_distance(out.bob_decode.angle, config_.bit0_angle)
                        ? 1
                        : 0;
  return out;
}

TrialReport run_three_stage(const ProtocolConfig& config, const ChannelModel& channel,
                            const std::optional<EveModel>& eve, std::size_t n_bits,
                            std::uint64_t seed) {
  if (n_bits == 0) throw std::invalid_argument("n_bits must be >= 1");
  const ThreeStageSimulator sim(config, channel, eve);
  TrialReport r;
  r.bits_sent = n_bits;
  r.mean_intensity.assign(config.bank.size(), 0.0);
  std::size_t eve_hits = 0;
  double margin_sum = 0.0;
  for (std::size_t i = 0; i < n_bits; ++i) {
    const BitOutcome b = sim.run_bit(seed + i);
    if (b.decided_bit == b.bit) ++r.bits_correct;
    if (b.eve_correct) ++eve_hits;
    margin_sum += b.bob_decode.margin;
    for (std::size_t j = 0; j < b.bob_vector.size(); ++j) {
      r.mean_intensity[j] += b.bob_vector[j];
    }
  }
  const double bits = static_cast<double>(n_bits);
  r.bit_error_rate = static_cast<double>(n_bits - r.bits_correct) / bits;
  r.mean_decode_margin = margin_sum / bits;
  r.eve_decode_accuracy = static_cast<double>(eve_hits) / bits;
  for (double& m : r.mean_intensity) m /= bits;
  return r;
}

std::optional<DecodeResult> eve_observe(Angle pulse_polarization, const EveModel& eve,
                                        int photons_per_pulse, const FilterBank& bank,
                                        const AngleSet& angle_set,
                                        DetectorModel detector, std::uint64_t seed) {
  eve.validate();
  const int k = eve.siphoned_count(photons_per_pulse);
  if (k <= 0) return std::nullopt;
  const auto codebook = build_codebook(angle_set, bank, eve_budget(k, bank));
  const std::vector<Angle> photons(static_cast<std::size_t>(k), pulse_polarization);
  Rng rng(seed);
  return nearest_entry(measure_pulse(photons, bank, detector, rng), codebook);
}

DetectionStatistic detection_stat(const TrialReport& baseline,
                                  const TrialReport& observed) {
  if (baseline.bits_sent != observed.bits_sent || baseline.bits_sent == 0) {
    throw std::invalid_argument("reports must cover the same non-zero bit count");
  }
  if (baseline.mean_intensity.size() != observed.mean_intensity.size()) {
    throw std::invalid_argument("reports come from different filter banks");
  }
  const double n = static_cast<double>(baseline.bits_sent);
  const double p1 = baseline.bit_error_rate;
  const double p2 = observed.bit_error_rate;
  const double pooled = (p1 + p2) / 2.0;
  const double se = std::sqrt(pooled * (1.0 - pooled) * (2.0 / n));
  DetectionStatistic s;
  s.z = se > 0.0 ? (p2 - p1) / se : 0.0;
  s.margin_difference = observed.mean_decode_margin - baseline.mean_decode_margin;
  return s;
}

}  // namespace polartomo
