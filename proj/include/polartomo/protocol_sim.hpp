#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polartomo/codebook.hpp"
#include "polartomo/optics.hpp"
#include "polartomo/tomography.hpp"

namespace polartomo {

/// Parameters Alice and Bob agree on before the three-stage exchange.
struct ProtocolConfig {
  AngleSet angle_set{8};
  Angle bit0_angle = Angle::degrees(0.0);
  Angle bit1_angle = Angle::degrees(90.0);
  int photons_per_pulse = 9;
  FilterBank bank{{Angle::degrees(0.0), Angle::degrees(22.5), Angle::degrees(45.0)}};
  /// Receiver codebook budget.
  PhotonBudget budget{3};
  DetectorModel detector = DetectorModel::kIntensity;

  /// Bits at 0 and 90 degrees, pulse = budget * bank size.
  static ProtocolConfig standard(std::size_t n, FilterBank bank, PhotonBudget budget);

  /// Throws std::invalid_argument on inconsistent parameters.
  void validate() const;
};

struct ChannelModel {
  double jitter_sigma = 0.0;  ///< degrees, per photon per link
  double loss_prob = 0.0;     ///< per photon per link

  void validate() const;
};

/// Siphon-and-inject eavesdropper sitting on one link.
struct EveModel {
  int link = 1;  ///< 1, 2 or 3
  double siphon_fraction = 0.0;

  void validate() const;
  /// round(siphon_fraction * photons), halves to even.
  int siphoned_count(int photons) const;
};

struct TrialReport {
  std::size_t bits_sent = 0;
  std::size_t bits_correct = 0;
  double bit_error_rate = 0.0;
  double mean_decode_margin = 0.0;
  double eve_decode_accuracy = 0.0;
  /// Bob's mean count behind each filter, in bank order.
  std::vector<double> mean_intensity;
};

/// Everything observable about a single bit transfer.
struct BitOutcome {
  int bit = 0;
  int decided_bit = 0;
  /// Nominal polarization on links 1, 2, 3 (jitter and Eve excluded).
  Angle link_state[3];
  /// Nominal polarization after Bob's final un-rotation.
  Angle final_state;
  IntensityVector bob_vector;
  DecodeResult bob_decode;
  std::optional<DecodeResult> eve_decode;
  bool eve_correct = false;
};

/// Receiver-side and eavesdropper-side state shared by every bit of a run.
class ThreeStageSimulator {
 public:
  ThreeStageSimulator(ProtocolConfig config, ChannelModel channel,
                      std::optional<EveModel> eve);

  /// One bit transfer drawing all randomness from Rng(seed).
  BitOutcome run_bit(std::uint64_t seed) const;

  const StoredCodebook& bob_codebook() const { return bob_codebook_; }

 private:
  ProtocolConfig config_;
  ChannelModel channel_;
  std::optional<EveModel> eve_;
  StoredCodebook bob_codebook_;
  std::optional<StoredCodebook> eve_codebook_;
};

/// Bit i runs from seed + i; the report aggregates in bit order.
TrialReport run_three_stage(const ProtocolConfig& config,
                            const ChannelModel& channel,
                            const std::optional<EveModel>& eve,
                            std::size_t n_bits, std::uint64_t seed);

/// Eve's tomography on her share of a pulse with the given polarization:
/// her photons are split across `bank` and decoded against a codebook for
/// the negotiated angles at budget max(1, siphoned / bank size). Returns
/// nullopt when she siphons no photons.
std::optional<DecodeResult> eve_observe(Angle pulse_polarization, const EveModel& eve,
                                        int photons_per_pulse, const FilterBank& bank,
                                        const AngleSet& angle_set,
                                        DetectorModel detector, std::uint64_t seed);

struct DetectionStatistic {
  /// Pooled two-proportion z on bit error rates, observed minus baseline.
  double z = 0.0;
  /// Observed mean decode margin minus baseline.
  double margin_difference = 0.0;
};

/// Throws std::invalid_argument when the reports come from different bit
/// counts or filter banks.
DetectionStatistic detection_stat(const TrialReport& baseline,
                                  const TrialReport& observed);

}  // namespace polartomo
