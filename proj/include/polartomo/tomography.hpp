#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "polartomo/codebook.hpp"
#include "polartomo/optics.hpp"

namespace polartomo {

struct CodebookEntry {
  Angle angle;
  IntensityVector vector;

  friend bool operator==(const CodebookEntry&, const CodebookEntry&) = default;
};

/// Two codebook angles that share a stored vector.
struct Collision {
  Angle first;
  Angle second;
  IntensityVector vector;
};

/// Stored intensity vectors held at the receiver, one per negotiated angle.
///
/// Duplicate vectors are not an error at construction: the codebook records
/// them in collisions() and decode() refuses to run until there are none.
class StoredCodebook {
 public:
  /// Throws std::invalid_argument when entries is empty, when a vector length
  /// differs from the bank size, or when angles are not strictly increasing.
  StoredCodebook(FilterBank bank, PhotonBudget budget,
                 std::vector<CodebookEntry> entries);

  const FilterBank& bank() const { return bank_; }
  PhotonBudget budget() const { return budget_; }
  std::span<const CodebookEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::span<const Collision> collisions() const { return collisions_; }
  bool is_unique() const { return collisions_.empty(); }

  friend bool operator==(const StoredCodebook& a, const StoredCodebook& b) {
    return a.bank_ == b.bank_ && a.budget_ == b.budget_ &&
           a.entries_ == b.entries_;
  }

 private:
  FilterBank bank_;
  PhotonBudget budget_;
  std::vector<CodebookEntry> entries_;
  std::vector<Collision> collisions_;
};

/// Thrown by decode() on a codebook with duplicate stored vectors.
class CodebookNotDecodable : public std::runtime_error {
 public:
  explicit CodebookNotDecodable(std::vector<Collision> collisions);

  std::span<const Collision> collisions() const { return collisions_; }

 private:
  std::vector<Collision> collisions_;
};

StoredCodebook build_codebook(const AngleSet& angle_set, const FilterBank& bank,
                              PhotonBudget budget);
StoredCodebook build_codebook(std::span<const Angle> angles,
                              const FilterBank& bank, PhotonBudget budget);

/// Sum of squared component differences. Throws on length mismatch.
long squared_distance(const IntensityVector& u, const IntensityVector& v);
double euclidean_distance(const IntensityVector& u, const IntensityVector& v);

struct DecodeResult {
  Angle angle;
  double distance = 0.0;
  bool exact = false;
  /// Runner-up distance minus winning distance; +inf for a one-entry codebook.
  double margin = 0.0;
};

/// Nearest stored vector by Euclidean distance, ties to the smaller angle.
DecodeResult decode(const IntensityVector& v, const StoredCodebook& codebook);

/// Same search without the uniqueness precondition. Used where a party has
/// to commit to some estimate even from a degenerate codebook.
DecodeResult nearest_entry(const IntensityVector& v,
                           const StoredCodebook& codebook);

/// Minimum pairwise squared distance between stored vectors, or -1 when the
/// codebook has a single entry.
long min_squared_separation(const StoredCodebook& codebook);

/// Minimum pairwise Euclidean distance; +inf for a single entry.
double margin(const StoredCodebook& codebook);

struct NoiseModel {
  /// Zero-mean Gaussian perturbation added to every photon, degrees.
  double jitter_sigma = 0.0;
  DetectorModel detector = DetectorModel::kIntensity;
};

/// Fraction of trials whose decoded angle equals the true one. Each trial
/// picks a codebook angle uniformly, emits budget * bank-size photons with
/// independent jitter, measures them and decodes. Trial t draws from
/// Rng(seed + t).
double decode_accuracy(const StoredCodebook& codebook, NoiseModel noise,
                       std::size_t trials, std::uint64_t seed);

}  // namespace polartomo
