#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "polartomo/codebook.hpp"
#include "polartomo/optics.hpp"
#include "polartomo/tomography.hpp"

namespace polartomo {

/// Combinations examined before a search gives up with kTruncated.
inline constexpr std::uint64_t kDefaultCombinationCap = 10'000'000;

/// Candidate filter orientations. Sorted, distinct, non-empty.
class SearchGrid {
 public:
  /// Sorts the input; throws std::invalid_argument if empty or duplicated.
  explicit SearchGrid(std::vector<Angle> candidates);

  /// Multiples of step in [0, 180).
  static SearchGrid uniform(double step);
  /// Half the codebook spacing: multiples of 180 / (2n).
  static SearchGrid default_for(const AngleSet& angle_set);

  std::size_t size() const { return candidates_.size(); }
  std::span<const Angle> candidates() const { return candidates_; }
  Angle operator[](std::size_t i) const { return candidates_[i]; }

 private:
  std::vector<Angle> candidates_;
};

enum class SearchStatus { kFound, kNotFound, kTruncated };

struct PhotonSearchResult {
  std::optional<int> photons;
  /// Collisions at photons - 1 (empty when the minimum is 1 or none found).
  std::vector<Collision> predecessor_collisions;
};

/// Smallest N in 1..n_max giving pairwise-distinct stored vectors.
PhotonSearchResult min_photons(const AngleSet& angle_set, const FilterBank& bank,
                               int n_max);

struct FilterSearchResult {
  SearchStatus status = SearchStatus::kNotFound;
  std::optional<FilterBank> witness;
  std::uint64_t evaluated = 0;
};

/// Tries every grid subset of size 1, 2, ... size_max in lexicographic order
/// and returns the first uniquely decodable bank.
FilterSearchResult min_filters(const AngleSet& angle_set, const SearchGrid& grid,
                               PhotonBudget budget, std::size_t size_max,
                               std::uint64_t cap = kDefaultCombinationCap);

/// First uniquely decodable bank of exactly `size` filters, lexicographic.
FilterSearchResult find_bank(const AngleSet& angle_set, const SearchGrid& grid,
                             std::size_t size, PhotonBudget budget,
                             std::uint64_t cap = kDefaultCombinationCap);

struct BankSearchResult {
  SearchStatus status = SearchStatus::kNotFound;
  std::optional<FilterBank> bank;
  double margin = 0.0;
  std::uint64_t evaluated = 0;
};

/// Exhaustive scan of `size`-subsets for the largest codebook margin. Ties go
/// to the lexicographically first bank. kTruncated carries the best bank seen
/// before the cap.
BankSearchResult best_bank(const AngleSet& angle_set, const SearchGrid& grid,
                           std::size_t size, PhotonBudget budget,
                           std::uint64_t cap = kDefaultCombinationCap);

/// Published filter count and total photon count for n = 2^m.
struct PublishedClaim {
  int filters;
  int total_photons;
};

/// Claimed requirement for n in {4, ..., 128}; nullopt otherwise.
std::optional<PublishedClaim> table4_claim(std::size_t n);

/// Claimed optimal spacing between adjacent filters (45 for n=4, 30 for n=8).
std::optional<double> claimed_optimal_spacing(std::size_t n);

struct DesignReport {
  std::size_t n = 0;
  int m = 0;
  /// Per-filter budget the search was allowed; not part of the CSV row.
  int budget_cap = 0;
  std::optional<FilterBank> filters_found;
  std::optional<int> photons_per_filter;
  int total_photons = 0;
  bool unique = false;
  double margin = 0.0;
  int paper_claim_filters = 0;
  int paper_claim_total_photons = 0;
  /// nullopt when there is no published claim to compare against.
  std::optional<bool> agrees_with_paper;
  SearchStatus status = SearchStatus::kNotFound;
};

/// Two rows per n: the search run with budget N = m, then with N = m^2.
/// Each row holds the smallest bank found (up to m filters) and the smallest
/// per-filter photon count that keeps it uniquely decodable.
std::vector<DesignReport> table4_report(std::span<const std::size_t> n_values,
                                        const std::optional<SearchGrid>& grid,
                                        std::uint64_t cap = kDefaultCombinationCap);

}  // namespace polartomo
