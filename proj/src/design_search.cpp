#include "polartomo/design_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace polartomo {

SearchGrid::SearchGrid(std::vector<Angle> candidates)
    : candidates_(std::move(candidates)) {
  if (candidates_.empty()) throw std::invalid_argument("search grid is empty");
  std::sort(candidates_.begin(), candidates_.end());
  if (std::adjacent_find(candidates_.begin(), candidates_.end()) !=
      candidates_.end()) {
    throw std::invalid_argument("search grid has duplicate angles");
  }
}

SearchGrid SearchGrid::uniform(double step) {
  if (!(step > 0.0) || !std::isfinite(step) || step > 180.0) {
    throw std::invalid_argument("grid step must be in (0, 180]");
  }
  std::vector<Angle> v;
  for (long k = 0; static_cast<double>(k) * step < 180.0 - kAngleTolerance; ++k) {
    v.push_back(Angle::degrees(static_cast<double>(k) * step));
  }
  return SearchGrid(std::move(v));
}

SearchGrid SearchGrid::default_for(const AngleSet& angle_set) {
  return uniform(angle_set.step() / 2.0);
}

namespace {

// Lexicographic k-subsets of {0, ..., n-1}.
class Combinations {
 public:
  Combinations(std::size_t n, std::size_t k) : n_(n), idx_(k) {
    std::iota(idx_.begin(), idx_.end(), std::size_t{0});
    done_ = k == 0 || k > n;
  }

  bool done() const { return done_; }
  std::span<const std::size_t> indices() const { return idx_; }

  void next() {
    const std::size_t k = idx_.size();
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx_[i] < n_ - k + i) {
        ++idx_[i];
        for (std::size_t j = i + 1; j < k; ++j) idx_[j] = idx_[j - 1] + 1;
        return;
      }
    }
    done_ = true;
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> idx_;
  bool done_;
};

// Quantized count of every codebook angle behind every grid filter.
class CountTable {
 public:
  CountTable(const AngleSet& angle_set, const SearchGrid& grid,
             PhotonBudget budget)
      : angles_(angle_set.size()), grid_(grid.size()) {
    counts_.reserve(angles_ * grid_);
    for (Angle a : angle_set) {
      for (Angle g : grid.candidates()) {
        counts_.push_back(quantize(budget.per_filter() * transmission(a, g)));
      }
    }
  }

  int at(std::size_t angle, std::size_t filter) const {
    return counts_[angle * grid_ + filter];
  }
  std::size_t angles() const { return angles_; }

  bool unique(std::span<const std::size_t> bank) const {
    std::vector<IntensityVector> vecs;
    vecs.reserve(angles_);
    for (std::size_t a = 0; a < angles_; ++a) {
      IntensityVector v(bank.size());
      for (std::size_t j = 0; j < bank.size(); ++j) v[j] = at(a, bank[j]);
      vecs.push_back(std::move(v));
    }
    std::sort(vecs.begin(), vecs.end());
    return std::adjacent_find(vecs.begin(), vecs.end()) == vecs.end();
  }

  // Minimum pairwise squared distance; stops early once it drops to `floor`.
  long min_sq(std::span<const std::size_t> bank, long floor) const {
    long best = std::numeric_limits<long>::max();
    for (std::size_t a = 0; a < angles_; ++a) {
      for (std::size_t b = a + 1; b < angles_; ++b) {
        long d = 0;
        for (std::size_t f : bank) {
          const long diff = at(a, f) - at(b, f);
          d += diff * diff;
        }
        if (d < best) {
          best = d;
          if (best <= floor) return best;
        }
      }
    }
    return best;
  }

 private:
  std::size_t angles_;
  std::size_t grid_;
  std::vector<int> counts_;
};

FilterBank bank_from(const SearchGrid& grid, std::span<const std::size_t> idx) {
  std::vector<Angle> f;
  f.reserve(idx.size());
  for (std::size_t i : idx) f.push_back(grid[i]);
  return FilterBank(std::move(f));
}

SearchStatus first_unique(const CountTable& table, const SearchGrid& grid,
                          std::size_t size, std::uint64_t cap,
                          FilterSearchResult& out) {
  for (Combinations c(grid.size(), size); !c.done(); c.next()) {
    if (out.evaluated >= cap) return SearchStatus::kTruncated;
    ++out.evaluated;
    if (table.unique(c.indices())) {
      out.witness = bank_from(grid, c.indices());
      return SearchStatus::kFound;
    }
  }
  return SearchStatus::kNotFound;
}

}  // namespace

PhotonSearchResult min_photons(const AngleSet& angle_set, const FilterBank& bank,
                               int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  PhotonSearchResult result;
  std::vector<Collision> previous;
  for (int n = 1; n <= n_max; ++n) {
    auto codebook = build_codebook(angle_set, bank, PhotonBudget(n));
    if (codebook.is_unique()) {
      result.photons = n;
      result.predecessor_collisions = std::move(previous);
      return result;
    }
    previous.assign(codebook.collisions().begin(), codebook.collisions().end());
  }
  return result;
}

FilterSearchResult min_filters(const AngleSet& angle_set, const SearchGrid& grid,
                               PhotonBudget budget, std::size_t size_max,
                               std::uint64_t cap) {
  if (size_max < 1) throw std::invalid_argument("size_max must be >= 1");
  const CountTable table(angle_set, grid, budget);
  FilterSearchResult out;
  for (std::size_t size = 1; size <= std::min(size_max, grid.size()); ++size) {
    out.status = first_unique(table, grid, size, cap, out);
    if (out.status != SearchStatus::kNotFound) return out;
  }
  out.status = SearchStatus::kNotFound;
  return out;
}

FilterSearchResult find_bank(const AngleSet& angle_set, const SearchGrid& grid,
                             std::size_t size, PhotonBudget budget,
                             std::uint64_t cap) {
  if (size < 1 || size > grid.size()) {
    throw std::invalid_argument("bank size must be in 1..grid size");
  }
  const CountTable table(angle_set, grid, budget);
  FilterSearchResult out;
  out.status = first_unique(table, grid, size, cap, out);
  return out;
}

BankSearchResult best_bank(const AngleSet& angle_set, const SearchGrid& grid,
                           std::size_t size, PhotonBudget budget,
                           std::uint64_t cap) {
  if (size < 1 || size > grid.size()) {
    throw std::invalid_argument("bank size must be in 1..grid size");
  }
  const CountTable table(angle_set, grid, budget);
  BankSearchResult out;
  long best = -1;
  std::vector<std::size_t> best_idx;
  out.status = SearchStatus::kFound;
  for (Combinations c(grid.size(), size); !c.done(); c.next()) {
    if (out.evaluated >= cap) {
      out.status = SearchStatus::kTruncated;
      break;
    }
    ++out.evaluated;
    const long d = table.min_sq(c.indices(), best);
    if (d > best) {
      best = d;
      best_idx.assign(c.indices().begin(), c.indices().end());
    }
  }
  if (best_idx.empty()) return out;
  out.bank = bank_from(grid, best_idx);
  out.margin = table.angles() < 2 ? std::numeric_limits<double>::infinity()
                                  : std::sqrt(static_cast<double>(best));
  return out;
}

std::optional<PublishedClaim> table4_claim(std::size_t n) {
  switch (n) {
    case 4: return PublishedClaim{2, 8};
    case 8: return PublishedClaim{3, 27};
    case 16: return PublishedClaim{4, 64};
    case 32: return PublishedClaim{5, 125};
    case 64: return PublishedClaim{6, 216};
    case 128: return PublishedClaim{7, 343};
    default: return std::nullopt;
  }
}

std::optional<double> claimed_optimal_spacing(std::size_t n) {
  if (n == 4) return 45.0;
  if (n == 8) return 30.0;
  return std::nullopt;
}

std::vector<DesignReport> table4_report(std::span<const std::size_t> n_values,
                                        const std::optional<SearchGrid>& grid,
                                        std::uint64_t cap) {
  std::vector<DesignReport> rows;
  for (std::size_t n : n_values) {
    const AngleSet set(n);
    const SearchGrid g = grid ? *grid : SearchGrid::default_for(set);
    const int m = set.exponent();
    const auto claim = table4_claim(n);
    for (int cap_budget : {m, m * m}) {
      DesignReport r;
      r.n = n;
      r.m = m;
      r.budget_cap = cap_budget;
      if (claim) {
        r.paper_claim_filters = claim->filters;
        r.paper_claim_total_photons = claim->total_photons;
      }
      const auto search = min_filters(set, g, PhotonBudget(cap_budget),
                                      static_cast<std::size_t>(m), cap);
      r.status = search.status;
      if (search.witness) {
        const auto photons = min_photons(set, *search.witness, cap_budget);
        r.filters_found = search.witness;
        r.photons_per_filter = photons.photons;
        r.total_photons = *photons.photons * static_cast<int>(search.witness->size());
        r.unique = true;
        r.margin = margin(build_codebook(set, *search.witness,
                                         PhotonBudget(*photons.photons)));
      }
      if (claim) {
        r.agrees_with_paper =
            r.filters_found &&
            static_cast<int>(r.filters_found->size()) == claim->filters &&
            r.total_photons == claim->total_photons;
      }
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace polartomo
