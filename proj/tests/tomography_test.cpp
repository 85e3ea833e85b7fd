#include "polartomo/tomography.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "published_tables.hpp"

namespace polartomo {
namespace {

Angle deg(double d) { return Angle::degrees(d); }

FilterBank bank_of(std::initializer_list<double> d) {
  return make_filter_bank(std::vector<double>(d));
}

StoredCodebook table3_codebook() {
  return build_codebook(AngleSet(16), bank_of({22.5, 45, 67.5, 90}), PhotonBudget(4));
}

StoredCodebook published_table2() {
  std::vector<CodebookEntry> entries;
  const AngleSet set(8);
  for (std::size_t k = 0; k < 8; ++k) {
    entries.push_back({set[k], testdata::kTable2[k]});
  }
  return StoredCodebook(bank_of({0, 22.5, 45}), PhotonBudget(3), std::move(entries));
}

// Brute-force reference for the nearest stored vector: every distance is
// recomputed from the component formula, ties go to the earlier row.
struct Nearest {
  std::size_t index;
  double distance;
};
Nearest brute_force_nearest(const std::vector<IntensityVector>& rows,
                            const IntensityVector& v) {
  Nearest best{0, std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += std::pow(rows[k][j] - v[j], 2);
    if (std::sqrt(s) < best.distance) best = {k, std::sqrt(s)};
  }
  return best;
}

TEST(BuildCodebook, ReproducesTable3) {
  const auto cb = table3_codebook();
  ASSERT_EQ(cb.size(), 16u);
  EXPECT_TRUE(cb.is_unique());
  for (std::size_t k = 0; k < 16; ++k) {
    EXPECT_EQ(cb.entries()[k].vector, testdata::kTable3[k]) << "row " << k;
  }
}

TEST(BuildCodebook, Table2RowsWithoutTies) {
  const auto cb = build_codebook(AngleSet(8), bank_of({0, 22.5, 45}), PhotonBudget(3));
  EXPECT_TRUE(cb.is_unique());
  EXPECT_EQ(cb.entries()[1].vector, (IntensityVector{3, 3, 3}));
  EXPECT_EQ(cb.entries()[5].vector, (IntensityVector{0, 0, 0}));
}

TEST(BuildCodebook, SingleFilterCollides) {
  const auto cb = build_codebook(AngleSet(4), bank_of({0}), PhotonBudget(1));
  EXPECT_FALSE(cb.is_unique());
  bool found = false;
  for (const auto& c : cb.collisions()) {
    if (c.first.value() == 45 && c.second.value() == 135) found = true;
  }
  EXPECT_TRUE(found);
  EXPECT_THROW(decode({0}, cb), CodebookNotDecodable);
}

TEST(StoredCodebook, RejectsMalformedEntries) {
  EXPECT_THROW(StoredCodebook(bank_of({0}), PhotonBudget(1), {}), std::invalid_argument);
  EXPECT_THROW(StoredCodebook(bank_of({0}), PhotonBudget(1), {{deg(0), {1, 2}}}),
               std::invalid_argument);
  EXPECT_THROW(StoredCodebook(bank_of({0}), PhotonBudget(1),
                              {{deg(45), {1}}, {deg(0), {0}}}),
               std::invalid_argument);
}

TEST(EuclideanDistance, Examples) {
  EXPECT_EQ(euclidean_distance({3, 3, 2}, {3, 3, 2}), 0.0);
  EXPECT_DOUBLE_EQ(euclidean_distance({0, 0, 0}, {3, 3, 3}), std::sqrt(27.0));
  EXPECT_DOUBLE_EQ(euclidean_distance({3, 2, 0}, {2, 0, 0}), std::sqrt(5.0));
  EXPECT_THROW(euclidean_distance({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST(EuclideanDistance, MetricAxioms) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> count(0, 20);
  auto random_vector = [&](std::size_t len) {
    IntensityVector v(len);
    for (int& c : v) c = count(rng);
    return v;
  };
  for (int i = 0; i < 5000; ++i) {
    const std::size_t len = 1 + rng() % 7;
    const auto u = random_vector(len), v = random_vector(len), w = random_vector(len);
    ASSERT_GE(euclidean_distance(u, v), 0.0);
    ASSERT_EQ(euclidean_distance(u, v), euclidean_distance(v, u));
    ASSERT_EQ(euclidean_distance(u, u), 0.0);
    ASSERT_EQ(euclidean_distance(u, v) == 0.0, u == v);
    ASSERT_LE(euclidean_distance(u, w),
              euclidean_distance(u, v) + euclidean_distance(v, w) + 1e-12);
  }
}

TEST(Decode, ExactMatchTable3) {
  const auto r = decode({3, 2, 1, 0}, table3_codebook());
  EXPECT_EQ(r.angle.value(), 0.0);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.distance, 0.0);
}

TEST(Decode, PerturbedTable3Vector) {
  const std::vector<IntensityVector> rows(testdata::kTable3.begin(), testdata::kTable3.end());
  const IntensityVector v{3, 2, 1, 1};
  const auto oracle = brute_force_nearest(rows, v);
  ASSERT_EQ(oracle.index, 0u);
  ASSERT_EQ(oracle.distance, 1.0);
  // Every other row is at least sqrt(2) away.
  for (std::size_t k = 1; k < rows.size(); ++k) {
    double s = 0;
    for (std::size_t j = 0; j < 4; ++j) s += std::pow(rows[k][j] - v[j], 2);
    ASSERT_GE(s, 2.0);
  }
  const auto r = decode(v, table3_codebook());
  EXPECT_EQ(r.angle.value(), 0.0);
  EXPECT_FALSE(r.exact);
  EXPECT_EQ(r.distance, 1.0);
  EXPECT_GE(r.margin, std::sqrt(2.0) - 1.0 - 1e-12);
}

TEST(Decode, PublishedTable2ZeroVector) {
  const auto r = decode({0, 0, 0}, published_table2());
  EXPECT_EQ(r.angle.value(), 112.5);
  EXPECT_TRUE(r.exact);
}

TEST(Decode, TiesGoToSmallerAngle) {
  const StoredCodebook cb(bank_of({0}), PhotonBudget(4),
                          {{deg(10), {0}}, {deg(20), {2}}, {deg(30), {4}}});
  EXPECT_EQ(decode({1}, cb).angle.value(), 10.0);
  EXPECT_EQ(decode({3}, cb).angle.value(), 20.0);
  EXPECT_EQ(decode({1}, cb).margin, 0.0);
}

TEST(Decode, LengthMismatchRejected) {
  EXPECT_THROW(decode({1, 2, 3}, table3_codebook()), std::invalid_argument);
}

TEST(Decode, SingleEntryMarginIsInfinite) {
  const StoredCodebook cb(bank_of({0}), PhotonBudget(2), {{deg(0), {2}}});
  EXPECT_TRUE(std::isinf(decode({1}, cb).margin));
}

TEST(Decode, ArgminAgainstBruteForce) {
  const auto cb = table3_codebook();
  std::vector<IntensityVector> rows;
  for (const auto& e : cb.entries()) rows.push_back(e.vector);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> count(0, 4);
  for (int i = 0; i < 5000; ++i) {
    IntensityVector v(4);
    for (int& c : v) c = count(rng);
    const auto r = decode(v, cb);
    const auto oracle = brute_force_nearest(rows, v);
    ASSERT_EQ(r.angle, cb.entries()[oracle.index].angle);
    ASSERT_DOUBLE_EQ(r.distance, oracle.distance);
    for (const auto& row : rows) ASSERT_LE(r.distance, euclidean_distance(v, row));
    ASSERT_GE(r.margin, 0.0);
    ASSERT_EQ(r.exact, r.distance == 0.0);
  }
}

TEST(Decode, RoundTripEveryFamily) {
  const struct {
    std::size_t n;
    std::initializer_list<double> bank;
    int photons;
  } cases[] = {{4, {0, 45}, 2},
               {8, {0, 22.5, 45}, 3},
               {16, {22.5, 45, 67.5, 90}, 4}};
  for (const auto& c : cases) {
    const AngleSet set(c.n);
    const auto bank = bank_of(c.bank);
    const auto cb = build_codebook(set, bank, PhotonBudget(c.photons));
    ASSERT_TRUE(cb.is_unique());
    for (Angle a : set) {
      const auto r = decode(expected_vector(a, bank, PhotonBudget(c.photons)), cb);
      EXPECT_EQ(r.angle, a);
      EXPECT_TRUE(r.exact);
    }
  }
}

TEST(Margin, PublishedTable2IsOne) {
  // Exhaustive scan over the 28 pairs of published vectors.
  long best = std::numeric_limits<long>::max();
  int pairs = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i + 1; j < 8; ++j, ++pairs) {
      long s = 0;
      for (std::size_t k = 0; k < 3; ++k) {
        const long d = testdata::kTable2[i][k] - testdata::kTable2[j][k];
        s += d * d;
      }
      best = std::min(best, s);
    }
  }
  ASSERT_EQ(pairs, 28);
  ASSERT_EQ(best, 1);
  EXPECT_EQ(margin(published_table2()), 1.0);
  EXPECT_EQ(min_squared_separation(published_table2()), 1);
}

TEST(Margin, DuplicateAndSingleton) {
  EXPECT_EQ(margin(build_codebook(AngleSet(4), bank_of({0}), PhotonBudget(1))), 0.0);
  const StoredCodebook one(bank_of({0}), PhotonBudget(2), {{deg(0), {2}}});
  EXPECT_TRUE(std::isinf(margin(one)));
}

TEST(DecodeAccuracy, PerfectWithoutJitter) {
  const auto cb = build_codebook(AngleSet(8), bank_of({0, 22.5, 45}), PhotonBudget(3));
  EXPECT_EQ(decode_accuracy(cb, {0.0, DetectorModel::kIntensity}, 2000, 1), 1.0);
}

TEST(DecodeAccuracy, DeterministicGivenSeed) {
  const auto cb = table3_codebook();
  const NoiseModel noise{3.0, DetectorModel::kIntensity};
  EXPECT_EQ(decode_accuracy(cb, noise, 500, 77), decode_accuracy(cb, noise, 500, 77));
}

TEST(DecodeAccuracy, PhotonCountingDoesNotImproveWithFewerPhotons) {
  // Decreasing budget with the same bank: accuracy must not go up beyond
  // statistical slack.
  const auto bank = bank_of({22.5, 45, 67.5, 90});
  const AngleSet set(16);
  const NoiseModel counting{0.0, DetectorModel::kPhotonCounting};
  double previous = 1.0;
  for (int n : {64, 32, 16, 8, 4}) {
    const auto cb = build_codebook(set, bank, PhotonBudget(n));
    ASSERT_TRUE(cb.is_unique()) << n;
    const double acc = decode_accuracy(cb, counting, 10000, 1000);
    EXPECT_LE(acc, previous + 0.02) << "budget " << n;
    previous = acc;
  }
}

}  // namespace
}  // namespace polartomo
