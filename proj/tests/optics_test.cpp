#include "polartomo/optics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace polartomo {
namespace {

Angle deg(double d) { return Angle::degrees(d); }

FilterBank bank_of(std::initializer_list<double> d) {
  return make_filter_bank(std::vector<double>(d));
}

TEST(Transmission, AlignedCrossedDiagonal) {
  EXPECT_EQ(transmission(deg(0), deg(0)), 1.0);
  EXPECT_EQ(transmission(deg(90), deg(0)), 0.0);
  EXPECT_EQ(transmission(deg(45), deg(0)), 0.5);
  EXPECT_EQ(transmission(deg(30), deg(0)), 0.75);
  EXPECT_EQ(transmission(deg(0), deg(60)), 0.25);
  EXPECT_EQ(transmission(deg(135), deg(0)), 0.5);
}

TEST(Transmission, MatchesMalusLaw) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> any(0.0, 180.0);
  for (int i = 0; i < 10000; ++i) {
    const double t = any(rng), p = any(rng);
    const double c = std::cos((t - p) * std::numbers::pi / 180.0);
    ASSERT_NEAR(transmission(deg(t), deg(p)), c * c, 1e-12);
  }
}

TEST(Transmission, SymmetricAndPeriodic) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> any(0.0, 180.0);
  for (int i = 0; i < 10000; ++i) {
    const double t = any(rng), p = any(rng);
    ASSERT_EQ(transmission(deg(t), deg(p)), transmission(deg(p), deg(t)));
    ASSERT_NEAR(transmission(deg(t + 180.0), deg(p)), transmission(deg(t), deg(p)), 1e-12);
    const double v = transmission(deg(t), deg(p));
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(Transmission, OrthogonalComplementIsExactOnGrid) {
  // Offsets on a 2^-16 degree lattice are exact, so the complement can be
  // compared bit for bit.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> tick(0, (180L << 16) - 1);
  for (int i = 0; i < 20000; ++i) {
    const double t = std::ldexp(static_cast<double>(tick(rng)), -16);
    const double p = std::ldexp(static_cast<double>(tick(rng)), -16);
    ASSERT_EQ(transmission(deg(t), deg(p)) + transmission(deg(t), deg(p + 90.0)), 1.0)
        << t << " " << p;
  }
  for (int k = 0; k < 16; ++k) {
    for (int j = 0; j < 16; ++j) {
      const double t = k * 11.25, p = j * 11.25;
      ASSERT_EQ(transmission(deg(t), deg(p)) + transmission(deg(t), deg(p + 90.0)), 1.0);
    }
  }
}

TEST(Quantize, HalfEven) {
  EXPECT_EQ(quantize(3.41), 3);
  EXPECT_EQ(quantize(1.5), 2);
  EXPECT_EQ(quantize(2.5), 2);
  EXPECT_EQ(quantize(0.5), 0);
  EXPECT_EQ(quantize(0.0), 0);
  EXPECT_EQ(quantize(2.5000001), 3);
  EXPECT_THROW(quantize(-0.1), std::invalid_argument);
  EXPECT_THROW(quantize(std::nan("")), std::invalid_argument);
}

TEST(FilterBank, RejectsEmptyAndDuplicates) {
  EXPECT_THROW(FilterBank({}), std::invalid_argument);
  EXPECT_THROW(bank_of({0, 180}), std::invalid_argument);
  EXPECT_THROW(bank_of({22.5, 45, 22.5}), std::invalid_argument);
  EXPECT_EQ(bank_of({45, 0}).size(), 2u);
  EXPECT_EQ(bank_of({45, 0})[0].value(), 45.0);
}

TEST(PhotonBudget, MustBePositive) {
  EXPECT_THROW(PhotonBudget(0), std::invalid_argument);
  EXPECT_EQ(PhotonBudget(4).per_filter(), 4);
}

TEST(ExpectedVector, PublishedRows) {
  const auto table3_bank = bank_of({22.5, 45, 67.5, 90});
  EXPECT_EQ(expected_vector(deg(0), table3_bank, PhotonBudget(4)),
            (IntensityVector{3, 2, 1, 0}));
  EXPECT_EQ(expected_vector(deg(45), table3_bank, PhotonBudget(4)),
            (IntensityVector{3, 4, 3, 2}));
  const auto table2_bank = bank_of({0, 22.5, 45});
  EXPECT_EQ(expected_vector(deg(22.5), table2_bank, PhotonBudget(3)),
            (IntensityVector{3, 3, 3}));
  EXPECT_EQ(expected_vector(deg(112.5), table2_bank, PhotonBudget(3)),
            (IntensityVector{0, 0, 0}));
  EXPECT_EQ(expected_vector(deg(0), bank_of({0}), PhotonBudget(5)), (IntensityVector{5}));
}

TEST(ExpectedVector, ComponentsWithinBudget) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> any(0.0, 180.0);
  for (int i = 0; i < 2000; ++i) {
    const int n = 1 + static_cast<int>(rng() % 50);
    const double f = any(rng);
    const auto bank = bank_of({f, f + 37.0});
    for (int c : expected_vector(deg(any(rng)), bank, PhotonBudget(n))) {
      ASSERT_GE(c, 0);
      ASSERT_LE(c, n);
    }
  }
}

TEST(SampleVector, DegenerateProbabilities) {
  for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL}) {
    EXPECT_EQ(sample_vector(deg(0), bank_of({0}), PhotonBudget(10), seed),
              (IntensityVector{10}));
    EXPECT_EQ(sample_vector(deg(90), bank_of({0}), PhotonBudget(10), seed),
              (IntensityVector{0}));
  }
}

TEST(SampleVector, ReproducibleFromSeed) {
  const auto bank = bank_of({0, 22.5, 45});
  EXPECT_EQ(sample_vector(deg(33), bank, PhotonBudget(100), 42),
            sample_vector(deg(33), bank, PhotonBudget(100), 42));
}

TEST(SampleVector, DiagonalWithinFourSigma) {
  // sigma = sqrt(10000 * 0.5 * 0.5) = 50.
  const auto v = sample_vector(deg(45), bank_of({0}), PhotonBudget(10000), 2024);
  EXPECT_LE(std::abs(v[0] - 5000), 200);
}

TEST(SampleVector, MeanConvergesToMalus) {
  const auto bank = bank_of({0, 30, 100});
  const int n = 40;
  const int trials = 4000;
  const Angle theta = deg(17);
  std::vector<double> sum(bank.size(), 0.0);
  for (int t = 0; t < trials; ++t) {
    const auto v = sample_vector(theta, bank, PhotonBudget(n), 100 + t);
    for (std::size_t j = 0; j < v.size(); ++j) {
      ASSERT_GE(v[j], 0);
      ASSERT_LE(v[j], n);
      sum[j] += v[j];
    }
  }
  for (std::size_t j = 0; j < bank.size(); ++j) {
    const double p = transmission(theta, bank[j]);
    const double tolerance = 4.0 * std::sqrt(n * p * (1 - p) / trials);
    EXPECT_NEAR(sum[j] / trials, n * p, tolerance) << "filter " << j;
  }
}

TEST(MeasurePulse, IntensityModelEqualsExpectedForPurePulse) {
  const auto bank = bank_of({0, 22.5, 45});
  Rng rng(0);
  for (double a : {0.0, 22.5, 45.0, 67.5, 90.0, 112.5, 135.0, 157.5, 13.0}) {
    const std::vector<Angle> pulse(9, deg(a));
    EXPECT_EQ(measure_pulse(pulse, bank, DetectorModel::kIntensity, rng),
              expected_vector(deg(a), bank, PhotonBudget(3)))
        << a;
  }
}

TEST(MeasurePulse, RoundRobinSplitsRemainderFromFirstFilter) {
  // Near-parallel filters: each arm reports its photon count.
  const auto bank = bank_of({0, 180.0 - 1e-3, 1e-3});
  Rng rng(0);
  const std::vector<Angle> pulse(8, deg(0));
  EXPECT_EQ(measure_pulse(pulse, bank, DetectorModel::kIntensity, rng),
            (IntensityVector{3, 3, 2}));
}

TEST(MeasurePulse, PhotonCountingBounds) {
  const auto bank = bank_of({0, 60});
  Rng rng(3);
  const std::vector<Angle> pulse(10, deg(20));
  for (int i = 0; i < 100; ++i) {
    const auto v = measure_pulse(pulse, bank, DetectorModel::kPhotonCounting, rng);
    ASSERT_LE(v[0], 5);
    ASSERT_LE(v[1], 5);
  }
}

TEST(UniformAngle, UniformOnHalfTurnAndLatticeExact) {
  Rng rng(8);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Angle a = uniform_angle(rng);
    ASSERT_GE(a.value(), 0.0);
    ASSERT_LT(a.value(), 180.0);
    ASSERT_EQ(std::ldexp(a.value(), 40), std::floor(std::ldexp(a.value(), 40)));
    sum += a.value();
  }
  // Mean 90, sd of uniform on [0,180) is 180/sqrt(12).
  EXPECT_NEAR(sum / n, 90.0, 4.0 * 180.0 / std::sqrt(12.0 * n));
}

}  // namespace
}  // namespace polartomo
