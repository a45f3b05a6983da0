#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "swarm/core/rng.hpp"
#include "swarm/metrics/distribution.hpp"

namespace {

using namespace swarm;

TEST(bin_index, covers_the_closed_interval) {
  EXPECT_EQ(sharpness_bin(-1.0, 2), 0);
  EXPECT_EQ(sharpness_bin(-0.1, 2), 0);
  EXPECT_EQ(sharpness_bin(0.5, 2), 1);
  EXPECT_EQ(sharpness_bin(1.0, 2), 1);  // closed top edge
}

TEST(bin_index, interior_edges_belong_to_the_higher_bin) {
  // Bin edges for four bins sit at -0.5, 0, 0.5: all exactly representable.
  EXPECT_EQ(sharpness_bin(-0.5, 4), 1);
  EXPECT_EQ(sharpness_bin(0.0, 4), 2);
  EXPECT_EQ(sharpness_bin(0.5, 4), 3);
  EXPECT_EQ(sharpness_bin(0.0, 2), 1);
}

TEST(bin_index, integer_midpoint_round_trip) {
  binned_distribution d;
  d.bins = 21;
  for (int k = 0; k < d.bins; ++k) EXPECT_EQ(sharpness_bin(d.midpoint(k), d.bins), k);
  EXPECT_NEAR(d.midpoint(10), 0.0, 1e-15);
}

TEST(bin_index, rejects_bad_inputs) {
  EXPECT_THROW(sharpness_bin(0.0, 1), std::invalid_argument);
  EXPECT_THROW(sharpness_bin(1.0000001, 21), std::invalid_argument);
  EXPECT_THROW(sharpness_bin(-1.2, 21), std::invalid_argument);
}

TEST(binning, identical_values_occupy_one_bin) {
  const auto d = bin_sharpness({0.5, 0.5, 0.5}, 21);
  EXPECT_EQ(d.occupied(), 1);
  EXPECT_DOUBLE_EQ(d.p[sharpness_bin(0.5, 21)], 1.0);
  EXPECT_EQ(d.samples, 3u);
  d.validate();
}

TEST(binning, spread_values_split_evenly) {
  const auto d = bin_sharpness({-0.9, 0.0, 0.9}, 3);
  EXPECT_EQ(d.occupied(), 3);
  for (double q : d.p) EXPECT_NEAR(q, 1.0 / 3.0, 1e-15);
}

TEST(binning, empty_input_rejected) {
  EXPECT_THROW(bin_sharpness({}, 21), std::invalid_argument);
}

TEST(binning, validate_rejects_malformed_distributions) {
  binned_distribution d;
  d.bins = 1;
  d.p = {1.0};
  EXPECT_THROW(d.validate(), std::invalid_argument);

  d.bins = 2;
  d.p = {0.5};
  EXPECT_THROW(d.validate(), std::invalid_argument);

  d.p = {1.5, -0.5};
  EXPECT_THROW(d.validate(), std::invalid_argument);

  d.p = {0.7, 0.7};
  EXPECT_THROW(d.validate(), std::invalid_argument);
}

TEST(binning, midpoints_are_centered) {
  binned_distribution d;
  d.bins = 4;
  EXPECT_DOUBLE_EQ(d.width(), 0.5);
  EXPECT_DOUBLE_EQ(d.midpoint(0), -0.75);
  EXPECT_DOUBLE_EQ(d.midpoint(1), -0.25);
  EXPECT_DOUBLE_EQ(d.midpoint(2), 0.25);
  EXPECT_DOUBLE_EQ(d.midpoint(3), 0.75);
}

TEST(expectation_fn, single_bin_returns_its_midpoint) {
  EXPECT_DOUBLE_EQ(expectation(bin_sharpness({0.5, 0.5}, 2)), 0.5);
}

TEST(expectation_fn, symmetric_distribution_centers_at_zero) {
  EXPECT_DOUBLE_EQ(expectation(bin_sharpness({-0.5, 0.5}, 2)), 0.0);
}

TEST(expectation_fn, weights_by_probability) {
  EXPECT_DOUBLE_EQ(expectation(bin_sharpness({0.5, 0.5, 0.5, -0.5}, 2)), 0.25);
}

TEST(entropy_fn, single_bin_has_zero_entropy) {
  EXPECT_DOUBLE_EQ(entropy(bin_sharpness({0.3, 0.3, 0.3}, 21)), 0.0);
}

TEST(entropy_fn, uniform_four_bins) {
  const auto d = bin_sharpness({-0.75, -0.25, 0.25, 0.75}, 4);
  EXPECT_NEAR(entropy(d), std::log(4.0), 1e-12);
}

TEST(entropy_fn, frozen_half_quarter_quarter) {
  const auto d = bin_sharpness({-0.9, -0.8, -0.3, 0.2}, 4);
  ASSERT_EQ(d.occupied(), 3);
  EXPECT_DOUBLE_EQ(d.p[0], 0.5);
  EXPECT_DOUBLE_EQ(d.p[1], 0.25);
  EXPECT_DOUBLE_EQ(d.p[2], 0.25);
  EXPECT_NEAR(entropy(d), 1.0397207708399179, 1e-12);
}

TEST(distribution_properties, hold_under_random_inputs) {
  rng rand(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const int bins = 2 + static_cast<int>(rand.below(30));
    const std::size_t m = 1 + rand.below(40);
    std::vector<double> values;
    for (std::size_t i = 0; i < m; ++i) values.push_back(rand.uniform(-1.0, 1.0));

    const auto d = bin_sharpness(values, bins);
    d.validate();
    EXPECT_EQ(d.samples, m);
    EXPECT_LE(d.occupied(), static_cast<int>(std::min<std::size_t>(m, bins)));

    const double h = entropy(d);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log(static_cast<double>(std::min<std::size_t>(m, bins))) + 1e-12);

    const double e = expectation(d);
    EXPECT_GT(e, -1.0);
    EXPECT_LT(e, 1.0);
  }
}

}  // namespace
