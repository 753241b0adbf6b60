#include <gtest/gtest.h>

#include <array>
#include <limits>
#include <random>

#include "arbfree/market.hpp"

using namespace arbfree;

namespace {

MarketData binomial_data() {
  return MarketData{0.0, {"A"}, {1.0}, {{2.0}, {0.5}}, {0.5, 0.5}};
}

ErrorCode error_of(const MarketData& raw) {
  try {
    validate_market(raw);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "validation unexpectedly succeeded";
  return ErrorCode::IoError;
}

Market random_market(std::mt19937& rng) {
  std::uniform_int_distribution<int> dim(1, 5);
  std::uniform_int_distribution<int> price(0, 8);
  std::uniform_int_distribution<int> weight(1, 5);
  std::uniform_int_distribution<int> rate_pick(0, 3);
  const std::size_t n = static_cast<std::size_t>(dim(rng)) + 1;
  const std::size_t d = static_cast<std::size_t>(dim(rng));
  MarketData raw;
  raw.rate = std::array{0.0, 0.25, 0.5, -0.5}[static_cast<std::size_t>(rate_pick(rng))];
  for (std::size_t i = 0; i < d; ++i) raw.prices.push_back(price(rng));
  double total = 0;
  for (std::size_t w = 0; w < n; ++w) {
    std::vector<double> row;
    for (std::size_t i = 0; i < d; ++i) row.push_back(price(rng));
    raw.scenario_prices.push_back(row);
    raw.probabilities.push_back(weight(rng));
    total += raw.probabilities.back();
  }
  for (auto& p : raw.probabilities) p /= total;
  return validate_market(raw);
}

} // namespace

TEST(MarketTest, ValidatesBinomial) {
  const Market m = validate_market(binomial_data());
  EXPECT_EQ(m.num_scenarios(), 2u);
  EXPECT_EQ(m.num_assets(), 1u);
  EXPECT_EQ(m.assets()[0], "A");
}

TEST(MarketTest, RejectsBadInput) {
  auto raw = binomial_data();
  raw.probabilities = {0.5, 0.6};
  EXPECT_EQ(error_of(raw), ErrorCode::ProbabilityNotNormalized);

  raw = binomial_data();
  raw.rate = -1.5;
  EXPECT_EQ(error_of(raw), ErrorCode::RateBelowMinusOne);

  raw = binomial_data();
  raw.rate = -1.0;
  EXPECT_EQ(error_of(raw), ErrorCode::RateBelowMinusOne);

  raw = binomial_data();
  raw.probabilities = {1.0, 0.0};
  EXPECT_EQ(error_of(raw), ErrorCode::NonPositiveProbability);

  raw = binomial_data();
  raw.scenario_prices[1][0] = -0.1;
  EXPECT_EQ(error_of(raw), ErrorCode::NegativePrice);

  raw = binomial_data();
  raw.prices = {-1.0};
  EXPECT_EQ(error_of(raw), ErrorCode::NegativePrice);

  raw = binomial_data();
  raw.scenario_prices[0] = {1.0, 2.0};
  EXPECT_EQ(error_of(raw), ErrorCode::DimensionMismatch);

  raw = binomial_data();
  raw.scenario_prices[0][0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(error_of(raw), ErrorCode::NonFiniteValue);
}

TEST(MarketTest, PortfolioCost) {
  const Market m = validate_market(binomial_data());
  EXPECT_DOUBLE_EQ(portfolio_cost(m, {0.0, {0.0}}), 0.0);
  EXPECT_DOUBLE_EQ(portfolio_cost(m, {1.0, {2.0}}), 3.0);
  EXPECT_DOUBLE_EQ(portfolio_cost(m, {-1.0, {1.0}}), 0.0);
  EXPECT_THROW(portfolio_cost(m, {0.0, {1.0, 2.0}}), Error);
}

TEST(MarketTest, PortfolioValue) {
  auto raw = binomial_data();
  raw.rate = 0.1;
  const Market m = validate_market(raw);
  const auto bond = portfolio_value(m, {1.0, {0.0}});
  for (double v : bond) EXPECT_DOUBLE_EQ(v, 1.1);

  const Market b = validate_market(binomial_data());
  EXPECT_EQ(portfolio_value(b, {0.0, {1.0}}), (std::vector<double>{2.0, 0.5}));
  EXPECT_EQ(portfolio_value(b, {-1.0, {1.0}}), (std::vector<double>{1.0, -0.5}));
}

TEST(MarketTest, DiscountedGains) {
  const auto y = discounted_gains(validate_market(binomial_data()));
  EXPECT_DOUBLE_EQ(y.gains(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(y.gains(1, 0), -0.5);

  const auto y2 = discounted_gains(validate_market({1.0, {}, {1.0}, {{4.0}, {1.0}}, {0.5, 0.5}}));
  EXPECT_DOUBLE_EQ(y2.gains(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(y2.gains(1, 0), -0.5);

  const auto exact = discounted_gains<Rational>(validate_market({1.0, {}, {1.0}, {{4.0}, {1.0}}, {0.5, 0.5}}));
  EXPECT_EQ(exact.gains(1, 0), Rational(-1, 2));
}

TEST(MarketTest, ForcedZeroGains) {
  std::mt19937 rng(3);
  for (int t = 0; t < 50; ++t) {
    MarketData raw;
    raw.rate = 0.25;
    raw.prices = {1.0, 2.0, 4.0};
    for (int w = 0; w < 4; ++w) raw.scenario_prices.push_back({1.25, 2.5, 5.0});
    raw.probabilities = {0.25, 0.25, 0.25, 0.25};
    const auto y = discounted_gains<Rational>(validate_market(raw));
    for (std::size_t w = 0; w < 4; ++w)
      for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(sgn(y.gains(w, i)), 0);
  }
}

TEST(MarketTest, ArbitragePortfolioExamples) {
  const Market b = validate_market(binomial_data());
  EXPECT_FALSE(is_arbitrage_portfolio(b, {0.0, {0.0}}).is_arbitrage);
  EXPECT_FALSE(is_arbitrage_portfolio(b, {-1.0, {1.0}}).is_arbitrage);

  const Market dominated = validate_market({0.0, {}, {1.0}, {{1.0}, {2.0}}, {0.5, 0.5}});
  const auto check = is_arbitrage_portfolio(dominated, {-1.0, {1.0}});
  EXPECT_TRUE(check.is_arbitrage) << check.reason;
  EXPECT_EQ(portfolio_value(dominated, {-1.0, {1.0}}), (std::vector<double>{0.0, 1.0}));
}

// Self-financing portfolios: value / (1 + r) equals xi . Y scenario by scenario.
TEST(MarketTest, SelfFinancingValueMatchesGains) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pos(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const Market m = random_market(rng);
    Portfolio pf;
    for (std::size_t i = 0; i < m.num_assets(); ++i) pf.risky.push_back(pos(rng));
    pf.bond = -dot(pf.risky, m.prices());
    EXPECT_NEAR(portfolio_cost(m, pf), 0.0, 1e-12);
    const auto value = portfolio_value(m, pf);
    const auto y = discounted_gains(m);
    for (std::size_t w = 0; w < m.num_scenarios(); ++w) {
      const double gain = dot<double>(std::span<const double>(pf.risky), y.gains.row(w));
      EXPECT_NEAR(value[w] / (1.0 + m.rate()), gain, 1e-10);
    }
  }
}

TEST(MarketTest, ArbitrageIsAConeProperty) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  const Market dominated = validate_market({0.0, {}, {1.0}, {{1.0}, {2.0}}, {0.5, 0.5}});
  for (int t = 0; t < 100; ++t) {
    const double lambda = scale(rng);
    EXPECT_TRUE(is_arbitrage_portfolio(dominated, {-lambda, {lambda}}).is_arbitrage) << lambda;
  }
}
