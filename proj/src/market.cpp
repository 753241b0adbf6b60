#include "arbfree/market.hpp"

#include <cmath>
#include <numeric>

namespace arbfree {

namespace {

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, what + " is not finite");
}

void check_portfolio(const Market& market, const Portfolio& pf) {
  if (pf.risky.size() != market.num_assets())
    throw Error(ErrorCode::DimensionMismatch, "portfolio has " + std::to_string(pf.risky.size()) +
                                                  " risky positions, market has " +
                                                  std::to_string(market.num_assets()) + " assets");
  require_finite(pf.bond, "bond position");
  for (double x : pf.risky) require_finite(x, "risky position");
}

} // namespace

Market validate_market(const MarketData& raw) {
  const std::size_t d = raw.prices.size();
  const std::size_t n = raw.scenario_prices.size();
  if (d == 0) throw Error(ErrorCode::DimensionMismatch, "market needs at least one risky asset");
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "market needs at least one scenario");
  if (raw.probabilities.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "probability count differs from scenario count");
  if (!raw.assets.empty() && raw.assets.size() != d)
    throw Error(ErrorCode::DimensionMismatch, "asset name count differs from price count");

  require_finite(raw.rate, "rate");
  if (!(raw.rate > -1.0))
    throw Error(ErrorCode::RateBelowMinusOne, "interest rate must exceed -1");

  for (std::size_t i = 0; i < d; ++i) {
    require_finite(raw.prices[i], "price");
    if (raw.prices[i] < 0) throw Error(ErrorCode::NegativePrice, "initial price of asset " + std::to_string(i) + " is negative");
  }

  Market m;
  m.scenario_prices_ = Matrix<double>(n, d);
  for (std::size_t w = 0; w < n; ++w) {
    if (raw.scenario_prices[w].size() != d)
      throw Error(ErrorCode::DimensionMismatch, "scenario " + std::to_string(w) + " has wrong number of prices");
    for (std::size_t i = 0; i < d; ++i) {
      const double s = raw.scenario_prices[w][i];
      require_finite(s, "scenario price");
      if (s < 0) throw Error(ErrorCode::NegativePrice, "scenario " + std::to_string(w) + " has a negative price");
      m.scenario_prices_(w, i) = s;
    }
  }

  double total = 0.0;
  for (std::size_t w = 0; w < n; ++w) {
    const double p = raw.probabilities[w];
    require_finite(p, "probability");
    if (p <= 0) throw Error(ErrorCode::NonPositiveProbability, "scenario " + std::to_string(w) + " has probability <= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(ErrorCode::ProbabilityNotNormalized, "probabilities sum to " + ScalarTraits<double>::to_string(total));

  m.rate_ = raw.rate;
  m.prices_ = raw.prices;
  m.probabilities_ = raw.probabilities;
  m.assets_ = raw.assets;
  if (m.assets_.empty())
    for (std::size_t i = 0; i < d; ++i) m.assets_.push_back("S" + std::to_string(i + 1));
  return m;
}

MarketData Market::data() const {
  MarketData raw;
  raw.rate = rate_;
  raw.assets = assets_;
  raw.prices = prices_;
  raw.probabilities = probabilities_;
  for (std::size_t w = 0; w < num_scenarios(); ++w) {
    auto row = scenario_prices_.row(w);
    raw.scenario_prices.emplace_back(row.begin(), row.end());
  }
  return raw;
}

template <class T>
GainsMatrix<T> discounted_gains(const Market& market) {
  const std::size_t n = market.num_scenarios();
  const std::size_t d = market.num_assets();
  const T growth = T(1) + convert_scalar<T>(market.rate());
  GainsMatrix<T> y;
  y.gains = Matrix<T>(n, d);
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t i = 0; i < d; ++i)
      y.gains(w, i) = convert_scalar<T>(market.scenario_prices()(w, i)) / growth -
                      convert_scalar<T>(market.prices()[i]);
  y.probabilities = convert<T>(market.probabilities());
  return y;
}

template <class T>
GainsMatrix<T> make_gains(Matrix<T> gains, Vector<T> probabilities) {
  if (gains.rows() != probabilities.size())
    throw Error(ErrorCode::DimensionMismatch, "gains rows differ from probability count");
  if (gains.rows() == 0 || gains.cols() == 0)
    throw Error(ErrorCode::DimensionMismatch, "gains matrix must be non-empty");
  for (const auto& p : probabilities)
    if (!(p > 0)) throw Error(ErrorCode::NonPositiveProbability, "probabilities must be positive");
  return GainsMatrix<T>{std::move(gains), std::move(probabilities)};
}

double portfolio_cost(const Market& market, const Portfolio& pf) {
  check_portfolio(market, pf);
  return pf.bond + dot(pf.risky, market.prices());
}

std::vector<double> portfolio_value(const Market& market, const Portfolio& pf) {
  check_portfolio(market, pf);
  std::vector<double> value(market.num_scenarios());
  const double bond = pf.bond * (1.0 + market.rate());
  for (std::size_t w = 0; w < value.size(); ++w)
    value[w] = bond + dot<double>(std::span<const double>(pf.risky), market.scenario_prices().row(w));
  return value;
}

ArbitrageCheck is_arbitrage_portfolio(const Market& market, const Portfolio& pf) {
  const double cost = portfolio_cost(market, pf);
  if (cost > kFeasibilityTolerance)
    return {false, "portfolio cost " + ScalarTraits<double>::to_string(cost) + " is positive"};
  const auto value = portfolio_value(market, pf);
  bool gains_somewhere = false;
  for (std::size_t w = 0; w < value.size(); ++w) {
    if (value[w] < -kFeasibilityTolerance)
      return {false, "value is negative in scenario " + std::to_string(w)};
    if (value[w] > kPositivityThreshold) gains_somewhere = true;
  }
  if (!gains_somewhere) return {false, "value is zero in every scenario"};
  return {true, "nonpositive cost, nonnegative value, strictly positive in some scenario"};
}

template GainsMatrix<double> discounted_gains<double>(const Market&);
template GainsMatrix<Rational> discounted_gains<Rational>(const Market&);
template GainsMatrix<double> make_gains(Matrix<double>, Vector<double>);
template GainsMatrix<Rational> make_gains(Matrix<Rational>, Vector<Rational>);

} // namespace arbfree
