#pragma once

#include <string>
#include <vector>

#include "arbfree/scalar.hpp"

namespace arbfree {

/// Unvalidated market description as read from a file or built by hand.
/// The riskless bond is implicit: its price is 1 today and 1 + rate at t1.
struct MarketData {
  double rate = 0.0;
  std::vector<std::string> assets;       // optional; defaulted to S1..Sd
  std::vector<double> prices;            // length d
  std::vector<std::vector<double>> scenario_prices; // n rows of length d
  std::vector<double> probabilities;     // length n
};

/// One-period market with n scenarios and d risky assets. Only obtainable
/// through validate_market(), so every instance satisfies the model
/// invariants (rate > -1, positive normalized probabilities, nonnegative
/// prices, finite entries).
class Market {
public:
  double rate() const noexcept { return rate_; }
  const std::vector<std::string>& assets() const noexcept { return assets_; }
  const std::vector<double>& prices() const noexcept { return prices_; }
  const Matrix<double>& scenario_prices() const noexcept { return scenario_prices_; }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }

  std::size_t num_scenarios() const noexcept { return scenario_prices_.rows(); }
  std::size_t num_assets() const noexcept { return scenario_prices_.cols(); }

  MarketData data() const;

  friend Market validate_market(const MarketData& raw);
  friend bool operator==(const Market&, const Market&) = default;

private:
  Market() = default;

  double rate_ = 0.0;
  std::vector<std::string> assets_;
  std::vector<double> prices_;
  Matrix<double> scenario_prices_;
  std::vector<double> probabilities_;
};

Market validate_market(const MarketData& raw);

/// Bond position plus risky positions; short positions are negative.
struct Portfolio {
  double bond = 0.0;
  std::vector<double> risky;
};

/// Discounted net gains Y (n x d), Y(w, i) = S(w, i) / (1 + r) - pi(i),
/// carried together with the scenario probabilities.
template <class T>
struct GainsMatrix {
  Matrix<T> gains;
  Vector<T> probabilities;

  std::size_t num_scenarios() const { return gains.rows(); }
  std::size_t num_assets() const { return gains.cols(); }
};

template <class T = double>
GainsMatrix<T> discounted_gains(const Market& market);

/// Builds a gains matrix directly (e.g. from an abstract subspace). Checks
/// shapes and that probabilities are positive.
template <class T>
GainsMatrix<T> make_gains(Matrix<T> gains, Vector<T> probabilities);

double portfolio_cost(const Market& market, const Portfolio& pf);
std::vector<double> portfolio_value(const Market& market, const Portfolio& pf);

struct ArbitrageCheck {
  bool is_arbitrage = false;
  std::string reason;
};

/// Cost <= 0, value >= 0 in every scenario and > 0 in at least one, all at
/// the shared 1e-9 threshold.
ArbitrageCheck is_arbitrage_portfolio(const Market& market, const Portfolio& pf);

extern template GainsMatrix<double> discounted_gains<double>(const Market&);
extern template GainsMatrix<Rational> discounted_gains<Rational>(const Market&);
extern template GainsMatrix<double> make_gains(Matrix<double>, Vector<double>);
extern template GainsMatrix<Rational> make_gains(Matrix<Rational>, Vector<Rational>);

} // namespace arbfree
