#include "arbfree/ftap.hpp"

#include <algorithm>

namespace arbfree {

namespace {

// Float solves fall back to the rational oracle on numerical breakdown.
template <class T>
T abs_value(const T& x) {
  return x < 0 ? T(-x) : x;
}

} // namespace

template <class T>
LpProblem<T> arbitrage_lp(const GainsMatrix<T>& y) {
  const std::size_t n = y.num_scenarios();
  const std::size_t d = y.num_assets();
  LpProblem<T> lp;
  lp.objective.assign(d, T(0));
  for (std::size_t w = 0; w < n; ++w)
    for (std::size_t i = 0; i < d; ++i) lp.objective[i] += y.probabilities[w] * y.gains(w, i);
  lp.constraint_matrix = Matrix<T>(0, d);
  lp.lower_bounds.assign(d, T(-1));
  lp.upper_bounds.assign(d, T(1));
  for (std::size_t w = 0; w < n; ++w) {
    auto row = y.gains.row(w);
    lp.add_row(Vector<T>(row.begin(), row.end()), Relation::GreaterEqual, T(0));
  }
  return lp;
}

// Variables (q_1..q_n, eps); maximize eps.
template <class T>
LpProblem<T> state_price_lp(const Matrix<T>& gains) {
  const std::size_t n = gains.rows();
  const std::size_t d = gains.cols();
  auto lp = LpProblem<T>::nonnegative(n + 1);
  lp.objective[n] = T(1);
  for (std::size_t i = 0; i < d; ++i) {
    Vector<T> row(n + 1, T(0));
    for (std::size_t w = 0; w < n; ++w) row[w] = gains(w, i);
    lp.add_row(row, Relation::Equal, T(0));
  }
  Vector<T> total(n + 1, T(1));
  total[n] = T(0);
  lp.add_row(total, Relation::Equal, T(1));
  for (std::size_t w = 0; w < n; ++w) {
    Vector<T> row(n + 1, T(0));
    row[w] = T(1);
    row[n] = T(-1);
    lp.add_row(row, Relation::GreaterEqual, T(0));
  }
  return lp;
}

template <class T>
ArbitrageVerdict<T> find_arbitrage(const GainsMatrix<T>& y, double threshold) {
  // xi = 0 is always feasible and the box keeps the LP bounded.
  const auto solution = solve_with_fallback(arbitrage_lp(y));
  if (!solution.optimal())
    throw Error(ErrorCode::NumericalBreakdown, "arbitrage LP is not optimal; status " +
                                                    std::string(to_string(solution.status)));
  ArbitrageVerdict<T> verdict;
  verdict.gain_expectation = *solution.objective_value;
  verdict.free = !ScalarTraits<T>::positive(verdict.gain_expectation, threshold);
  if (!verdict.free) verdict.witness = *solution.point;
  return verdict;
}

template <class T>
std::optional<StatePriceMeasure<T>> find_state_price(const GainsMatrix<T>& y, double threshold) {
  const std::size_t n = y.num_scenarios();
  const auto solution = solve_with_fallback(state_price_lp(y.gains));
  if (solution.status == LpStatus::Infeasible) return std::nullopt;
  if (!solution.optimal())
    throw Error(ErrorCode::NumericalBreakdown, "state-price LP is unbounded");
  const T margin = *solution.objective_value;
  if (!ScalarTraits<T>::positive(margin, threshold)) return std::nullopt;

  StatePriceMeasure<T> m;
  m.q.assign(solution.point->begin(), solution.point->begin() + static_cast<std::ptrdiff_t>(n));
  m.margin = margin;
  m.density.resize(n);
  for (std::size_t w = 0; w < n; ++w) m.density[w] = m.q[w] / y.probabilities[w];
  return m;
}

template <class T>
std::optional<StatePriceMeasure<T>> martingale_measure(const Market& market, double threshold) {
  return find_state_price(discounted_gains<T>(market), threshold);
}

template <class T>
T verify_martingale(const Market& market, const StatePriceMeasure<T>& measure) {
  const std::size_t n = market.num_scenarios();
  if (measure.q.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "measure length differs from scenario count");
  const T growth = T(1) + convert_scalar<T>(market.rate());
  T worst(0);
  for (std::size_t i = 0; i < market.num_assets(); ++i) {
    T expectation(0);
    for (std::size_t w = 0; w < n; ++w)
      expectation += measure.q[w] * convert_scalar<T>(market.scenario_prices()(w, i));
    const T residual = abs_value(T(expectation / growth - convert_scalar<T>(market.prices()[i])));
    worst = std::max(worst, residual);
  }
  return worst;
}

template <class T>
EquivalenceReport<T> ftap_equivalence(const Market& market, double threshold) {
  const auto y = discounted_gains<T>(market);
  EquivalenceReport<T> report;
  report.arbitrage = find_arbitrage(y, threshold);
  report.measure = find_state_price(y, threshold);
  report.xor_holds = report.arbitrage.witness.has_value() != report.measure.has_value();
  if (!report.xor_holds) {
    throw Error(ErrorCode::EquivalenceViolation,
                report.measure ? "both an arbitrage witness and a state-price measure were found"
                               : "neither an arbitrage witness nor a state-price measure was found");
  }
  return report;
}

template <class T>
T price_claim(const Market& market, const StatePriceMeasure<T>& measure, const std::vector<double>& claim) {
  const std::size_t n = market.num_scenarios();
  if (claim.size() != n || measure.q.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "claim length differs from scenario count");
  T value(0);
  for (std::size_t w = 0; w < n; ++w) value += measure.q[w] * convert_scalar<T>(claim[w]);
  return value / (T(1) + convert_scalar<T>(market.rate()));
}

#define ARBFREE_FTAP_INSTANTIATE(T)                                                                \
  template ArbitrageVerdict<T> find_arbitrage(const GainsMatrix<T>&, double);                     \
  template std::optional<StatePriceMeasure<T>> find_state_price(const GainsMatrix<T>&, double);   \
  template std::optional<StatePriceMeasure<T>> martingale_measure<T>(const Market&, double);      \
  template T verify_martingale(const Market&, const StatePriceMeasure<T>&);                       \
  template EquivalenceReport<T> ftap_equivalence<T>(const Market&, double);                       \
  template T price_claim(const Market&, const StatePriceMeasure<T>&, const std::vector<double>&); \
  template LpProblem<T> arbitrage_lp(const GainsMatrix<T>&);                                     \
  template LpProblem<T> state_price_lp(const Matrix<T>&);
ARBFREE_FTAP_INSTANTIATE(double)
ARBFREE_FTAP_INSTANTIATE(Rational)
#undef ARBFREE_FTAP_INSTANTIATE

} // namespace arbfree
