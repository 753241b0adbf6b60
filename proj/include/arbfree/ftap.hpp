#pragma once

#include <optional>

#include "arbfree/lp.hpp"
#include "arbfree/market.hpp"

namespace arbfree {

/// Outcome of the arbitrage LP
///
///   max sum_w p_w (Y xi)_w  s.t.  Y xi >= 0,  -1 <= xi_i <= 1.
///
/// The market is free iff the optimum is zero (exact) or <= threshold
/// (float). The witness is the optimizer as returned, not rescaled.
template <class T>
struct ArbitrageVerdict {
  bool free = true;
  std::optional<Vector<T>> witness;
  T gain_expectation{0};
};

/// Strictly positive probability vector q with Y^T q = 0. Among all such
/// vectors the one maximizing min_w q_w is returned; `margin` is that
/// minimum and `density` the ratio q_w / p_w.
template <class T>
struct StatePriceMeasure {
  Vector<T> q;
  Vector<T> density;
  T margin{0};
};

template <class T>
struct EquivalenceReport {
  Mode mode = ScalarTraits<T>::mode;
  ArbitrageVerdict<T> arbitrage;
  std::optional<StatePriceMeasure<T>> measure;
  bool xor_holds = false;
  // On a finite scenario space every L_p coincides, so the verdict does not
  // depend on the summability exponent.
  bool p_independent = true;
};

template <class T>
ArbitrageVerdict<T> find_arbitrage(const GainsMatrix<T>& y, double threshold = kPositivityThreshold);

template <class T>
std::optional<StatePriceMeasure<T>> find_state_price(const GainsMatrix<T>& y,
                                                     double threshold = kPositivityThreshold);

template <class T>
std::optional<StatePriceMeasure<T>> martingale_measure(const Market& market,
                                                       double threshold = kPositivityThreshold);

/// max_i |sum_w q_w S_i(w) / (1 + r) - pi_i|.
template <class T>
T verify_martingale(const Market& market, const StatePriceMeasure<T>& measure);

/// Runs both LPs independently and requires exactly one of {witness, measure}.
/// Throws EquivalenceViolation otherwise.
template <class T>
EquivalenceReport<T> ftap_equivalence(const Market& market, double threshold = kPositivityThreshold);

/// sum_w q_w claim_w / (1 + r).
template <class T>
T price_claim(const Market& market, const StatePriceMeasure<T>& measure, const std::vector<double>& claim);

// LP builders, exposed so tests can audit the formulations directly.
template <class T>
LpProblem<T> arbitrage_lp(const GainsMatrix<T>& y);
template <class T>
LpProblem<T> state_price_lp(const Matrix<T>& gains);

#define ARBFREE_FTAP_EXTERN(T)                                                                     \
  extern template ArbitrageVerdict<T> find_arbitrage(const GainsMatrix<T>&, double);              \
  extern template std::optional<StatePriceMeasure<T>> find_state_price(const GainsMatrix<T>&, double); \
  extern template std::optional<StatePriceMeasure<T>> martingale_measure<T>(const Market&, double); \
  extern template T verify_martingale(const Market&, const StatePriceMeasure<T>&);                \
  extern template EquivalenceReport<T> ftap_equivalence<T>(const Market&, double);                \
  extern template T price_claim(const Market&, const StatePriceMeasure<T>&, const std::vector<double>&); \
  extern template LpProblem<T> arbitrage_lp(const GainsMatrix<T>&);                              \
  extern template LpProblem<T> state_price_lp(const Matrix<T>&);
ARBFREE_FTAP_EXTERN(double)
ARBFREE_FTAP_EXTERN(Rational)
#undef ARBFREE_FTAP_EXTERN

} // namespace arbfree
