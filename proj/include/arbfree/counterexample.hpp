#pragma once

#include <cstddef>
#include <vector>

#include "arbfree/scalar.hpp"

namespace arbfree {

/// Truncation of the l1 example to 2N coordinates. K is the nonnegative
/// orthant; L is spanned by the N rows e_{2n} - (1/(2n)) e_{2n-1} (1-based).
struct TruncatedExample {
  std::size_t n = 0;
  std::size_t dim = 0;
  Matrix<Rational> subspace_generators;
};

/// Throws InvalidParameter for n == 0.
TruncatedExample build_truncated(std::size_t n);

/// Runs the arbitrage LP with Y = generators as columns (2N scenarios, N
/// strategies, uniform weights).
bool no_arbitrage_at_truncation(std::size_t n, Mode mode = Mode::Float);

template <class T>
struct MarginSolution {
  T margin{0};
  Vector<T> nu;
};

/// max eps s.t. nu annihilates every generator, 0 <= nu_j <= 1, nu_j >= eps.
/// The optimum is 1/(2N).
template <class T>
MarginSolution<T> separation_margin(std::size_t n);

struct DecayRow {
  std::size_t n = 0;
  double margin = 0;
  double analytic = 0;
  bool arbitrage_free = false;

  friend bool operator==(const DecayRow&, const DecayRow&) = default;
};

/// Rows for N = 1..n_max, computed concurrently. Throws InvalidParameter for
/// n_max == 0.
std::vector<DecayRow> decay_report(std::size_t n_max, Mode mode = Mode::Float);

extern template MarginSolution<double> separation_margin(std::size_t);
extern template MarginSolution<Rational> separation_margin(std::size_t);

} // namespace arbfree
