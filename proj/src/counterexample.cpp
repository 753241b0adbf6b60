#include "arbfree/counterexample.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <thread>

#include "arbfree/ftap.hpp"
#include "arbfree/lp.hpp"

namespace arbfree {

namespace {

void require_positive(std::size_t n, const char* what) {
  if (n == 0) throw Error(ErrorCode::InvalidParameter, std::string(what) + " must be at least 1");
}

template <class T>
GainsMatrix<T> truncated_gains(std::size_t n) {
  const auto ex = build_truncated(n);
  auto gains = convert<T>(ex.subspace_generators.transposed());
  const T weight = T(1) / T(static_cast<long>(ex.dim));
  return make_gains(std::move(gains), Vector<T>(ex.dim, weight));
}

} // namespace

TruncatedExample build_truncated(std::size_t n) {
  require_positive(n, "N");
  TruncatedExample ex;
  ex.n = n;
  ex.dim = 2 * n;
  ex.subspace_generators = Matrix<Rational>(n, ex.dim);
  for (std::size_t k = 1; k <= n; ++k) {
    ex.subspace_generators(k - 1, 2 * k - 1) = 1;
    ex.subspace_generators(k - 1, 2 * k - 2) = Rational(-1, static_cast<long>(2 * k));
  }
  return ex;
}

bool no_arbitrage_at_truncation(std::size_t n, Mode mode) {
  if (mode == Mode::Exact) return find_arbitrage(truncated_gains<Rational>(n)).free;
  return find_arbitrage(truncated_gains<double>(n)).free;
}

template <class T>
MarginSolution<T> separation_margin(std::size_t n) {
  const auto ex = build_truncated(n);
  const auto gens = convert<T>(ex.subspace_generators);
  const std::size_t dim = ex.dim;
  // Variables (nu_1..nu_dim, eps).
  auto lp = LpProblem<T>::nonnegative(dim + 1);
  lp.objective[dim] = T(1);
  for (std::size_t j = 0; j < dim; ++j) lp.upper_bounds[j] = T(1);
  for (std::size_t k = 0; k < n; ++k) {
    Vector<T> row(dim + 1, T(0));
    for (std::size_t j = 0; j < dim; ++j) row[j] = gens(k, j);
    lp.add_row(row, Relation::Equal, T(0));
  }
  for (std::size_t j = 0; j < dim; ++j) {
    Vector<T> row(dim + 1, T(0));
    row[j] = T(1);
    row[dim] = T(-1);
    lp.add_row(row, Relation::GreaterEqual, T(0));
  }
  const auto sol = solve_with_fallback(lp);
  if (!sol.optimal()) throw Error(ErrorCode::NumericalBreakdown, "margin LP is not optimal");
  MarginSolution<T> out;
  out.margin = *sol.objective_value;
  out.nu.assign(sol.point->begin(), sol.point->begin() + static_cast<std::ptrdiff_t>(dim));
  return out;
}

template MarginSolution<double> separation_margin(std::size_t);
template MarginSolution<Rational> separation_margin(std::size_t);

std::vector<DecayRow> decay_report(std::size_t n_max, Mode mode) {
  require_positive(n_max, "N_max");
  auto row_for = [mode](std::size_t n) {
    DecayRow row;
    row.n = n;
    row.margin = mode == Mode::Exact ? separation_margin<Rational>(n).margin.get_d() : separation_margin<double>(n).margin;
    row.analytic = 1.0 / (2.0 * static_cast<double>(n));
    row.arbitrage_free = no_arbitrage_at_truncation(n, mode);
    return row;
  };
  std::vector<DecayRow> rows(n_max);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_max; i = next++) rows[i] = row_for(i + 1);
  };
  const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, n_max);
  std::vector<std::future<void>> jobs;
  for (std::size_t t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, worker));
  for (auto& job : jobs) job.get();
  return rows;
}

} // namespace arbfree
