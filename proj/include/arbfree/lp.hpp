#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "arbfree/error.hpp"
#include "arbfree/scalar.hpp"

namespace arbfree {

enum class Relation { LessEqual, Equal, GreaterEqual };

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus status);

/// Dense linear program, always posed as a maximization:
///
///   max  objective . x
///   s.t. constraint_matrix.row(i) . x  (relations[i])  rhs[i]
///        lower_bounds[j] <= x[j] <= upper_bounds[j]
///
/// An empty optional bound stands for -inf / +inf.
template <class T>
struct LpProblem {
  Vector<T> objective;
  Matrix<T> constraint_matrix;
  std::vector<Relation> relations;
  Vector<T> rhs;
  std::vector<std::optional<T>> lower_bounds;
  std::vector<std::optional<T>> upper_bounds;

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_constraints() const { return constraint_matrix.rows(); }

  /// Problem with `vars` variables, no rows, and x >= 0.
  static LpProblem nonnegative(std::size_t vars) {
    LpProblem p;
    p.objective.assign(vars, T(0));
    p.constraint_matrix = Matrix<T>(0, vars);
    p.lower_bounds.assign(vars, T(0));
    p.upper_bounds.assign(vars, std::nullopt);
    return p;
  }

  void add_row(const Vector<T>& coeffs, Relation rel, const T& value);
};

template <class T>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::optional<Vector<T>> point;
  std::optional<T> objective_value;
  /// Choose-pivot steps taken across both phases.
  std::size_t iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Two-phase dense tableau simplex with Bland's rule.
///
/// Throws DimensionMismatch for inconsistent shapes, InvalidParameter when a
/// lower bound exceeds its upper bound, and (float only) NumericalBreakdown
/// when a pivot falls below kPivotTolerance or the returned point violates a
/// constraint by more than kFeasibilityTolerance.
template <class T>
LpSolution<T> solve(const LpProblem<T>& problem);

/// Mode-dispatching entry point over float input data. In exact mode every
/// coefficient is converted exactly to a rational, the problem is solved in
/// rational arithmetic and the point is rounded back to double.
LpSolution<double> solve_lp(const LpProblem<double>& problem, Mode mode);

/// solve(), except that a float NumericalBreakdown is retried in exact mode.
template <class T>
LpSolution<T> solve_with_fallback(const LpProblem<T>& problem) {
  if constexpr (ScalarTraits<T>::exact) {
    return solve(problem);
  } else {
    try {
      return solve(problem);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NumericalBreakdown) throw;
      return solve_lp(problem, Mode::Exact);
    }
  }
}

template <class To, class From>
LpProblem<To> convert(const LpProblem<From>& p) {
  LpProblem<To> out;
  out.objective = convert<To>(p.objective);
  out.constraint_matrix = convert<To>(p.constraint_matrix);
  out.relations = p.relations;
  out.rhs = convert<To>(p.rhs);
  auto bounds = [](const std::vector<std::optional<From>>& b) {
    std::vector<std::optional<To>> r;
    r.reserve(b.size());
    for (const auto& v : b) {
      if (v) r.emplace_back(convert_scalar<To>(*v));
      else r.emplace_back(std::nullopt);
    }
    return r;
  };
  out.lower_bounds = bounds(p.lower_bounds);
  out.upper_bounds = bounds(p.upper_bounds);
  return out;
}

/// Largest violation of any row or bound at `x`, in absolute terms.
template <class T>
T max_violation(const LpProblem<T>& problem, const Vector<T>& x);

extern template struct LpProblem<double>;
extern template struct LpProblem<Rational>;
extern template LpSolution<double> solve(const LpProblem<double>&);
extern template LpSolution<Rational> solve(const LpProblem<Rational>&);
extern template double max_violation(const LpProblem<double>&, const Vector<double>&);
extern template Rational max_violation(const LpProblem<Rational>&, const Vector<Rational>&);

} // namespace arbfree
