#include "arbfree/lp.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace arbfree {

std::string_view to_string(LpStatus status) {
  switch (status) {
  case LpStatus::Optimal: return "Optimal";
  case LpStatus::Infeasible: return "Infeasible";
  case LpStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

std::string_view to_string(Mode mode) {
  return mode == Mode::Exact ? "exact" : "float";
}

std::string ScalarTraits<double>::to_string(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class T>
void LpProblem<T>::add_row(const Vector<T>& coeffs, Relation rel, const T& value) {
  if (coeffs.size() != num_variables())
    throw Error(ErrorCode::DimensionMismatch, "row length differs from variable count");
  if (constraint_matrix.rows() == 0 && constraint_matrix.cols() != num_variables())
    constraint_matrix = Matrix<T>(0, num_variables());
  constraint_matrix.append_row(coeffs);
  relations.push_back(rel);
  rhs.push_back(value);
}

template struct LpProblem<double>;
template struct LpProblem<Rational>;

namespace {

// Float-mode entries below this magnitude are flushed to zero after a pivot.
constexpr double kDropTolerance = 1e-14;

template <class T>
bool is_zero_entry(const T& x) {
  if constexpr (ScalarTraits<T>::exact) return sgn(x) == 0;
  else return x == 0.0;
}

template <class T>
bool pivot_candidate(const T& x) {
  if constexpr (ScalarTraits<T>::exact) return sgn(x) > 0;
  else return x > kPivotTolerance;
}

template <class T>
bool nonzero_pivot(const T& x) {
  if constexpr (ScalarTraits<T>::exact) return sgn(x) != 0;
  else return std::abs(x) > kPivotTolerance;
}

template <class T>
bool improving(const T& reduced_cost) {
  if constexpr (ScalarTraits<T>::exact) return sgn(reduced_cost) > 0;
  else return reduced_cost > kFeasibilityTolerance;
}

template <class T>
void check_dimensions(const LpProblem<T>& p) {
  const std::size_t m = p.num_variables();
  const std::size_t k = p.relations.size();
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::DimensionMismatch, "LpProblem: " + what);
  };
  if (p.constraint_matrix.rows() != k) fail("constraint rows differ from relation count");
  if (k > 0 && p.constraint_matrix.cols() != m) fail("constraint columns differ from objective length");
  if (p.rhs.size() != k) fail("rhs length differs from constraint rows");
  if (p.lower_bounds.size() != m || p.upper_bounds.size() != m) fail("bound vectors differ from objective length");
  for (std::size_t j = 0; j < m; ++j) {
    if (p.lower_bounds[j] && p.upper_bounds[j] && *p.lower_bounds[j] > *p.upper_bounds[j])
      throw Error(ErrorCode::InvalidParameter,
                  "LpProblem: lower bound exceeds upper bound for variable " + std::to_string(j));
  }
}

// Original variable x_j expressed through nonnegative tableau columns:
//   x_j = offset + sign * y[pos] - (neg ? y[*neg] : 0)
template <class T>
struct VariableMap {
  T offset{0};
  int sign = 1;
  std::size_t pos = 0;
  std::optional<std::size_t> neg;
};

template <class T>
class Tableau {
public:
  explicit Tableau(const LpProblem<T>& problem) : problem_(problem) { build(); }

  LpSolution<T> run() {
    LpSolution<T> out;
    if (num_artificial_ > 0) {
      load_phase_one_costs();
      iterate(out.iterations, /*allow_artificial=*/true);
      if (phase_one_infeasible()) {
        out.status = LpStatus::Infeasible;
        return out;
      }
      drive_out_artificials();
    }
    load_phase_two_costs();
    if (!iterate(out.iterations, /*allow_artificial=*/false)) {
      out.status = LpStatus::Unbounded;
      return out;
    }
    out.status = LpStatus::Optimal;
    out.point = extract_point();
    T value(0);
    for (std::size_t j = 0; j < problem_.num_variables(); ++j)
      value += problem_.objective[j] * (*out.point)[j];
    out.objective_value = value;
    return out;
  }

private:
  void build() {
    const std::size_t m = problem_.num_variables();
    vars_.resize(m);
    std::size_t ncols = 0;

    struct Row {
      Vector<T> coeffs;
      Relation rel;
      T rhs;
    };
    std::vector<Row> rows;
    std::vector<std::pair<std::size_t, T>> upper_rows;

    for (std::size_t j = 0; j < m; ++j) {
      const auto& lo = problem_.lower_bounds[j];
      const auto& hi = problem_.upper_bounds[j];
      auto& v = vars_[j];
      v.pos = ncols++;
      if (lo) {
        v.offset = *lo;
        if (hi) upper_rows.emplace_back(v.pos, *hi - *lo);
      } else if (hi) {
        v.offset = *hi;
        v.sign = -1;
      } else {
        v.neg = ncols++;
      }
    }
    num_structural_ = ncols;

    for (std::size_t i = 0; i < problem_.num_constraints(); ++i) {
      Row row{Vector<T>(ncols, T(0)), problem_.relations[i], problem_.rhs[i]};
      for (std::size_t j = 0; j < m; ++j) {
        const T& a = problem_.constraint_matrix(i, j);
        if (is_zero_entry(a)) continue;
        const auto& v = vars_[j];
        row.rhs -= a * v.offset;
        row.coeffs[v.pos] += v.sign > 0 ? a : T(-a);
        if (v.neg) row.coeffs[*v.neg] -= a;
      }
      rows.push_back(std::move(row));
    }
    for (auto& [col, width] : upper_rows) {
      Row row{Vector<T>(ncols, T(0)), Relation::LessEqual, width};
      row.coeffs[col] = T(1);
      rows.push_back(std::move(row));
    }

    for (auto& row : rows) {
      if (row.rhs < 0) {
        for (auto& c : row.coeffs) c = -c;
        row.rhs = -row.rhs;
        if (row.rel == Relation::LessEqual) row.rel = Relation::GreaterEqual;
        else if (row.rel == Relation::GreaterEqual) row.rel = Relation::LessEqual;
      }
    }

    std::size_t num_slack = 0;
    for (const auto& row : rows)
      if (row.rel != Relation::Equal) ++num_slack;
    for (const auto& row : rows)
      if (row.rel != Relation::LessEqual) ++num_artificial_;

    first_artificial_ = num_structural_ + num_slack;
    num_columns_ = first_artificial_ + num_artificial_;
    rhs_col_ = num_columns_;
    tab_ = Matrix<T>(rows.size(), num_columns_ + 1, T(0));
    basis_.assign(rows.size(), 0);

    std::size_t slack = num_structural_;
    std::size_t art = first_artificial_;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t c = 0; c < num_structural_; ++c) tab_(i, c) = rows[i].coeffs[c];
      tab_(i, rhs_col_) = rows[i].rhs;
      switch (rows[i].rel) {
      case Relation::LessEqual:
        tab_(i, slack) = T(1);
        basis_[i] = slack++;
        break;
      case Relation::GreaterEqual:
        tab_(i, slack++) = T(-1);
        tab_(i, art) = T(1);
        basis_[i] = art++;
        break;
      case Relation::Equal:
        tab_(i, art) = T(1);
        basis_[i] = art++;
        break;
      }
    }
    cost_.assign(num_columns_ + 1, T(0));
    iteration_cap_ = 50 * (tab_.rows() + num_columns_) + 1000;
  }

  bool is_artificial(std::size_t col) const { return col >= first_artificial_ && col < num_columns_; }

  void load_phase_one_costs() {
    std::fill(cost_.begin(), cost_.end(), T(0));
    for (std::size_t i = 0; i < tab_.rows(); ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (std::size_t c = 0; c <= num_columns_; ++c)
        if (!is_artificial(c)) cost_[c] += tab_(i, c);
    }
  }

  bool phase_one_infeasible() const {
    // cost_[rhs] holds the remaining sum of artificial values.
    if constexpr (ScalarTraits<T>::exact) {
      return sgn(cost_[rhs_col_]) > 0;
    } else {
      double scale = 1.0;
      for (std::size_t i = 0; i < tab_.rows(); ++i) scale = std::max(scale, std::abs(tab_(i, rhs_col_)));
      return cost_[rhs_col_] > kFeasibilityTolerance * scale;
    }
  }

  void load_phase_two_costs() {
    std::fill(cost_.begin(), cost_.end(), T(0));
    for (std::size_t j = 0; j < vars_.size(); ++j) {
      const T& c = problem_.objective[j];
      const auto& v = vars_[j];
      cost_[v.pos] += v.sign > 0 ? c : T(-c);
      if (v.neg) cost_[*v.neg] -= c;
    }
    for (std::size_t i = 0; i < tab_.rows(); ++i) {
      const T f = cost_[basis_[i]];
      if (is_zero_entry(f)) continue;
      auto row = tab_.row(i);
      for (std::size_t c = 0; c <= num_columns_; ++c)
        if (!is_zero_entry(row[c])) cost_[c] -= f * row[c];
    }
  }

  // Returns false when the problem is unbounded in the entering direction.
  bool iterate(std::size_t& iterations, bool allow_artificial) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t c = 0; c < num_columns_; ++c) {
        if (!allow_artificial && is_artificial(c)) continue;
        if (improving(cost_[c])) {
          entering = c;
          break;
        }
      }
      if (!entering) return true;

      std::optional<std::size_t> leaving;
      T best_ratio(0);
      for (std::size_t i = 0; i < tab_.rows(); ++i) {
        const T& a = tab_(i, *entering);
        if (!pivot_candidate(a)) continue;
        T rhs = tab_(i, rhs_col_);
        if (rhs < 0) rhs = T(0);
        T ratio = rhs / a;
        if (!leaving) {
          leaving = i;
          best_ratio = ratio;
          continue;
        }
        bool tie;
        bool better;
        if constexpr (ScalarTraits<T>::exact) {
          tie = ratio == best_ratio;
          better = ratio < best_ratio;
        } else {
          const double slack = 1e-12 * (1.0 + std::abs(best_ratio));
          tie = std::abs(ratio - best_ratio) <= slack;
          better = !tie && ratio < best_ratio;
        }
        if (better || (tie && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;

      if (++iterations > iteration_cap_) {
        throw Error(ErrorCode::NumericalBreakdown,
                    "simplex iteration cap exceeded; retry in exact mode");
      }
      pivot(*leaving, *entering);
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    const T piv = tab_(r, e);
    if constexpr (!ScalarTraits<T>::exact) {
      if (std::abs(piv) < kPivotTolerance)
        throw Error(ErrorCode::NumericalBreakdown, "pivot magnitude below 1e-12; retry in exact mode");
    }
    auto prow = tab_.row(r);
    nonzeros_.clear();
    for (std::size_t c = 0; c <= num_columns_; ++c) {
      if (is_zero_entry(prow[c])) continue;
      prow[c] /= piv;
      nonzeros_.push_back(c);
    }
    prow[e] = T(1);

    auto eliminate = [&](std::span<T> target) {
      const T f = target[e];
      if (is_zero_entry(f)) return;
      for (std::size_t c : nonzeros_) {
        target[c] -= f * prow[c];
        if constexpr (!ScalarTraits<T>::exact) {
          if (std::abs(target[c]) < kDropTolerance) target[c] = 0.0;
        }
      }
      target[e] = T(0);
    };
    for (std::size_t i = 0; i < tab_.rows(); ++i)
      if (i != r) eliminate(tab_.row(i));
    eliminate(std::span<T>(cost_));
    basis_[r] = e;
  }

  void drive_out_artificials() {
    std::vector<std::size_t> redundant;
    for (std::size_t i = 0; i < tab_.rows(); ++i) {
      if (!is_artificial(basis_[i])) continue;
      std::optional<std::size_t> col;
      for (std::size_t c = 0; c < first_artificial_; ++c) {
        if (nonzero_pivot(tab_(i, c))) {
          col = c;
          break;
        }
      }
      if (col) pivot(i, *col);
      else redundant.push_back(i);
    }
    if (redundant.empty()) return;
    Matrix<T> kept(0, tab_.cols());
    std::vector<std::size_t> kept_basis;
    for (std::size_t i = 0; i < tab_.rows(); ++i) {
      if (std::find(redundant.begin(), redundant.end(), i) != redundant.end()) continue;
      kept.append_row(std::span<const T>(tab_.row(i)));
      kept_basis.push_back(basis_[i]);
    }
    tab_ = std::move(kept);
    basis_ = std::move(kept_basis);
  }

  Vector<T> extract_point() const {
    Vector<T> y(num_structural_, T(0));
    for (std::size_t i = 0; i < tab_.rows(); ++i)
      if (basis_[i] < num_structural_) y[basis_[i]] = tab_(i, rhs_col_);
    Vector<T> x(vars_.size());
    for (std::size_t j = 0; j < vars_.size(); ++j) {
      const auto& v = vars_[j];
      T value = v.offset;
      if (v.sign > 0) value += y[v.pos];
      else value -= y[v.pos];
      if (v.neg) value -= y[*v.neg];
      x[j] = value;
    }
    return x;
  }

  const LpProblem<T>& problem_;
  std::vector<VariableMap<T>> vars_;
  Matrix<T> tab_;
  Vector<T> cost_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzeros_;
  std::size_t num_structural_ = 0;
  std::size_t num_artificial_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t num_columns_ = 0;
  std::size_t rhs_col_ = 0;
  std::size_t iteration_cap_ = 0;
};

} // namespace

template <class T>
T max_violation(const LpProblem<T>& p, const Vector<T>& x) {
  if (x.size() != p.num_variables())
    throw Error(ErrorCode::DimensionMismatch, "point length differs from variable count");
  T worst(0);
  auto record = [&](const T& v) {
    if (v > worst) worst = v;
  };
  for (std::size_t i = 0; i < p.num_constraints(); ++i) {
    T lhs(0);
    for (std::size_t j = 0; j < x.size(); ++j) lhs += p.constraint_matrix(i, j) * x[j];
    const T diff = lhs - p.rhs[i];
    switch (p.relations[i]) {
    case Relation::LessEqual: record(diff); break;
    case Relation::GreaterEqual: record(T(-diff)); break;
    case Relation::Equal: record(diff < 0 ? T(-diff) : diff); break;
    }
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (p.lower_bounds[j]) record(T(*p.lower_bounds[j] - x[j]));
    if (p.upper_bounds[j]) record(T(x[j] - *p.upper_bounds[j]));
  }
  return worst;
}

template <class T>
LpSolution<T> solve(const LpProblem<T>& problem) {
  check_dimensions(problem);
  Tableau<T> tableau(problem);
  LpSolution<T> solution = tableau.run();
  if constexpr (!ScalarTraits<T>::exact) {
    if (solution.optimal()) {
      double scale = 1.0;
      for (double b : problem.rhs) scale = std::max(scale, std::abs(b));
      for (double v : *solution.point) scale = std::max(scale, std::abs(v));
      const double violation = max_violation(problem, *solution.point);
      if (violation > kFeasibilityTolerance * scale) {
        throw Error(ErrorCode::NumericalBreakdown,
                    "float solution violates constraints by " + ScalarTraits<double>::to_string(violation) +
                        "; retry in exact mode");
      }
    }
  }
  return solution;
}

LpSolution<double> solve_lp(const LpProblem<double>& problem, Mode mode) {
  if (mode == Mode::Float) return solve(problem);
  check_dimensions(problem);
  const LpSolution<Rational> exact = solve(convert<Rational>(problem));
  LpSolution<double> out;
  out.status = exact.status;
  out.iterations = exact.iterations;
  if (exact.point) out.point = convert<double>(*exact.point);
  if (exact.objective_value) out.objective_value = exact.objective_value->get_d();
  return out;
}

template LpSolution<double> solve(const LpProblem<double>&);
template LpSolution<Rational> solve(const LpProblem<Rational>&);
template double max_violation(const LpProblem<double>&, const Vector<double>&);
template Rational max_violation(const LpProblem<Rational>&, const Vector<Rational>&);

} // namespace arbfree
