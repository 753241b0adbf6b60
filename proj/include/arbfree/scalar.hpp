#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

#include "arbfree/error.hpp"

namespace arbfree {

/// Arbitrary-precision rational used by the exact solver path.
using Rational = mpq_class;

/// Feasibility tolerance shared by every float-mode verdict.
inline constexpr double kFeasibilityTolerance = 1e-9;
/// Threshold above which a float quantity counts as strictly positive.
inline constexpr double kPositivityThreshold = 1e-9;
/// Smallest admissible pivot magnitude in float mode.
inline constexpr double kPivotTolerance = 1e-12;

enum class Mode { Float, Exact };

std::string_view to_string(Mode mode);

template <class T>
using Vector = std::vector<T>;

// Dense row-major matrix. Kept deliberately small: the problems handled here
// have at most a few hundred rows and must work with both double and mpq.
template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  Vector<T> column(std::size_t c) const {
    Vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  void append_row(std::span<const T> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_)
      throw Error(ErrorCode::DimensionMismatch, "appended row has wrong length");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  static Matrix from_rows(const std::vector<Vector<T>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols)
        throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Comparison policy per scalar type. Float comparisons go through the shared
// thresholds; rational comparisons are exact.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr Mode mode = Mode::Float;
  static bool positive(double x, double tol = kPositivityThreshold) { return x > tol; }
  static bool nonnegative(double x, double tol = kFeasibilityTolerance) { return x >= -tol; }
  static bool is_zero(double x, double tol = kFeasibilityTolerance) { return std::abs(x) <= tol; }
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static std::string to_string(double x);
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr Mode mode = Mode::Exact;
  static bool positive(const Rational& x, double = 0) { return sgn(x) > 0; }
  static bool nonnegative(const Rational& x, double = 0) { return sgn(x) >= 0; }
  static bool is_zero(const Rational& x, double = 0) { return sgn(x) == 0; }
  static double to_double(const Rational& x) { return x.get_d(); }
  // Exact: every finite double is a dyadic rational.
  static Rational from_double(double x) { return Rational(x); }
  static std::string to_string(const Rational& x) { return x.get_str(); }
};

template <class To, class From>
To convert_scalar(const From& x) {
  if constexpr (std::is_same_v<To, From>)
    return x;
  else if constexpr (std::is_same_v<To, double>)
    return ScalarTraits<From>::to_double(x);
  else
    return To(x); // double -> mpq is exact
}

template <class To, class From>
Vector<To> convert(const Vector<From>& v) {
  Vector<To> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(convert_scalar<To>(x));
  return out;
}

template <class To, class From>
Matrix<To> convert(const Matrix<From>& m) {
  Matrix<To> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = convert_scalar<To>(m(r, c));
  return out;
}

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  T acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double dot(const Vector<double>& a, const Vector<double>& b) {
  return dot<double>(std::span<const double>(a), std::span<const double>(b));
}

} // namespace arbfree
