#include "arbfree/cones.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "arbfree/lp.hpp"

namespace arbfree {

std::string_view to_string(TotalityStatus status) {
  switch (status) {
  case TotalityStatus::ProvedTotal: return "ProvedTotal";
  case TotalityStatus::RefutedWithWitness: return "RefutedWithWitness";
  case TotalityStatus::NoCounterexampleFound: return "NoCounterexampleFound";
  }
  return "Unknown";
}

namespace {

constexpr double kDuplicateDistance = 1e-12;
constexpr double kOutsideDistance = 1e-6;
constexpr double kSameConeDistance = 1e-9;

Vector<double> normalized_l1(Vector<double> v) {
  double norm = 0.0;
  for (double x : v) norm += std::abs(x);
  for (double& x : v) x /= norm;
  return v;
}

double max_abs_diff(const Vector<double>& a, const Vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has length " + std::to_string(got) +
                                                  ", expected " + std::to_string(expected));
}

void require_pointed(const PolyhedralCone& cone) {
  if (!is_pointed(cone).pointed)
    throw Error(ErrorCode::NotPointed, "cone contains a line; its dual has empty interior");
}

// Scales a nonzero rational vector to the primitive integer vector on the
// same ray.
void make_primitive(Vector<Rational>& v) {
  mpz_class lcm = 1;
  for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  mpz_class gcd = 0;
  for (const auto& x : v) {
    mpz_class num = x.get_num() * (lcm / x.get_den());
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), num.get_mpz_t());
  }
  if (gcd == 0) return;
  for (auto& x : v) {
    x = Rational(x.get_num() * (lcm / x.get_den()), gcd);
    x.canonicalize();
  }
}

// Best rational approximation of x with denominator <= kSnapDenominator,
// taken only when it is within tol of x.
constexpr long kSnapDenominator = 1000000;

Rational snap(double x, double tol) {
  if (std::abs(x) <= tol) return 0;
  if (std::abs(x) > 1e15) return Rational(x);
  const double a0 = std::floor(x);
  mpz_class h_prev = 1, h = static_cast<long>(a0);
  mpz_class k_prev = 0, k = 1;
  double frac = x - a0;
  for (int step = 0; step < 40; ++step) {
    if (std::abs(Rational(h, k).get_d() - x) <= tol) return Rational(h, k);
    if (frac == 0.0) break;
    const double inv = 1.0 / frac;
    const double a = std::floor(inv);
    frac = inv - a;
    const mpz_class ai = static_cast<long>(a);
    mpz_class h_next = ai * h + h_prev, k_next = ai * k + k_prev;
    if (k_next > kSnapDenominator) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return Rational(x);
}

// Exact conversion of a float normal, snapping entries to nearby simple
// fractions so that unit-normalized integer data enumerates cleanly.
Vector<Rational> snap_row(const Vector<double>& a) {
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  Vector<Rational> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = snap(a[i], 1e-12 * scale);
  return out;
}

Vector<double> to_unit_double(const Vector<Rational>& v) {
  Rational norm = 0;
  for (const auto& x : v) norm += abs(x);
  Vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rational(v[i] / norm).get_d();
  return out;
}

Rational dot_exact(const Vector<Rational>& a, const Vector<Rational>& b) {
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(Matrix<Rational>& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    while (p < a.rows() && sgn(a(p, col)) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != row)
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(p, c), a(row, c));
    const Rational piv = a(row, col);
    for (std::size_t c = 0; c < a.cols(); ++c) a(row, c) /= piv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || sgn(a(r, col)) == 0) continue;
      const Rational f = a(r, col);
      for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) -= f * a(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<Vector<Rational>> null_space(const std::vector<Vector<Rational>>& rows, std::size_t n) {
  Matrix<Rational> a(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = rows[r][c];
  const auto pivots = rref(a);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector<Rational>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vector<Rational> v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    make_primitive(v);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vector<Rational>> solve_square(Matrix<Rational> a, Vector<Rational> b) {
  const std::size_t n = b.size();
  Matrix<Rational> aug(n, n + 1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
  }
  const auto pivots = rref(aug);
  if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
  Vector<Rational> x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = aug(r, n);
  return x;
}

class ZeroSet {
public:
  void resize(std::size_t bits) { words_.resize((bits + 63) / 64, 0); }
  void set(std::size_t bit) { words_[bit / 64] |= std::uint64_t{1} << (bit % 64); }
  ZeroSet operator&(const ZeroSet& o) const {
    ZeroSet r;
    r.words_.resize(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
    return r;
  }
  bool subset_of(const ZeroSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  Vector<Rational> dir;
  ZeroSet zeros;
};

std::vector<Vector<Rational>> exact_generators(const PolyhedralCone& cone) {
  std::vector<Vector<Rational>> out;
  for (const auto& g : cone.generators()) out.push_back(convert<Rational>(g));
  return out;
}

bool contains_exact(const std::vector<Vector<Rational>>& generators, std::size_t dim, const Vector<Rational>& u) {
  if (generators.empty())
    return std::all_of(u.begin(), u.end(), [](const Rational& x) { return sgn(x) == 0; });
  auto lp = LpProblem<Rational>::nonnegative(generators.size());
  for (std::size_t i = 0; i < dim; ++i) {
    Vector<Rational> row(generators.size());
    for (std::size_t j = 0; j < generators.size(); ++j) row[j] = generators[j][i];
    lp.add_row(row, Relation::Equal, u[i]);
  }
  return solve(lp).status == LpStatus::Optimal;
}

// max g . u over {u : <x*, u> >= 0 for all test generators, |u_i| <= 1}.
std::optional<Vector<double>> steer_into_dual(const PolyhedralCone& test_cone, const Vector<double>& g) {
  const std::size_t n = test_cone.dim();
  LpProblem<double> lp;
  lp.objective = g;
  lp.constraint_matrix = Matrix<double>(0, n);
  lp.lower_bounds.assign(n, -1.0);
  lp.upper_bounds.assign(n, 1.0);
  for (const auto& x : test_cone.generators()) lp.add_row(x, Relation::GreaterEqual, 0.0);
  const auto sol = solve_with_fallback(lp);
  if (!sol.optimal()) return std::nullopt;
  double norm = 0.0;
  for (double v : *sol.point) norm += std::abs(v);
  if (norm <= kPositivityThreshold) return std::nullopt;
  return normalized_l1(*sol.point);
}

} // namespace

PolyhedralCone::PolyhedralCone(std::size_t dim, const std::vector<Vector<double>>& generators) : dim_(dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidParameter, "cone dimension must be positive");
  for (const auto& g : generators) {
    require_dim(dim, g.size(), "generator");
    double norm = 0.0;
    for (double x : g) {
      if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteValue, "generator entry is not finite");
      norm += std::abs(x);
    }
    if (norm == 0.0) throw Error(ErrorCode::InvalidParameter, "zero generator");
    auto unit = normalized_l1(g);
    const bool duplicate = std::any_of(generators_.begin(), generators_.end(), [&](const Vector<double>& h) {
      return max_abs_diff(h, unit) < kDuplicateDistance;
    });
    if (!duplicate) generators_.push_back(std::move(unit));
  }
}

PolyhedralCone PolyhedralCone::orthant(std::size_t n) {
  std::vector<Vector<double>> gens;
  for (std::size_t i = 0; i < n; ++i) {
    Vector<double> e(n, 0.0);
    e[i] = 1.0;
    gens.push_back(e);
  }
  return PolyhedralCone(n, gens);
}

PolyhedralCone PolyhedralCone::indicator_family(std::size_t n) {
  if (n == 0 || n > 20) throw Error(ErrorCode::InvalidParameter, "indicator family needs 1 <= n <= 20");
  std::vector<Vector<double>> gens;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) v[i] = 1.0;
    gens.push_back(v);
  }
  return PolyhedralCone(n, gens);
}

bool dual_membership(const PolyhedralCone& cone, const Vector<double>& y) {
  require_dim(cone.dim(), y.size(), "functional");
  return std::all_of(cone.generators().begin(), cone.generators().end(),
                     [&](const Vector<double>& g) { return dot(y, g) >= -kFeasibilityTolerance; });
}

bool dual_interior_membership(const PolyhedralCone& cone, const Vector<double>& y) {
  require_dim(cone.dim(), y.size(), "functional");
  require_pointed(cone);
  return std::all_of(cone.generators().begin(), cone.generators().end(),
                     [&](const Vector<double>& g) { return dot(y, g) > kPositivityThreshold; });
}

PointednessResult is_pointed(const PolyhedralCone& cone) {
  const auto gens = exact_generators(cone);
  if (gens.empty()) return {};
  // lambda >= 0, G lambda = 0, sum lambda = 1.
  auto lp = LpProblem<Rational>::nonnegative(gens.size());
  for (std::size_t i = 0; i < cone.dim(); ++i) {
    Vector<Rational> row(gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j) row[j] = gens[j][i];
    lp.add_row(row, Relation::Equal, Rational(0));
  }
  lp.add_row(Vector<Rational>(gens.size(), Rational(1)), Relation::Equal, Rational(1));
  const auto sol = solve(lp);
  if (!sol.optimal()) return {};
  // lambda_j g_j is in K and so is -lambda_j g_j = sum_{i != j} lambda_i g_i.
  for (std::size_t j = 0; j < gens.size(); ++j)
    if (sgn((*sol.point)[j]) > 0) return {false, cone.generators()[j]};
  return {};
}

std::vector<Vector<Rational>> extreme_rays_exact(std::size_t dim, const std::vector<Vector<Rational>>& halfspaces) {
  if (dim > kExactDimensionCap)
    throw Error(ErrorCode::DimensionCapExceeded,
                "exact ray enumeration is capped at dimension " + std::to_string(kExactDimensionCap));
  if (dim == 0) throw Error(ErrorCode::InvalidParameter, "dimension must be positive");

  std::vector<Vector<Rational>> normals;
  for (const auto& a : halfspaces) {
    if (a.size() != dim) throw Error(ErrorCode::DimensionMismatch, "halfspace normal has wrong length");
    if (std::any_of(a.begin(), a.end(), [](const Rational& x) { return sgn(x) != 0; })) normals.push_back(a);
  }

  const auto lineality = null_space(normals, dim);
  std::vector<Vector<Rational>> out;
  auto emit_lineality = [&] {
    for (const auto& l : lineality) {
      out.push_back(l);
      Vector<Rational> neg(l.size());
      for (std::size_t i = 0; i < l.size(); ++i) neg[i] = -l[i];
      out.push_back(std::move(neg));
    }
  };
  const std::size_t rank = dim - lineality.size();
  if (rank == 0) {
    emit_lineality();
    return out;
  }

  // Greedy basis of the row space, in input order.
  std::vector<std::size_t> basis_rows;
  std::vector<Vector<Rational>> chosen;
  for (std::size_t j = 0; j < normals.size() && basis_rows.size() < rank; ++j) {
    chosen.push_back(normals[j]);
    if (null_space(chosen, dim).size() == dim - chosen.size()) basis_rows.push_back(j);
    else chosen.pop_back();
  }

  // Simplicial start: rays u_i orthogonal to the lineality space with
  // <a_{b_k}, u_i> = [k == i].
  const std::size_t m = normals.size();
  std::vector<Ray> rays;
  Matrix<Rational> system(dim, dim);
  for (std::size_t r = 0; r < lineality.size(); ++r)
    for (std::size_t c = 0; c < dim; ++c) system(r, c) = lineality[r][c];
  for (std::size_t k = 0; k < rank; ++k)
    for (std::size_t c = 0; c < dim; ++c) system(lineality.size() + k, c) = normals[basis_rows[k]][c];
  for (std::size_t i = 0; i < rank; ++i) {
    Vector<Rational> rhs(dim, 0);
    rhs[lineality.size() + i] = 1;
    auto u = solve_square(system, rhs);
    if (!u) throw Error(ErrorCode::NumericalBreakdown, "singular start system in ray enumeration");
    make_primitive(*u);
    Ray ray{std::move(*u), {}};
    ray.zeros.resize(m);
    for (std::size_t k = 0; k < rank; ++k)
      if (k != i) ray.zeros.set(basis_rows[k]);
    rays.push_back(std::move(ray));
  }

  std::vector<bool> processed(m, false);
  for (auto b : basis_rows) processed[b] = true;

  for (std::size_t j = 0; j < m; ++j) {
    if (processed[j]) continue;
    processed[j] = true;
    std::vector<Rational> value(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = dot_exact(normals[j], rays[r].dir);
      const int s = sgn(value[r]);
      if (s > 0) pos.push_back(r);
      else if (s < 0) neg.push_back(r);
      if (s >= 0) {
        Ray kept = rays[r];
        if (s == 0) kept.zeros.set(j);
        next.push_back(std::move(kept));
      }
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        const ZeroSet common = rays[p].zeros & rays[q].zeros;
        if (common.count() + 2 < rank) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (common.subset_of(rays[r].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray combined;
        combined.dir.resize(dim);
        for (std::size_t c = 0; c < dim; ++c)
          combined.dir[c] = value[p] * rays[q].dir[c] - value[q] * rays[p].dir[c];
        make_primitive(combined.dir);
        combined.zeros = common;
        combined.zeros.set(j);
        next.push_back(std::move(combined));
      }
    }
    rays = std::move(next);
  }

  for (auto& r : rays) out.push_back(std::move(r.dir));
  emit_lineality();
  return out;
}

std::vector<Vector<double>> extreme_rays(std::size_t dim, const std::vector<Vector<double>>& halfspaces) {
  std::vector<Vector<Rational>> exact;
  for (const auto& a : halfspaces) {
    for (double x : a)
      if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteValue, "halfspace entry is not finite");
    exact.push_back(snap_row(a));
  }
  std::vector<Vector<double>> out;
  for (const auto& r : extreme_rays_exact(dim, exact)) out.push_back(to_unit_double(r));
  return out;
}

PolyhedralCone dual_cone(const PolyhedralCone& cone) {
  return PolyhedralCone(cone.dim(), extreme_rays(cone.dim(), cone.generators()));
}

bool cone_contains(const PolyhedralCone& cone, const Vector<double>& u) {
  require_dim(cone.dim(), u.size(), "vector");
  return contains_exact(exact_generators(cone), cone.dim(), convert<Rational>(u));
}

double distance_to_cone(const PolyhedralCone& cone, const Vector<double>& u) {
  require_dim(cone.dim(), u.size(), "vector");
  const std::size_t g = cone.size();
  // Variables (lambda_1..lambda_g, t); maximize -t.
  auto lp = LpProblem<double>::nonnegative(g + 1);
  lp.objective[g] = -1.0;
  for (std::size_t i = 0; i < cone.dim(); ++i) {
    Vector<double> row(g + 1, 0.0);
    for (std::size_t j = 0; j < g; ++j) row[j] = cone.generators()[j][i];
    row[g] = -1.0;
    lp.add_row(row, Relation::LessEqual, u[i]);
    for (std::size_t j = 0; j < g; ++j) row[j] = -row[j];
    lp.add_row(row, Relation::LessEqual, -u[i]);
  }
  const auto sol = solve_with_fallback(lp);
  return std::max(0.0, -*sol.objective_value);
}

bool same_cone(const PolyhedralCone& a, const PolyhedralCone& b) {
  if (a.dim() != b.dim()) return false;
  for (const auto& g : a.generators())
    if (distance_to_cone(b, g) > kSameConeDistance) return false;
  for (const auto& g : b.generators())
    if (distance_to_cone(a, g) > kSameConeDistance) return false;
  return true;
}

TotalityVerdict is_total(const PolyhedralCone& test_cone, const PolyhedralCone& cone, std::size_t sample_budget,
                         std::uint64_t seed) {
  require_dim(cone.dim(), test_cone.dim(), "test cone");
  const std::size_t n = cone.dim();
  TotalityVerdict verdict;

  if (n <= kExactDimensionCap) {
    const auto k_gens = exact_generators(cone);
    std::vector<Vector<Rational>> normals;
    for (const auto& x : test_cone.generators()) normals.push_back(snap_row(x));
    for (const auto& u : extreme_rays_exact(n, normals)) {
      if (contains_exact(k_gens, n, u)) continue;
      auto unit = to_unit_double(u);
      const double dist = distance_to_cone(cone, unit);
      if (dist <= kOutsideDistance) continue;
      verdict.status = TotalityStatus::RefutedWithWitness;
      verdict.witness = std::move(unit);
      verdict.witness_distance = dist;
      return verdict;
    }
    verdict.status = TotalityStatus::ProvedTotal;
    return verdict;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (std::size_t s = 0; s < sample_budget; ++s) {
    ++verdict.samples_used;
    Vector<double> g(n);
    for (double& x : g) x = normal(rng);
    std::optional<Vector<double>> u;
    if (dual_membership(test_cone, g)) u = normalized_l1(g);
    else u = steer_into_dual(test_cone, g);
    if (!u) continue;
    const double dist = distance_to_cone(cone, *u);
    if (dist > kOutsideDistance) {
      verdict.status = TotalityStatus::RefutedWithWitness;
      verdict.witness = std::move(u);
      verdict.witness_distance = dist;
      return verdict;
    }
  }
  verdict.status = TotalityStatus::NoCounterexampleFound;
  return verdict;
}

NonannihilatingResult is_nonannihilating(const PolyhedralCone& test_cone, const PolyhedralCone& cone) {
  require_dim(cone.dim(), test_cone.dim(), "test cone");
  require_pointed(cone);
  for (const auto& x : test_cone.generators())
    for (const auto& g : cone.generators())
      if (dot(x, g) <= kPositivityThreshold) return {false, std::make_pair(x, g)};
  return {};
}

UniquenessReport uniqueness_probe(const PolyhedralCone& cone, const PolyhedralCone& test_cone) {
  require_dim(cone.dim(), test_cone.dim(), "test cone");
  if (cone.dim() > kExactDimensionCap)
    throw Error(ErrorCode::DimensionCapExceeded, "uniqueness probe is exact only up to dimension 8");
  UniquenessReport report;
  report.nonannihilating = is_nonannihilating(test_cone, cone);
  for (const auto& x : test_cone.generators()) {
    if (!dual_interior_membership(cone, x)) {
      report.all_generators_interior = false;
      report.boundary_generator = x;
      break;
    }
  }
  report.totality = is_total(test_cone, cone, 0);

  report.interior_consequence_applies = report.nonannihilating.nonannihilating;
  report.interior_consequence_holds = !report.interior_consequence_applies || report.all_generators_interior;

  report.totality_consequence_applies =
      report.all_generators_interior && test_cone.size() > 0 && cone.size() > 0 && cone.dim() >= 2;
  report.totality_consequence_holds = !report.totality_consequence_applies ||
                                      report.totality.status == TotalityStatus::RefutedWithWitness;
  return report;
}

TotalityVerdict interior_dual_totality_check(const PolyhedralCone& cone, std::size_t budget, std::uint64_t seed) {
  require_pointed(cone);
  const std::size_t n = cone.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  TotalityVerdict verdict;
  for (std::size_t s = 0; s < budget; ++s) {
    ++verdict.samples_used;
    Vector<double> u(n);
    for (double& x : u) x = normal(rng);
    if (cone_contains(cone, u)) continue;
    // max s s.t. <x*, g> >= s for every generator, <x*, u> = -1, s <= 1:
    // a positive optimum is an interior functional separating u from K.
    LpProblem<double> lp;
    lp.objective.assign(n + 1, 0.0);
    lp.objective[n] = 1.0;
    lp.constraint_matrix = Matrix<double>(0, n + 1);
    lp.lower_bounds.assign(n + 1, std::nullopt);
    lp.upper_bounds.assign(n + 1, std::nullopt);
    lp.upper_bounds[n] = 1.0;
    for (const auto& g : cone.generators()) {
      Vector<double> row(g);
      row.push_back(-1.0);
      lp.add_row(row, Relation::GreaterEqual, 0.0);
    }
    Vector<double> pairing(u);
    pairing.push_back(0.0);
    lp.add_row(pairing, Relation::Equal, -1.0);
    const auto sol = solve_with_fallback(lp);
    if (sol.optimal() && *sol.objective_value > kPositivityThreshold) continue;
    const auto exact = solve(convert<Rational>(lp));
    if (exact.optimal() && sgn(*exact.objective_value) > 0) continue;
    verdict.status = TotalityStatus::RefutedWithWitness;
    verdict.witness = normalized_l1(u);
    verdict.witness_distance = distance_to_cone(cone, *verdict.witness);
    return verdict;
  }
  verdict.status = TotalityStatus::NoCounterexampleFound;
  return verdict;
}

std::optional<DualDecomposition> decompose_dual(const GainsMatrix<double>& y, const Vector<double>& functional,
                                                double margin) {
  const std::size_t n = y.num_scenarios();
  const std::size_t d = y.num_assets();
  require_dim(n, functional.size(), "functional");
  if (!(margin > 0)) throw Error(ErrorCode::InvalidParameter, "margin must be positive");
  // Interior part k >= margin with Y^T k = Y^T functional; minimize sum k.
  auto lp = LpProblem<double>::nonnegative(n);
  lp.lower_bounds.assign(n, margin);
  lp.objective.assign(n, -1.0);
  for (std::size_t i = 0; i < d; ++i) {
    const auto column = y.gains.column(i);
    lp.add_row(column, Relation::Equal, dot(column, functional));
  }
  const auto sol = solve_with_fallback(lp);
  if (!sol.optimal()) return std::nullopt;
  DualDecomposition out;
  out.interior = *sol.point;
  out.annihilating.resize(n);
  for (std::size_t w = 0; w < n; ++w) out.annihilating[w] = functional[w] - out.interior[w];
  return out;
}

bool summable_test_cone_contains(SummableTestCone kind, const Vector<double>& y) {
  if (y.empty()) throw Error(ErrorCode::DimensionMismatch, "empty functional");
  switch (kind) {
  case SummableTestCone::StrictlyPositive:
  case SummableTestCone::SeparatedFromZero:
    return std::all_of(y.begin(), y.end(), [](double v) { return v > kPositivityThreshold; });
  case SummableTestCone::SimpleFunctions:
    return cone_contains(PolyhedralCone::indicator_family(y.size()), y);
  }
  return false;
}

} // namespace arbfree
