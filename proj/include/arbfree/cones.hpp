#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "arbfree/market.hpp"
#include "arbfree/scalar.hpp"

namespace arbfree {

/// Exact ray enumeration is exponential; above this dimension totality is
/// only ever sampled.
inline constexpr std::size_t kExactDimensionCap = 8;

/// Finitely generated cone {sum_j lambda_j g_j : lambda >= 0} in R^n.
/// Generators are stored normalized to unit 1-norm with near-duplicates
/// (max-abs distance < 1e-12) removed. An empty generator list is {0}.
class PolyhedralCone {
public:
  PolyhedralCone(std::size_t dim, const std::vector<Vector<double>>& generators);

  static PolyhedralCone orthant(std::size_t n);
  /// Cone generated by the 2^n - 1 nonzero 0/1 vectors (indicator functions
  /// of nonempty scenario sets).
  static PolyhedralCone indicator_family(std::size_t n);

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Vector<double>>& generators() const noexcept { return generators_; }
  std::size_t size() const noexcept { return generators_.size(); }

  friend bool operator==(const PolyhedralCone&, const PolyhedralCone&) = default;

private:
  std::size_t dim_;
  std::vector<Vector<double>> generators_;
};

/// <y, g> >= -1e-9 for every generator g, i.e. y in K*.
bool dual_membership(const PolyhedralCone& cone, const Vector<double>& y);

/// <y, g> > 1e-9 for every generator g, i.e. y in int K*. Requires a pointed
/// cone (throws NotPointed).
bool dual_interior_membership(const PolyhedralCone& cone, const Vector<double>& y);

struct PointednessResult {
  bool pointed = true;
  /// Some u != 0 with u in K and -u in K, when not pointed.
  std::optional<Vector<double>> witness;
};

/// Decided exactly: K is not pointed iff some nontrivial nonnegative
/// combination of generators vanishes.
PointednessResult is_pointed(const PolyhedralCone& cone);

/// Generators of {u : <a_j, u> >= 0 for all j} by double description in
/// rational arithmetic. A lineality space is emitted as pairs of opposite
/// rays. Throws DimensionCapExceeded when dim > kExactDimensionCap.
/// The float overload first snaps each entry to the nearest fraction with
/// denominator <= 1e6 lying within 1e-12 * (row max-abs), falling back to the
/// exact binary value. Output rays have unit 1-norm.
std::vector<Vector<double>> extreme_rays(std::size_t dim, const std::vector<Vector<double>>& halfspaces);
std::vector<Vector<Rational>> extreme_rays_exact(std::size_t dim,
                                                 const std::vector<Vector<Rational>>& halfspaces);

/// K* as a finitely generated cone.
PolyhedralCone dual_cone(const PolyhedralCone& cone);

/// Exact membership test u in K (LP feasibility over the rationals).
bool cone_contains(const PolyhedralCone& cone, const Vector<double>& u);

/// min over v in K of ||u - v||_inf.
double distance_to_cone(const PolyhedralCone& cone, const Vector<double>& u);

/// Mutual containment of the generator sets, each generator within 1e-9
/// (infinity norm) of the other cone.
bool same_cone(const PolyhedralCone& a, const PolyhedralCone& b);

enum class TotalityStatus { ProvedTotal, RefutedWithWitness, NoCounterexampleFound };

std::string_view to_string(TotalityStatus status);

struct TotalityVerdict {
  TotalityStatus status = TotalityStatus::NoCounterexampleFound;
  /// u with <x*, u> >= 0 for every test generator x* but u outside K.
  std::optional<Vector<double>> witness;
  /// Infinity-norm distance of the witness from K.
  std::optional<double> witness_distance;
  std::size_t samples_used = 0;
};

/// Is `test_cone` (a subcone of K*) total for K? Exact for dim <= 8 by
/// enumerating the rays of its dual; otherwise samples `sample_budget`
/// vectors from that dual and reports NoCounterexampleFound if none escapes K.
/// Rays within 1e-6 of K (rounding of unit-normalized generators) count as
/// members.
TotalityVerdict is_total(const PolyhedralCone& test_cone, const PolyhedralCone& cone,
                         std::size_t sample_budget, std::uint64_t seed = 0);

struct NonannihilatingResult {
  bool nonannihilating = true;
  /// (x*, g) with <x*, g> <= 1e-9.
  std::optional<std::pair<Vector<double>, Vector<double>>> witness;
};

/// Every test generator pairs strictly positively with every generator of
/// K; positivity then extends to every nonzero u in K. Throws NotPointed
/// when K contains a line (no functional can be positive on it).
NonannihilatingResult is_nonannihilating(const PolyhedralCone& test_cone, const PolyhedralCone& cone);

/// Checks the two finitely generated consequences of "the only cone that is
/// both total and nonannihilating is int K*":
///  (a) a nonannihilating test cone lies in int K*;
///  (b) a test cone whose generators all lie in int K* cannot be total
///      (needs dim >= 2; for dim 1 the open half-line plus 0 is closed).
struct UniquenessReport {
  NonannihilatingResult nonannihilating;
  bool all_generators_interior = true;
  std::optional<Vector<double>> boundary_generator;
  TotalityVerdict totality;

  bool interior_consequence_applies = false;
  bool interior_consequence_holds = true;
  bool totality_consequence_applies = false;
  bool totality_consequence_holds = true;

  bool consistent() const { return interior_consequence_holds && totality_consequence_holds; }
};

UniquenessReport uniqueness_probe(const PolyhedralCone& cone, const PolyhedralCone& test_cone);

/// Sampled check that int K* is total: draws `budget` Gaussian vectors u and,
/// for each u outside K, looks for x* in int K* with <x*, u> < 0. Refutes if
/// some u escapes K without such a separator.
TotalityVerdict interior_dual_totality_check(const PolyhedralCone& cone, std::size_t budget,
                                             std::uint64_t seed = 0);

/// Functional = annihilating part (in L-perp, L = column span of Y) plus a
/// part pairing >= margin with every scenario indicator. Exists for every
/// functional when the market is arbitrage-free.
struct DualDecomposition {
  Vector<double> annihilating;
  Vector<double> interior;
};

std::optional<DualDecomposition> decompose_dual(const GainsMatrix<double>& y, const Vector<double>& functional,
                                                double margin = 1.0);

/// Test cones exposed for p-summable markets. On a finite scenario space the
/// strictly positive and the separated-from-zero cones both equal int K* of
/// the orthant; simple functions are modelled by the indicator family.
enum class SummableTestCone { StrictlyPositive, SeparatedFromZero, SimpleFunctions };

bool summable_test_cone_contains(SummableTestCone kind, const Vector<double>& y);

} // namespace arbfree
