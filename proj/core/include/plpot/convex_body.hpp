#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace plpot {

using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

/// Parses "3", "-1/2" or a plain decimal such as "0.25" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

/// Exponent vector J = (j_1, ..., j_d) of the monomial z^J.
struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) {}
  MultiIndex(std::initializer_list<int> e) : entries(e) {}

  std::size_t size() const noexcept { return entries.size(); }
  int operator[](std::size_t k) const { return entries[k]; }
  int& operator[](std::size_t k) { return entries[k]; }
  int total() const noexcept;
  bool is_zero() const noexcept;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
std::string to_string(const MultiIndex& j);

/// Facet inequality <x, normal> <= offset. Normals are primitive integer vectors.
struct HalfSpace {
  std::vector<std::int64_t> normal;
  Rational offset;
};

/// Rational polytope P in (R+)^d with nonempty interior, 1 <= d <= 4.
///
/// Holds both descriptions: the irredundant vertex list and the facet
/// half-spaces. Construct through ConvexBody::build.
class ConvexBody {
 public:
  static constexpr int kMaxDim = 4;

  /// Convex hull of the given points. Throws DegenerateBody when the hull has
  /// empty interior and NegativeCoordinate when a point leaves (R+)^d.
  static ConvexBody build(const std::vector<RationalVector>& points);

  int dim() const noexcept { return dim_; }
  const std::vector<RationalVector>& vertices() const noexcept { return vertices_; }
  const std::vector<std::vector<double>>& vertices_double() const noexcept {
    return vertices_double_;
  }
  const std::vector<HalfSpace>& halfspaces() const noexcept { return halfspaces_; }

  /// Canonical identifier, e.g. "hull{(0,0),(0,1),(1,0),(1,2)}".
  const std::string& tag() const noexcept { return tag_; }

  /// Largest vertex coordinate along axis k.
  const Rational& max_coordinate(int k) const { return max_coord_[k]; }

 private:
  int dim_ = 0;
  std::vector<RationalVector> vertices_;
  std::vector<std::vector<double>> vertices_double_;
  std::vector<HalfSpace> halfspaces_;
  std::vector<Rational> max_coord_;
  std::string tag_;
};

/// Convenience wrapper around ConvexBody::build for integer vertices.
ConvexBody build_body(const std::vector<std::vector<long long>>& points);
ConvexBody build_body(const std::vector<RationalVector>& points);

/// Standard simplex Sigma in dimension d.
ConvexBody simplex_body(int d);

/// Exact test x in nP.
bool contains(const ConvexBody& body, std::span<const Rational> x, int n = 1);
bool contains(const ConvexBody& body, const MultiIndex& j, int n = 1);

/// nP intersected with the nonnegative integer lattice, lexicographically sorted.
std::vector<MultiIndex> lattice_points(const ConvexBody& body, int n);

struct SupportValue {
  double value = 0.0;
  std::size_t vertex = 0;  // index of one maximizing vertex
};

/// h_P(x) = max over vertices v of <x, v>.
SupportValue support_value(const ConvexBody& body, std::span<const double> x);
Rational support_value_exact(const ConvexBody& body, std::span<const Rational> x);

/// Smallest k <= k_max with Sigma contained in kP, if any.
std::optional<int> check_sigma_in_kp(const ConvexBody& body, int k_max);

struct LowerSetReport {
  bool is_lower_set = true;
  // First violation found: `upper` lies in nP, `lower` <= upper does not.
  int n = 0;
  MultiIndex upper;
  MultiIndex lower;
};

/// Downward closure of the lattice points of nP for every n <= n_probe.
LowerSetReport is_lower_set(const ConvexBody& body, int n_probe);

/// Minimal n >= 1 with every support index inside nP.
int deg_p(std::span<const MultiIndex> support, const ConvexBody& body);

}  // namespace plpot
