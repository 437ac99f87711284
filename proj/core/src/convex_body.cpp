#include "plpot/convex_body.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "plpot/errors.hpp"

namespace plpot {

namespace mp = boost::multiprecision;
using BigInt = mp::cpp_int;

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw Error(ErrorKind::ConfigError, "empty rational literal");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) throw Error(ErrorKind::ConfigError, "zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      if (digits.empty() || digits == "-" || digits == "+")
        throw Error(ErrorKind::ConfigError, "malformed decimal '" + s + "'");
      BigInt den = mp::pow(BigInt(10), static_cast<unsigned>(s.size() - dot - 1));
      return Rational(BigInt(digits), den);
    }
    return Rational(BigInt(s));
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(ErrorKind::ConfigError, "malformed rational '" + s + "'");
  }
}

std::string to_string(const Rational& q) {
  if (mp::denominator(q) == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

int MultiIndex::total() const noexcept { return std::accumulate(entries.begin(), entries.end(), 0); }

bool MultiIndex::is_zero() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](int v) { return v == 0; });
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out(a.entries);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += b[k];
  return out;
}

std::string to_string(const MultiIndex& j) {
  std::string s = "(";
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(j[k]);
  }
  return s + ")";
}

namespace {

// Row-reduces `m` in place and returns the pivot columns.
std::vector<int> row_reduce(std::vector<RationalVector>& m, int cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[row], m[p]);
    Rational inv = 1 / m[row][c];
    for (int k = 0; k < cols; ++k) m[row][k] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (int k = 0; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

int affine_rank(const std::vector<RationalVector>& pts, int d) {
  if (pts.size() < 2) return 0;
  std::vector<RationalVector> m;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RationalVector r(d);
    for (int k = 0; k < d; ++k) r[k] = pts[i][k] - pts[0][k];
    m.push_back(std::move(r));
  }
  return static_cast<int>(row_reduce(m, d).size());
}

// One-dimensional nullspace of the (d-1) x d matrix of edge vectors, or empty.
std::optional<RationalVector> normal_of(const std::vector<RationalVector>& pts, int d) {
  std::vector<RationalVector> m;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RationalVector r(d);
    for (int k = 0; k < d; ++k) r[k] = pts[i][k] - pts[0][k];
    m.push_back(std::move(r));
  }
  auto pivots = row_reduce(m, d);
  if (static_cast<int>(pivots.size()) != d - 1) return std::nullopt;
  int free_col = 0;
  for (int c = 0; c < d; ++c) {
    if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) {
      free_col = c;
      break;
    }
  }
  RationalVector n(d, Rational(0));
  n[free_col] = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r) n[pivots[r]] = -m[r][free_col];
  return n;
}

std::vector<std::int64_t> primitive_integer(const RationalVector& v) {
  BigInt l = 1;
  for (const auto& q : v) l = mp::lcm(l, BigInt(mp::denominator(q)));
  std::vector<BigInt> ints;
  BigInt g = 0;
  for (const auto& q : v) {
    BigInt x = mp::numerator(q) * (l / mp::denominator(q));
    g = mp::gcd(g, mp::abs(x));
    ints.push_back(x);
  }
  std::vector<std::int64_t> out;
  for (auto& x : ints) {
    BigInt y = g == 0 ? x : BigInt(x / g);
    if (y > std::numeric_limits<std::int64_t>::max() || y < std::numeric_limits<std::int64_t>::min())
      throw Error(ErrorKind::PreconditionViolation, "facet normal exceeds 64-bit range");
    out.push_back(static_cast<std::int64_t>(y));
  }
  return out;
}

Rational dot(const std::vector<std::int64_t>& r, const RationalVector& x) {
  Rational s = 0;
  for (std::size_t k = 0; k < r.size(); ++k) s += Rational(r[k]) * x[k];
  return s;
}

template <typename F>
void for_each_subset(int n, int k, F&& f) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

ConvexBody ConvexBody::build(const std::vector<RationalVector>& input) {
  if (input.empty()) throw Error(ErrorKind::DegenerateBody, "no points given");
  const int d = static_cast<int>(input.front().size());
  if (d < 1 || d > kMaxDim)
    throw Error(ErrorKind::DimensionMismatch, "dimension must lie in 1..4, got " + std::to_string(d));
  for (const auto& p : input) {
    if (static_cast<int>(p.size()) != d)
      throw Error(ErrorKind::DimensionMismatch, "points of mixed dimension");
    for (const auto& c : p)
      if (c < 0) throw Error(ErrorKind::NegativeCoordinate, "coordinate " + to_string(c) + " < 0");
  }

  std::vector<RationalVector> pts = input;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (static_cast<int>(pts.size()) < d + 1 || affine_rank(pts, d) < d)
    throw Error(ErrorKind::DegenerateBody, "hull has empty interior");

  ConvexBody body;
  body.dim_ = d;

  // Facet enumeration: every d-subset spanning a hyperplane that supports the
  // point set yields a facet. Exact, and cheap for the small inputs we accept.
  std::set<std::pair<std::vector<std::int64_t>, Rational>> seen;
  const int npts = static_cast<int>(pts.size());
  for_each_subset(npts, d, [&](const std::vector<int>& idx) {
    std::vector<RationalVector> sub;
    for (int i : idx) sub.push_back(pts[i]);
    std::optional<RationalVector> nrm;
    if (d == 1) {
      nrm = RationalVector{Rational(1)};
    } else {
      nrm = normal_of(sub, d);
    }
    if (!nrm) return;
    auto r = primitive_integer(*nrm);
    Rational off = dot(r, sub[0]);
    bool le = true, ge = true;
    for (const auto& p : pts) {
      Rational v = dot(r, p);
      if (v > off) le = false;
      if (v < off) ge = false;
    }
    if (!le && !ge) return;
    if (!le) {
      for (auto& c : r) c = -c;
      off = -off;
    }
    if (seen.emplace(r, off).second) body.halfspaces_.push_back({r, off});
  });

  // A point is a vertex iff the normals of the facets through it span R^d.
  for (const auto& p : pts) {
    std::vector<RationalVector> active;
    for (const auto& h : body.halfspaces_) {
      if (dot(h.normal, p) == h.offset) {
        RationalVector row(h.normal.begin(), h.normal.end());
        active.push_back(std::move(row));
      }
    }
    if (static_cast<int>(active.size()) >= d && static_cast<int>(row_reduce(active, d).size()) == d)
      body.vertices_.push_back(p);
  }

  if (d == 2) {
    // Counter-clockwise order around the vertex centroid.
    Rational cx = 0, cy = 0;
    for (const auto& v : body.vertices_) {
      cx += v[0];
      cy += v[1];
    }
    cx /= body.vertices_.size();
    cy /= body.vertices_.size();
    auto half = [&](const RationalVector& v) {
      Rational dx = v[0] - cx, dy = v[1] - cy;
      return (dy < 0 || (dy == 0 && dx < 0)) ? 1 : 0;
    };
    std::sort(body.vertices_.begin(), body.vertices_.end(),
              [&](const RationalVector& a, const RationalVector& b) {
                int ha = half(a), hb = half(b);
                if (ha != hb) return ha < hb;
                Rational cross = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx);
                return cross > 0;
              });
  }

  body.max_coord_.assign(d, Rational(0));
  for (const auto& v : body.vertices_) {
    std::vector<double> vd;
    for (int k = 0; k < d; ++k) {
      vd.push_back(static_cast<double>(v[k]));
      if (v[k] > body.max_coord_[k]) body.max_coord_[k] = v[k];
    }
    body.vertices_double_.push_back(std::move(vd));
  }

  auto sorted = body.vertices_;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream tag;
  tag << "hull{";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i) tag << ",";
    tag << "(";
    for (int k = 0; k < d; ++k) tag << (k ? "," : "") << to_string(sorted[i][k]);
    tag << ")";
  }
  tag << "}";
  body.tag_ = tag.str();
  return body;
}

ConvexBody build_body(const std::vector<RationalVector>& points) { return ConvexBody::build(points); }

ConvexBody build_body(const std::vector<std::vector<long long>>& points) {
  std::vector<RationalVector> q;
  for (const auto& p : points) {
    RationalVector r;
    for (auto c : p) r.emplace_back(c);
    q.push_back(std::move(r));
  }
  return ConvexBody::build(q);
}

ConvexBody simplex_body(int d) {
  std::vector<std::vector<long long>> pts;
  pts.emplace_back(d, 0);
  for (int k = 0; k < d; ++k) {
    std::vector<long long> e(d, 0);
    e[k] = 1;
    pts.push_back(e);
  }
  return build_body(pts);
}

bool contains(const ConvexBody& body, std::span<const Rational> x, int n) {
  if (static_cast<int>(x.size()) != body.dim())
    throw Error(ErrorKind::DimensionMismatch, "point dimension does not match body");
  for (const auto& h : body.halfspaces()) {
    Rational s = 0;
    for (std::size_t k = 0; k < x.size(); ++k) s += Rational(h.normal[k]) * x[k];
    if (s > h.offset * n) return false;
  }
  return true;
}

namespace {

__extension__ using Int128 = __int128;

// Integer form of a half-space: <J, r> * den <= n * num.
struct IntHalfSpace {
  std::vector<std::int64_t> normal;
  Int128 num;
  Int128 den;
};

std::vector<IntHalfSpace> integer_halfspaces(const ConvexBody& body) {
  std::vector<IntHalfSpace> out;
  for (const auto& h : body.halfspaces()) {
    auto num = mp::numerator(h.offset);
    auto den = mp::denominator(h.offset);
    if (mp::abs(num) > std::numeric_limits<std::int64_t>::max() ||
        den > std::numeric_limits<std::int64_t>::max())
      throw Error(ErrorKind::PreconditionViolation, "facet offset exceeds 64-bit range");
    out.push_back({h.normal, static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)});
  }
  return out;
}

bool inside(const std::vector<IntHalfSpace>& hs, const std::vector<int>& j, int n) {
  for (const auto& h : hs) {
    Int128 s = 0;
    for (std::size_t k = 0; k < j.size(); ++k) s += static_cast<Int128>(h.normal[k]) * j[k];
    if (s * h.den > static_cast<Int128>(n) * h.num) return false;
  }
  return true;
}

}  // namespace

bool contains(const ConvexBody& body, const MultiIndex& j, int n) {
  if (static_cast<int>(j.size()) != body.dim())
    throw Error(ErrorKind::DimensionMismatch, "multi-index dimension does not match body");
  return inside(integer_halfspaces(body), j.entries, n);
}

std::vector<MultiIndex> lattice_points(const ConvexBody& body, int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolation, "dilation index must be >= 1");
  const int d = body.dim();
  auto hs = integer_halfspaces(body);
  std::vector<int> upper(d);
  for (int k = 0; k < d; ++k) {
    Rational m = body.max_coordinate(k) * n;
    upper[k] = static_cast<int>(mp::numerator(m) / mp::denominator(m));
  }
  std::vector<MultiIndex> out;
  std::vector<int> j(d, 0);
  while (true) {
    if (inside(hs, j, n)) out.emplace_back(j);
    int k = d - 1;
    while (k >= 0 && j[k] == upper[k]) j[k--] = 0;
    if (k < 0) break;
    ++j[k];
  }
  return out;
}

SupportValue support_value(const ConvexBody& body, std::span<const double> x) {
  if (static_cast<int>(x.size()) != body.dim())
    throw Error(ErrorKind::DimensionMismatch, "vector dimension does not match body");
  SupportValue best{-std::numeric_limits<double>::infinity(), 0};
  const auto& vs = body.vertices_double();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += vs[i][k] * x[k];
    if (s > best.value) best = {s, i};
  }
  return best;
}

Rational support_value_exact(const ConvexBody& body, std::span<const Rational> x) {
  if (static_cast<int>(x.size()) != body.dim())
    throw Error(ErrorKind::DimensionMismatch, "vector dimension does not match body");
  std::optional<Rational> best;
  for (const auto& v : body.vertices()) {
    Rational s = 0;
    for (std::size_t k = 0; k < x.size(); ++k) s += v[k] * x[k];
    if (!best || s > *best) best = s;
  }
  return *best;
}

std::optional<int> check_sigma_in_kp(const ConvexBody& body, int k_max) {
  const int d = body.dim();
  for (int k = 1; k <= k_max; ++k) {
    bool ok = contains(body, MultiIndex(std::vector<int>(d, 0)), k);
    for (int i = 0; ok && i < d; ++i) {
      std::vector<int> e(d, 0);
      e[i] = 1;
      ok = contains(body, MultiIndex(e), k);
    }
    if (ok) return k;
  }
  return std::nullopt;
}

LowerSetReport is_lower_set(const ConvexBody& body, int n_probe) {
  for (int n = 1; n <= n_probe; ++n) {
    auto pts = lattice_points(body, n);
    std::set<MultiIndex> lookup(pts.begin(), pts.end());
    // Single-coordinate decrements suffice: any K <= J is reached by a chain of them.
    for (const auto& j : pts) {
      for (std::size_t l = 0; l < j.size(); ++l) {
        if (j[l] == 0) continue;
        MultiIndex k = j;
        --k[l];
        if (!lookup.count(k)) return {false, n, j, k};
      }
    }
  }
  return {};
}

int deg_p(std::span<const MultiIndex> support, const ConvexBody& body) {
  bool nonconstant = false;
  for (const auto& j : support) {
    if (static_cast<int>(j.size()) != body.dim())
      throw Error(ErrorKind::DimensionMismatch, "multi-index dimension does not match body");
    for (int v : j.entries)
      if (v < 0) throw Error(ErrorKind::PreconditionViolation, "negative exponent");
    if (!j.is_zero()) nonconstant = true;
  }
  if (!nonconstant) throw Error(ErrorKind::ConstantPolynomial, "support is contained in {0}");

  // n*alpha >= <J,r> for every facet: alpha > 0 bounds n below, alpha < 0 above,
  // alpha = 0 imposes <J,r> <= 0 independently of n.
  Rational lower = 1;
  std::optional<Rational> upper;
  for (const auto& j : support) {
    RationalVector x(j.entries.begin(), j.entries.end());
    for (const auto& h : body.halfspaces()) {
      Rational s = dot(h.normal, x);
      if (h.offset > 0) {
        lower = std::max(lower, Rational(s / h.offset));
      } else if (h.offset < 0) {
        Rational u = s / h.offset;
        upper = upper ? std::min(*upper, u) : u;
      } else if (s > 0) {
        throw Error(ErrorKind::Unreachable,
                    "index " + to_string(j) + " violates a facet through the origin");
      }
    }
  }
  BigInt n = mp::numerator(lower) / mp::denominator(lower);
  if (Rational(n) < lower) n += 1;
  if (upper && Rational(n) > *upper)
    throw Error(ErrorKind::Unreachable, "no dilate of the body contains the support");
  return static_cast<int>(n);
}

}  // namespace plpot
