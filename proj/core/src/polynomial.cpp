#include "plpot/polynomial.hpp"

#include <algorithm>
#include <map>

#include "plpot/errors.hpp"

namespace plpot {

namespace {

template <typename T>
T pairwise(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() <= 8) {
    T s{};
    for (const auto& x : v) s += x;
    return s;
  }
  auto half = v.size() / 2;
  return pairwise(v.subspan(0, half)) + pairwise(v.subspan(half));
}

}  // namespace

Complex pairwise_sum(std::span<const Complex> values) { return pairwise(values); }
double pairwise_sum(std::span<const double> values) { return pairwise(values); }

Polynomial make_polynomial(const ConvexBody& body, int n, const std::vector<Term>& terms) {
  if (n < 0) throw Error(ErrorKind::PreconditionViolation, "dilation index must be >= 0");
  std::map<MultiIndex, Complex> merged;
  for (const auto& [j, c] : terms) {
    if (static_cast<int>(j.size()) != body.dim())
      throw Error(ErrorKind::DimensionMismatch, "multi-index dimension does not match body");
    for (int e : j.entries)
      if (e < 0) throw Error(ErrorKind::PreconditionViolation, "negative exponent");
    merged[j] += c;
  }
  Polynomial p;
  p.body_tag = body.tag();
  p.n = n;
  for (const auto& [j, c] : merged) {
    if (c == Complex(0.0, 0.0)) continue;
    bool in = n == 0 ? j.is_zero() : contains(body, j, n);
    if (!in)
      throw Error(ErrorKind::PreconditionViolation,
                  "index " + to_string(j) + " lies outside " + std::to_string(n) + "P");
    p.support.push_back(j);
    p.coeffs.push_back(c);
  }
  return p;
}

Complex monomial(const MultiIndex& j, std::span<const Complex> z) {
  Complex out(1.0, 0.0);
  for (std::size_t k = 0; k < j.size(); ++k) {
    Complex base = z[k], acc(1.0, 0.0);
    for (int e = j[k]; e > 0; e >>= 1) {
      if (e & 1) acc *= base;
      base *= base;
    }
    out *= acc;
  }
  return out;
}

Complex eval_poly(const Polynomial& p, std::span<const Complex> z) {
  std::vector<Complex> terms;
  terms.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.support[i].size() != z.size())
      throw Error(ErrorKind::DimensionMismatch, "point dimension does not match polynomial");
    terms.push_back(p.coeffs[i] * monomial(p.support[i], z));
  }
  return pairwise_sum(terms);
}

Polynomial multiply(const Polynomial& p, const Polynomial& q, const ConvexBody& body) {
  std::vector<Term> terms;
  terms.reserve(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      terms.emplace_back(p.support[i] + q.support[j], p.coeffs[i] * q.coeffs[j]);
  return make_polynomial(body, p.n + q.n, terms);
}

int deg_p(const Polynomial& p, const ConvexBody& body) { return deg_p(p.support, body); }

}  // namespace plpot
