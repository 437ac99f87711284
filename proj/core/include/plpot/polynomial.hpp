#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plpot/convex_body.hpp"
#include "plpot/indicator.hpp"

namespace plpot {

/// Element of Poly(nP): sparse monomial coefficients with support in nP.
struct Polynomial {
  std::vector<MultiIndex> support;  // pairwise distinct, sorted
  std::vector<Complex> coeffs;      // no exact zeros
  std::string body_tag;
  int n = 0;

  std::size_t size() const noexcept { return support.size(); }
};

using Term = std::pair<MultiIndex, Complex>;

/// Merges duplicate indices, drops zero coefficients and checks support in nP.
Polynomial make_polynomial(const ConvexBody& body, int n, const std::vector<Term>& terms);

/// Sum c_J z^J using pairwise summation of the terms.
Complex eval_poly(const Polynomial& p, std::span<const Complex> z);

/// z^J by repeated squaring per coordinate.
Complex monomial(const MultiIndex& j, std::span<const Complex> z);

/// Product in Poly((n+m)P).
Polynomial multiply(const Polynomial& p, const Polynomial& q, const ConvexBody& body);

int deg_p(const Polynomial& p, const ConvexBody& body);

/// Sum of values in a fixed, balanced order.
Complex pairwise_sum(std::span<const Complex> values);
double pairwise_sum(std::span<const double> values);

}  // namespace plpot
