#pragma once

#include <cstdint>
#include <vector>

namespace momentlab {

/// Exponent vector of a monomial x^alpha.
using MultiIndex = std::vector<int>;

int degree(const MultiIndex& a);

/// Graded-lex order: total degree ascending, then exponents compared
/// lexicographically in descending order, so x1 precedes x2.
struct GrlexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

MultiIndex add(const MultiIndex& a, const MultiIndex& b);

/// All multi-indices of length n and total degree d, in graded-lex order.
std::vector<MultiIndex> monomials_of_degree(int n, int d);
/// All multi-indices with total degree <= d, in graded-lex order.
std::vector<MultiIndex> monomials_up_to(int n, int d);

/// d! / (a_1! ... a_n!), the number of ordered tuples sorting to alpha.
double multinomial(const MultiIndex& a);

/// Binomial coefficient as a double (exact for the sizes used here).
double binomial(int n, int k);

}  // namespace momentlab
