#include "momentlab/multi_index.hpp"

#include <cmath>
#include <numeric>

#include "momentlab/errors.hpp"

namespace momentlab {

int degree(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

bool GrlexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int da = degree(a), db = degree(b);
  if (da != db) return da < db;
  return b < a;
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  require(a.size() == b.size(), ErrorKind::DimensionMismatch, "multi-indices of different lengths");
  MultiIndex out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

namespace {

void fill(int n, int pos, int left, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = left;
    out.push_back(cur);
    return;
  }
  for (int k = left; k >= 0; --k) {
    cur[pos] = k;
    fill(n, pos + 1, left - k, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> monomials_of_degree(int n, int d) {
  require(n >= 1 && d >= 0, ErrorKind::InvalidArgument, "bad monomial request");
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(n), 0);
  fill(n, 0, d, cur, out);
  return out;
}

std::vector<MultiIndex> monomials_up_to(int n, int d) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= d; ++k) {
    auto slice = monomials_of_degree(n, k);
    out.insert(out.end(), slice.begin(), slice.end());
  }
  return out;
}

double multinomial(const MultiIndex& a) {
  double lg = std::lgamma(degree(a) + 1.0);
  for (int k : a) lg -= std::lgamma(k + 1.0);
  return std::round(std::exp(lg));
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace momentlab
