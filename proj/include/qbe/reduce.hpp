#pragma once

// Deterministic reductions.  All integrals and norms go through a fixed
// binary splitting tree, so the summation order never depends on the
// thread count or on chunk sizes; runs are reproducible to the last bit.

#include <cstddef>
#include <utility>

namespace qbe {

namespace detail {
constexpr std::size_t kPairwiseLeaf = 32;
}

// sum_{i in [lo, hi)} term(i), fixed-tree pairwise
template <class Term>
double pairwise_sum(std::size_t lo, std::size_t hi, Term&& term) {
  const std::size_t n = hi - lo;
  if (n <= detail::kPairwiseLeaf) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

template <class Term>
double pairwise_sum(std::size_t n, Term&& term) {
  return pairwise_sum<Term>(0, n, std::forward<Term>(term));
}

// max_{i in [lo, hi)} term(i); NaN anywhere poisons the result.
template <class Term>
double pairwise_max(std::size_t lo, std::size_t hi, Term&& term) {
  const std::size_t n = hi - lo;
  if (n <= detail::kPairwiseLeaf) {
    double m = term(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double v = term(i);
      if (!(v <= m)) m = v;  // picks v when v > m or v is NaN
    }
    return m;
  }
  const std::size_t mid = lo + n / 2;
  const double a = pairwise_max(lo, mid, term);
  const double b = pairwise_max(mid, hi, term);
  return !(b <= a) ? b : a;
}

template <class Term>
double pairwise_max(std::size_t n, Term&& term) {
  return pairwise_max<Term>(0, n, std::forward<Term>(term));
}

}  // namespace qbe
