#pragma once

#include <random>

#include "qtopos/analysis.hpp"

namespace qtest {

using namespace qtopos;

inline Vector vec(std::initializer_list<long> xs) {
  Vector v;
  for (long x : xs) v.push_back(GaussianRational(x));
  return v;
}

inline Subspace span(std::size_t n, std::initializer_list<std::initializer_list<long>> vs) {
  std::vector<Vector> out;
  for (auto v : vs) out.push_back(vec(v));
  return Subspace::span(n, out);
}

inline ExactMatrix diag(std::initializer_list<long> d) {
  ExactMatrix m(d.size(), d.size());
  std::size_t i = 0;
  for (long x : d) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

inline Observable sigma_z() { return Observable("z", {span(2, {{1, 0}}), span(2, {{0, 1}})}); }

/// {I, pi1, pi2, 0}
inline OperatorMonoid qubit_monoid() { return close_monoid({diag({1, 0}), diag({0, 1})}, 2, 64); }

/// Small Gaussian-integer entries, some purely real, some complex.
class RandomExact {
 public:
  explicit RandomExact(unsigned seed) : rng_(seed) {}

  GaussianRational scalar(bool complex = true) {
    std::uniform_int_distribution<long> d(-3, 3);
    long re = d(rng_), im = complex && coin() ? d(rng_) : 0;
    if (coin()) return GaussianRational(mpq_class(re, 2), mpq_class(im));
    return GaussianRational(mpq_class(re), mpq_class(im));
  }
  Vector vector(std::size_t n) {
    Vector v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(sparse() ? GaussianRational(0) : scalar());
    return v;
  }
  ExactMatrix matrix(std::size_t r, std::size_t c) {
    ExactMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = sparse() ? GaussianRational(0) : scalar();
    return m;
  }
  Subspace subspace(std::size_t n) {
    std::uniform_int_distribution<std::size_t> k(0, n);
    std::vector<Vector> vs;
    for (std::size_t i = k(rng_); i > 0; --i) vs.push_back(vector(n));
    return Subspace::span(n, vs);
  }

 private:
  bool coin() { return std::uniform_int_distribution<int>(0, 1)(rng_) == 1; }
  bool sparse() { return std::uniform_int_distribution<int>(0, 2)(rng_) == 0; }
  std::mt19937 rng_;
};

}  // namespace qtest
