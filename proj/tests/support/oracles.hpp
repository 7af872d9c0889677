#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "ccrlab/quasifree.hpp"

namespace ccrlab::testing {

// Counts perfect matchings by filtering all permutations of 1..n: a permutation
// (p1 p2)(p3 p4)... is canonical when each pair ascends and first elements ascend.
inline std::set<Pairing> brute_force_matchings(std::size_t n) {
  std::vector<std::uint32_t> p(n);
  std::iota(p.begin(), p.end(), 1u);
  std::set<Pairing> out;
  do {
    bool ok = true;
    for (std::size_t k = 0; k + 1 < n && ok; k += 2) {
      ok = p[k] < p[k + 1] && (k == 0 || p[k - 2] < p[k]);
    }
    if (!ok) continue;
    Pairing pr;
    for (std::size_t k = 0; k + 1 < n; k += 2) pr.emplace_back(p[k], p[k + 1]);
    out.insert(pr);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Explicit pairing sum over an enumerated list.
inline Scalar pairing_sum(const TwoPointKernel& k, const Word& w) {
  if (w.empty()) return Scalar::one(k.mode());
  if (w.size() % 2) return Scalar::zero(k.mode());
  Scalar total = Scalar::zero(k.mode());
  for (const auto& pr : enumerate_pairings(w.size())) {
    Scalar term = Scalar::one(k.mode());
    for (auto [a, b] : pr) term *= k(w[a - 1].value, w[b - 1].value);
    total += term;
  }
  return total;
}

// Random exact kernel omega = mu + (i/2)E with mu = B^T B + I. Positivity of the
// resulting state is not guaranteed; a large e_den shrinks E.
inline TwoPointKernel random_exact_kernel(std::mt19937& rng, std::size_t n, long e_den = 4) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::vector<std::vector<mpq_class>> b(n, std::vector<mpq_class>(n));
  for (auto& row : b)
    for (auto& v : row) v = mpq_class(num(rng), 2);
  std::vector<std::vector<Scalar>> mu(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      mpq_class s = i == j ? mpq_class(1) : mpq_class(0);
      for (std::size_t k = 0; k < n; ++k) s += b[k][i] * b[k][j];
      mu[i][j] = Scalar::exact(s);
    }
  }
  PairingForm e(n);
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = i + 1; j <= n; ++j) e.set(i, j, Scalar::exact(mpq_class(num(rng), e_den)));
  return TwoPointKernel::from_covariance(mu, e);
}

}  // namespace ccrlab::testing
