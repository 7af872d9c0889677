#pragma once

#include <random>

#include "ccrlab/algebra.hpp"

namespace ccrlab::testing {

inline Scalar random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  return Scalar::exact(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
}

inline Word random_word(std::mt19937& rng, std::size_t n_gen, std::size_t len) {
  std::uniform_int_distribution<std::uint32_t> idx(1, static_cast<std::uint32_t>(n_gen));
  Word w(len);
  for (auto& g : w) g = GeneratorIndex{idx(rng)};
  return w;
}

inline AlgebraElement random_element(std::mt19937& rng, std::size_t n_gen, std::size_t max_degree,
                                     std::size_t terms = 4) {
  std::uniform_int_distribution<std::size_t> deg(0, max_degree);
  AlgebraElement a(ScalarMode::kExact);
  for (std::size_t t = 0; t < terms; ++t) a.add_term(random_word(rng, n_gen, deg(rng)), random_rational(rng));
  return a;
}

inline PairingForm random_form(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
  PairingForm e(n);
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = i + 1; j <= n; ++j) e.set(i, j, Scalar::exact(mpq_class(num(rng), den(rng))));
  return e;
}

}  // namespace ccrlab::testing
