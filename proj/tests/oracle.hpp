#pragma once
// dense Bareiss elimination used as an independent rank oracle in tests

#include <gmpxx.h>

#include <random>
#include <vector>

namespace oracle {

inline std::size_t bareiss_rank(std::vector<std::vector<mpz_class>> a) {
  std::size_t m = a.size();
  if (m == 0) return 0;
  std::size_t n = a[0].size();
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && a[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < n; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

// random integer matrix with prescribed rank (product of two thin factors)
inline std::vector<std::vector<mpz_class>> random_rank(std::mt19937_64& g, std::size_t m, std::size_t n,
                                                       std::size_t k, int range = 3) {
  std::uniform_int_distribution<int> d(-range, range);
  std::vector<std::vector<mpz_class>> u(m, std::vector<mpz_class>(k)), v(k, std::vector<mpz_class>(n));
  for (auto& row : u)
    for (auto& x : row) x = d(g);
  for (auto& row : v)
    for (auto& x : row) x = d(g);
  std::vector<std::vector<mpz_class>> a(m, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t j = 0; j < n; ++j) a[i][j] += u[i][t] * v[t][j];
  return a;
}

}  // namespace oracle
