#pragma once

// Independent closed forms and brute-force enumerations used as test oracles.
// Nothing here calls into the library's numerical code.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Average over theta of prod_i cos(a_i theta): 2^-k #{signs s : sum s_i a_i = 0}.
inline double cosine_product_mean(const std::vector<long>& a) {
  const std::size_t k = a.size();
  long hits = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
    long sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += ((s >> i) & 1) ? a[i] : -a[i];
    hits += sum == 0;
  }
  return static_cast<double>(hits) / static_cast<double>(std::uint64_t{1} << k);
}

// Arc-length measure of {theta : 2 |sin(theta/2)| < r} on the unit circle.
inline double arc_within(double r) {
  if (r >= 2.0) return 1.0;
  return 2.0 / std::numbers::pi * std::asin(r / 2.0);
}

// Green function of z -> z^2 + c by escape: 2^-n log|z_n| once |z_n| is huge.
inline double green_quadratic(std::complex<long double> z, std::complex<long double> c) {
  long double scale = 1.0L;
  for (int n = 0; n < 200; ++n) {
    if (std::abs(z) > 1e30L) return static_cast<double>(scale * std::log(std::abs(z)));
    z = z * z + c;
    scale /= 2.0L;
  }
  return 0.0;  // bounded orbit
}

// Exact Bin(n, 1/2) probability of |k/n - 1/2| > eps.
inline mpq_class binomial_tail(int n, const mpq_class& eps) {
  mpz_class count = 0;
  for (int k = 0; k <= n; ++k) {
    mpq_class dev(k, n);
    dev.canonicalize();
    dev -= mpq_class(1, 2);
    if (abs(dev) > eps) {
      mpz_class c;
      mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
      count += c;
    }
  }
  mpz_class total = 1;
  total <<= n;
  mpq_class r(count, total);
  r.canonicalize();
  return r;
}

// A function of the first `depth` symbols, given by value on a word where word[0] = x1.
using WordFn = std::function<mpq_class(const std::vector<int>&)>;

// Uniform average over all words of length L on d symbols of g(word).
inline mpq_class word_average(int d, int L, const WordFn& g) {
  std::vector<int> w(static_cast<std::size_t>(L), 0);
  mpq_class sum = 0;
  long count = 0;
  while (true) {
    sum += g(w);
    ++count;
    int i = L - 1;
    while (i >= 0 && w[static_cast<std::size_t>(i)] == d - 1) w[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++w[static_cast<std::size_t>(i)];
  }
  mpq_class r = sum / count;
  r.canonicalize();
  return r;
}

// Table lookup for a lexicographic (x1 most significant) cylinder table.
inline mpq_class lookup(const std::vector<mpq_class>& table, int d, int depth,
                        const std::vector<int>& word, int offset = 0) {
  std::size_t idx = 0;
  for (int i = 0; i < depth; ++i) {
    idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(word[static_cast<std::size_t>(offset + i)]);
  }
  return table[idx];
}

// <phi (psi o sigma^n)> - <phi><psi> by direct enumeration of words.
inline mpq_class correlation(const std::vector<mpq_class>& phi, int dp,
                             const std::vector<mpq_class>& psi, int dq, int d, int n) {
  const int L = std::max(dp, n + dq);
  const mpq_class both = word_average(d, L, [&](const std::vector<int>& w) -> mpq_class {
    return lookup(phi, d, dp, w) * lookup(psi, d, dq, w, n);
  });
  const mpq_class mp = word_average(d, dp, [&](const std::vector<int>& w) -> mpq_class { return lookup(phi, d, dp, w); });
  const mpq_class mq = word_average(d, dq, [&](const std::vector<int>& w) -> mpq_class { return lookup(psi, d, dq, w); });
  mpq_class r = both - mp * mq;
  r.canonicalize();
  return r;
}

// Reference Philox4x32-10 vectors from the Random123 distribution (kat_vectors).
struct PhiloxKat {
  std::uint32_t ctr[4];
  std::uint32_t key[2];
  std::uint32_t out[4];
};

inline const PhiloxKat kPhiloxKats[] = {
    {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}},
    {{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
     {0xffffffff, 0xffffffff},
     {0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}},
    {{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
     {0xa4093822, 0x299f31d0},
     {0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}},
};

}  // namespace oracle
