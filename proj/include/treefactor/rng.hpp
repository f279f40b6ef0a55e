#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>

namespace treefactor {

// deterministic random stream; every sampling entry point takes an explicit
// seed so repeated runs are reproducible bit for bit
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed ^ 0x9e3779b97f4a7c15ull) {}

  std::uint64_t u64() { return eng_(); }

  // uniform in [0, n), n >= 1; rejection keeps the draw exactly uniform
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  // uniform in [0, n) for big n, by rejection on 64-bit limbs
  mpz_class below(const mpz_class& n) {
    if (n <= 1) return 0;
    const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    const std::size_t limbs = (bits + 63) / 64;
    while (true) {
      mpz_class v = 0;
      for (std::size_t i = 0; i < limbs; ++i) {
        const std::uint64_t word = eng_();
        mpz_class limb;
        mpz_import(limb.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
        v <<= 64;
        v |= limb;
      }
      // keep only `bits` bits so the acceptance probability is >= 1/2
      v >>= (limbs * 64 - bits);
      if (v < n) return v;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace treefactor
