#pragma once

// Factorization side of the cycle-data correspondence.
//
// A PCF cubic keeps its critical points and their forward orbit as quadratics
// x^2 - s x + q with rational s, q: the two critical points are conjugate over
// Q, so every symmetric quantity the labels need (products of values at the
// pair) stays rational even when the points themselves are irrational.  The
// orbit list P_1..P_m holds the pairs {f^k(g1), f^k(g2)}; pushing P_m through
// f lands back on P_{shift_target}.
//
// Mod a prime p >= 5 the iterate f^n - t is factored into irreducibles, each
// factor g gets a label whose letter k records whether g at the pair P_k
// multiplies to a square, and the branch test (-3)^{deg g} * (g at P_1)
// decides whether g's preimage keeps degree (times 3) or breaks as 2d + d.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "treefactor/errors.hpp"
#include "treefactor/rng.hpp"
#include "treefactor/typedyn.hpp"

namespace treefactor {

// Unordered pair of conjugate values, stored as x^2 - s x + q.
struct OrbitPair {
  mpq_class s, q;

  friend bool operator==(const OrbitPair& a, const OrbitPair& b) {
    return a.s == b.s && a.q == b.q;
  }
};

struct PCFCubic {
  std::string id;       // short handle used by the command line
  std::string display;  // human-readable polynomial
  mpq_class a3, a2, a1, a0;
  int m = 0;             // combined orbit length
  int shift_target = 1;  // the pair after P_m equals P_{shift_target}
  OrbitPair crit;        // critical points of f
  std::vector<OrbitPair> orbit;  // P_1..P_m
  // Set when the critical points are rational.
  std::optional<mpq_class> gamma1, gamma2;

  mpq_class eval(const mpq_class& z) const;
  // Conjugate f_a(z) = f(z + a) - a; same orbit structure, shifted data.
  PCFCubic translated(const mpq_class& a) const;
};

mpq_class cubic_disc(const mpq_class& a3, const mpq_class& a2, const mpq_class& a1,
                     const mpq_class& a0);

// Image pair {f(alpha), f(beta)} of the roots of x^2 - s x + q.
OrbitPair pair_push(const PCFCubic& f, const OrbitPair& p);

// Builds the critical data from the coefficients: locates the critical pair,
// iterates it until the orbit closes, and checks the non-collision and
// divisibility invariants.  Throws unsupported_condition_error when the orbit
// does not close within max_len steps, collides, or the cubic is degenerate.
PCFCubic make_pcf_cubic(const std::string& id, const mpq_class& a3, const mpq_class& a2,
                        const mpq_class& a1, const mpq_class& a0, int max_len = 8);

// The five length-1 and four length-2 entries, critical data precomputed.
const std::vector<PCFCubic>& catalog();
// Lookup by id or by display string; throws std::out_of_range if absent.
const PCFCubic& catalog_entry(const std::string& key);

// r is a square in the quadratic field adjoining a root of x^2 + 3, i.e.
// r = u^2 or r = -3 u^2 for rational u.
bool is_square_q3(const mpq_class& r);

// Rational-root test; a rational cubic reducible over the quadratic field is
// reducible over Q already.  Throws unsupported_condition_error when a
// coefficient resists factoring (root search needs its divisors).
bool cubic_irreducible(const PCFCubic& f, const mpq_class& t);

// Value of x - t at the pair, (alpha - t)(beta - t) = t^2 - s t + q.
mpq_class seed_value(const OrbitPair& p, const mpq_class& t);

// Model id from irreducibility of f - t and squareness of the seed values:
// m = 1 covers all four combinations, m = 2 the five listed ones.  Throws
// unsupported_condition_error for combinations without a model and for t
// meeting the critical orbit (a seed value of 0).
int select_model(const PCFCubic& f, const mpq_class& t);

// ---- prime side ----

bool is_prime(long n);
std::vector<long> primes_up_to(long bound);

long mod_pow(long base, long e, long p);
long mod_inv(long a, long p);
// Euler criterion; throws std::invalid_argument when a = 0 mod p (degenerate
// values are filtered by the skip policy before this point).
bool is_square_mod(long a, long p);

// Dense polynomial over the field with p elements, 5 <= p <= 2 * 10^6 so that
// coefficient convolutions stay inside 64-bit arithmetic.
class FpPoly {
 public:
  explicit FpPoly(long p);  // zero polynomial
  FpPoly(long p, std::vector<long> coeffs);  // coeffs[i] multiplies x^i

  long p() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  long coeff(int i) const;
  long lead() const;
  long eval(long x) const;
  FpPoly monic() const;
  std::string str() const;

  const std::vector<long>& coeffs() const { return c_; }

  friend bool operator==(const FpPoly& a, const FpPoly& b) = default;

 private:
  long p_ = 0;
  std::vector<long> c_;  // trimmed; empty means zero
};

FpPoly fp_x(long p);
FpPoly fp_const(long p, long v);
FpPoly fp_add(const FpPoly& a, const FpPoly& b);
FpPoly fp_sub(const FpPoly& a, const FpPoly& b);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b);
FpPoly fp_scale(const FpPoly& a, long v);
// Quotient and remainder; divisor must be nonzero.
std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b);
FpPoly fp_rem(const FpPoly& a, const FpPoly& b);
FpPoly fp_gcd(const FpPoly& a, const FpPoly& b);  // monic unless zero
FpPoly fp_deriv(const FpPoly& a);
// base^e mod modulus, big exponent.
FpPoly fp_pow_mod(const FpPoly& base, const mpz_class& e, const FpPoly& modulus);
// g(h(x)).
FpPoly fp_compose(const FpPoly& g, const FpPoly& h);

bool is_squarefree(const FpPoly& a);

// Distinct-degree stage: pairs (product of the irreducible factors of degree
// d, d), ascending in d.  Input monic squarefree.
std::vector<std::pair<FpPoly, int>> distinct_degree(const FpPoly& a);
// Factor degrees with multiplicity, descending; from the distinct-degree
// stage alone.
CycleStructure factor_shape(const FpPoly& a);
// Full splitting into monic irreducibles, deterministically ordered.
std::vector<FpPoly> factor_irreducibles(const FpPoly& a, Rng& rng);

// Why a prime was dropped from a sweep.
enum class SkipReason {
  bad_prime,         // p < 5 or not prime
  denominator,       // p divides a denominator of the data
  lead_vanishes,     // leading coefficient 0 mod p
  degenerate_orbit,  // a seed value t^2 - s t + q vanishes mod p
  not_squarefree,    // the iterate has a repeated factor mod p
  label_zero,        // a factor evaluates to 0 at an orbit pair
};
const char* skip_reason_name(SkipReason r);

struct FpPair {
  long s = 0, q = 0;
};

// A catalog entry reduced mod p together with the shifted orbit data.
struct FpCubic {
  long p = 0;
  FpPoly poly;  // f mod p, degree 3
  long t = 0;
  std::vector<FpPair> pairs;  // orbit pairs mod p
  int m = 1;
  int shift_target = 1;

  FpCubic() : poly(5) {}
};

std::optional<FpCubic> reduce_cubic(const PCFCubic& f, const mpq_class& t, long p,
                                    SkipReason& why);

// g(alpha) g(beta) over the roots of x^2 - s x + q, by reducing g mod the
// quadratic.
long pair_value(const FpPoly& g, const FpPair& pr, long p);

// Label of a factor: letter k is s when g at P_k multiplies to a square.
// Empty when some value vanishes (the prime is then skipped).
std::optional<Label> factor_label(const FpPoly& g, const FpCubic& f);

// (-3)^{deg g} * (g at P_1); squareness decides the branch of g's preimage.
long branch_value(const FpPoly& g, const FpCubic& f);

// Monic f^n - t mod p and the discarded leading unit.
std::pair<FpPoly, long> iterate_minus_t(const FpCubic& f, int n);

struct LevelFactorization {
  long p = 0;
  int level = 1;
  long lead = 1;                 // unit with f^n - t = lead * prod(factors)
  std::vector<FpPoly> factors;   // monic irreducibles
  std::vector<Label> labels;     // parallel to factors; empty in shape mode

  CycleStructure shape() const;
  TypedPartition partition() const;  // needs labels
};

// Factor f^level - t; level 0 is read as level 1 (the cubic itself).  Levels
// above max_level throw resource_limit_error.  Skips (non-squarefree iterate,
// vanishing label value) return nullopt and set why.
std::optional<LevelFactorization> factor_level(const FpCubic& f, int level, Rng& rng,
                                               SkipReason& why, bool with_labels = true,
                                               int max_level = 4);

}  // namespace treefactor
