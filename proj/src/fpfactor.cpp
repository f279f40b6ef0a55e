#include "treefactor/fpfactor.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace treefactor {

namespace {

bool is_rational_square(const mpq_class& r) {
  if (r < 0) return false;
  return mpz_perfect_square_p(r.get_num().get_mpz_t()) &&
         mpz_perfect_square_p(r.get_den().get_mpz_t());
}

// Exact square root of a rational known to be a square.
mpq_class rational_sqrt(const mpq_class& r) {
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), r.get_num().get_mpz_t());
  mpz_sqrt(d.get_mpz_t(), r.get_den().get_mpz_t());
  return mpq_class(n) / mpq_class(d);
}

std::string q_str(const mpq_class& r) {
  return r.get_str();
}

// Display form: integer coefficients bare, fractional ones parenthesized in
// front of a power of z, the constant term bare either way.
std::string poly_str(const mpq_class& a3, const mpq_class& a2, const mpq_class& a1,
                     const mpq_class& a0) {
  const mpq_class cs[4] = {a3, a2, a1, a0};
  const int pow[4] = {3, 2, 1, 0};
  std::string out;
  for (int i = 0; i < 4; ++i) {
    const mpq_class& c = cs[i];
    if (c == 0) continue;
    const bool neg = c < 0;
    mpq_class a = neg ? mpq_class(-c) : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? "-" : "+";
    }
    const bool frac = a.get_den() != 1;
    if (pow[i] == 0) {
      out += q_str(a);
      continue;
    }
    if (a != 1) {
      if (frac)
        out += "(" + q_str(a) + ")";
      else
        out += q_str(a);
    }
    out += "z";
    if (pow[i] > 1) out += "^" + std::to_string(pow[i]);
  }
  if (out.empty()) out = "0";
  return out;
}

// f reduced mod x^2 - s x + q as r1 x + r0.
void reduce_cubic_mod_pair(const PCFCubic& f, const OrbitPair& p, mpq_class& r1,
                           mpq_class& r0) {
  // x^2 = s x - q, x^3 = (s^2 - q) x - s q.
  r1 = f.a3 * (p.s * p.s - p.q) + f.a2 * p.s + f.a1;
  r0 = -f.a3 * p.s * p.q - f.a2 * p.q + f.a0;
}

}  // namespace

mpq_class PCFCubic::eval(const mpq_class& z) const {
  return ((a3 * z + a2) * z + a1) * z + a0;
}

PCFCubic PCFCubic::translated(const mpq_class& a) const {
  // f_a(z) = f(z + a) - a.
  mpq_class b3 = a3;
  mpq_class b2 = 3 * a3 * a + a2;
  mpq_class b1 = 3 * a3 * a * a + 2 * a2 * a + a1;
  mpq_class b0 = eval(a) - a;
  return make_pcf_cubic(id + "@" + q_str(a), b3, b2, b1, b0);
}

mpq_class cubic_disc(const mpq_class& a3, const mpq_class& a2, const mpq_class& a1,
                     const mpq_class& a0) {
  return 18 * a3 * a2 * a1 * a0 - 4 * a2 * a2 * a2 * a0 + a2 * a2 * a1 * a1 -
         4 * a3 * a1 * a1 * a1 - 27 * a3 * a3 * a0 * a0;
}

OrbitPair pair_push(const PCFCubic& f, const OrbitPair& p) {
  mpq_class r1, r0;
  reduce_cubic_mod_pair(f, p, r1, r0);
  OrbitPair out;
  out.s = r1 * p.s + 2 * r0;
  out.q = r1 * r1 * p.q + r1 * r0 * p.s + r0 * r0;
  return out;
}

PCFCubic make_pcf_cubic(const std::string& id, const mpq_class& a3, const mpq_class& a2,
                        const mpq_class& a1, const mpq_class& a0, int max_len) {
  if (a3 == 0) throw std::invalid_argument("make_pcf_cubic: not a cubic");
  PCFCubic f;
  f.id = id;
  f.a3 = a3;
  f.a2 = a2;
  f.a1 = a1;
  f.a0 = a0;
  f.display = poly_str(a3, a2, a1, a0);

  // f' = 3 a3 (x^2 - s x + q).
  f.crit.s = mpq_class(-2) * a2 / (3 * a3);
  f.crit.q = a1 / (3 * a3);
  mpq_class cdisc = f.crit.s * f.crit.s - 4 * f.crit.q;
  if (cdisc == 0)
    throw unsupported_condition_error("make_pcf_cubic: repeated critical point");
  if (is_rational_square(cdisc)) {
    mpq_class root = rational_sqrt(cdisc);
    f.gamma1 = (f.crit.s - root) / 2;
    f.gamma2 = (f.crit.s + root) / 2;
  }

  OrbitPair cur = pair_push(f, f.crit);
  for (int k = 1; k <= max_len; ++k) {
    f.orbit.push_back(cur);
    if (cur.s * cur.s - 4 * cur.q == 0)
      throw unsupported_condition_error("make_pcf_cubic: critical orbits collide");
    cur = pair_push(f, cur);
    for (int j = 0; j < static_cast<int>(f.orbit.size()); ++j) {
      if (f.orbit[j] == cur) {
        f.m = k;
        f.shift_target = j + 1;
        return f;
      }
    }
  }
  throw unsupported_condition_error("make_pcf_cubic: critical orbit does not close");
}

const std::vector<PCFCubic>& catalog() {
  static const std::vector<PCFCubic> entries = [] {
    std::vector<PCFCubic> v;
    auto q = [](long n, long d) { return mpq_class(n, d); };
    v.push_back(make_pcf_cubic("f1", -2, 3, 0, 0));
    v.push_back(make_pcf_cubic("f2", -1, q(3, 2), 0, 1));
    v.push_back(make_pcf_cubic("f3", 2, -3, 0, 1));
    v.push_back(make_pcf_cubic("f4", 4, -6, 0, q(3, 2)));
    v.push_back(make_pcf_cubic("f5", 1, q(-3, 2), 0, 0));
    v.push_back(make_pcf_cubic("g1", 2, -3, 0, q(1, 2)));
    v.push_back(make_pcf_cubic("g2", -1, q(3, 2), 0, -1));
    v.push_back(make_pcf_cubic("g3", q(-1, 4), 0, q(3, 2), 2));
    v.push_back(make_pcf_cubic("g4", q(-1, 28), 0, q(-3, 4), q(7, 2)));
    for (int i = 0; i < 5; ++i)
      if (v[i].m != 1) throw std::logic_error("catalog: expected orbit length 1");
    for (int i = 5; i < 9; ++i)
      if (v[i].m != 2) throw std::logic_error("catalog: expected orbit length 2");
    return v;
  }();
  return entries;
}

const PCFCubic& catalog_entry(const std::string& key) {
  for (const PCFCubic& f : catalog())
    if (f.id == key || f.display == key) return f;
  throw std::out_of_range("catalog_entry: no entry " + key);
}

bool is_square_q3(const mpq_class& r) {
  if (r == 0) return true;
  if (r > 0) return is_rational_square(r);
  return is_rational_square(mpq_class(-r) / 3);
}

namespace {

// Prime factorization for the root search; trial division with a probable
// prime finish.  Throws when a cofactor resists both.
std::map<mpz_class, int> factor_integer(mpz_class n) {
  if (n < 0) n = -n;
  std::map<mpz_class, int> out;
  if (n <= 1) return out;
  for (mpz_class d = 2; d * d <= n && d <= 1000000; d += (d == 2 ? 1 : 2)) {
    while (n % d == 0) {
      ++out[d];
      n /= d;
    }
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      throw unsupported_condition_error("root search: coefficient resists factoring");
    ++out[n];
  }
  return out;
}

std::vector<mpz_class> divisors(const mpz_class& n) {
  auto fac = factor_integer(n);
  std::vector<mpz_class> out{1};
  for (const auto& [prime, mult] : fac) {
    size_t base = out.size();
    if (base * (mult + 1) > 200000)
      throw unsupported_condition_error("root search: too many divisors");
    mpz_class pk = 1;
    for (int e = 1; e <= mult; ++e) {
      pk *= prime;
      for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

}  // namespace

bool cubic_irreducible(const PCFCubic& f, const mpq_class& t) {
  // Integer model of f - t.
  mpq_class qs[4] = {f.a3, f.a2, f.a1, f.a0 - t};
  mpz_class den = 1;
  for (const auto& c : qs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
  mpz_class c[4];
  for (int i = 0; i < 4; ++i) {
    mpq_class scaled = qs[i] * mpq_class(den);
    c[i] = scaled.get_num();
  }
  mpz_class content = 0;
  for (const auto& ci : c) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), ci.get_mpz_t());
  for (auto& ci : c) ci /= content;
  if (c[3] == 0) return false;  // root at 0

  // Fast path: irreducible mod one good small prime settles it.
  for (long p : {5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L}) {
    if (mpz_divisible_ui_p(c[0].get_mpz_t(), p)) continue;
    long r[4];
    for (int i = 0; i < 4; ++i) {
      mpz_class m = c[i] % p;
      if (m < 0) m += p;
      r[i] = m.get_si();
    }
    bool has_root = false;
    for (long z = 0; z < p && !has_root; ++z)
      has_root = ((r[0] * z % p * z % p * z + r[1] * z % p * z + r[2] * z + r[3]) % p == 0);
    if (!has_root) return true;
  }

  // Complete rational-root search: num divides the constant, den the lead.
  for (const mpz_class& num : divisors(c[3])) {
    for (const mpz_class& d : divisors(c[0])) {
      mpq_class root(num, d);
      root.canonicalize();
      for (int sign = 0; sign < 2; ++sign) {
        mpq_class z = sign ? mpq_class(-root) : root;
        mpq_class val = ((mpq_class(c[0]) * z + mpq_class(c[1])) * z + mpq_class(c[2])) * z +
                        mpq_class(c[3]);
        if (val == 0) return false;
      }
    }
  }
  return true;
}

mpq_class seed_value(const OrbitPair& p, const mpq_class& t) {
  return t * t - p.s * t + p.q;
}

int select_model(const PCFCubic& f, const mpq_class& t) {
  if (f.m != 1 && f.m != 2)
    throw unsupported_condition_error("select_model: orbit length not covered");
  std::vector<bool> sq;
  for (const OrbitPair& pr : f.orbit) {
    mpq_class v = seed_value(pr, t);
    if (v == 0)
      throw unsupported_condition_error("select_model: t meets the critical orbit");
    sq.push_back(is_square_q3(v));
  }
  bool irred = cubic_irreducible(f, t);
  if (f.m == 1) {
    if (sq[0]) return irred ? 2 : 1;
    return irred ? 4 : 3;
  }
  if (sq[0] && sq[1]) return irred ? 2 : 1;
  if (!irred)
    throw unsupported_condition_error("select_model: no model for this combination");
  if (sq[0]) return 3;   // second value nonsquare
  if (sq[1]) return 4;   // first value nonsquare
  return 5;
}

// ---- prime side ----

namespace {

using u128 = unsigned __int128;

long mulmod_wide(long a, long b, long m) {
  return static_cast<long>(static_cast<u128>(a) * static_cast<u128>(b) % static_cast<u128>(m));
}

long powmod_wide(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod_wide(r, b, m);
    b = mulmod_wide(b, b, m);
    e >>= 1;
  }
  return r;
}

constexpr long kMaxPrime = 2000000;

}  // namespace

bool is_prime(long n) {
  if (n < 2) return false;
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  long d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (long a : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) {
    long x = powmod_wide(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_wide(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (long i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (long j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

long mod_pow(long base, long e, long p) {
  long r = 1 % p;
  base %= p;
  if (base < 0) base += p;
  while (e > 0) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return r;
}

long mod_inv(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw std::invalid_argument("mod_inv: zero");
  return mod_pow(a, p - 2, p);
}

bool is_square_mod(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw std::invalid_argument("is_square_mod: zero");
  return mod_pow(a, (p - 1) / 2, p) == 1;
}

FpPoly::FpPoly(long p) : p_(p) {
  // memoized so arithmetic over a fixed field pays the test once
  static thread_local long vouched = 0;
  if (p != vouched) {
    if (p < 5 || p > kMaxPrime || !is_prime(p))
      throw std::invalid_argument("FpPoly: modulus must be a prime in [5, 2000000]");
    vouched = p;
  }
}

FpPoly::FpPoly(long p, std::vector<long> coeffs) : FpPoly(p) {
  c_ = std::move(coeffs);
  for (long& v : c_) {
    v %= p_;
    if (v < 0) v += p_;
  }
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

long FpPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[i];
}

long FpPoly::lead() const {
  if (c_.empty()) throw std::invalid_argument("FpPoly::lead: zero polynomial");
  return c_.back();
}

long FpPoly::eval(long x) const {
  x %= p_;
  if (x < 0) x += p_;
  long r = 0;
  for (int i = degree(); i >= 0; --i) r = (r * x + c_[i]) % p_;
  return r;
}

FpPoly FpPoly::monic() const {
  if (is_zero() || lead() == 1) return *this;
  return fp_scale(*this, mod_inv(lead(), p_));
}

std::string FpPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0 || c_[i] != 1) os << c_[i];
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

FpPoly fp_x(long p) { return FpPoly(p, {0, 1}); }

FpPoly fp_const(long p, long v) { return FpPoly(p, {v}); }

FpPoly fp_add(const FpPoly& a, const FpPoly& b) {
  std::vector<long> c(std::max(a.degree(), b.degree()) + 1, 0);
  for (int i = 0; i < static_cast<int>(c.size()); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return FpPoly(a.p(), std::move(c));
}

FpPoly fp_sub(const FpPoly& a, const FpPoly& b) {
  std::vector<long> c(std::max(a.degree(), b.degree()) + 1, 0);
  for (int i = 0; i < static_cast<int>(c.size()); ++i) c[i] = a.coeff(i) - b.coeff(i);
  return FpPoly(a.p(), std::move(c));
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly(a.p());
  std::vector<long> c(a.degree() + b.degree() + 1, 0);
  for (int i = 0; i <= a.degree(); ++i) {
    for (int j = 0; j <= b.degree(); ++j) {
      c[i + j] = (c[i + j] + a.coeff(i) * b.coeff(j)) % a.p();
    }
  }
  return FpPoly(a.p(), std::move(c));
}

FpPoly fp_scale(const FpPoly& a, long v) {
  std::vector<long> c(a.coeffs());
  for (long& x : c) x = x * (v % a.p()) % a.p();
  return FpPoly(a.p(), std::move(c));
}

std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) throw std::invalid_argument("fp_divmod: zero divisor");
  const long p = a.p();
  if (a.degree() < b.degree()) return {FpPoly(p), a};
  long inv = mod_inv(b.lead(), p);
  std::vector<long> rem(a.coeffs());
  std::vector<long> quot(a.degree() - b.degree() + 1, 0);
  for (int i = a.degree(); i >= b.degree(); --i) {
    long t = rem[i] % p * inv % p;
    if (t == 0) continue;
    quot[i - b.degree()] = t;
    for (int j = 0; j <= b.degree(); ++j) {
      rem[i - b.degree() + j] = (rem[i - b.degree() + j] - t * b.coeff(j)) % p;
    }
  }
  return {FpPoly(p, std::move(quot)), FpPoly(p, std::move(rem))};
}

FpPoly fp_rem(const FpPoly& a, const FpPoly& b) { return fp_divmod(a, b).second; }

FpPoly fp_gcd(const FpPoly& a, const FpPoly& b) {
  FpPoly x = a, y = b;
  while (!y.is_zero()) {
    FpPoly r = fp_rem(x, y);
    x = y;
    y = r;
  }
  return x.is_zero() ? x : x.monic();
}

FpPoly fp_deriv(const FpPoly& a) {
  if (a.degree() < 1) return FpPoly(a.p());
  std::vector<long> c(a.degree(), 0);
  for (int i = 1; i <= a.degree(); ++i) c[i - 1] = a.coeff(i) % a.p() * (i % a.p()) % a.p();
  return FpPoly(a.p(), std::move(c));
}

FpPoly fp_pow_mod(const FpPoly& base, const mpz_class& e, const FpPoly& modulus) {
  if (e < 0) throw std::invalid_argument("fp_pow_mod: negative exponent");
  FpPoly r = fp_const(base.p(), 1);
  if (e == 0) return fp_rem(r, modulus);
  FpPoly b = fp_rem(base, modulus);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = fp_rem(fp_mul(r, r), modulus);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = fp_rem(fp_mul(r, b), modulus);
  }
  return r;
}

FpPoly fp_compose(const FpPoly& g, const FpPoly& h) {
  FpPoly r(g.p());
  for (int i = g.degree(); i >= 0; --i) {
    r = fp_mul(r, h);
    r = fp_add(r, fp_const(g.p(), g.coeff(i)));
  }
  return r;
}

bool is_squarefree(const FpPoly& a) {
  if (a.degree() <= 1) return !a.is_zero();
  return fp_gcd(a, fp_deriv(a)).degree() == 0;
}

std::vector<std::pair<FpPoly, int>> distinct_degree(const FpPoly& a) {
  std::vector<std::pair<FpPoly, int>> out;
  FpPoly rem = a.monic();
  FpPoly h = fp_rem(fp_x(a.p()), rem);
  int d = 0;
  while (2 * (d + 1) <= rem.degree()) {
    ++d;
    h = fp_pow_mod(h, mpz_class(a.p()), rem);  // x^(p^d) mod rem
    FpPoly g = fp_gcd(fp_sub(h, fp_x(a.p())), rem);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      rem = fp_divmod(rem, g).first;
      h = fp_rem(h, rem);
    }
  }
  if (rem.degree() > 0) out.emplace_back(rem, rem.degree());
  return out;
}

CycleStructure factor_shape(const FpPoly& a) {
  CycleStructure out;
  for (const auto& [block, d] : distinct_degree(a)) {
    for (int i = 0; i < block.degree() / d; ++i) out.push_back(d);
  }
  std::sort(out.begin(), out.end(), std::greater<long>());
  return out;
}

namespace {

// Cantor-Zassenhaus split of a product of irreducibles of equal degree d.
void edf(const FpPoly& g, int d, Rng& rng, std::vector<FpPoly>& out) {
  if (g.degree() == d) {
    out.push_back(g);
    return;
  }
  const long p = g.p();
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), p, d);
  e = (e - 1) / 2;
  for (;;) {
    std::vector<long> c(g.degree());
    for (long& v : c) v = static_cast<long>(rng.below(static_cast<uint64_t>(p)));
    FpPoly r(p, std::move(c));
    if (r.degree() < 1) continue;
    FpPoly w = fp_pow_mod(r, e, g);
    FpPoly split = fp_gcd(fp_sub(w, fp_const(p, 1)), g);
    if (split.degree() > 0 && split.degree() < g.degree()) {
      edf(split, d, rng, out);
      edf(fp_divmod(g, split).first, d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<FpPoly> factor_irreducibles(const FpPoly& a, Rng& rng) {
  std::vector<FpPoly> out;
  for (const auto& [block, d] : distinct_degree(a)) edf(block, d, rng, out);
  std::sort(out.begin(), out.end(), [](const FpPoly& x, const FpPoly& y) {
    if (x.degree() != y.degree()) return x.degree() < y.degree();
    return x.coeffs() < y.coeffs();
  });
  return out;
}

const char* skip_reason_name(SkipReason r) {
  switch (r) {
    case SkipReason::bad_prime: return "bad-prime";
    case SkipReason::denominator: return "denominator";
    case SkipReason::lead_vanishes: return "lead-vanishes";
    case SkipReason::degenerate_orbit: return "degenerate-orbit";
    case SkipReason::not_squarefree: return "not-squarefree";
    case SkipReason::label_zero: return "label-zero";
  }
  return "unknown";
}

namespace {

std::optional<long> reduce_q(const mpq_class& r, long p) {
  if (mpz_divisible_ui_p(r.get_den().get_mpz_t(), p)) return std::nullopt;
  mpz_class num = r.get_num() % p;
  if (num < 0) num += p;
  mpz_class den = r.get_den() % p;
  return num.get_si() * mod_inv(den.get_si(), p) % p;
}

}  // namespace

std::optional<FpCubic> reduce_cubic(const PCFCubic& f, const mpq_class& t, long p,
                                    SkipReason& why) {
  if (p < 5 || p > kMaxPrime || !is_prime(p)) {
    why = SkipReason::bad_prime;
    return std::nullopt;
  }
  FpCubic out;
  out.p = p;
  out.m = f.m;
  out.shift_target = f.shift_target;
  std::vector<long> c(4);
  const mpq_class* qs[4] = {&f.a0, &f.a1, &f.a2, &f.a3};
  for (int i = 0; i < 4; ++i) {
    auto v = reduce_q(*qs[i], p);
    if (!v) {
      why = SkipReason::denominator;
      return std::nullopt;
    }
    c[i] = *v;
  }
  auto tv = reduce_q(t, p);
  if (!tv) {
    why = SkipReason::denominator;
    return std::nullopt;
  }
  out.t = *tv;
  if (c[3] == 0) {
    why = SkipReason::lead_vanishes;
    return std::nullopt;
  }
  out.poly = FpPoly(p, c);
  for (const OrbitPair& pr : f.orbit) {
    auto s = reduce_q(pr.s, p), q = reduce_q(pr.q, p);
    if (!s || !q) {
      why = SkipReason::denominator;
      return std::nullopt;
    }
    // Seed value of x - t at the pair; 0 makes every label downstream
    // degenerate.
    long v = ((out.t * out.t + p - *s * out.t % p) % p + *q) % p;
    if (v == 0) {
      why = SkipReason::degenerate_orbit;
      return std::nullopt;
    }
    out.pairs.push_back({*s, *q});
  }
  return out;
}

long pair_value(const FpPoly& g, const FpPair& pr, long p) {
  // Reduce g mod x^2 - s x + q to c1 x + c0, then take c1^2 q + c1 c0 s + c0^2.
  long c1 = 0, c0 = 0;
  for (int i = g.degree(); i >= 0; --i) {
    long n1 = (c1 * pr.s + c0) % p;
    long n0 = (p - c1 * pr.q % p + g.coeff(i)) % p;
    c1 = n1;
    c0 = n0;
  }
  return ((c1 * c1 % p * pr.q + c1 * c0 % p * pr.s) % p + c0 * c0) % p;
}

std::optional<Label> factor_label(const FpPoly& g, const FpCubic& f) {
  unsigned bits = 0;
  for (int k = 0; k < f.m; ++k) {
    long v = pair_value(g, f.pairs[k], f.p);
    if (v == 0) return std::nullopt;
    if (!is_square_mod(v, f.p)) bits |= 1u << k;
  }
  return Label(f.m, bits);
}

long branch_value(const FpPoly& g, const FpCubic& f) {
  long sign = mod_pow(f.p - 3, g.degree(), f.p);
  return sign * pair_value(g, f.pairs[0], f.p) % f.p;
}

std::pair<FpPoly, long> iterate_minus_t(const FpCubic& f, int n) {
  FpPoly g = f.poly;
  for (int i = 2; i <= n; ++i) g = fp_compose(g, f.poly);
  g = fp_sub(g, fp_const(f.p, f.t));
  long lead = g.lead();
  return {g.monic(), lead};
}

CycleStructure LevelFactorization::shape() const {
  CycleStructure out;
  for (const FpPoly& g : factors) out.push_back(g.degree());
  std::sort(out.begin(), out.end(), std::greater<long>());
  return out;
}

TypedPartition LevelFactorization::partition() const {
  if (labels.size() != factors.size())
    throw std::logic_error("LevelFactorization::partition: labels missing");
  std::vector<Part> parts;
  for (size_t i = 0; i < factors.size(); ++i)
    parts.push_back({labels[i], factors[i].degree()});
  return TypedPartition(std::move(parts));
}

std::optional<LevelFactorization> factor_level(const FpCubic& f, int level, Rng& rng,
                                               SkipReason& why, bool with_labels,
                                               int max_level) {
  int n = std::max(level, 1);
  if (n > max_level) throw resource_limit_error("factor_level: level too deep");
  auto [target, lead] = iterate_minus_t(f, n);
  if (!is_squarefree(target)) {
    why = SkipReason::not_squarefree;
    return std::nullopt;
  }
  LevelFactorization out;
  out.p = f.p;
  out.level = n;
  out.lead = lead;
  if (with_labels) {
    out.factors = factor_irreducibles(target, rng);
    for (const FpPoly& g : out.factors) {
      auto l = factor_label(g, f);
      if (!l) {
        why = SkipReason::label_zero;
        return std::nullopt;
      }
      out.labels.push_back(*l);
    }
  } else {
    // Shape mode skips the equal-degree split; x^d stands in for each factor.
    for (long d : factor_shape(target)) {
      std::vector<long> c(d + 1, 0);
      c[d] = 1;
      out.factors.push_back(FpPoly(f.p, std::move(c)));
    }
  }
  return out;
}

}  // namespace treefactor
