#include "treefactor/typedyn.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <unordered_map>

namespace treefactor {

Label::Label(int m_, unsigned bits_) : m(m_), bits(bits_) {
  if (m < 1 || m > 16) throw std::invalid_argument("label length out of range");
  if (bits >> m) throw std::invalid_argument("label bits exceed length");
}

Label Label::from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty label");
  unsigned bits = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 'n')
      bits |= 1u << i;
    else if (s[i] != 's')
      throw std::invalid_argument("label letters must be n or s");
  }
  return Label(static_cast<int>(s.size()), bits);
}

std::string Label::str() const {
  std::string s(static_cast<std::size_t>(m), 's');
  for (int i = 0; i < m; ++i)
    if (bits & (1u << i)) s[static_cast<std::size_t>(i)] = 'n';
  return s;
}

Label label_product(const Label& a, const Label& b) {
  if (a.m != b.m) throw std::invalid_argument("label length mismatch");
  return Label(a.m, a.bits ^ b.bits);
}

Label shift_label(const Label& c, int j) {
  if (j < 1 || j > c.m) throw std::invalid_argument("shift target out of range");
  unsigned bits = c.bits >> 1;
  if (c.bits & (1u << (j - 1))) bits |= 1u << (c.m - 1);
  return Label(c.m, bits);
}

bool label_less(const Label& a, const Label& b) {
  if (a.m != b.m) return a.m < b.m;
  for (int i = 0; i < a.m; ++i) {
    const bool an = (a.bits >> i) & 1u, bn = (b.bits >> i) & 1u;
    if (an != bn) return an;  // 'n' first
  }
  return false;
}

bool part_less(const Part& a, const Part& b) {
  if (a.len != b.len) return a.len > b.len;
  return label_less(a.label, b.label);
}

TypedPartition::TypedPartition(std::vector<Part> p) : parts(std::move(p)) {
  for (const auto& q : parts)
    if (q.len < 1) throw std::invalid_argument("part length must be positive");
  std::sort(parts.begin(), parts.end(), part_less);
}

TypedPartition TypedPartition::parse(const std::string& text) {
  std::vector<Part> parts;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '[') throw std::invalid_argument("expected '['");
    const std::size_t comma = text.find(',', i);
    const std::size_t close = text.find(']', i);
    if (comma == std::string::npos || close == std::string::npos || comma > close)
      throw std::invalid_argument("malformed part");
    Part p;
    p.label = Label::from_string(text.substr(i + 1, comma - i - 1));
    p.len = std::stol(text.substr(comma + 1, close - comma - 1));
    parts.push_back(p);
    i = close + 1;
  }
  return TypedPartition(std::move(parts));
}

long TypedPartition::total() const {
  long t = 0;
  for (const auto& p : parts) t += p.len;
  return t;
}

CycleStructure TypedPartition::lengths() const {
  CycleStructure c;
  for (const auto& p : parts) c.push_back(p.len);
  return c;  // parts are length-descending already
}

std::string TypedPartition::str() const {
  std::ostringstream os;
  for (const auto& p : parts) os << '[' << p.label.str() << ',' << p.len << ']';
  return os.str();
}

bool operator<(const TypedPartition& a, const TypedPartition& b) {
  return std::lexicographical_compare(a.parts.begin(), a.parts.end(), b.parts.begin(), b.parts.end(),
                                      part_less);
}

TypedPartition merge(const TypedPartition& a, const TypedPartition& b) {
  std::vector<Part> parts = a.parts;
  parts.insert(parts.end(), b.parts.begin(), b.parts.end());
  return TypedPartition(std::move(parts));
}

mpq_class Data::total_mass() const {
  mpq_class t = 0;
  for (const auto& [p, q] : mass) t += q;
  return t;
}

Data delta(const TypedPartition& p, int level, int m) {
  Data d;
  d.m = m;
  d.level = level;
  d.mass[p] = 1;
  return d;
}

Data step_type(const Label& l, long k, int shift_target) {
  const Label sh = shift_label(l, shift_target);
  const unsigned card = 1u << l.m;
  Data out;
  out.m = l.m;
  out.level = 0;
  if (l.n_start()) {
    const mpq_class w(1, card);
    for (unsigned d1 = 0; d1 < card; ++d1) {
      const unsigned d2 = sh.bits ^ d1;
      out.mass[TypedPartition({{Label(l.m, d1), 2 * k}, {Label(l.m, d2), k}})] += w;
    }
  } else {
    out.mass[TypedPartition({{sh, 3 * k}})] = mpq_class(2, 3);
    const mpq_class w = mpq_class(1, 3) / (static_cast<long>(card) * static_cast<long>(card));
    for (unsigned d1 = 0; d1 < card; ++d1)
      for (unsigned d2 = 0; d2 < card; ++d2) {
        const unsigned d3 = sh.bits ^ d1 ^ d2;
        out.mass[TypedPartition({{Label(l.m, d1), k}, {Label(l.m, d2), k}, {Label(l.m, d3), k}})] += w;
      }
  }
  return out;
}

namespace {

using Dist = std::map<TypedPartition, mpq_class>;
using StepCache = std::map<std::pair<unsigned, long>, Dist>;

const Dist& cached_step(const Part& p, int m, int shift_target, StepCache& cache) {
  const auto key = std::make_pair(p.label.bits, p.len);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, step_type(Label(m, p.label.bits), p.len, shift_target).mass).first;
  return it->second;
}

Dist convolve_parts(const TypedPartition& p, int m, int shift_target, StepCache& cache) {
  Dist acc;
  acc[TypedPartition{}] = 1;
  for (const auto& part : p.parts) {
    const Dist& branch = cached_step(part, m, shift_target, cache);
    Dist next;
    for (const auto& [lhs, ql] : acc)
      for (const auto& [rhs, qr] : branch) next[merge(lhs, rhs)] += ql * qr;
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

Data step_partition(const TypedPartition& p, int m, int level, int shift_target) {
  StepCache cache;
  Data out;
  out.m = m;
  out.level = level + 1;
  out.mass = convolve_parts(p, m, shift_target, cache);
  return out;
}

namespace {

// Deep propagation works on integer numerator vectors over one shared
// denominator: no per-operation gcd, one walk serves several starting
// distributions at once, and partitions pack into byte strings whose
// lexicographic order equals the canonical part order, so convolving two
// canonical partitions is a linear merge.

struct LabelOrder {
  std::vector<int> rank;        // bits -> position
  std::vector<unsigned> order;  // position -> bits
};

LabelOrder label_order(int m) {
  LabelOrder lo;
  lo.order.resize(1u << m);
  for (unsigned b = 0; b < lo.order.size(); ++b) lo.order[b] = b;
  std::sort(lo.order.begin(), lo.order.end(),
            [m](unsigned a, unsigned b) { return label_less(Label(m, a), Label(m, b)); });
  lo.rank.resize(lo.order.size());
  for (std::size_t i = 0; i < lo.order.size(); ++i) lo.rank[lo.order[i]] = static_cast<int>(i);
  return lo;
}

// 3 bytes per part: 65535 - len big-endian, then the label position
void append_part(std::string& key, long len, int rank) {
  const unsigned r = 65535u - static_cast<unsigned>(len);
  key.push_back(static_cast<char>(r >> 8));
  key.push_back(static_cast<char>(r & 0xffu));
  key.push_back(static_cast<char>(rank));
}

struct PackedPart {
  long len;
  unsigned bits;
};

PackedPart key_part(const std::string& key, std::size_t i, const LabelOrder& lo) {
  const unsigned hi = static_cast<unsigned char>(key[3 * i]);
  const unsigned lm = static_cast<unsigned char>(key[3 * i + 1]);
  return {65535l - static_cast<long>((hi << 8) | lm),
          lo.order[static_cast<unsigned char>(key[3 * i + 2])]};
}

std::string merge_keys(const std::string& a, const std::string& b) {
  std::string out;
  out.resize(a.size() + b.size());
  const char* pa = a.data();
  const char* ea = pa + a.size();
  const char* pb = b.data();
  const char* eb = pb + b.size();
  char* o = out.data();
  while (pa != ea && pb != eb) {
    if (std::memcmp(pa, pb, 3) <= 0) {
      std::memcpy(o, pa, 3);
      pa += 3;
    } else {
      std::memcpy(o, pb, 3);
      pb += 3;
    }
    o += 3;
  }
  std::memcpy(o, pa, static_cast<std::size_t>(ea - pa));
  o += ea - pa;
  std::memcpy(o, pb, static_cast<std::size_t>(eb - pb));
  return out;
}

struct PackedOutcome {
  std::string key;
  unsigned long weight;  // numerator over base = 3 * 4^m
};

// one-part law with weights cleared to the common base
std::vector<PackedOutcome> packed_branch(unsigned bits, long len, int m, int shift_target,
                                         unsigned long base, const LabelOrder& lo) {
  std::vector<PackedOutcome> out;
  for (const auto& [p, q] : step_type(Label(m, bits), len, shift_target).mass) {
    mpq_class w = q * static_cast<long>(base);
    w.canonicalize();
    PackedOutcome o;
    o.weight = w.get_num().get_ui();
    for (const auto& part : p.parts) append_part(o.key, part.len, lo.rank[part.label.bits]);
    out.push_back(std::move(o));
  }
  return out;
}

const mpz_class& factorial(long n) {
  static std::vector<mpz_class> table{1};
  while (static_cast<long>(table.size()) <= n)
    table.push_back(table.back() * static_cast<long>(table.size()));
  return table[static_cast<std::size_t>(n)];
}

// multiset of `count` outcomes with multinomial coefficients
struct GroupTerm {
  std::string key;
  mpz_class weight;
};

void enumerate_multisets(const std::vector<PackedOutcome>& outcomes, std::size_t idx, long remaining,
                         const mpz_class& coeff, std::string& key, std::vector<GroupTerm>& out) {
  if (idx + 1 == outcomes.size()) {
    GroupTerm t;
    t.key = key;
    for (long i = 0; i < remaining; ++i) t.key = merge_keys(t.key, outcomes[idx].key);
    mpz_class wp;
    mpz_ui_pow_ui(wp.get_mpz_t(), outcomes[idx].weight, static_cast<unsigned long>(remaining));
    t.weight = coeff / factorial(remaining) * wp;
    out.push_back(std::move(t));
    return;
  }
  const std::string mark = key;
  mpz_class wpow = 1;
  for (long take = 0; take <= remaining; ++take) {
    enumerate_multisets(outcomes, idx + 1, remaining - take, coeff / factorial(take) * wpow, key, out);
    wpow *= static_cast<long>(outcomes[idx].weight);
    key = merge_keys(key, outcomes[idx].key);
  }
  key = mark;
}

// numerator vector: one component per tracked starting distribution
using NumVec = std::vector<mpz_class>;

struct PackedDist {
  int m = 1;
  int level = 0;
  std::size_t dim = 1;
  mpz_class denom = 1;
  std::unordered_map<std::string, NumVec> num;
};

PackedDist pack_all(const std::vector<const Data*>& ds, const LabelOrder& lo) {
  PackedDist out;
  out.m = ds.front()->m;
  out.level = ds.front()->level;
  out.dim = ds.size();
  for (const Data* d : ds) {
    if (d->m != out.m || d->level != out.level)
      throw std::invalid_argument("shared walk needs equal arity and level");
    for (const auto& [p, q] : d->mass)
      mpz_lcm(out.denom.get_mpz_t(), out.denom.get_mpz_t(), q.get_den().get_mpz_t());
  }
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (const auto& [p, q] : ds[i]->mass) {
      std::string key;  // canonical part order carries over
      for (const auto& part : p.parts) append_part(key, part.len, lo.rank[part.label.bits]);
      auto [it, fresh] = out.num.try_emplace(std::move(key));
      if (fresh) it->second.assign(out.dim, mpz_class(0));
      it->second[i] = q.get_num() * (out.denom / q.get_den());
    }
  return out;
}

void packed_step(PackedDist& dist, int shift_target, long max_support, const LabelOrder& lo) {
  const unsigned long base = 3ul * (1ul << (2 * dist.m));
  std::map<std::pair<unsigned, long>, std::vector<PackedOutcome>> branch_cache;
  std::map<std::tuple<unsigned, long, long>, std::vector<GroupTerm>> term_cache;
  std::size_t max_parts = 0;
  for (const auto& [key, n] : dist.num) max_parts = std::max(max_parts, key.size() / 3);
  mpz_class full;
  mpz_ui_pow_ui(full.get_mpz_t(), base, max_parts);

  std::unordered_map<std::string, NumVec> next;
  next.reserve(std::min<std::size_t>(dist.num.size() * 64, 1u << 24));
  const auto deposit = [&dist](std::unordered_map<std::string, NumVec>& sink, std::string&& key,
                               const mpz_class& w, const NumVec& v) {
    auto [it, fresh] = sink.try_emplace(std::move(key));
    if (fresh) {
      it->second.resize(dist.dim);
      for (std::size_t i = 0; i < dist.dim; ++i) it->second[i] = w * v[i];
    } else {
      for (std::size_t i = 0; i < dist.dim; ++i)
        mpz_addmul(it->second[i].get_mpz_t(), w.get_mpz_t(), v[i].get_mpz_t());
    }
  };

  std::unordered_map<std::string, NumVec> stage, stage2;
  for (const auto& [key, n] : dist.num) {
    const std::size_t nparts = key.size() / 3;
    if (nparts > 0 && 3 * key_part(key, 0, lo).len > 65535)
      throw resource_limit_error("part length overflows the packed representation at level " +
                                 std::to_string(dist.level + 1));
    std::map<std::pair<unsigned, long>, long> groups;
    for (std::size_t i = 0; i < nparts; ++i) {
      const PackedPart p = key_part(key, i, lo);
      groups[{p.bits, p.len}] += 1;
    }

    const auto group_terms = [&](const std::pair<unsigned, long>& gk,
                                 long count) -> const std::vector<GroupTerm>& {
      auto tit = term_cache.find({gk.first, gk.second, count});
      if (tit == term_cache.end()) {
        auto bit = branch_cache.find(gk);
        if (bit == branch_cache.end())
          bit = branch_cache
                    .emplace(gk, packed_branch(gk.first, gk.second, dist.m, shift_target, base, lo))
                    .first;
        std::vector<GroupTerm> terms;
        std::string scratch;
        enumerate_multisets(bit->second, 0, count, factorial(count), scratch, terms);
        tit = term_cache.emplace(std::make_tuple(gk.first, gk.second, count), std::move(terms)).first;
      }
      return tit->second;
    };

    // compensate partitions with fewer parts up to the shared denominator
    mpz_class comp;
    mpz_ui_pow_ui(comp.get_mpz_t(), base, max_parts - nparts);
    stage.clear();
    NumVec seed(dist.dim);
    for (std::size_t i = 0; i < dist.dim; ++i) seed[i] = comp * n[i];
    stage.emplace(std::string(), std::move(seed));

    // all groups but the last stay in a staging table; the last one streams
    // straight into the accumulator
    auto last = groups.end();
    --last;
    for (auto git = groups.begin(); git != last; ++git) {
      const auto& terms = group_terms(git->first, git->second);
      stage2.clear();
      for (const auto& [pk, v] : stage)
        for (const auto& t : terms) deposit(stage2, merge_keys(pk, t.key), t.weight, v);
      stage.swap(stage2);
    }
    const auto& terms = group_terms(last->first, last->second);
    for (const auto& [pk, v] : stage)
      for (const auto& t : terms) deposit(next, merge_keys(pk, t.key), t.weight, v);
    if (static_cast<long>(next.size()) > max_support)
      throw resource_limit_error("support exceeds " + std::to_string(max_support) +
                                 " while stepping to level " + std::to_string(dist.level + 1));
  }
  dist.num = std::move(next);
  dist.denom *= full;
  dist.level += 1;
}

std::vector<PropagateSummary> summaries_of(const PackedDist& dist) {
  std::vector<PropagateSummary> out(dist.dim);
  std::vector<mpz_class> totals(dist.dim, mpz_class(0));
  for (const auto& [key, v] : dist.num)
    for (std::size_t i = 0; i < dist.dim; ++i) {
      totals[i] += v[i];
      if (v[i] != 0) out[i].support += 1;
    }
  for (std::size_t i = 0; i < dist.dim; ++i) {
    out[i].level = dist.level;
    out[i].unit_mass = totals[i] == dist.denom;
  }
  return out;
}

}  // namespace

Data propagate(const Data& d, int steps, long max_support, int shift_target) {
  if (steps <= 0) return d;
  const LabelOrder lo = label_order(d.m);
  PackedDist dist = pack_all({&d}, lo);
  for (int s = 0; s < steps; ++s) packed_step(dist, shift_target, max_support, lo);
  Data out;
  out.m = d.m;
  out.level = dist.level;
  for (const auto& [key, n] : dist.num) {
    std::vector<Part> parts;
    for (std::size_t i = 0; i < key.size() / 3; ++i) {
      const PackedPart p = key_part(key, i, lo);
      parts.push_back({Label(d.m, p.bits), p.len});
    }
    mpq_class q(n[0], dist.denom);
    q.canonicalize();
    out.mass[TypedPartition(std::move(parts))] = std::move(q);
  }
  return out;
}

PropagateSummary propagate_summary(const Data& d, int steps, long max_support, int shift_target) {
  return propagate_summaries({d}, steps, max_support, shift_target)[0];
}

std::vector<PropagateSummary> propagate_summaries(const std::vector<Data>& ds, int steps,
                                                  long max_support, int shift_target) {
  if (ds.empty()) return {};
  std::vector<const Data*> ptrs;
  for (const auto& d : ds) ptrs.push_back(&d);
  const LabelOrder lo = label_order(ds.front().m);
  PackedDist dist = pack_all(ptrs, lo);
  for (int s = 0; s < steps; ++s) packed_step(dist, shift_target, max_support, lo);
  return summaries_of(dist);
}

Data cond_split(const Label& l, int shift_target) {
  if (l.n_start()) throw std::invalid_argument("conditional split needs an s-start label");
  const Label sh = shift_label(l, shift_target);
  const unsigned card = 1u << l.m;
  Data out;
  out.m = l.m;
  out.level = 1;
  const mpq_class w = mpq_class(1, static_cast<long>(card) * static_cast<long>(card));
  for (unsigned d1 = 0; d1 < card; ++d1)
    for (unsigned d2 = 0; d2 < card; ++d2) {
      const unsigned d3 = sh.bits ^ d1 ^ d2;
      out.mass[TypedPartition({{Label(l.m, d1), 1}, {Label(l.m, d2), 1}, {Label(l.m, d3), 1}})] += w;
    }
  return out;
}

namespace {

Data scale(const Data& d, const mpq_class& c) {
  Data out = d;
  for (auto& [p, q] : out.mass) q *= c;
  return out;
}

Data mix(std::initializer_list<Data> list) {
  Data out;
  bool first = true;
  for (const auto& d : list) {
    if (first) {
      out.m = d.m;
      out.level = d.level;
      first = false;
    }
    for (const auto& [p, q] : d.mass) out.mass[p] += q;
  }
  return out;
}

Data seed_step(const char* label, int m) { return step_partition(TypedPartition::parse(std::string("[") + label + ",1]"), m, 0); }

}  // namespace

Data initial_data(int model, int m) {
  const mpq_class half(1, 2), quarter(1, 4);
  if (m == 1) {
    switch (model) {
      case 1: return cond_split(Label::from_string("s"));
      case 2: return seed_step("s", 1);
      case 3: return mix({scale(cond_split(Label::from_string("s")), half), scale(seed_step("n", 1), half)});
      case 4: return mix({scale(seed_step("s", 1), half), scale(seed_step("n", 1), half)});
      default: break;
    }
  } else if (m == 2) {
    switch (model) {
      case 1: return cond_split(Label::from_string("ss"));
      case 2: return seed_step("ss", 2);
      case 3: return mix({scale(seed_step("ss", 2), half), scale(seed_step("sn", 2), half)});
      case 4: return mix({scale(seed_step("ss", 2), half), scale(seed_step("ns", 2), half)});
      case 5:
        return mix({scale(seed_step("ss", 2), quarter), scale(seed_step("sn", 2), quarter),
                    scale(seed_step("ns", 2), quarter), scale(seed_step("nn", 2), quarter)});
      default: break;
    }
  }
  throw std::invalid_argument("no such model");
}

std::vector<Part> restricted_step(const Part& p, int shift_target) {
  const Label sh = shift_label(p.label, shift_target);
  if (p.label.n_start()) return {{p.label, 2 * p.len}, {label_product(sh, p.label), p.len}};
  return {{sh, 3 * p.len}};
}

Data simulate_chain(const Data& initial, int steps, long samples, Rng& rng, int shift_target) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  // common-denominator thresholds for an exact draw from the initial law
  mpz_class denom_lcm = 1;
  for (const auto& [p, q] : initial.mass) mpz_lcm(denom_lcm.get_mpz_t(), denom_lcm.get_mpz_t(), q.get_den().get_mpz_t());
  std::vector<std::pair<mpz_class, const TypedPartition*>> cumulative;
  mpz_class acc = 0;
  for (const auto& [p, q] : initial.mass) {
    acc += q.get_num() * (denom_lcm / q.get_den());
    cumulative.emplace_back(acc, &p);
  }
  const unsigned card = 1u << initial.m;
  std::map<TypedPartition, long> counts;
  for (long s = 0; s < samples; ++s) {
    const mpz_class r = rng.below(acc);
    const TypedPartition* start = nullptr;
    for (const auto& [threshold, p] : cumulative)
      if (r < threshold) {
        start = p;
        break;
      }
    std::vector<Part> cur = start->parts;
    for (int t = 0; t < steps; ++t) {
      std::vector<Part> next;
      next.reserve(cur.size() * 2);
      for (const auto& part : cur) {
        const Label sh = shift_label(part.label, shift_target);
        if (part.label.n_start()) {
          const unsigned d1 = static_cast<unsigned>(rng.below(card));
          next.push_back({Label(initial.m, d1), 2 * part.len});
          next.push_back({Label(initial.m, sh.bits ^ d1), part.len});
        } else if (rng.below(3) < 2) {
          next.push_back({sh, 3 * part.len});
        } else {
          const unsigned d1 = static_cast<unsigned>(rng.below(card));
          const unsigned d2 = static_cast<unsigned>(rng.below(card));
          next.push_back({Label(initial.m, d1), part.len});
          next.push_back({Label(initial.m, d2), part.len});
          next.push_back({Label(initial.m, sh.bits ^ d1 ^ d2), part.len});
        }
      }
      cur = std::move(next);
    }
    counts[TypedPartition(std::move(cur))] += 1;
  }
  Data out;
  out.m = initial.m;
  out.level = initial.level + steps;
  for (const auto& [p, c] : counts) {
    mpq_class q(c, samples);
    q.canonicalize();
    out.mass[p] = q;
  }
  return out;
}

CycleData cycle_marginal(const Data& d) {
  CycleData out;
  for (const auto& [p, q] : d.mass) out[p.lengths()] += q;
  return out;
}

CycleData tA(const CycleData& c) {
  CycleData out;
  for (const auto& [s, q] : c) {
    CycleStructure t;
    for (long k : s) t.push_back(3 * k);
    out[t] += q;
  }
  return out;
}

CycleData dA(const CycleData& c) {
  CycleData out;
  for (const auto& [s, q] : c) {
    CycleStructure t;
    for (long k : s) {
      t.push_back(2 * k);
      t.push_back(k);
    }
    std::sort(t.begin(), t.end(), std::greater<long>());
    out[t] += q;
  }
  return out;
}

CycleData product(const CycleData& a, const CycleData& b) {
  CycleData out;
  for (const auto& [s, p] : a)
    for (const auto& [t, q] : b) {
      CycleStructure u = s;
      u.insert(u.end(), t.begin(), t.end());
      std::sort(u.begin(), u.end(), std::greater<long>());
      out[u] += p * q;
    }
  return out;
}

namespace {

template <typename M>
mpq_class tv_impl(const M& a, const M& b) {
  mpq_class s = 0;
  for (const auto& [k, p] : a) {
    const auto it = b.find(k);
    s += abs(p - (it == b.end() ? mpq_class(0) : it->second));
  }
  for (const auto& [k, q] : b)
    if (a.find(k) == a.end()) s += abs(q);
  return s / 2;
}

}  // namespace

mpq_class tv_exact(const CycleData& a, const CycleData& b) { return tv_impl(a, b); }
mpq_class tv_exact(const Data& a, const Data& b) { return tv_impl(a.mass, b.mass); }
double tv(const CycleData& a, const CycleData& b) { return tv_exact(a, b).get_d(); }
double tv(const Data& a, const Data& b) { return tv_exact(a, b).get_d(); }

SeedQuantity seed_quantity(int index, int m) {
  const auto make = [](const char* text, long num, long den, int lvl) {
    return SeedQuantity{TypedPartition::parse(text), mpq_class(num, den), lvl};
  };
  if (m == 1) {
    switch (index) {
      case 1: return make("[s,1][s,1][s,1]", 1, 12, 1);
      case 2: return make("[s,3]", 2, 3, 1);
      case 3: return make("[n,1][n,1][s,1]", 1, 4, 1);
      case 4: return make("[n,1]", 1, 2, 0);
      case 5: return make("[n,2][s,1]", 1, 2, 1);
      case 6: return make("[s,2][n,1]", 1, 2, 1);
      case 7: return make("[s,1]", 1, 1, 0);
      default: break;
    }
  } else if (m == 2) {
    switch (index) {
      case 1: return make("[ss,1][ss,1][ss,1]", 1, 48, 1);
      case 2: return make("[ss,3]", 2, 3, 1);
      case 3: return make("[nn,1][nn,1][ss,1]", 1, 16, 1);
      case 4: return make("[ns,1][ns,1][ss,1]", 1, 16, 1);
      case 5: return make("[sn,1][sn,1][ss,1]", 1, 16, 1);
      case 6: return make("[ns,1][sn,1][nn,1]", 1, 8, 1);
      case 7: return make("[nn,1]", 1, 4, 0);
      case 8: return make("[ss,1]", 1, 4, 0);
      case 9: return make("[sn,1]", 1, 4, 0);
      case 10: return make("[ns,1]", 1, 4, 0);
      default: break;
    }
  }
  throw std::invalid_argument("no such seed quantity");
}

CycleData seed_cycle_data(int index, int j, int m) {
  const SeedQuantity sq = seed_quantity(index, m);
  if (j < 1) throw std::invalid_argument("superscript level must be positive");
  CycleData out = cycle_marginal(propagate(delta(sq.seed, sq.seed_level, m), j - 1));
  for (auto& [s, q] : out) q *= sq.weight;
  return out;
}

nlohmann::json data_to_json(const Data& d) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [p, q] : d.mass)
    entries.push_back({{"partition", p.str()}, {"mass", q.get_str()}, {"mass_real", q.get_d()}});
  return {{"m", d.m}, {"level", d.level}, {"support", d.mass.size()}, {"entries", entries}};
}

nlohmann::json cycle_data_to_json(const CycleData& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [s, q] : c) {
    nlohmann::json lens = nlohmann::json::array();
    for (long k : s) lens.push_back(k);
    entries.push_back({{"cycles", lens}, {"mass", q.get_str()}, {"mass_real", q.get_d()}});
  }
  return entries;
}

}  // namespace treefactor
