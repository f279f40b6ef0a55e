#include "treefactor/treeauto.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace treefactor {

long pow3(int n) {
  assert(n >= 0 && n <= 38);
  long r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

Perm3 Perm3::transposition(int i, int j) {
  if (i < 0 || i > 2 || j < 0 || j > 2 || i == j) throw std::invalid_argument("transposition needs two distinct points in {0,1,2}");
  Perm3 p;
  std::swap(p.img[static_cast<std::size_t>(i)], p.img[static_cast<std::size_t>(j)]);
  return p;
}

Perm3 Perm3::rotation() {
  Perm3 p;
  p.img = {1, 2, 0};
  return p;
}

Perm3 Perm3::from_string(const std::string& s) {
  if (s.size() != 3) throw std::invalid_argument("permutation string must have 3 digits");
  Perm3 p;
  bool seen[3] = {false, false, false};
  for (int c = 0; c < 3; ++c) {
    int v = s[static_cast<std::size_t>(c)] - '0';
    if (v < 0 || v > 2 || seen[v]) throw std::invalid_argument("permutation string must be a bijection of {0,1,2}");
    seen[v] = true;
    p.img[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(v);
  }
  return p;
}

Perm3 Perm3::then(const Perm3& o) const {
  Perm3 r;
  for (std::size_t c = 0; c < 3; ++c) r.img[c] = o.img[img[c]];
  return r;
}

Perm3 Perm3::inverse() const {
  Perm3 r;
  for (std::size_t c = 0; c < 3; ++c) r.img[img[c]] = static_cast<std::uint8_t>(c);
  return r;
}

int Perm3::sign() const {
  // a permutation of three points is odd exactly when it is a transposition
  int fixed = 0;
  for (std::size_t c = 0; c < 3; ++c)
    if (img[c] == c) ++fixed;
  return fixed == 1 ? -1 : 1;
}

std::string Perm3::str() const {
  std::string s(3, '0');
  for (std::size_t c = 0; c < 3; ++c) s[c] = static_cast<char>('0' + img[c]);
  return s;
}

Word make_word(long value, int length) {
  if (length < 0 || value < 0 || value >= pow3(length)) throw std::invalid_argument("word value out of range");
  Word w(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    w[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value % 3);
    value /= 3;
  }
  return w;
}

long word_value(const Word& w) {
  long v = 0;
  for (std::uint8_t c : w) {
    assert(c < 3);
    v = v * 3 + c;
  }
  return v;
}

long internal_vertex_count(int level) {
  if (level < 0) throw std::invalid_argument("level must be non-negative");
  return (pow3(level) - 1) / 2;
}

TreeAut::TreeAut(int n) : level(n), portrait(static_cast<std::size_t>(internal_vertex_count(n))) {}

TreeAut::TreeAut(int n, std::vector<Perm3> p) : level(n), portrait(std::move(p)) {
  if (static_cast<long>(portrait.size()) != internal_vertex_count(n))
    throw std::invalid_argument("portrait size does not match level");
}

namespace {

// index of the internal vertex at (depth, value)
inline long vertex_index(int depth, long value) { return (pow3(depth) - 1) / 2 + value; }

}  // namespace

Word apply_word(const TreeAut& a, const Word& w) {
  if (static_cast<int>(w.size()) > a.level) throw std::invalid_argument("word longer than the automorphism level");
  Word out(w.size());
  long value = 0;  // base-3 value of the input prefix
  for (std::size_t d = 0; d < w.size(); ++d) {
    const Perm3& p = a.portrait[static_cast<std::size_t>(vertex_index(static_cast<int>(d), value))];
    out[d] = static_cast<std::uint8_t>(p.apply(w[d]));
    value = value * 3 + w[d];
  }
  return out;
}

long apply_leaf(const TreeAut& a, long leaf) {
  long value = 0;
  long out = 0;
  long shift = pow3(a.level);
  for (int d = 0; d < a.level; ++d) {
    shift /= 3;
    const long c = (leaf / shift) % 3;
    const Perm3& p = a.portrait[static_cast<std::size_t>(vertex_index(d, value))];
    out = out * 3 + p.apply(static_cast<int>(c));
    value = value * 3 + c;
  }
  return out;
}

std::vector<int> leaf_perm(const TreeAut& a) {
  const long n = pow3(a.level);
  std::vector<int> p(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = static_cast<int>(apply_leaf(a, i));
  return p;
}

TreeAut compose(const TreeAut& a, const TreeAut& b) {
  if (a.level != b.level) throw std::invalid_argument("compose needs equal levels");
  TreeAut r(a.level);
  // portrait of ab at u is portrait_a(u) followed by portrait_b((u)a)
  for (int d = 0; d < a.level; ++d) {
    const long cnt = pow3(d);
    for (long v = 0; v < cnt; ++v) {
      const long iu = vertex_index(d, v);
      const long vu = word_value(apply_word(a, make_word(v, d)));
      r.portrait[static_cast<std::size_t>(iu)] =
          a.portrait[static_cast<std::size_t>(iu)].then(b.portrait[static_cast<std::size_t>(vertex_index(d, vu))]);
    }
  }
  return r;
}

TreeAut inverse(const TreeAut& a) {
  TreeAut r(a.level);
  for (int d = 0; d < a.level; ++d) {
    const long cnt = pow3(d);
    for (long v = 0; v < cnt; ++v) {
      const long vu = word_value(apply_word(a, make_word(v, d)));
      r.portrait[static_cast<std::size_t>(vertex_index(d, vu))] =
          a.portrait[static_cast<std::size_t>(vertex_index(d, v))].inverse();
    }
  }
  return r;
}

TreeAut conjugate(const TreeAut& a, const TreeAut& b) { return compose(compose(b, a), inverse(b)); }

TreeAut section(const TreeAut& a, const Word& u) {
  if (static_cast<int>(u.size()) > a.level)
    throw std::invalid_argument("section word deeper than the level");
  const int k = static_cast<int>(u.size());
  const long base = word_value(u);
  TreeAut r(a.level - k);
  for (int d = 0; d < r.level; ++d) {
    const long cnt = pow3(d);
    for (long v = 0; v < cnt; ++v)
      r.portrait[static_cast<std::size_t>(vertex_index(d, v))] =
          a.portrait[static_cast<std::size_t>(vertex_index(d + k, base * cnt + v))];
  }
  return r;
}

WreathParts wreath_decompose(const TreeAut& a) {
  if (a.level < 1) throw std::invalid_argument("wreath decomposition needs level >= 1");
  return {section(a, {0}), section(a, {1}), section(a, {2}), a.portrait[0]};
}

TreeAut wreath_compose(const TreeAut& s0, const TreeAut& s1, const TreeAut& s2, const Perm3& root) {
  if (s0.level != s1.level || s1.level != s2.level) throw std::invalid_argument("wreath sections need equal levels");
  TreeAut r(s0.level + 1);
  r.portrait[0] = root;
  const TreeAut* secs[3] = {&s0, &s1, &s2};
  for (int d = 1; d <= s0.level; ++d) {
    const long sub = pow3(d - 1);
    for (long j = 0; j < 3; ++j)
      for (long v = 0; v < sub; ++v)
        r.portrait[static_cast<std::size_t>(vertex_index(d, j * sub + v))] =
            secs[j]->portrait[static_cast<std::size_t>(vertex_index(d - 1, v))];
  }
  return r;
}

TreeAut embed(const TreeAut& a, int level) {
  if (level < a.level) throw std::invalid_argument("embed target level below the element level");
  TreeAut r = a;
  while (r.level < level) r = wreath_compose(r, TreeAut(r.level), TreeAut(r.level), Perm3::identity());
  return r;
}

TreeAut restrict_level(const TreeAut& a, int level) {
  if (level > a.level) throw std::invalid_argument("restriction level above the element level");
  TreeAut r(level);
  std::copy(a.portrait.begin(), a.portrait.begin() + internal_vertex_count(level), r.portrait.begin());
  return r;
}

std::vector<std::vector<long>> cycle_decomposition(const TreeAut& a) {
  const long n = pow3(a.level);
  std::vector<int> p = leaf_perm(a);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::vector<long>> cycles;
  for (long i = 0; i < n; ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    std::vector<long> cyc;
    long j = i;
    do {
      seen[static_cast<std::size_t>(j)] = true;
      cyc.push_back(j);
      j = p[static_cast<std::size_t>(j)];
    } while (j != i);
    cycles.push_back(std::move(cyc));
  }
  return cycles;  // construction order = sorted by minimal leaf
}

CycleStructure perm_cycle_structure(const std::vector<int>& p) {
  std::vector<bool> seen(p.size(), false);
  CycleStructure cs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    long len = 0;
    std::size_t j = i;
    do {
      seen[j] = true;
      ++len;
      j = static_cast<std::size_t>(p[j]);
    } while (j != i);
    cs.push_back(len);
  }
  std::sort(cs.begin(), cs.end(), std::greater<long>());
  return cs;
}

CycleStructure cycle_structure(const TreeAut& a) { return perm_cycle_structure(leaf_perm(a)); }

TreeAut i_map(const std::vector<Perm3>& s, const TreeAut& a) {
  const long n = pow3(a.level);
  if (static_cast<long>(s.size()) != n) throw std::invalid_argument("one assignment per bottom vertex required");
  TreeAut r(a.level + 1);
  std::copy(a.portrait.begin(), a.portrait.end(), r.portrait.begin());
  std::copy(s.begin(), s.end(), r.portrait.begin() + internal_vertex_count(a.level));
  return r;
}

namespace {

TreeAut cycle_surgery(const TreeAut& a, const Perm3& twist) {
  std::vector<Perm3> s(static_cast<std::size_t>(pow3(a.level)));
  for (const auto& cyc : cycle_decomposition(a)) s[static_cast<std::size_t>(cyc.back())] = twist;
  return i_map(s, a);
}

}  // namespace

TreeAut splitting(const TreeAut& a) { return i_map(std::vector<Perm3>(static_cast<std::size_t>(pow3(a.level))), a); }
TreeAut doubling(const TreeAut& a) { return cycle_surgery(a, Perm3::transposition(0, 1)); }
TreeAut tripling(const TreeAut& a) { return cycle_surgery(a, Perm3::rotation()); }

std::string to_text(const TreeAut& a) {
  std::ostringstream os;
  os << a.level;
  for (const Perm3& p : a.portrait) os << ' ' << p.str();
  return os.str();
}

TreeAut treeaut_from_text(const std::string& text) {
  std::istringstream is(text);
  int level = -1;
  if (!(is >> level)) throw std::invalid_argument("malformed element text: missing level");
  TreeAut r(level);
  std::string tok;
  for (auto& slot : r.portrait) {
    if (!(is >> tok)) throw std::invalid_argument("malformed element text: too few entries");
    slot = Perm3::from_string(tok);
  }
  if (is >> tok) throw std::invalid_argument("malformed element text: trailing entries");
  return r;
}

}  // namespace treefactor
