#pragma once

// Exact algebra of automorphisms of the rooted 3-ary tree truncated at a
// finite level: portraits, sections, wreath (de)composition, cycle structure
// on leaves, and the cycle surgery maps (splitting / doubling / tripling).
//
// Conventions, fixed once and used everywhere:
//   * automorphisms act on the RIGHT of words: (uw)a = (u)a (w)a_u;
//   * compose(a, b) means "apply a, then b";
//   * a wreath tuple (a0,a1,a2)pi sends j*w to (j)pi * (w)a_j, i.e. the
//     sections are indexed by the source child;
//   * disjoint cycles are written starting at their minimal leaf (base-3
//     order) and listed sorted by that leaf; the "last element" of a cycle
//     is the preimage of its minimal leaf.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace treefactor {

long pow3(int n);

// permutation of {0,1,2}; img[c] is the image of c
struct Perm3 {
  std::array<std::uint8_t, 3> img{0, 1, 2};

  static Perm3 identity() { return {}; }
  static Perm3 transposition(int i, int j);
  // the 3-cycle 0 -> 1 -> 2 -> 0
  static Perm3 rotation();
  // "120" means 0 -> 1, 1 -> 2, 2 -> 0
  static Perm3 from_string(const std::string& s);

  bool is_identity() const { return img[0] == 0 && img[1] == 1 && img[2] == 2; }
  int apply(int c) const { return img[static_cast<std::size_t>(c)]; }
  // this, then o
  Perm3 then(const Perm3& o) const;
  Perm3 inverse() const;
  int sign() const;  // +1 even, -1 odd
  std::string str() const;

  friend bool operator==(const Perm3&, const Perm3&) = default;
};

using Word = std::vector<std::uint8_t>;

Word make_word(long value, int length);
long word_value(const Word& w);

// portrait entries in breadth-first order: index of the internal vertex at
// (depth d, base-3 value v) is (3^d - 1)/2 + v
struct TreeAut {
  int level = 0;
  std::vector<Perm3> portrait;  // (3^level - 1)/2 entries

  TreeAut() = default;
  explicit TreeAut(int n);  // identity at level n
  TreeAut(int n, std::vector<Perm3> p);

  friend bool operator==(const TreeAut&, const TreeAut&) = default;
};

long internal_vertex_count(int level);

Word apply_word(const TreeAut& a, const Word& w);
long apply_leaf(const TreeAut& a, long leaf);
// the full permutation induced on the 3^level leaves
std::vector<int> leaf_perm(const TreeAut& a);

TreeAut compose(const TreeAut& a, const TreeAut& b);
TreeAut inverse(const TreeAut& a);
// b * a * b^{-1}: apply b, then a, then b^{-1}
TreeAut conjugate(const TreeAut& a, const TreeAut& b);

TreeAut section(const TreeAut& a, const Word& u);

struct WreathParts {
  TreeAut s0, s1, s2;
  Perm3 root;
};
WreathParts wreath_decompose(const TreeAut& a);
TreeAut wreath_compose(const TreeAut& s0, const TreeAut& s1, const TreeAut& s2, const Perm3& root);

// iterated first-coordinate embedding a -> (a, id, id)
TreeAut embed(const TreeAut& a, int level);
TreeAut restrict_level(const TreeAut& a, int level);

using CycleStructure = std::vector<long>;  // cycle lengths, descending

// canonical disjoint cycles of the leaf permutation: each cycle starts at its
// minimal leaf and the cycles are sorted by that leaf
std::vector<std::vector<long>> cycle_decomposition(const TreeAut& a);
CycleStructure cycle_structure(const TreeAut& a);
CycleStructure perm_cycle_structure(const std::vector<int>& p);

// extend a by one level: the new leaf v*c maps to (v)a * (c)s[v]; s has one
// entry per level-n vertex, indexed by the source vertex v
TreeAut i_map(const std::vector<Perm3>& s, const TreeAut& a);

// i_map with s = id everywhere / a transposition resp. 3-cycle exactly at the
// last element of every disjoint cycle; a k-cycle turns into three k-cycles,
// a 2k-cycle plus a k-cycle, or a 3k-cycle respectively
TreeAut splitting(const TreeAut& a);
TreeAut doubling(const TreeAut& a);
TreeAut tripling(const TreeAut& a);

// canonical text form: level, then portrait entries breadth-first, each as a
// 3-digit image string, all space-separated
std::string to_text(const TreeAut& a);
TreeAut treeaut_from_text(const std::string& text);

}  // namespace treefactor
