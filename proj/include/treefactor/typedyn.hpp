#pragma once

// Typed factorization dynamics.
//
// State: a partition of 3^level into parts [label, length], where a label is a
// word over {n, s} of length m recording quadratic residue classes along an
// m-cycle of base points.  The branching step sends each part independently to
// a random refinement one level deeper:
//
//   s-start part [l, k]:  prob 2/3 -> {[shift(l), 3k]}
//                         prob 1/3 -> {[d1,k],[d2,k],[d3,k]}, (d1,d2,d3)
//                                     uniform over ordered triples with
//                                     d1*d2*d3 = shift(l)
//   n-start part [l, k]:  {[d1,2k],[d2,k]}, (d1,d2) uniform over ordered
//                         pairs with d1*d2 = shift(l)
//
// Labels multiply componentwise (n = -1, s = +1); shift cycles the letters
// and re-reads one of them, see shift_label.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <nlohmann/json.hpp>

#include "treefactor/errors.hpp"
#include "treefactor/rng.hpp"
#include "treefactor/treeauto.hpp"

namespace treefactor {

// Sign word of length m; bit k set means letter k is 'n' (a non-square).
struct Label {
  int m = 1;
  unsigned bits = 0;

  Label() = default;
  Label(int m_, unsigned bits_);
  static Label from_string(const std::string& s);

  bool n_start() const { return (bits & 1u) != 0; }
  std::string str() const;

  friend bool operator==(const Label& a, const Label& b) = default;
};

// Componentwise product of sign words.
Label label_product(const Label& a, const Label& b);

// Letters move one step towards the front; the vacated last slot re-reads
// letter j (1-based) of the original word.  For m = 1 this is the identity,
// for m = 2 with j = 1 it swaps the two letters.
Label shift_label(const Label& c, int j = 1);

// 'n' sorts before 's', letter by letter.
bool label_less(const Label& a, const Label& b);

struct Part {
  Label label;
  long len = 1;

  friend bool operator==(const Part& a, const Part& b) = default;
};

// Canonical order: length descending, then label ascending.
bool part_less(const Part& a, const Part& b);

// Multiset of parts, kept in canonical order.
struct TypedPartition {
  std::vector<Part> parts;

  TypedPartition() = default;
  explicit TypedPartition(std::vector<Part> p);
  static TypedPartition parse(const std::string& text);  // "[sn,2][ss,1]"

  long total() const;
  CycleStructure lengths() const;  // descending
  std::string str() const;

  friend bool operator==(const TypedPartition& a, const TypedPartition& b) = default;
  friend bool operator<(const TypedPartition& a, const TypedPartition& b);
};

TypedPartition merge(const TypedPartition& a, const TypedPartition& b);

// Finitely supported rational distribution over typed partitions.
struct Data {
  int m = 1;
  int level = 1;
  std::map<TypedPartition, mpq_class> mass;

  mpq_class total_mass() const;
};

Data delta(const TypedPartition& p, int level, int m);

// One-step law of a single part.
Data step_type(const Label& l, long k, int shift_target = 1);

// Independent refinement of every part; masses convolve.  `p` sits at
// `level`, the result one deeper.
Data step_partition(const TypedPartition& p, int m, int level, int shift_target = 1);

// Push a distribution a given number of steps.  Throws resource_limit_error
// if the support would exceed max_support.
Data propagate(const Data& d, int steps, long max_support = 1000000, int shift_target = 1);

// Same walk without materializing the rational masses: support size and an
// exact unit-mass check, for depths where the full table is too large.
struct PropagateSummary {
  int level = 0;
  long support = 0;
  bool unit_mass = false;
};
PropagateSummary propagate_summary(const Data& d, int steps, long max_support = 1000000,
                                   int shift_target = 1);

// Several distributions of the same arity walked over one shared support;
// much cheaper than separate walks when the supports overlap.
std::vector<PropagateSummary> propagate_summaries(const std::vector<Data>& ds, int steps,
                                                  long max_support = 1000000, int shift_target = 1);

// The 1/3-branch of the s-start step alone, renormalized.
Data cond_split(const Label& l, int shift_target = 1);

// Level-1 starting distributions for the supported models.
//   m = 1: 1..4,  m = 2: 1..5.
Data initial_data(int model, int m);

// Deterministic one-outcome refinement used by the typed tree substitution:
// an s-start part has the single child [shift(l), 3k]; an n-start part has
// children [l, 2k] and [shift(l)*l, k] in that order.
std::vector<Part> restricted_step(const Part& p, int shift_target = 1);

// Monte Carlo image of `initial` after `steps` steps: exact empirical
// frequencies with denominator `samples`.
Data simulate_chain(const Data& initial, int steps, long samples, Rng& rng, int shift_target = 1);

// Distribution over unlabeled cycle structures.
using CycleData = std::map<CycleStructure, mpq_class>;

CycleData cycle_marginal(const Data& d);

// Structure-level images of splitting one level down.
CycleData tA(const CycleData& c);  // every k becomes 3k
CycleData dA(const CycleData& c);  // every k becomes 2k, k

// Distribution of the disjoint union of independent draws.
CycleData product(const CycleData& a, const CycleData& b);

mpq_class tv_exact(const CycleData& a, const CycleData& b);
mpq_class tv_exact(const Data& a, const Data& b);
double tv(const CycleData& a, const CycleData& b);
double tv(const Data& a, const Data& b);

// Weighted seed partitions behind the coset frequency identities.
struct SeedQuantity {
  TypedPartition seed;
  mpq_class weight;
  int seed_level = 1;  // 0: parts sum to 1, 1: parts sum to 3
};

// m = 1: index 1..7,  m = 2: index 1..10.
SeedQuantity seed_quantity(int index, int m);

// weight * cycle_marginal of the seed pushed to superscript level j
// (j - 1 steps; parts then sum to 3^(j-1) times the seed total).
CycleData seed_cycle_data(int index, int j, int m);

nlohmann::json data_to_json(const Data& d);
nlohmann::json cycle_data_to_json(const CycleData& c);

}  // namespace treefactor
