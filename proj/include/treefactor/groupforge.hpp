#pragma once

// Self-similar subgroups of Aut(T) attached to the typed dynamics, and the
// machinery to measure them: stabilizer chains, coset unions, cycle type
// distributions, small quotient identification.

#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <nlohmann/json.hpp>

#include "treefactor/errors.hpp"
#include "treefactor/rng.hpp"
#include "treefactor/treeauto.hpp"
#include "treefactor/typedyn.hpp"

namespace treefactor {

// Leaf permutations in one-line notation; mult composes left factor first.
using Perm = std::vector<int>;

Perm identity_perm(int degree);
Perm perm_mult(const Perm& a, const Perm& b);
Perm perm_inverse(const Perm& p);
Perm perm_conjugate(const Perm& a, const Perm& b);  // b a b^-1
bool perm_is_identity(const Perm& p);

// Named generators x, y, z, l, k by the wreath recursions
//   x_n = (1, 1, x_{n-1}) rho      y_n = (1, y_{n-1}, x_{n-1}) tau
//   z_n = (y_{n-1}, y_{n-1}, x_{n-1})
//   l_n = (1, l_{n-1}, y_{n-1}) tau
//   k_n = (l_{n-1}, l_{n-1}, x_{n-1})
// with x_1 = rho, y_1 = l_1 = tau, z_1 = k_1 = 1.
TreeAut generator(char name, int n);

// Automorphism together with one label per leaf cycle, keyed by the cycle's
// least leaf.
struct TypedAut {
  TreeAut aut;
  std::map<long, Label> types;
};

TypedAut typed_base_generator(char name, int m);

// One substitution step: an s-labeled cycle triples, an n-labeled cycle
// doubles, and child cycles inherit labels through restricted_step (the
// longer child first).
TypedAut typed_iterate(const TypedAut& t, int shift_target = 1);

// n - 1 substitution steps from the level-1 seed.
TypedAut typed_generator(char name, int n, int m);

// Parity character on the second level: product of the four corner signs.
int sgn(const TreeAut& a);

// Permutation group with a deterministic stabilizer chain.
class PermGroup {
 public:
  explicit PermGroup(int degree);

  void add_generator(const Perm& p);
  void add_generator(const TreeAut& a);

  int degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }
  mpz_class order() const;
  bool contains(const Perm& p) const;
  bool contains(const TreeAut& a) const;
  Perm sample(Rng& rng) const;  // uniform
  // explicit closure; throws resource_limit_error past the cap
  std::vector<Perm> elements(long cap = 1000000) const;

 private:
  struct Level {
    int point;
    std::vector<Perm> gens;  // chain generators stored at this depth
    std::map<int, Perm> transversal;
    bool verified = false;
  };
  std::vector<Perm> chain_gens(std::size_t from) const;
  void rebuild_orbit(std::size_t i);
  // returns the residue and the level it stopped at
  std::pair<Perm, std::size_t> sift(const Perm& p, std::size_t from) const;
  void insert_chain(const Perm& p);
  void verify();

  int degree_;
  std::vector<Perm> gens_;
  std::vector<Level> levels_;
};

PermGroup group_from(const std::vector<TreeAut>& gens, int level);

// Closure of a generating set of same-level automorphisms; throws
// resource_limit_error past the cap.  The leaf action is faithful, so the
// closure is keyed on it.
std::vector<TreeAut> aut_elements(const std::vector<TreeAut>& gens, int level, long cap = 1000000);

// smallest normal subgroup of <ambient> containing <seeds>
PermGroup normal_closure(const std::vector<Perm>& ambient_gens, const std::vector<Perm>& seeds,
                         int degree);

// The tower: L keeps the split letters moving, M adds the doubling
// generators, H is the embedded copy of the previous floor together with its
// two rotations, K is the normal closure of H and the central letters.
enum class GroupKind { M, L, H, K };

std::vector<TreeAut> group_generators(GroupKind kind, int n, int m);
PermGroup build_group(GroupKind kind, int n, int m);

// Starting-law groups: the subgroup of M_n whose cycle statistics the model
// with this index reproduces.
PermGroup model_group(int model, int n, int m);

// Full automorphism group of the depth-n tree.
std::vector<TreeAut> aut_group_generators(int n);

struct QuotientInfo {
  long index = 0;
  bool normal = false;
  std::string name;  // C1 C2 C3 C4 V4 S3 C6 A4 ... or "other"
};

// Identify G / N for small index; checks normality of N first.
QuotientInfo identify_quotient(const PermGroup& g, const PermGroup& n_sub, long max_index = 4096);

// Union of left cosets rep * sub inside an ambient group.
struct CosetUnion {
  PermGroup sub;
  std::vector<Perm> reps;
  mpz_class ambient_order;
};

// Cycle type mass of the union, normalized by the ambient order.
CycleData cycle_data_exhaustive(const CosetUnion& u, long cap = 2000000);
CycleData cycle_data_sampled(const CosetUnion& u, long samples, Rng& rng);

// The coset families whose cycle data the seeded quantities predict.
//   m = 1: items 1..4,   m = 2: items 1..9.
CosetUnion coset_family(int item, int n, int m);
// matching seed index and superscript for seed_cycle_data
int family_seed_index(int item, int m);
int family_superscript(int item, int n, int m);

struct GroupFacts {
  int n = 1;
  int m = 1;
  mpz_class order_aut, order_m, order_l, order_h, order_k, order_l_prev;
  mpz_class index_ml, index_lh, index_lk, index_kh;
  QuotientInfo quot_ml, quot_kh, quot_lh;
  bool with_quotients = false;
};

GroupFacts group_facts(int n, int m, bool with_quotients = true);

// closed forms
mpz_class aut_order_formula(int n);
mpz_class m_order_formula(int n, int m);

// claim-by-claim comparison of computed facts against the closed forms
nlohmann::json theorem_report(const GroupFacts& f);

}  // namespace treefactor
