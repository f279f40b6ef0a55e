#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "treefactor/rng.hpp"
#include "treefactor/treeauto.hpp"

#include <algorithm>

using namespace treefactor;

namespace {

const Perm3 rho = Perm3::rotation();        // (0,1,2)
const Perm3 tau = Perm3::transposition(0, 1);

TreeAut root_only(const Perm3& p, int level) {
  TreeAut a(level);
  a.portrait[0] = p;
  return a;
}

// x_1 = (0,1,2); x_n = (id, id, x_{n-1}) (0,1,2)
TreeAut adding_machine(int n) {
  TreeAut x = root_only(rho, 1);
  for (int k = 2; k <= n; ++k) x = wreath_compose(TreeAut(k - 1), TreeAut(k - 1), x, rho);
  return x;
}

TreeAut random_aut(int level, Rng& rng) {
  TreeAut a(level);
  for (auto& p : a.portrait) {
    static const char* tab[6] = {"012", "021", "102", "120", "201", "210"};
    p = Perm3::from_string(tab[rng.below(std::uint64_t{6})]);
  }
  return a;
}

Word str_word(const std::string& s) {
  Word w;
  for (char c : s) w.push_back(static_cast<std::uint8_t>(c - '0'));
  return w;
}

}  // namespace

TEST_CASE("perm3 basics") {
  CHECK(rho.str() == "120");
  CHECK(rho.then(rho).str() == "201");
  CHECK(rho.then(rho).then(rho).is_identity());
  CHECK(tau.then(tau).is_identity());
  CHECK(rho.inverse() == Perm3::from_string("201"));
  CHECK(rho.sign() == 1);
  CHECK(tau.sign() == -1);
  CHECK(Perm3::identity().sign() == 1);
  CHECK_THROWS_AS(Perm3::from_string("122"), std::invalid_argument);
}

TEST_CASE("single letter action and identity") {
  TreeAut a = root_only(rho, 1);
  CHECK(apply_word(a, str_word("0")) == str_word("1"));
  TreeAut id3(3);
  for (long v = 0; v < 27; ++v) CHECK(apply_leaf(id3, v) == v);
}

TEST_CASE("adding machine orbit at level 2") {
  TreeAut x2 = adding_machine(2);
  // (0,0) -> (1,0) -> (2,0) -> (0,1): the carry propagates through child 2
  CHECK(apply_word(x2, str_word("00")) == str_word("10"));
  CHECK(apply_word(x2, str_word("10")) == str_word("20"));
  CHECK(apply_word(x2, str_word("20")) == str_word("01"));
  CHECK(cycle_structure(x2) == CycleStructure{9});
}

TEST_CASE("compose follows the right-action order") {
  TreeAut x1 = root_only(rho, 1);
  CHECK(compose(x1, x1).portrait[0] == Perm3::from_string("201"));
  TreeAut t1 = root_only(tau, 1);
  CHECK(compose(t1, t1) == TreeAut(1));

  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int lvl = 1 + static_cast<int>(rng.below(std::uint64_t{5}));
    TreeAut a = random_aut(lvl, rng), b = random_aut(lvl, rng);
    TreeAut c = compose(a, b);
    const long leaf = static_cast<long>(rng.below(static_cast<std::uint64_t>(pow3(lvl))));
    CHECK(apply_leaf(c, leaf) == apply_leaf(b, apply_leaf(a, leaf)));
  }
}

TEST_CASE("inverse") {
  CHECK(inverse(TreeAut(2)) == TreeAut(2));
  TreeAut x2 = adding_machine(2);
  CHECK(compose(x2, inverse(x2)) == TreeAut(2));
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    TreeAut a = random_aut(4, rng);
    CHECK(compose(a, inverse(a)) == TreeAut(4));
    CHECK(compose(inverse(a), a) == TreeAut(4));
  }
}

TEST_CASE("sections and the section law") {
  TreeAut x2 = adding_machine(2);
  CHECK(section(x2, str_word("2")) == adding_machine(1));
  CHECK(section(x2, str_word("0")) == TreeAut(1));
  CHECK(section(TreeAut(3), str_word("12")) == TreeAut(1));

  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    TreeAut a = random_aut(5, rng);
    const int ulen = 1 + static_cast<int>(rng.below(std::uint64_t{4}));
    Word u = make_word(static_cast<long>(rng.below(static_cast<std::uint64_t>(pow3(ulen)))), ulen);
    Word w = make_word(static_cast<long>(rng.below(static_cast<std::uint64_t>(pow3(5 - ulen)))), 5 - ulen);
    Word uw = u;
    uw.insert(uw.end(), w.begin(), w.end());
    Word lhs = apply_word(a, uw);
    Word rhs = apply_word(a, u);
    Word tail = apply_word(section(a, u), w);
    rhs.insert(rhs.end(), tail.begin(), tail.end());
    CHECK(lhs == rhs);
  }
}

TEST_CASE("wreath decomposition round trip") {
  TreeAut x2 = adding_machine(2);
  WreathParts parts = wreath_decompose(x2);
  CHECK(parts.s0 == TreeAut(1));
  CHECK(parts.s1 == TreeAut(1));
  CHECK(parts.s2 == adding_machine(1));
  CHECK(parts.root == rho);
  CHECK(wreath_compose(parts.s0, parts.s1, parts.s2, parts.root) == x2);
  CHECK(wreath_compose(TreeAut(0), TreeAut(0), TreeAut(0), Perm3::identity()) == TreeAut(1));

  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    TreeAut a = random_aut(1 + static_cast<int>(rng.below(std::uint64_t{5})), rng);
    WreathParts w = wreath_decompose(a);
    CHECK(wreath_compose(w.s0, w.s1, w.s2, w.root) == a);
  }
  CHECK_THROWS_AS(wreath_decompose(TreeAut(0)), std::invalid_argument);
}

TEST_CASE("embed acts on the leftmost subtree only") {
  TreeAut e = embed(adding_machine(1), 2);
  for (long c = 0; c < 3; ++c) {
    CHECK(apply_leaf(e, c) == (c + 1) % 3);       // leaves 0c rotate
    CHECK(apply_leaf(e, 3 + c) == 3 + c);         // others fixed
    CHECK(apply_leaf(e, 6 + c) == 6 + c);
  }
  CHECK(cycle_structure(e) == CycleStructure{3, 1, 1, 1, 1, 1, 1});
  CHECK(embed(TreeAut(1), 4) == TreeAut(4));
  CHECK_THROWS_AS(embed(adding_machine(2), 1), std::invalid_argument);
}

TEST_CASE("restriction") {
  CHECK(restrict_level(adding_machine(3), 1) == root_only(rho, 1));
  TreeAut y2 = wreath_compose(TreeAut(1), root_only(tau, 1), adding_machine(1), tau);
  CHECK(restrict_level(y2, 1) == root_only(tau, 1));
  CHECK(restrict_level(y2, 2) == y2);

  // restriction is a homomorphism
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    TreeAut a = random_aut(4, rng), b = random_aut(4, rng);
    CHECK(restrict_level(compose(a, b), 2) == compose(restrict_level(a, 2), restrict_level(b, 2)));
  }
}

TEST_CASE("cycle structure and canonical decomposition") {
  // z_2 = (y_1, y_1, x_1) with trivial root
  TreeAut y1 = root_only(tau, 1);
  TreeAut z2 = wreath_compose(y1, y1, adding_machine(1), Perm3::identity());
  CHECK(cycle_structure(z2) == CycleStructure{3, 2, 2, 1, 1});
  CHECK(cycle_structure(TreeAut(2)) == CycleStructure(9, 1));

  auto cycles = cycle_decomposition(z2);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    CHECK(*std::min_element(cycles[i].begin(), cycles[i].end()) == cycles[i].front());
    if (i > 0) CHECK(cycles[i - 1].front() < cycles[i].front());
    // the listed last element maps back to the minimal leaf
    CHECK(apply_leaf(z2, cycles[i].back()) == cycles[i].front());
  }
}

TEST_CASE("i_map places assignments at source vertices") {
  // (0,1,2) at vertex "2" applied to the root rotation gives the level-2 adding machine
  std::vector<Perm3> s(3);
  s[2] = rho;
  CHECK(i_map(s, root_only(rho, 1)) == adding_machine(2));
  CHECK_THROWS_AS(i_map(std::vector<Perm3>(4), root_only(rho, 1)), std::invalid_argument);
}

TEST_CASE("splitting, doubling, tripling on explicit elements") {
  TreeAut x1 = adding_machine(1);
  CHECK(tripling(x1) == adding_machine(2));
  CHECK(cycle_structure(doubling(x1)) == CycleStructure{6, 3});
  CHECK(cycle_structure(splitting(root_only(tau, 1))) == CycleStructure{2, 2, 2, 1, 1, 1});
  // the identity splits into three rotated fixed points under tripling
  CHECK(tripling(TreeAut(1)) ==
        wreath_compose(root_only(rho, 1), root_only(rho, 1), root_only(rho, 1), Perm3::identity()));
}

TEST_CASE("tripling of the identity at level 0 is the rotation") {
  CHECK(tripling(TreeAut(0)) == root_only(rho, 1));
}

TEST_CASE("cycle arithmetic of the surgery maps") {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int lvl = 1 + static_cast<int>(rng.below(std::uint64_t{4}));
    TreeAut a = random_aut(lvl, rng);
    CycleStructure base = cycle_structure(a);

    CycleStructure split_expect;
    for (long k : base) split_expect.insert(split_expect.end(), 3, k);
    std::sort(split_expect.begin(), split_expect.end(), std::greater<long>());
    CHECK(cycle_structure(splitting(a)) == split_expect);

    CycleStructure dbl_expect;
    for (long k : base) {
      dbl_expect.push_back(2 * k);
      dbl_expect.push_back(k);
    }
    std::sort(dbl_expect.begin(), dbl_expect.end(), std::greater<long>());
    CHECK(cycle_structure(doubling(a)) == dbl_expect);

    CycleStructure tri_expect;
    for (long k : base) tri_expect.push_back(3 * k);
    std::sort(tri_expect.begin(), tri_expect.end(), std::greater<long>());
    CHECK(cycle_structure(tripling(a)) == tri_expect);

    // surgery extends without changing lower levels
    CHECK(restrict_level(splitting(a), lvl) == a);
    CHECK(restrict_level(doubling(a), lvl) == a);
    CHECK(restrict_level(tripling(a), lvl) == a);
  }
}

TEST_CASE("leaf permutation is faithful") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    TreeAut a = random_aut(3, rng), b = random_aut(3, rng);
    if (leaf_perm(a) == leaf_perm(b))
      CHECK(a == b);
    else
      CHECK_FALSE(a == b);
  }
  // and two distinct portraits never collapse to one leaf map
  TreeAut a(2), b(2);
  b.portrait[1] = tau;
  CHECK(leaf_perm(a) != leaf_perm(b));
}

TEST_CASE("text serialization round trip") {
  TreeAut x3 = adding_machine(3);
  CHECK(to_text(x3) == "3 120 012 012 120 012 012 012 012 012 012 012 012 120");
  CHECK(treeaut_from_text(to_text(x3)) == x3);
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    TreeAut a = random_aut(4, rng);
    CHECK(treeaut_from_text(to_text(a)) == a);
  }
  CHECK_THROWS_AS(treeaut_from_text("1 312"), std::invalid_argument);
  CHECK_THROWS_AS(treeaut_from_text("2 012"), std::invalid_argument);
}
