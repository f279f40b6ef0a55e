#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "treefactor/groupforge.hpp"
#include "treefactor/typedyn.hpp"

using namespace treefactor;

namespace {

const Perm3 RHO = Perm3::rotation();
const Perm3 TAU = Perm3::transposition(0, 1);

TreeAut root_only(const Perm3& p, int level) {
  TreeAut a(level);
  a.portrait[0] = p;
  return a;
}

TreeAut random_aut(int level, Rng& rng) {
  TreeAut a(level);
  for (auto& p : a.portrait) {
    const int c = static_cast<int>(rng.below(6));
    const Perm3 choices[6] = {Perm3::identity(),          RHO,
                              RHO.then(RHO),              TAU,
                              Perm3::transposition(0, 2), Perm3::transposition(1, 2)};
    p = choices[c];
  }
  return a;
}

mpq_class cd_mass(const CycleData& c) {
  mpq_class total = 0;
  for (const auto& [cs, q] : c) total += q;
  return total;
}

CycleData model_marginal(int model, int m, int steps) {
  return cycle_marginal(propagate(initial_data(model, m), steps));
}

}  // namespace

TEST_CASE("leaf permutations form a faithful right action") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const TreeAut a = random_aut(3, rng), b = random_aut(3, rng);
    CHECK(leaf_perm(compose(a, b)) == perm_mult(leaf_perm(a), leaf_perm(b)));
    CHECK(perm_mult(leaf_perm(a), perm_inverse(leaf_perm(a))) == identity_perm(27));
    CHECK(leaf_perm(conjugate(a, b)) == perm_conjugate(leaf_perm(a), leaf_perm(b)));
  }
}

TEST_CASE("named generators satisfy the wreath recursions") {
  const TreeAut x1 = generator('x', 1), y1 = generator('y', 1), z1 = generator('z', 1);
  const TreeAut l1 = generator('l', 1), k1 = generator('k', 1);
  CHECK(x1 == root_only(RHO, 1));
  CHECK(y1 == root_only(TAU, 1));
  CHECK(l1 == y1);
  CHECK(z1 == TreeAut(1));
  CHECK(k1 == z1);

  const TreeAut one(1);
  CHECK(generator('x', 2) == wreath_compose(one, one, x1, RHO));
  CHECK(generator('y', 2) == wreath_compose(one, y1, x1, TAU));
  CHECK(generator('z', 2) == wreath_compose(y1, y1, x1, Perm3::identity()));
  CHECK(generator('l', 2) == wreath_compose(one, l1, y1, TAU));
  CHECK(generator('k', 2) == wreath_compose(l1, l1, x1, Perm3::identity()));
  // the two central letters coincide one level up from the base
  CHECK(generator('z', 2) == generator('k', 2));
  CHECK(generator('z', 3) != generator('k', 3));

  // y_n^2 is z_n twisted by (1,1,x_{n-1}); the twist lies in H_n, so the two
  // agree on every H-coset
  CHECK(compose(y1, y1) == z1);
  for (int n = 2; n <= 4; ++n) {
    const TreeAut y = generator('y', n);
    const TreeAut yp = generator('y', n - 1), xp = generator('x', n - 1);
    CHECK(compose(y, y) == wreath_compose(yp, yp, compose(xp, xp), Perm3::identity()));
    const TreeAut one_prev(n - 1);
    CHECK(compose(y, y) ==
          compose(generator('z', n), wreath_compose(one_prev, one_prev, xp, Perm3::identity())));
  }
  for (int n = 2; n <= 3; ++n)
    CHECK(build_group(GroupKind::L, n, 1).contains(compose(generator('y', n), generator('y', n))));
  for (int n = 2; n <= 4; ++n) {
    const TreeAut x = generator('x', n), xp = generator('x', n - 1);
    CHECK(compose(x, compose(x, x)) == wreath_compose(xp, xp, xp, Perm3::identity()));
    const TreeAut l = generator('l', n), lp = generator('l', n - 1), yp = generator('y', n - 1);
    CHECK(compose(l, l) == wreath_compose(lp, lp, compose(yp, yp), Perm3::identity()));
  }
  // the adding machine acts transitively on every floor
  for (int n = 1; n <= 5; ++n)
    CHECK(cycle_structure(generator('x', n)) == CycleStructure{pow3(n)});
}

TEST_CASE("conjugation by the adding machine rotates the coordinates") {
  for (int n = 2; n <= 3; ++n) {
    const TreeAut x = generator('x', n), z = generator('z', n);
    const TreeAut xp = generator('x', n - 1), yp = generator('y', n - 1);
    const TreeAut x2 = compose(x, x);
    CHECK(conjugate(z, x) ==
          wreath_compose(yp, xp, conjugate(yp, xp), Perm3::identity()));
    CHECK(conjugate(z, x2) ==
          wreath_compose(xp, conjugate(yp, xp), conjugate(yp, xp), Perm3::identity()));
    const TreeAut k = generator('k', n), lp = generator('l', n - 1);
    CHECK(compose(k, z) ==
          wreath_compose(compose(lp, yp), compose(lp, yp), compose(xp, xp), Perm3::identity()));
  }
}

TEST_CASE("typed substitution reproduces the recursions") {
  for (int n = 1; n <= 5; ++n) {
    for (char name : {'x', 'y', 'z'})
      CHECK(typed_generator(name, n, 1).aut == generator(name, n));
    for (char name : {'x', 'y', 'z', 'l', 'k'})
      CHECK(typed_generator(name, n, 2).aut == generator(name, n));
  }

  const TypedAut y2 = typed_generator('y', 2, 1);
  const std::map<long, Label> y2_types{{0, Label::from_string("n")},
                                       {2, Label::from_string("s")},
                                       {6, Label::from_string("s")}};
  CHECK(y2.types == y2_types);

  const TypedAut l2 = typed_generator('l', 2, 2);
  const std::map<long, Label> l2_types{{0, Label::from_string("ns")},
                                       {2, Label::from_string("nn")},
                                       {6, Label::from_string("nn")},
                                       {8, Label::from_string("ss")}};
  CHECK(l2.types == l2_types);

  const TypedAut x3 = typed_generator('x', 3, 1);
  CHECK(x3.types == std::map<long, Label>{{0, Label::from_string("s")}});

  // one label per cycle, at the cycle's least leaf
  const TypedAut z3 = typed_generator('z', 3, 2);
  const auto cycles = cycle_decomposition(z3.aut);
  REQUIRE(z3.types.size() == cycles.size());
  for (const auto& cyc : cycles) CHECK(z3.types.count(cyc.front()) == 1);
}

TEST_CASE("parity character on the second floor") {
  CHECK(sgn(generator('x', 2)) == 1);
  CHECK(sgn(generator('y', 2)) == 1);
  CHECK(sgn(generator('z', 2)) == 1);
  CHECK(sgn(generator('l', 2)) == -1);
  CHECK(sgn(generator('l', 3)) == -1);
  CHECK(sgn(generator('y', 3)) == 1);
  CHECK_THROWS_AS(sgn(generator('y', 1)), std::invalid_argument);

  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const TreeAut a = random_aut(2, rng), b = random_aut(2, rng);
    CHECK(sgn(compose(a, b)) == sgn(a) * sgn(b));
  }
}

TEST_CASE("stabilizer chains: small symmetric group") {
  PermGroup g(3);
  g.add_generator(Perm{1, 2, 0});
  g.add_generator(Perm{1, 0, 2});
  CHECK(g.order() == 6);
  CHECK(g.contains(Perm{2, 1, 0}));
  CHECK(g.elements().size() == 6);

  std::map<Perm, long> freq;
  Rng rng(23);
  const long draws = 3000;
  for (long i = 0; i < draws; ++i) ++freq[g.sample(rng)];
  CHECK(freq.size() == 6);
  for (const auto& [p, c] : freq)
    CHECK(std::abs(static_cast<double>(c) / draws - 1.0 / 6) < 0.05);
}

TEST_CASE("stabilizer chains match the closed form for the full group") {
  CHECK(group_from(aut_group_generators(2), 2).order() == aut_order_formula(2));
  CHECK(group_from(aut_group_generators(3), 3).order() == aut_order_formula(3));
  CHECK(aut_order_formula(2) == 1296);
  CHECK(aut_order_formula(3) == mpz_class("13060694016"));
}

TEST_CASE("tower orders on the second floor") {
  CHECK(build_group(GroupKind::M, 2, 1).order() == 648);
  CHECK(build_group(GroupKind::L, 2, 1).order() == 324);
  CHECK(build_group(GroupKind::H, 2, 1).order() == 27);
  CHECK(build_group(GroupKind::K, 2, 1).order() == 108);
  CHECK(build_group(GroupKind::M, 2, 2).order() == 1296);
  CHECK(build_group(GroupKind::L, 2, 2).order() == 324);
  CHECK(build_group(GroupKind::K, 2, 2).order() == 108);

  // closure agrees with the chain order
  CHECK(aut_elements(group_generators(GroupKind::M, 2, 1), 2).size() == 648);
  CHECK(build_group(GroupKind::M, 2, 1).elements().size() == 648);

  const PermGroup l2 = build_group(GroupKind::L, 2, 1);
  CHECK(!l2.contains(generator('y', 2)));
  CHECK(l2.contains(generator('z', 2)));
  const PermGroup m2 = build_group(GroupKind::M, 2, 1);
  CHECK(m2.contains(generator('y', 2)));
  CHECK(!m2.contains(generator('l', 2)));  // odd parity never enters
}

TEST_CASE("tower orders on the third floor") {
  GroupFacts f1 = group_facts(3, 1, true);
  CHECK(f1.order_m == m_order_formula(3, 1));
  CHECK(f1.order_m == mpz_class("816293376"));
  CHECK(f1.order_l == mpz_class("408146688"));
  CHECK(f1.order_h == mpz_class(324) * 324 * 324);
  CHECK(f1.index_ml == 2);
  CHECK(f1.index_lh == 12);
  CHECK(f1.index_lk == 3);
  CHECK(f1.index_kh == 4);
  CHECK(f1.quot_ml.name == "C2");
  CHECK(f1.quot_lh.name == "A4");
  CHECK(f1.quot_kh.name == "V4");

  GroupFacts f2 = group_facts(3, 2, true);
  CHECK(f2.order_m == mpz_class("6530347008"));
  CHECK(f2.order_l == mpz_class("1632586752"));
  CHECK(f2.order_h == f1.order_h);
  CHECK(f2.index_ml == 4);
  CHECK(f2.index_lh == 48);
  CHECK(f2.index_lk == 3);
  CHECK(f2.quot_ml.name == "V4");
  CHECK(f2.order_m != m_order_formula(3, 2));  // the closed form undercounts here
}

TEST_CASE("quotient identification") {
  PermGroup c12(9);
  c12.add_generator(generator('y', 2));
  CHECK(c12.order() == 12);
  const QuotientInfo q = identify_quotient(c12, PermGroup(9));
  CHECK(q.normal);
  CHECK(q.index == 12);
  CHECK(q.name == "C12");

  PermGroup s3(3);
  s3.add_generator(Perm{1, 2, 0});
  s3.add_generator(Perm{1, 0, 2});
  CHECK(identify_quotient(s3, PermGroup(3)).name == "S3");

  // a subgroup that is not normal is reported as such
  const PermGroup m2 = build_group(GroupKind::M, 2, 1);
  const QuotientInfo bad = identify_quotient(m2, c12);
  CHECK(!bad.normal);
  CHECK(bad.name == "not-normal");
}

TEST_CASE("model groups realize the model data exactly on the second floor") {
  const mpz_class orders1[4] = {108, 324, 216, 648};
  for (int model = 1; model <= 4; ++model) {
    PermGroup g = model_group(model, 2, 1);
    CHECK(g.order() == orders1[model - 1]);
    CosetUnion u{g, {identity_perm(g.degree())}, g.order()};
    CHECK(cycle_data_exhaustive(u) == model_marginal(model, 1, 1));
  }
  const mpz_class orders2[5] = {108, 324, 648, 648, 1296};
  for (int model = 1; model <= 5; ++model) {
    PermGroup g = model_group(model, 2, 2);
    CHECK(g.order() == orders2[model - 1]);
    CosetUnion u{g, {identity_perm(g.degree())}, g.order()};
    CHECK(cycle_data_exhaustive(u) == model_marginal(model, 2, 1));
  }
}

TEST_CASE("coset families on the second floor match the seeded quantities exactly") {
  for (int item = 1; item <= 4; ++item) {
    const CosetUnion u = coset_family(item, 2, 1);
    const CycleData got = cycle_data_exhaustive(u);
    const CycleData want =
        seed_cycle_data(family_seed_index(item, 1), family_superscript(item, 2, 1), 1);
    CHECK(got == want);
    CHECK(cd_mass(got) == seed_quantity(family_seed_index(item, 1), 1).weight);
  }
}

TEST_CASE("sampled coset data drifts to the exhaustive answer") {
  Rng rng(31);
  const CosetUnion u = coset_family(4, 2, 1);
  const CycleData exact = cycle_data_exhaustive(u);
  const CycleData approx = cycle_data_sampled(u, 40000, rng);
  CHECK(cd_mass(approx) == cd_mass(exact));
  CHECK(tv(approx, exact) < 0.02);

  // overlapping representatives are refused
  CosetUnion broken = u;
  broken.reps.push_back(broken.reps.front());
  CHECK_THROWS_AS(cycle_data_sampled(broken, 10, rng), std::logic_error);
}

TEST_CASE("third floor, wider alphabet: sampled families stay close") {
  Rng rng(41);
  for (int item : {1, 6, 9}) {
    const CosetUnion u = coset_family(item, 3, 2);
    const CycleData got = cycle_data_sampled(u, 20000, rng);
    const CycleData want =
        seed_cycle_data(family_seed_index(item, 2), family_superscript(item, 3, 2), 2);
    CHECK(cd_mass(got) == cd_mass(want));
    CHECK(tv(got, want) < 0.03);
  }
}

TEST_CASE("theorem report flags exactly the failing closed form") {
  const nlohmann::json r1 = theorem_report(group_facts(2, 1, true));
  for (const auto& c : r1["claims"]) {
    if (c.contains("expected")) CHECK(c["verdict"] == "pass");
  }

  const nlohmann::json r2 = theorem_report(group_facts(3, 2, true));
  bool saw_m_order = false, saw_lh = false;
  for (const auto& c : r2["claims"]) {
    const std::string id = c["id"];
    if (id == "m-order") {
      saw_m_order = true;
      CHECK(c["verdict"] == "fail");
      CHECK(c["enforced"] == true);
    } else if (id == "lh-index") {
      saw_lh = true;
      CHECK(c["computed"] == "48");
      CHECK(c["matches_reference"] == true);
    } else if (c.contains("expected")) {
      CHECK(c["verdict"] == "pass");
    }
  }
  CHECK(saw_m_order);
  CHECK(saw_lh);
}
