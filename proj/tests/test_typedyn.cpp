#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "treefactor/typedyn.hpp"

using namespace treefactor;

namespace {

TypedPartition TP(const std::string& text) { return TypedPartition::parse(text); }
mpq_class Q(long a, long b) {
  mpq_class q(a, b);
  q.canonicalize();
  return q;
}
mpq_class at(const Data& d, const std::string& text) {
  const auto it = d.mass.find(TP(text));
  return it == d.mass.end() ? mpq_class(0) : it->second;
}

}  // namespace

TEST_CASE("labels: parsing, product, shift") {
  const Label s = Label::from_string("s"), n = Label::from_string("n");
  CHECK(s.str() == "s");
  CHECK(n.n_start());
  CHECK(!s.n_start());
  CHECK(label_product(n, n) == s);
  CHECK(shift_label(n) == n);  // length one: shift is the identity

  const Label sn = Label::from_string("sn"), ns = Label::from_string("ns");
  const Label ss = Label::from_string("ss"), nn = Label::from_string("nn");
  CHECK(ns.n_start());
  CHECK(!sn.n_start());
  CHECK(shift_label(sn, 1) == ns);
  CHECK(shift_label(ns, 1) == sn);
  CHECK(shift_label(nn, 1) == nn);
  CHECK(shift_label(sn, 2) == nn);  // re-read letter 2 into the last slot
  CHECK(label_product(sn, ns) == nn);
  CHECK(label_product(label_product(sn, sn), ss) == ss);
  CHECK_THROWS_AS(shift_label(sn, 3), std::invalid_argument);
  CHECK_THROWS_AS(label_product(s, sn), std::invalid_argument);
  CHECK_THROWS_AS(Label::from_string("sx"), std::invalid_argument);
}

TEST_CASE("typed partitions canonicalize by length then label") {
  TypedPartition p({{Label::from_string("s"), 1}, {Label::from_string("n"), 2}});
  CHECK(p.str() == "[n,2][s,1]");
  CHECK(p.total() == 3);
  CHECK(p.lengths() == CycleStructure{2, 1});

  // at equal length an n letter sorts before an s letter
  TypedPartition q({{Label::from_string("ss"), 1},
                    {Label::from_string("sn"), 1},
                    {Label::from_string("ns"), 1},
                    {Label::from_string("nn"), 1}});
  CHECK(q.str() == "[nn,1][ns,1][sn,1][ss,1]");
  CHECK(TP(q.str()) == q);
  CHECK(TP("[sn,2][ss,1]") == TypedPartition({{Label::from_string("ss"), 1}, {Label::from_string("sn"), 2}}));
  CHECK_THROWS_AS(TP("[s,0]"), std::invalid_argument);
}

TEST_CASE("one-part step, single letter") {
  const Data s1 = step_type(Label::from_string("s"), 1);
  CHECK(s1.mass.size() == 3);
  CHECK(at(s1, "[s,3]") == Q(2, 3));
  CHECK(at(s1, "[s,1][s,1][s,1]") == Q(1, 12));
  CHECK(at(s1, "[n,1][n,1][s,1]") == Q(1, 4));
  CHECK(s1.total_mass() == 1);

  const Data n1 = step_type(Label::from_string("n"), 1);
  CHECK(n1.mass.size() == 2);
  CHECK(at(n1, "[n,2][s,1]") == Q(1, 2));
  CHECK(at(n1, "[s,2][n,1]") == Q(1, 2));

  const Data n5 = step_type(Label::from_string("n"), 5);
  CHECK(at(n5, "[n,10][s,5]") == Q(1, 2));
}

TEST_CASE("one-part step, two letters") {
  const Data sn = step_type(Label::from_string("sn"), 1);
  CHECK(sn.mass.size() == 6);
  CHECK(at(sn, "[ns,3]") == Q(2, 3));
  CHECK(at(sn, "[ns,1][ss,1][ss,1]") == Q(1, 16));
  CHECK(at(sn, "[nn,1][nn,1][ns,1]") == Q(1, 16));
  CHECK(at(sn, "[ns,1][sn,1][sn,1]") == Q(1, 16));
  CHECK(at(sn, "[ns,1][ns,1][ns,1]") == Q(1, 48));
  CHECK(at(sn, "[nn,1][sn,1][ss,1]") == Q(1, 8));

  const Data ns = step_type(Label::from_string("ns"), 1);
  CHECK(ns.mass.size() == 4);
  CHECK(at(ns, "[ss,2][sn,1]") == Q(1, 4));
  CHECK(at(ns, "[sn,2][ss,1]") == Q(1, 4));
  CHECK(at(ns, "[ns,2][nn,1]") == Q(1, 4));
  CHECK(at(ns, "[nn,2][ns,1]") == Q(1, 4));

  const Data nn = step_type(Label::from_string("nn"), 1);
  CHECK(at(nn, "[ss,2][nn,1]") == Q(1, 4));
  CHECK(at(nn, "[ns,2][sn,1]") == Q(1, 4));
}

TEST_CASE("starting distributions, single letter") {
  const Data m1 = initial_data(1, 1);
  CHECK(m1.mass.size() == 2);
  CHECK(at(m1, "[s,1][s,1][s,1]") == Q(1, 4));
  CHECK(at(m1, "[n,1][n,1][s,1]") == Q(3, 4));

  const Data m2 = initial_data(2, 1);
  CHECK(at(m2, "[s,3]") == Q(2, 3));
  CHECK(at(m2, "[s,1][s,1][s,1]") == Q(1, 12));
  CHECK(at(m2, "[n,1][n,1][s,1]") == Q(1, 4));

  const Data m3 = initial_data(3, 1);
  CHECK(m3.mass.size() == 4);
  CHECK(at(m3, "[s,1][s,1][s,1]") == Q(1, 8));
  CHECK(at(m3, "[n,1][n,1][s,1]") == Q(3, 8));
  CHECK(at(m3, "[s,2][n,1]") == Q(1, 4));
  CHECK(at(m3, "[n,2][s,1]") == Q(1, 4));

  const Data m4 = initial_data(4, 1);
  CHECK(m4.mass.size() == 5);
  CHECK(at(m4, "[s,3]") == Q(1, 3));
  CHECK(at(m4, "[s,1][s,1][s,1]") == Q(1, 24));
  CHECK(at(m4, "[n,1][n,1][s,1]") == Q(1, 8));
  CHECK(at(m4, "[s,2][n,1]") == Q(1, 4));
  CHECK(at(m4, "[n,2][s,1]") == Q(1, 4));

  for (int model = 1; model <= 4; ++model) {
    const Data d = initial_data(model, 1);
    CHECK(d.total_mass() == 1);
    CHECK(d.level == 1);
    for (const auto& [p, q] : d.mass) CHECK(p.total() == 3);
  }
  CHECK_THROWS_AS(initial_data(5, 1), std::invalid_argument);
}

TEST_CASE("starting distributions, two letters") {
  const Data m1 = initial_data(1, 2);
  CHECK(m1.mass.size() == 5);
  CHECK(at(m1, "[ss,1][ss,1][ss,1]") == Q(1, 16));
  CHECK(at(m1, "[ns,1][ns,1][ss,1]") == Q(3, 16));
  CHECK(at(m1, "[sn,1][sn,1][ss,1]") == Q(3, 16));
  CHECK(at(m1, "[nn,1][nn,1][ss,1]") == Q(3, 16));
  CHECK(at(m1, "[nn,1][ns,1][sn,1]") == Q(3, 8));

  const Data m2 = initial_data(2, 2);
  CHECK(m2.mass.size() == 6);
  CHECK(at(m2, "[ss,3]") == Q(2, 3));
  CHECK(at(m2, "[ss,1][ss,1][ss,1]") == Q(1, 48));
  CHECK(at(m2, "[nn,1][ns,1][sn,1]") == Q(1, 8));

  const Data m3 = initial_data(3, 2);
  CHECK(m3.mass.size() == 12);
  CHECK(at(m3, "[ss,3]") == Q(1, 3));
  CHECK(at(m3, "[ns,3]") == Q(1, 3));
  CHECK(at(m3, "[ns,1][ns,1][ns,1]") == Q(1, 96));
  CHECK(at(m3, "[nn,1][sn,1][ss,1]") == Q(1, 16));

  const Data m4 = initial_data(4, 2);
  CHECK(m4.mass.size() == 10);
  CHECK(at(m4, "[ss,3]") == Q(1, 3));
  CHECK(at(m4, "[ss,2][sn,1]") == Q(1, 8));
  CHECK(at(m4, "[nn,2][ns,1]") == Q(1, 8));

  const Data m5 = initial_data(5, 2);
  CHECK(m5.mass.size() == 20);
  CHECK(at(m5, "[ss,3]") == Q(1, 6));
  CHECK(at(m5, "[ns,3]") == Q(1, 6));
  CHECK(at(m5, "[nn,1][ns,1][sn,1]") == Q(1, 32));
  CHECK(at(m5, "[nn,1][sn,1][ss,1]") == Q(1, 32));
  CHECK(at(m5, "[ns,1][ns,1][ns,1]") == Q(1, 192));
  CHECK(at(m5, "[ss,2][nn,1]") == Q(1, 16));
  CHECK(at(m5, "[sn,2][ns,1]") == Q(1, 16));

  for (int model = 1; model <= 5; ++model) {
    const Data d = initial_data(model, 2);
    CHECK(d.total_mass() == 1);
    for (const auto& [p, q] : d.mass) CHECK(p.total() == 3);
  }
  CHECK_THROWS_AS(initial_data(6, 2), std::invalid_argument);
}

TEST_CASE("propagation conserves mass and scales totals by three") {
  for (int m : {1, 2}) {
    const int models = m == 1 ? 4 : 5;
    const int steps = m == 1 ? 2 : 1;
    for (int model = 1; model <= models; ++model) {
      const Data d = propagate(initial_data(model, m), steps);
      CHECK(d.level == 1 + steps);
      CHECK(d.total_mass() == 1);
      long want = 3;
      for (int i = 0; i < steps; ++i) want *= 3;
      for (const auto& [p, q] : d.mass) {
        CHECK(p.total() == want);
        CHECK(q > 0);
      }
    }
  }
}

TEST_CASE("support of the split-only start stays inside the full mixture") {
  const Data a = propagate(initial_data(1, 1), 2);
  const Data b = propagate(initial_data(4, 1), 2);
  for (const auto& [p, q] : a.mass) CHECK(b.mass.count(p) == 1);
}

TEST_CASE("propagation support cap") {
  CHECK_THROWS_AS(propagate(initial_data(4, 1), 2, 5), resource_limit_error);
}

TEST_CASE("summary walk agrees with the full table") {
  const Data d = propagate(initial_data(4, 1), 2);
  const PropagateSummary s = propagate_summary(initial_data(4, 1), 2);
  CHECK(s.level == d.level);
  CHECK(s.support == static_cast<long>(d.mass.size()));
  CHECK(s.unit_mass);
  const PropagateSummary s2 = propagate_summary(initial_data(5, 2), 1);
  CHECK(s2.support == static_cast<long>(propagate(initial_data(5, 2), 1).mass.size()));
  CHECK(s2.unit_mass);
}

TEST_CASE("one-outcome refinement rules") {
  const auto one = [](const char* part) {
    const TypedPartition p = TP(part);
    return TypedPartition(restricted_step(p.parts[0]));
  };
  CHECK(one("[s,1]") == TP("[s,3]"));
  CHECK(one("[n,1]") == TP("[n,2][s,1]"));
  CHECK(one("[ss,4]") == TP("[ss,12]"));
  CHECK(one("[nn,1]") == TP("[nn,2][ss,1]"));
  CHECK(one("[sn,2]") == TP("[ns,6]"));
  CHECK(one("[ns,1]") == TP("[ns,2][nn,1]"));

  // children multiply to the shifted label, and the outcome is in the
  // support of the random step
  for (int m : {1, 2}) {
    for (unsigned bits = 0; bits < (1u << m); ++bits) {
      const Part p{Label(m, bits), 1};
      const auto kids = restricted_step(p);
      Label prod(m, 0);
      for (const auto& k : kids) prod = label_product(prod, k.label);
      CHECK(prod == shift_label(p.label));
      const Data law = step_type(p.label, p.len);
      CHECK(law.mass.count(TypedPartition(kids)) == 1);
    }
  }
}

TEST_CASE("cycle marginals and structure operators") {
  const CycleData c = cycle_marginal(initial_data(4, 1));
  CHECK(c.size() == 3);
  CHECK(c.at(CycleStructure{3}) == Q(1, 3));
  CHECK(c.at(CycleStructure{2, 1}) == Q(1, 2));
  CHECK(c.at(CycleStructure{1, 1, 1}) == Q(1, 6));

  CycleData d;
  d[CycleStructure{2, 1}] = 1;
  CHECK(tA(d).at(CycleStructure{6, 3}) == 1);
  CHECK(dA(d).at(CycleStructure{4, 2, 2, 1}) == 1);

  CycleData e;
  e[CycleStructure{3}] = Q(1, 2);
  e[CycleStructure{1, 1, 1}] = Q(1, 2);
  CycleData f;
  f[CycleStructure{2}] = 1;
  const CycleData g = product(e, f);
  CHECK(g.at(CycleStructure{3, 2}) == Q(1, 2));
  CHECK(g.at(CycleStructure{2, 1, 1, 1}) == Q(1, 2));
}

TEST_CASE("total variation") {
  const Data m2 = initial_data(2, 1), m4 = initial_data(4, 1);
  CHECK(tv_exact(m2, m4) == Q(1, 2));
  CHECK(tv_exact(m2, m2) == 0);
  CHECK(tv(m2, m4) == doctest::Approx(0.5));
  CHECK(tv_exact(cycle_marginal(m2), cycle_marginal(m4)) == Q(1, 2));
}

TEST_CASE("seeded quantities") {
  // single letter: weights of the three level-restricted seeds total one
  mpq_class w = 0;
  for (int i = 1; i <= 3; ++i) w += seed_quantity(i, 1).weight;
  CHECK(w == 1);
  CHECK(seed_quantity(4, 1).seed_level == 0);
  CHECK(seed_quantity(2, 1).seed == TP("[s,3]"));

  const CycleData a2 = seed_cycle_data(2, 1, 1);
  CHECK(a2.size() == 1);
  CHECK(a2.at(CycleStructure{3}) == Q(2, 3));

  const CycleData a7 = seed_cycle_data(7, 2, 1);
  CHECK(a7.at(CycleStructure{3}) == Q(2, 3));
  CHECK(a7.at(CycleStructure{1, 1, 1}) == Q(1, 3));

  const CycleData a4 = seed_cycle_data(4, 2, 1);
  CHECK(a4.size() == 1);
  CHECK(a4.at(CycleStructure{2, 1}) == Q(1, 2));

  // two letters: the six level-one seeds weigh exactly one as well
  mpq_class w2 = 0;
  for (int i = 1; i <= 6; ++i) w2 += seed_quantity(i, 2).weight;
  CHECK(w2 == 1);
  CHECK(seed_quantity(10, 2).weight == Q(1, 4));
  CHECK_THROWS_AS(seed_quantity(8, 1), std::invalid_argument);

  // pushing the seeds is additive: the three level-one seeds reassemble the
  // s-start refinement law
  CycleData sum;
  for (int i = 1; i <= 3; ++i)
    for (const auto& [s, q] : seed_cycle_data(i, 3, 1)) sum[s] += q;
  const CycleData whole = cycle_marginal(propagate(initial_data(2, 1), 2));
  CHECK(tv_exact(sum, whole) == 0);
}

TEST_CASE("simulation matches exact propagation") {
  Rng rng(7);
  const Data exact = propagate(initial_data(4, 1), 2);
  const Data sim = simulate_chain(initial_data(4, 1), 2, 100000, rng);
  CHECK(sim.level == exact.level);
  CHECK(sim.total_mass() == 1);
  CHECK(tv(sim, exact) < 0.04);

  Rng rng2(11);
  const Data exact2 = propagate(initial_data(5, 2), 1);
  const Data sim2 = simulate_chain(initial_data(5, 2), 1, 100000, rng2);
  CHECK(tv(sim2, exact2) < 0.04);
}

TEST_CASE("json export shape") {
  const auto j = data_to_json(initial_data(1, 1));
  CHECK(j["m"] == 1);
  CHECK(j["level"] == 1);
  CHECK(j["support"] == 2);
  CHECK(j["entries"].size() == 2);
  bool found = false;
  for (const auto& e : j["entries"])
    if (e["partition"] == "[n,1][n,1][s,1]" && e["mass"] == "3/4") found = true;
  CHECK(found);

  const auto c = cycle_data_to_json(cycle_marginal(initial_data(4, 1)));
  CHECK(c.size() == 3);
}
