#include <cmath>
#include <limits>

#include "doctest.h"
#include "parle/canon.hpp"
#include "parle/extremal.hpp"
#include "parle/metric.hpp"
#include "parle/sim.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace parle;
namespace ts = parle::testsupport;

TEST_SUITE_BEGIN("metric");

TEST_CASE("gene-gene map on the worked example") {
  const auto s = ts::example_species();
  const auto g1 = ts::example_g1(s);
  const auto g2 = ts::example_g2(s);

  const auto m12 = lca_map(g1, g2);
  // x1 is the parent of {c,d}; its correspondent is the root of G2.
  const NodeId x1 = g1.children(g1.root())[0];
  CHECK(clade(g1, x1) == std::set<std::string>{"c", "d"});
  CHECK(m12.m[x1] == g2.root());
  CHECK(m12.m[g1.root()] == g2.root());

  const auto expect = ts::naive_gene_gene_map(g1, g2);
  for (NodeId v = 0; v < g1.node_count(); ++v) CHECK(m12.m[v] == expect[v]);
}

TEST_CASE("gene-gene map invariants on simulated pairs") {
  const auto s = std::make_shared<const SpeciesTree>(random_species_tree(9, 51));
  const auto ga = assign_genes(*s, 3, 52);
  for (int i = 0; i < 8; ++i) {
    const auto g1 = generate_random_scenario(s, ga, 60 + 2 * i);
    const auto g2 = generate_random_scenario(s, ga, 61 + 2 * i);
    const auto map = lca_map(g1, g2);
    const auto expect = ts::naive_gene_gene_map(g1, g2);
    for (NodeId v = 0; v < g1.node_count(); ++v) {
      CHECK(map.m[v] == expect[v]);
      // Clade containment.
      const auto cv = ts::naive_clade(g1, v);
      const auto cm = ts::naive_clade(g2, map.m[v]);
      CHECK(std::includes(cm.begin(), cm.end(), cv.begin(), cv.end()));
      // Monotone along edges.
      if (v != g1.root()) {
        const NodeId pm = map.m[g1.parent(v)];
        const auto cp = ts::naive_clade(g2, pm);
        CHECK(std::includes(cp.begin(), cp.end(), cm.begin(), cm.end()));
      }
      // Leaves map to the leaf with the same gene.
      if (g1.is_leaf(v)) CHECK(g2.gene_name(map.m[v]) == g1.gene_name(v));
    }
  }
}

TEST_CASE("worked-example distances") {
  const auto s = ts::example_species();
  const auto g1 = ts::example_g1(s);
  const auto g2 = ts::example_g2(s);

  CHECK(d_path(g1, g2) == 1);
  CHECK(d_path(g2, g1) == 0);
  CHECK(d_lbl(g1, g2) == 2);
  CHECK(d_lbl(g2, g1) == 2);
  CHECK(d_asym(g1, g2, 0.5) == 1.5);
  CHECK(d_asym(g2, g1, 0.5) == 1.0);

  const auto b = plr(g1, g2, 0.5);
  CHECK(b.comparable);
  CHECK(b.d_path_12 == 1);
  CHECK(b.d_lbl_12 == 2);
  CHECK(b.d_path_21 == 0);
  CHECK(b.d_lbl_21 == 2);
  CHECK(b.plr == 2.5);
  CHECK(b.d_asym_12 + b.d_asym_21 == b.plr);
}

TEST_CASE("identity and alpha edge cases") {
  const auto s = ts::example_species();
  const auto g1 = ts::example_g1(s);
  for (const double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(plr(g1, g1, alpha).plr == 0.0);
    CHECK(d_path(g1, g1) == 0);
  }
  // alpha = 1 leaves only the path component.
  const auto g2 = ts::example_g2(s);
  CHECK(plr(g1, g2, 1.0).plr == 1.0);
  CHECK(plr(g1, g2, 0.0).plr == 4.0);
  CHECK_THROWS_AS(plr(g1, g2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(plr(g1, g2, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(d_asym(g1, g2, 2.0), std::invalid_argument);
}

TEST_CASE("triangle witness values at various alphas") {
  const auto s = ts::tri_species();
  const int k = 2;
  const auto g1 = ts::tri_g1(s, k);
  const auto g2 = ts::tri_g2(s, k);
  const auto g3 = ts::tri_g3(s, k);

  CHECK(d_asym(g3, g1, 0.25) == 2.75);  // 2 + 3*alpha
  for (const double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(plr(g1, g2, a).plr == 2.0 - a);
    CHECK(plr(g2, g3, a).plr == 2.0);
    CHECK(plr(g1, g3, a).plr == k * (1.0 - a) + 2.0 * a + 3.0);
  }
  CHECK(plr(g1, g3, 0.5).plr == 5.0);
  // Triangle inequality failure: plr(G1,G3) > plr(G1,G2) + plr(G2,G3).
  for (const double a : {0.0, 0.25, 0.5, 0.75, 1.0})
    CHECK(plr(g1, g3, a).plr > 4.0 - a);
}

TEST_CASE("d_asym is asymmetric: resolved tree vs star of duplications") {
  // A binary tree whose internals climb the species tree against a star
  // whose single internal node duplicates at the root: the star absorbs the
  // other direction for free.
  const auto s = ts::caterpillar_species(4);
  const auto ga_names = std::vector<std::string>{"g1", "g2", "g3", "g4"};

  ReconciledGeneTree::Builder star(s);
  const NodeId hub = star.add_root(Event::dup, s->find("i3"));
  for (int i = 0; i < 4; ++i)
    star.add_child(hub, Event::extant, s->find("s" + std::to_string(i + 1)), ga_names[i]);
  const auto g_star = star.build();

  ReconciledGeneTree::Builder bin(s);
  const NodeId r = bin.add_root(Event::dup, s->find("i3"));
  const NodeId m1 = bin.add_child(r, Event::dup, s->find("i2"));
  const NodeId m2 = bin.add_child(m1, Event::dup, s->find("i1"));
  bin.add_child(m2, Event::extant, s->find("s1"), "g1");
  bin.add_child(m2, Event::extant, s->find("s2"), "g2");
  bin.add_child(m1, Event::extant, s->find("s3"), "g3");
  bin.add_child(r, Event::extant, s->find("s4"), "g4");
  const auto g_bin = bin.build();

  REQUIRE(validate(g_star).ok);
  REQUIRE(validate(g_bin).ok);
  CHECK(d_asym(g_bin, g_star, 0.5) > 0.0);   // internals map into the hub at a distance
  CHECK(d_asym(g_star, g_bin, 0.5) == 0.0);  // the hub maps to the matching dup root
}

TEST_CASE("directed sums match the brute-force oracle on simulated pairs") {
  const auto s = std::make_shared<const SpeciesTree>(random_species_tree(10, 71));
  const auto ga = assign_genes(*s, 3, 72);
  for (int i = 0; i < 10; ++i) {
    const auto g1 = generate_random_scenario(s, ga, 80 + 2 * i);
    const auto g2 = generate_random_scenario(s, ga, 81 + 2 * i);
    const auto expect12 = ts::naive_directed_counts(g1, g2);
    const auto expect21 = ts::naive_directed_counts(g2, g1);
    CHECK(d_path(g1, g2) == expect12.path);
    CHECK(d_lbl(g1, g2) == expect12.lbl);
    CHECK(d_path(g2, g1) == expect21.path);
    CHECK(d_lbl(g2, g1) == expect21.lbl);
    const auto b = plr(g1, g2, 0.25);
    CHECK(b.plr == plr(g2, g1, 0.25).plr);  // symmetry
  }
}

TEST_CASE("cross-object species trees still compare") {
  const auto s1 = ts::example_species();
  const auto s2 = ts::example_species();
  const auto g1 = ts::example_g1(s1);
  const auto g2 = ts::example_g2(s2);
  CHECK(plr(g1, g2, 0.5).plr == 2.5);
  CHECK(d_path(g1, g2) == 1);
}

TEST_CASE("non-comparable pairs yield infinity, not an error") {
  const auto s = ts::example_species();
  const auto g1 = ts::example_g1(s);
  ReconciledGeneTree::Builder b(s);
  b.add_root(Event::extant, s->find("A"), "lonely");
  const auto other = b.build();

  const auto breakdown = plr(g1, other, 0.5);
  CHECK_FALSE(breakdown.comparable);
  CHECK(std::isinf(breakdown.plr));
  CHECK_THROWS_AS(d_path(g1, other), std::invalid_argument);
  CHECK_THROWS_AS(lca_map(g1, other), std::invalid_argument);
}

TEST_CASE("rf on the worked example and identical trees") {
  const auto s = ts::example_species();
  const auto g1 = ts::example_g1(s);
  const auto g2 = ts::example_g2(s);
  CHECK(rf(g1, g1) == 0);
  CHECK(rf(g1, g2) == 2);  // {c,d} vs {a,b,c}
  CHECK(rf(g1, g2) == ts::naive_rf(g1, g2));
}

TEST_CASE("rf matches the set-based oracle on simulated pairs") {
  const auto s = std::make_shared<const SpeciesTree>(random_species_tree(8, 91));
  const auto ga = assign_genes(*s, 2, 92);
  for (int i = 0; i < 10; ++i) {
    const auto g1 = generate_random_scenario(s, ga, 100 + 2 * i);
    const auto g2 = generate_random_scenario(s, ga, 101 + 2 * i);
    CHECK(rf(g1, g2) == ts::naive_rf(g1, g2));
    CHECK(rf(g1, g2) == rf(g2, g1));
  }
  const auto gb = assign_genes(*s, 3, 93);
  if (gb.genes.size() != ga.genes.size()) {
    const auto other = generate_random_scenario(s, gb, 1);
    CHECK_THROWS_AS(rf(generate_random_scenario(s, ga, 2), other), std::invalid_argument);
  }
}

TEST_CASE("normalization modes") {
  NormalizeContext ctx;
  SUBCASE("none is the identity") { CHECK(normalize(3.25, NormalizeMode::none, ctx) == 3.25); }
  SUBCASE("max divides by the dataset maximum") {
    ctx.dataset_max = 5.0;
    CHECK(normalize(2.5, NormalizeMode::max, ctx) == 0.5);
    CHECK(normalize(5.0, NormalizeMode::max, ctx) == 1.0);
    ctx.dataset_max = 0.0;
    CHECK(normalize(0.0, NormalizeMode::max, ctx) == 0.0);  // 0/0 -> 0
  }
  SUBCASE("max without a maximum is an error") {
    CHECK_THROWS_AS(normalize(1.0, NormalizeMode::max, ctx), std::invalid_argument);
  }
  SUBCASE("diameter mode") {
    const auto s = ts::caterpillar_species(4);
    ctx.species = s.get();
    ctx.alpha = 0.5;
    ctx.one_gene_per_species = true;
    const auto [g1, g2] = extremal_pair(s);
    CHECK(normalize(plr(g1, g2, 0.5).plr, NormalizeMode::diameter, ctx) == 1.0);
    ctx.one_gene_per_species = false;
    CHECK_THROWS_AS(normalize(1.0, NormalizeMode::diameter, ctx), std::invalid_argument);
  }
}

TEST_SUITE_END();
