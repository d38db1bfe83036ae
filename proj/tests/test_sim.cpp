#include <set>
#include <sstream>

#include "doctest.h"
#include "parle/canon.hpp"
#include "parle/newick.hpp"
#include "parle/sim.hpp"
#include "support/fixtures.hpp"

using namespace parle;

TEST_SUITE_BEGIN("sim");

TEST_CASE("two-leaf species tree is the unique one") {
  const SpeciesTree s = random_species_tree(2, 5);
  CHECK(s.leaf_count() == 2);
  CHECK(s.node_count() == 3);
}

TEST_CASE("species tree generation is deterministic and valid") {
  const SpeciesTree a = random_species_tree(10, 42);
  const SpeciesTree b = random_species_tree(10, 42);
  CHECK(a.same_content(b));
  const SpeciesTree c = random_species_tree(10, 43);
  CHECK_FALSE(a.same_content(c));

  const SpeciesTree big = random_species_tree(50, 7);
  CHECK(big.leaf_count() == 50);
  CHECK(big.node_count() == 99);
  for (NodeId v = 0; v < big.node_count(); ++v)
    if (!big.is_leaf(v)) CHECK(big.children(v).size() == 2);
  CHECK_THROWS_AS(random_species_tree(1, 0), std::invalid_argument);
}

TEST_CASE("gene assignment bounds and determinism") {
  const SpeciesTree s = random_species_tree(10, 11);
  SUBCASE("j = 1 means exactly one gene per species") {
    const GeneAssignment ga = assign_genes(s, 1, 3);
    CHECK(ga.genes.size() == 10);
  }
  SUBCASE("totals stay within [n, n*j]") {
    const GeneAssignment ga = assign_genes(s, 5, 3);
    CHECK(ga.genes.size() >= 10);
    CHECK(ga.genes.size() <= 50);
    std::set<std::string> unique(ga.genes.begin(), ga.genes.end());
    CHECK(unique.size() == ga.genes.size());
  }
  SUBCASE("same seed, same counts") {
    const GeneAssignment a = assign_genes(s, 5, 9);
    const GeneAssignment b = assign_genes(s, 5, 9);
    CHECK(a.genes == b.genes);
    CHECK(a.species_of == b.species_of);
  }
  CHECK_THROWS_AS(assign_genes(s, 0, 1), std::invalid_argument);
}

TEST_CASE("single-gene scenario is a lone leaf") {
  const auto s = std::make_shared<const SpeciesTree>(random_species_tree(4, 21));
  GeneAssignment ga;
  ga.genes = {"g"};
  for (NodeId v = 0; v < s->node_count(); ++v)
    if (s->is_leaf(v)) {
      ga.species_of = {v};
      break;
    }
  const auto g = generate_random_scenario(s, ga, 1);
  CHECK(g.node_count() == 1);
  CHECK(g.leaf_count() == 1);
  CHECK(validate(g).ok);

  GeneAssignment empty;
  CHECK_THROWS_AS(generate_random_scenario(s, empty, 1), std::invalid_argument);
}

TEST_CASE("every simulated scenario validates and covers the gene set") {
  const auto s = std::make_shared<const SpeciesTree>(random_species_tree(10, 31));
  const GeneAssignment ga = assign_genes(*s, 3, 32);
  const std::set<std::string> gene_set(ga.genes.begin(), ga.genes.end());
  for (int i = 0; i < 1000; ++i) {
    const auto g = generate_random_scenario(s, ga, 1000 + i);
    CHECK(validate(g).ok);
    CHECK(clade(g, g.root()) == gene_set);
    // Leaf species equal the assignment.
    for (std::size_t k = 0; k < ga.genes.size(); ++k) {
      const NodeId leaf = g.leaf_by_gene(ga.genes[k]);
      REQUIRE(leaf != kNoNode);
      CHECK(g.species_of(leaf) == ga.species_of[k]);
    }
  }
}

TEST_CASE("scenarios from one assignment are pairwise comparable") {
  const auto s = std::make_shared<const SpeciesTree>(random_species_tree(8, 41));
  const GeneAssignment ga = assign_genes(*s, 2, 42);
  std::vector<ReconciledGeneTree> trees;
  for (int i = 0; i < 5; ++i) trees.push_back(generate_random_scenario(s, ga, 2000 + i));
  for (const auto& a : trees)
    for (const auto& b : trees) CHECK(comparable(a, b));
}

TEST_CASE("scenario generation is deterministic per seed") {
  const auto s = std::make_shared<const SpeciesTree>(random_species_tree(9, 51));
  const GeneAssignment ga = assign_genes(*s, 3, 52);
  const auto a = generate_random_scenario(s, ga, 77);
  const auto b = generate_random_scenario(s, ga, 77);
  CHECK(isomorphic(a, b));
  CHECK(serialize_reconciled_tree(a) == serialize_reconciled_tree(b));
}

TEST_CASE("strong decay raises the share of speciation-eligible merges") {
  const auto s = std::make_shared<const SpeciesTree>(random_species_tree(16, 61));
  const GeneAssignment ga = assign_genes(*s, 1, 62);
  auto eligible_fraction = [&](double decay) {
    int eligible = 0, total = 0;
    for (int i = 0; i < 300; ++i) {
      const auto g = generate_random_scenario(s, ga, 3000 + i, decay);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.is_leaf(v)) continue;
        ++total;
        const NodeId mu = g.species_of(v);
        bool forced = false;
        for (const NodeId c : g.children(v)) forced |= g.species_of(c) == mu;
        eligible += forced ? 0 : 1;
      }
    }
    return static_cast<double>(eligible) / static_cast<double>(total);
  };
  const double uniform = eligible_fraction(0.0);
  const double strong = eligible_fraction(3.0);
  CHECK(strong > uniform);
}

TEST_CASE("experiment record counts and normalization columns") {
  ExperimentPlan plan;
  plan.species_leaf_counts = {6};
  plan.max_genes_per_species = {1, 2};
  plan.scenarios_per_set = 5;
  plan.alphas = {AlphaSpec::one_over_n(), AlphaSpec::literal(0.5)};
  plan.master_seed = 99;
  const auto records = run_experiment(plan);
  // 2 datasets x 2 alphas x C(5,2) pairs.
  CHECK(records.size() == 2 * 2 * 10);

  for (const auto& r : records) {
    CHECK(r.breakdown.plr >= 0.0);
    CHECK(r.rf >= 0);
    CHECK(r.plr_norm_max <= 1.0);
    if (r.j == 1) {
      REQUIRE(r.plr_norm_diam.has_value());
      CHECK(*r.plr_norm_diam >= 0.0);
    } else {
      CHECK_FALSE(r.plr_norm_diam.has_value());
    }
    CHECK((r.alpha == 0.5 || r.alpha == 1.0 / 6.0));
  }

  SUBCASE("fifty scenarios give 1225 records per dataset and alpha") {
    plan.species_leaf_counts = {6};
    plan.max_genes_per_species = {1};
    plan.scenarios_per_set = 50;
    plan.alphas = {AlphaSpec::literal(0.5)};
    CHECK(run_experiment(plan).size() == 1225);
  }

  SUBCASE("two scenarios give exactly one pair per alpha") {
    plan.scenarios_per_set = 2;
    plan.alphas = {AlphaSpec::literal(0.5)};
    CHECK(run_experiment(plan).size() == 2);
    plan.scenarios_per_set = 1;
    CHECK_THROWS_AS(run_experiment(plan), std::invalid_argument);
  }
}

TEST_CASE("experiment rows are sorted by dataset, alpha, pair") {
  ExperimentPlan plan;
  plan.species_leaf_counts = {5, 4};
  plan.max_genes_per_species = {2, 1};
  plan.scenarios_per_set = 3;
  plan.alphas = {AlphaSpec::literal(0.75), AlphaSpec::literal(0.25)};
  plan.master_seed = 1;
  const auto records = run_experiment(plan);
  REQUIRE(records.size() == 4 * 2 * 3);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    const auto key = [](const DistanceRecord& r) {
      return std::make_tuple(r.n, r.j, r.alpha, r.pair_i, r.pair_j);
    };
    CHECK(key(a) < key(b));
  }
}

TEST_CASE("experiment reruns are byte-identical") {
  ExperimentPlan plan;
  plan.species_leaf_counts = {6};
  plan.max_genes_per_species = {2};
  plan.scenarios_per_set = 4;
  plan.master_seed = 123;
  std::ostringstream a, b;
  write_experiment_csv(run_experiment(plan), a);
  write_experiment_csv(run_experiment(plan), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("dataset,n,j,alpha,pair_i,pair_j,plr,") == 0);
  CHECK(a.str().find("\r") == std::string::npos);
}

TEST_CASE("per-scenario streams do not depend on evaluation order") {
  // Generating scenario #3 alone must equal scenario #3 from a full sweep.
  const auto s = std::make_shared<const SpeciesTree>(random_species_tree(7, 71));
  const GeneAssignment ga = assign_genes(*s, 2, 72);
  const std::uint64_t master = 555;
  const std::uint64_t tag = hash64("S7_G2");
  std::vector<ReconciledGeneTree> sweep;
  for (int i = 0; i < 5; ++i)
    sweep.push_back(generate_random_scenario(s, ga, derive_seed(master, tag, i)));
  const auto lone = generate_random_scenario(s, ga, derive_seed(master, tag, 3));
  CHECK(serialize_reconciled_tree(lone) == serialize_reconciled_tree(sweep[3]));
}

TEST_SUITE_END();
