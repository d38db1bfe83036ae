#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "parle/metric.hpp"
#include "parle/tree.hpp"

namespace parle {

// A fixed set of genes and the species leaf each one belongs to.
struct GeneAssignment {
  std::vector<std::string> genes;
  std::vector<NodeId> species_of;  // parallel to genes; species leaf ids
  int max_per_species = 1;
};

// An alpha value that is either a literal or the per-dataset 1/n rule.
struct AlphaSpec {
  static AlphaSpec literal(double v) { return {false, v}; }
  static AlphaSpec one_over_n() { return {true, 0.0}; }
  double resolve(int n_species_leaves) const {
    return reciprocal ? 1.0 / static_cast<double>(n_species_leaves) : value;
  }

  bool reciprocal = false;
  double value = 0.5;
};

struct ExperimentPlan {
  std::vector<int> species_leaf_counts{10, 25, 50};
  std::vector<int> max_genes_per_species{5, 10, 20};
  int scenarios_per_set = 50;
  std::vector<AlphaSpec> alphas{AlphaSpec::one_over_n(), AlphaSpec::literal(0.0),
                                AlphaSpec::literal(0.25), AlphaSpec::literal(0.5),
                                AlphaSpec::literal(0.75), AlphaSpec::literal(1.0)};
  double decay = 0.7;
  std::uint64_t master_seed = 0;
};

// One pairwise comparison at one alpha value.
struct DistanceRecord {
  std::string dataset;
  int n = 0;  // species leaves
  int j = 0;  // max genes per species
  double alpha = 0.5;
  int pair_i = 0;
  int pair_j = 0;
  PlrBreakdown breakdown;
  std::int64_t rf = 0;
  double plr_norm_max = 0.0;
  std::optional<double> plr_norm_diam;  // only on one-gene-per-species sets
  int gene_count = 0;
};

// Random binary species tree with n uniquely labeled leaves ("s1".."sn"),
// grown by a Yule (pure-birth) split process. Deterministic per seed.
SpeciesTree random_species_tree(int n, std::uint64_t seed);

// Per species leaf, a gene count drawn uniformly from {1..j}; genes are
// named "<speciesLabel>_<k>".
GeneAssignment assign_genes(const SpeciesTree& s, int j, std::uint64_t seed);

// Bottom-up simulation of a reconciled scenario over exactly the genes of
// `ga`: repeatedly merge a pair (x', x'') drawn with probability
// proportional to e^(-decay * dist_S(mu(x'), mu(x''))), map the new node to
// the species lca, and label it dup when forced, otherwise uniformly. The
// output is binary and always passes validate().
ReconciledGeneTree generate_random_scenario(std::shared_ptr<const SpeciesTree> s,
                                            const GeneAssignment& ga,
                                            std::uint64_t seed, double decay = 0.7);

// The full batch experiment: per (n, j) one species tree, one gene
// assignment and `scenarios_per_set` scenarios; every unordered scenario
// pair is compared at every alpha. Deterministic given the master seed;
// per-scenario streams derive from (masterSeed, datasetId, scenarioIndex).
// Pair evaluation runs in parallel, capped by the PARLE_THREADS environment
// variable; results do not depend on scheduling.
std::vector<DistanceRecord> run_experiment(const ExperimentPlan& plan);

// CSV with the fixed header
// dataset,n,j,alpha,pair_i,pair_j,plr,d_path_12,d_lbl_12,d_path_21,d_lbl_21,
// rf,plr_norm_max,plr_norm_diam
// (floats with 6 decimal digits, plr_norm_diam empty when inapplicable, LF
// line endings).
void write_experiment_csv(const std::vector<DistanceRecord>& records, std::ostream& out);

// Name of the random generator, recorded in reproducibility sidecars.
std::string_view rng_name();

// Worker count for parallel sections: PARLE_THREADS when set, otherwise the
// hardware concurrency.
int resolve_thread_count();

}  // namespace parle
