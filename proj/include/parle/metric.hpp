#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "parle/lca.hpp"
#include "parle/tree.hpp"

namespace parle {

// Node correspondence from one gene tree into another: m[v] is the lowest
// node of the target whose clade contains the clade of v.
struct GeneGeneMap {
  const ReconciledGeneTree* source = nullptr;
  const ReconciledGeneTree* target = nullptr;
  std::vector<NodeId> m;
};

// Full result of one PLR evaluation. For non-comparable inputs, `comparable`
// is false, the counts are zero and the three weighted values are +infinity.
struct PlrBreakdown {
  std::int64_t d_path_12 = 0;
  std::int64_t d_lbl_12 = 0;
  std::int64_t d_path_21 = 0;
  std::int64_t d_lbl_21 = 0;
  double alpha = 0.5;
  double d_asym_12 = 0.0;
  double d_asym_21 = 0.0;
  double plr = 0.0;
  bool comparable = true;
};

// The alpha-independent part of a PLR evaluation. Computing it once lets a
// batch driver evaluate many alpha values without touching the trees again.
struct PairMetrics {
  std::int64_t d_path_12 = 0;
  std::int64_t d_lbl_12 = 0;
  std::int64_t d_path_21 = 0;
  std::int64_t d_lbl_21 = 0;
  bool comparable = true;
};

// m(v) = lca of the clade of v in g2, computed bottom-up with fewer lca
// queries than g1 has edges. Throws std::invalid_argument when the trees are
// not comparable.
GeneGeneMap lca_map(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2);
GeneGeneMap lca_map(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2,
                    const LcaIndex& target_index);

// Sum over nodes v of g1 of the species-tree distance between mu1(v) and
// mu2(m(v)). Leaves contribute nothing on comparable inputs.
std::int64_t d_path(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2);

// Number of nodes of g1 whose event label differs from their correspondent's.
std::int64_t d_lbl(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2);

// alpha * d_path + (1 - alpha) * d_lbl, computed in a single pass.
double d_asym(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2, double alpha);

// Both directed components at once; `comparable` is false instead of an
// error when the pair is not comparable.
PairMetrics pair_metrics(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2);

// Batch variant with caller-provided indexes (s_index over g1's species
// tree, idx1/idx2 over the gene trees). All three trees must already be
// bound to the same SpeciesTree object.
PairMetrics pair_metrics(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2,
                         const LcaIndex& s_index, const LcaIndex& idx1,
                         const LcaIndex& idx2);

PlrBreakdown plr_from(const PairMetrics& counts, double alpha);

// The PLR dissimilarity with its full breakdown. Non-comparable pairs yield
// the distinguished value +infinity rather than an error.
PlrBreakdown plr(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2,
                 double alpha = 0.5);

// Rooted Robinson-Foulds: size of the symmetric difference of the two clade
// sets. Requires equal gene leaf sets.
std::int64_t rf(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2);

enum class NormalizeMode { none, diameter, max };

struct NormalizeContext {
  // Required for diameter mode.
  const SpeciesTree* species = nullptr;
  double alpha = 0.5;
  bool one_gene_per_species = false;
  // Required for max mode; infinite values are excluded from dataset maxima.
  std::optional<double> dataset_max;
};

// value / diam(PLR, S) or value / dataset-max, with 0/0 defined as 0.
// Diameter mode outside the one-gene-per-species setting is an error.
double normalize(double value, NormalizeMode mode, const NormalizeContext& ctx);

}  // namespace parle
