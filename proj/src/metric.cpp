#include "parle/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "parle/extremal.hpp"

namespace parle {

namespace {

void require_comparable(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2) {
  if (!comparable(g1, g2))
    throw std::invalid_argument("gene trees are not comparable");
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in [0, 1]");
}

std::vector<NodeId> map_into(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2,
                             const LcaIndex& idx2) {
  std::vector<NodeId> m(g1.node_count(), kNoNode);
  for (const NodeId v : g1.postorder()) {
    if (g1.is_leaf(v)) {
      m[v] = g2.leaf_by_gene(g1.gene_name(v));
    } else {
      const auto kids = g1.children(v);
      NodeId acc = m[kids[0]];
      for (const NodeId c : kids.subspan(1)) acc = idx2.lca(acc, m[c]);
      m[v] = acc;
    }
  }
  return m;
}

struct DirectedCounts {
  std::int64_t path = 0;
  std::int64_t lbl = 0;
};

// One pass of Algorithm-style accumulation from g1 into g2. Species ids are
// translated into the reference id space of s_index when xlat arrays are
// given (needed when the two trees are bound to distinct equal-content
// species tree objects).
DirectedCounts directed_counts(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2,
                               const LcaIndex& s_index, const LcaIndex& idx2,
                               const std::vector<NodeId>* xlat1,
                               const std::vector<NodeId>* xlat2) {
  const std::vector<NodeId> m = map_into(g1, g2, idx2);
  DirectedCounts counts;
  for (NodeId v = 0; v < g1.node_count(); ++v) {
    const NodeId w = m[v];
    NodeId mu1 = g1.species_of(v);
    NodeId mu2 = g2.species_of(w);
    if (xlat1) mu1 = (*xlat1)[mu1];
    if (xlat2) mu2 = (*xlat2)[mu2];
    counts.path += s_index.dist(mu1, mu2);
    counts.lbl += g1.event(v) != g2.event(w) ? 1 : 0;
  }
  return counts;
}

}  // namespace

GeneGeneMap lca_map(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2,
                    const LcaIndex& target_index) {
  require_comparable(g1, g2);
  return GeneGeneMap{&g1, &g2, map_into(g1, g2, target_index)};
}

GeneGeneMap lca_map(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2) {
  const LcaIndex idx2(g2);
  return lca_map(g1, g2, idx2);
}

std::int64_t d_path(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2) {
  require_comparable(g1, g2);
  const LcaIndex s_index(g1.species_tree());
  const LcaIndex idx2(g2);
  std::vector<NodeId> xlat2;
  const bool foreign = &g1.species_tree() != &g2.species_tree();
  if (foreign) xlat2 = species_translation(g2.species_tree(), g1.species_tree());
  return directed_counts(g1, g2, s_index, idx2, nullptr, foreign ? &xlat2 : nullptr).path;
}

std::int64_t d_lbl(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2) {
  require_comparable(g1, g2);
  const LcaIndex idx2(g2);
  const std::vector<NodeId> m = map_into(g1, g2, idx2);
  std::int64_t lbl = 0;
  for (NodeId v = 0; v < g1.node_count(); ++v)
    lbl += g1.event(v) != g2.event(m[v]) ? 1 : 0;
  return lbl;
}

double d_asym(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2, double alpha) {
  require_alpha(alpha);
  require_comparable(g1, g2);
  const LcaIndex s_index(g1.species_tree());
  const LcaIndex idx2(g2);
  std::vector<NodeId> xlat2;
  const bool foreign = &g1.species_tree() != &g2.species_tree();
  if (foreign) xlat2 = species_translation(g2.species_tree(), g1.species_tree());
  const DirectedCounts c =
      directed_counts(g1, g2, s_index, idx2, nullptr, foreign ? &xlat2 : nullptr);
  return alpha * static_cast<double>(c.path) + (1.0 - alpha) * static_cast<double>(c.lbl);
}

PairMetrics pair_metrics(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2,
                         const LcaIndex& s_index, const LcaIndex& idx1,
                         const LcaIndex& idx2) {
  const DirectedCounts c12 = directed_counts(g1, g2, s_index, idx2, nullptr, nullptr);
  const DirectedCounts c21 = directed_counts(g2, g1, s_index, idx1, nullptr, nullptr);
  return PairMetrics{c12.path, c12.lbl, c21.path, c21.lbl, true};
}

PairMetrics pair_metrics(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2) {
  if (!comparable(g1, g2)) return PairMetrics{0, 0, 0, 0, false};
  const LcaIndex s_index(g1.species_tree());
  const LcaIndex idx1(g1);
  const LcaIndex idx2(g2);
  if (&g1.species_tree() == &g2.species_tree())
    return pair_metrics(g1, g2, s_index, idx1, idx2);
  const std::vector<NodeId> xlat2 =
      species_translation(g2.species_tree(), g1.species_tree());
  const DirectedCounts c12 = directed_counts(g1, g2, s_index, idx2, nullptr, &xlat2);
  const DirectedCounts c21 = directed_counts(g2, g1, s_index, idx1, &xlat2, nullptr);
  return PairMetrics{c12.path, c12.lbl, c21.path, c21.lbl, true};
}

PlrBreakdown plr_from(const PairMetrics& counts, double alpha) {
  require_alpha(alpha);
  PlrBreakdown b;
  b.alpha = alpha;
  if (!counts.comparable) {
    b.comparable = false;
    b.d_asym_12 = b.d_asym_21 = b.plr = std::numeric_limits<double>::infinity();
    return b;
  }
  b.d_path_12 = counts.d_path_12;
  b.d_lbl_12 = counts.d_lbl_12;
  b.d_path_21 = counts.d_path_21;
  b.d_lbl_21 = counts.d_lbl_21;
  b.d_asym_12 = alpha * static_cast<double>(b.d_path_12) +
                (1.0 - alpha) * static_cast<double>(b.d_lbl_12);
  b.d_asym_21 = alpha * static_cast<double>(b.d_path_21) +
                (1.0 - alpha) * static_cast<double>(b.d_lbl_21);
  b.plr = b.d_asym_12 + b.d_asym_21;
  return b;
}

PlrBreakdown plr(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2, double alpha) {
  require_alpha(alpha);
  return plr_from(pair_metrics(g1, g2), alpha);
}

std::int64_t rf(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2) {
  // Gene names to dense ids; both trees must carry the same leaf set.
  std::unordered_map<std::string_view, int> gene_id;
  gene_id.reserve(g1.leaf_count());
  for (const NodeId v : g1.postorder())
    if (g1.is_leaf(v)) gene_id.emplace(g1.gene_name(v), static_cast<int>(gene_id.size()));
  if (g2.leaf_count() != g1.leaf_count())
    throw std::invalid_argument("rf: different leaf gene sets");
  for (const NodeId v : g2.postorder())
    if (g2.is_leaf(v) && !gene_id.contains(g2.gene_name(v)))
      throw std::invalid_argument("rf: different leaf gene sets");

  auto clades = [&gene_id](const ReconciledGeneTree& g) {
    std::vector<std::vector<int>> per_node(g.node_count());
    std::set<std::vector<int>> out;
    for (const NodeId v : g.postorder()) {
      auto& cl = per_node[v];
      if (g.is_leaf(v)) {
        cl.push_back(gene_id.at(g.gene_name(v)));
      } else {
        for (const NodeId c : g.children(v)) {
          auto& sub = per_node[c];
          cl.insert(cl.end(), sub.begin(), sub.end());
          sub.clear();
          sub.shrink_to_fit();
        }
        std::sort(cl.begin(), cl.end());
      }
      out.insert(cl);
    }
    return out;
  };

  const auto c1 = clades(g1);
  const auto c2 = clades(g2);
  std::int64_t shared = 0;
  for (const auto& cl : c1) shared += c2.contains(cl) ? 1 : 0;
  return static_cast<std::int64_t>(c1.size()) + static_cast<std::int64_t>(c2.size()) -
         2 * shared;
}

double normalize(double value, NormalizeMode mode, const NormalizeContext& ctx) {
  switch (mode) {
    case NormalizeMode::none:
      return value;
    case NormalizeMode::diameter: {
      if (ctx.species == nullptr)
        throw std::invalid_argument("normalize: diameter mode needs a species tree");
      if (!ctx.one_gene_per_species)
        throw std::invalid_argument(
            "normalize: diameter mode applies only to one-gene-per-species instances");
      const double diam = plr_diameter(*ctx.species, ctx.alpha);
      if (value == 0.0 && diam == 0.0) return 0.0;
      return value / diam;
    }
    case NormalizeMode::max: {
      if (!ctx.dataset_max.has_value())
        throw std::invalid_argument("normalize: max mode needs the dataset maximum");
      const double mx = *ctx.dataset_max;
      if (value == 0.0 && mx == 0.0) return 0.0;
      return value / mx;
    }
  }
  throw std::invalid_argument("normalize: unknown mode");
}

}  // namespace parle
