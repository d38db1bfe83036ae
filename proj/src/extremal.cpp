#include "parle/extremal.hpp"

#include <stdexcept>
#include <vector>

namespace parle {

std::int64_t h_s(const SpeciesTree& s) {
  std::int64_t sum = 0;
  for (NodeId v = 0; v < s.node_count(); ++v)
    if (!s.is_leaf(v)) sum += s.depth(v);
  return sum;
}

double plr_diameter(const SpeciesTree& s, double alpha) {
  const int n = s.leaf_count();
  if (n < 2) throw std::invalid_argument("plr_diameter: need at least two species");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("plr_diameter: alpha must lie in [0, 1]");
  return 2.0 * alpha * static_cast<double>(h_s(s)) +
         (1.0 - alpha) * static_cast<double>(2 * n - 2);
}

std::pair<ReconciledGeneTree, ReconciledGeneTree> extremal_pair(
    std::shared_ptr<const SpeciesTree> s) {
  if (s->leaf_count() < 2) throw std::invalid_argument("extremal_pair: need at least two species");

  // Both trees copy the topology of S; one gene "<label>_1" per species leaf.
  auto copy_of_s = [&s](bool lca_spec) {
    ReconciledGeneTree::Builder b(s);
    const SpeciesTree& st = *s;
    const NodeId root = st.root();
    std::vector<std::pair<NodeId, NodeId>> stack;  // (species node, new parent)
    auto emit = [&](NodeId sv, NodeId parent) {
      const bool leaf = st.is_leaf(sv);
      const Event e = leaf ? Event::extant : (lca_spec ? Event::spec : Event::dup);
      const NodeId mu = leaf ? sv : (lca_spec ? sv : root);
      const std::string gene = leaf ? st.label(sv) + "_1" : std::string{};
      return parent == kNoNode ? b.add_root(e, mu, gene) : b.add_child(parent, e, mu, gene);
    };
    stack.emplace_back(root, kNoNode);
    while (!stack.empty()) {
      const auto [sv, parent] = stack.back();
      stack.pop_back();
      const NodeId id = emit(sv, parent);
      const auto kids = st.children(sv);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, id);
    }
    return b.build();
  };

  return {copy_of_s(true), copy_of_s(false)};
}

int elrf_diameter_upper(int n) {
  if (n < 3) throw std::invalid_argument("elrf_diameter_upper: need n >= 3");
  return 3 * n - 8;
}

int lrf_diameter_upper(int n) {
  if (n < 3) throw std::invalid_argument("lrf_diameter_upper: need n >= 3");
  return 2 * n - 5;
}

DiameterReport diameter_report(const SpeciesTree& s, double alpha) {
  DiameterReport r;
  r.n = s.leaf_count();
  r.h_s = h_s(s);
  r.alpha = alpha;
  r.plr_diameter = plr_diameter(s, alpha);
  if (r.n >= 3) {
    r.elrf_upper = elrf_diameter_upper(r.n);
    r.lrf_upper = lrf_diameter_upper(r.n);
  }
  return r;
}

}  // namespace parle
