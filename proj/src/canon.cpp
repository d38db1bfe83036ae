#include "parle/canon.hpp"

#include <algorithm>

namespace parle {

namespace {

bool is_redundant(const ReconciledGeneTree& g, NodeId parent, NodeId child) {
  return g.event(parent) == Event::dup && g.event(child) == Event::dup &&
         g.species_of(parent) == g.species_of(child);
}

// Rebuilds g with every node of `drop` removed; the children of a dropped
// node are spliced into its surviving ancestor at the dropped node's
// position. Node ids of the result follow preorder of the new shape.
ReconciledGeneTree drop_nodes(const ReconciledGeneTree& g, const std::vector<char>& drop) {
  ReconciledGeneTree::Builder b(g.species_tree_ptr());

  // (old node, new parent id or kNoNode for the root)
  std::vector<std::pair<NodeId, NodeId>> stack{{g.root(), kNoNode}};
  while (!stack.empty()) {
    const auto [v, new_parent] = stack.back();
    stack.pop_back();
    const NodeId id = new_parent == kNoNode
                          ? b.add_root(g.event(v), g.species_of(v), g.gene_name(v))
                          : b.add_child(new_parent, g.event(v), g.species_of(v), g.gene_name(v));
    // Collect surviving children, descending through dropped ones in order.
    std::vector<NodeId> kids;
    std::vector<NodeId> walk(g.children(v).rbegin(), g.children(v).rend());
    while (!walk.empty()) {
      const NodeId c = walk.back();
      walk.pop_back();
      if (drop[c]) {
        for (auto it = g.children(c).rbegin(); it != g.children(c).rend(); ++it)
          walk.push_back(*it);
      } else {
        kids.push_back(c);
      }
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.emplace_back(*it, id);
  }
  return b.build();
}

}  // namespace

std::vector<RedundantEdge> redundant_edges(const ReconciledGeneTree& g) {
  std::vector<RedundantEdge> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (v == g.root()) continue;
    const NodeId p = g.parent(v);
    if (is_redundant(g, p, v)) out.push_back({p, v});
  }
  return out;
}

ReconciledGeneTree contract(const ReconciledGeneTree& g, RedundantEdge e) {
  if (e.child < 0 || e.child >= g.node_count() || e.child == g.root() ||
      g.parent(e.child) != e.parent)
    throw std::invalid_argument("contract: not an edge of the tree");
  if (!is_redundant(g, e.parent, e.child))
    throw std::invalid_argument("contract: edge is not redundant");
  std::vector<char> drop(g.node_count(), 0);
  drop[e.child] = 1;
  return drop_nodes(g, drop);
}

ReconciledGeneTree lr(const ReconciledGeneTree& g) {
  // A node is dropped iff the edge to its parent is redundant; its children
  // are then absorbed by the highest non-dropped ancestor. Order of
  // contractions does not matter, so everything collapses in one pass.
  std::vector<char> drop(g.node_count(), 0);
  bool any = false;
  for (const NodeId v : g.preorder()) {
    if (v == g.root()) continue;
    if (is_redundant(g, g.parent(v), v)) {
      drop[v] = 1;
      any = true;
    }
  }
  if (!any) return g;
  return drop_nodes(g, drop);
}

std::string canonical_encoding(const ReconciledGeneTree& g) {
  const SpeciesTree& s = g.species_tree();
  std::vector<std::string> enc(g.node_count());
  for (const NodeId v : g.postorder()) {
    const int rank = s.canonical_rank(g.species_of(v));
    if (g.is_leaf(v)) {
      const std::string& name = g.gene_name(v);
      enc[v] = "L" + std::to_string(name.size()) + ":" + name + "@" + std::to_string(rank);
    } else {
      std::vector<const std::string*> kids;
      kids.reserve(g.children(v).size());
      for (const NodeId c : g.children(v)) kids.push_back(&enc[c]);
      std::sort(kids.begin(), kids.end(),
                [](const std::string* a, const std::string* b) { return *a < *b; });
      std::string out = g.event(v) == Event::dup ? "D@" : "S@";
      out += std::to_string(rank);
      out += '(';
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i > 0) out += ',';
        out += *kids[i];
      }
      out += ')';
      for (const NodeId c : g.children(v)) {
        enc[c].clear();
        enc[c].shrink_to_fit();
      }
      enc[v] = std::move(out);
    }
  }
  return enc[g.root()];
}

bool isomorphic(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2) {
  if (&g1.species_tree() != &g2.species_tree() &&
      !g1.species_tree().same_content(g2.species_tree()))
    return false;
  if (g1.node_count() != g2.node_count() || g1.leaf_count() != g2.leaf_count()) return false;
  return canonical_encoding(g1) == canonical_encoding(g2);
}

bool equiv_d(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2) {
  return isomorphic(lr(g1), lr(g2));
}

}  // namespace parle
