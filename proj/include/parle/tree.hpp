#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace parle {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

// Event labels of reconciled gene tree nodes.
enum class Event : std::uint8_t { extant = 0, dup = 1, spec = 2 };

std::string_view to_string(Event e);
bool event_from_string(std::string_view s, Event& out);

// A rooted binary species tree with uniquely labeled nodes.
//
// Trees are immutable after construction. Node identity is a dense integer
// index assigned in construction order (root is 0). Structurally identical
// trees, regardless of construction order, share the same canonical form,
// content hash and canonical node ranks, which is what cross-tree species
// identity is based on.
class SpeciesTree {
 public:
  class Builder {
   public:
    NodeId add_root(std::string label);
    NodeId add_child(NodeId parent, std::string label);
    // Throws ValidationError if the tree is not binary or labels are
    // missing/duplicated.
    SpeciesTree build();

   private:
    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<std::string> labels_;
  };

  int node_count() const { return static_cast<int>(parent_.size()); }
  int leaf_count() const { return leaf_count_; }
  NodeId root() const { return 0; }
  NodeId parent(NodeId v) const { return parent_[check(v)]; }
  std::span<const NodeId> children(NodeId v) const { return children_[check(v)]; }
  bool is_leaf(NodeId v) const { return children_[check(v)].empty(); }
  const std::string& label(NodeId v) const { return labels_[check(v)]; }
  int depth(NodeId v) const { return depth_[check(v)]; }

  // True iff `desc` lies in the subtree rooted at `anc` (reflexive).
  bool is_ancestor_or_equal(NodeId anc, NodeId desc) const {
    check(anc);
    check(desc);
    return tin_[anc] <= tin_[desc] && tout_[desc] <= tout_[anc];
  }

  // Node with the given label, or kNoNode.
  NodeId find(std::string_view label) const;

  // Position of a node in the canonical preorder (children visited in order
  // of the smallest leaf label below them). Equal-content trees assign equal
  // ranks to corresponding nodes.
  int canonical_rank(NodeId v) const { return rank_[check(v)]; }
  NodeId node_at_rank(int r) const { return order_[r]; }

  // Canonical Newick text, including the trailing ';' (no newline).
  const std::string& canonical_newick() const { return canonical_; }
  std::uint64_t content_hash() const { return hash_; }
  bool same_content(const SpeciesTree& other) const {
    return hash_ == other.hash_ && canonical_ == other.canonical_;
  }

 private:
  friend class Builder;
  SpeciesTree() = default;
  NodeId check(NodeId v) const {
    if (v < 0 || v >= node_count()) throw std::out_of_range("species node id out of range");
    return v;
  }

  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::string> labels_;
  std::vector<int> depth_;
  std::vector<int> tin_, tout_;
  std::vector<int> rank_;
  std::vector<NodeId> order_;
  std::unordered_map<std::string, NodeId> by_label_;
  std::string canonical_;
  std::uint64_t hash_ = 0;
  int leaf_count_ = 0;
};

// A gene tree reconciled with a species tree: topology, a gene->species map
// mu, and an event labeling. Internal nodes may have more than two children.
// Construction only enforces structural well-formedness; the reconciliation
// conditions are checked by validate(), which reports violations as data.
class ReconciledGeneTree {
 public:
  class Builder {
   public:
    explicit Builder(std::shared_ptr<const SpeciesTree> species);
    NodeId add_root(Event e, NodeId species, std::string gene = {});
    NodeId add_child(NodeId parent, Event e, NodeId species, std::string gene = {});
    ReconciledGeneTree build();

   private:
    std::shared_ptr<const SpeciesTree> species_;
    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<Event> event_;
    std::vector<NodeId> species_of_;
    std::vector<std::string> gene_;
  };

  const SpeciesTree& species_tree() const { return *species_; }
  const std::shared_ptr<const SpeciesTree>& species_tree_ptr() const { return species_; }

  int node_count() const { return static_cast<int>(parent_.size()); }
  int leaf_count() const { return leaf_count_; }
  NodeId root() const { return 0; }
  NodeId parent(NodeId v) const { return parent_[check(v)]; }
  std::span<const NodeId> children(NodeId v) const { return children_[check(v)]; }
  bool is_leaf(NodeId v) const { return children_[check(v)].empty(); }
  Event event(NodeId v) const { return event_[check(v)]; }
  NodeId species_of(NodeId v) const { return species_of_[check(v)]; }
  // Gene name of a leaf; empty for internal nodes.
  const std::string& gene_name(NodeId v) const { return gene_[check(v)]; }
  // Leaf carrying the given gene name, or kNoNode.
  NodeId leaf_by_gene(std::string_view gene) const;

  // Nodes listed parents-first / children-first.
  std::span<const NodeId> preorder() const { return preorder_; }
  std::span<const NodeId> postorder() const { return postorder_; }

 private:
  friend class Builder;
  ReconciledGeneTree() = default;
  NodeId check(NodeId v) const {
    if (v < 0 || v >= node_count()) throw std::out_of_range("gene node id out of range");
    return v;
  }

  std::shared_ptr<const SpeciesTree> species_;
  std::vector<NodeId> parent_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<Event> event_;
  std::vector<NodeId> species_of_;
  std::vector<std::string> gene_;
  std::vector<NodeId> preorder_, postorder_;
  std::unordered_map<std::string, NodeId> by_gene_;
  int leaf_count_ = 0;
};

// Reconciliation validity conditions. `structural` covers tree-shape and
// naming invariants that are not one of the three numbered conditions.
enum class Condition : std::uint8_t {
  structural = 0,
  leaf_events = 1,       // condition 1
  time_consistency = 2,  // condition 2
  speciation = 3,        // condition 3
};

struct Violation {
  Condition condition;
  NodeId node;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Checks conditions 1-3 plus structural invariants; violations are data, not
// errors. ok is true iff no violation was found.
ValidationReport validate(const ReconciledGeneTree& g);

// True iff the trees are bound to equal-content species trees, carry the same
// gene leaf sets, and map corresponding leaves to the same species.
bool comparable(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2);

// Gene names at the leaves below v.
std::set<std::string> clade(const ReconciledGeneTree& g, NodeId v);

// The lca-mapping lambda: every node to the lowest common ancestor in S of
// the species of its descendant genes. lambda(v) is always a descendant of
// (or equal to) mu(v) on valid trees.
std::vector<NodeId> lca_species_map(const ReconciledGeneTree& g);

// True iff every species leaf hosts exactly one gene leaf.
bool one_gene_per_species(const ReconciledGeneTree& g);

// Node translation between equal-content species trees, via canonical ranks.
// result[v] is the node of `to` corresponding to node v of `from`.
std::vector<NodeId> species_translation(const SpeciesTree& from, const SpeciesTree& to);

}  // namespace parle
