#include "parle/tree.hpp"

#include <algorithm>
#include <sstream>

#include "parle/lca.hpp"
#include "parle/rng.hpp"

namespace parle {

std::string_view to_string(Event e) {
  switch (e) {
    case Event::extant: return "extant";
    case Event::dup: return "dup";
    case Event::spec: return "spec";
  }
  return "?";
}

bool event_from_string(std::string_view s, Event& out) {
  if (s == "extant") out = Event::extant;
  else if (s == "dup") out = Event::dup;
  else if (s == "spec") out = Event::spec;
  else return false;
  return true;
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error([&report] {
        std::ostringstream os;
        os << "invalid tree:";
        for (const auto& v : report.violations) os << " [" << v.message << "]";
        return os.str();
      }()),
      report_(std::move(report)) {}

// ---------------------------------------------------------------------------
// SpeciesTree

NodeId SpeciesTree::Builder::add_root(std::string label) {
  if (!parent_.empty()) throw std::invalid_argument("species tree already has a root");
  parent_.push_back(kNoNode);
  children_.emplace_back();
  labels_.push_back(std::move(label));
  return 0;
}

NodeId SpeciesTree::Builder::add_child(NodeId parent, std::string label) {
  if (parent < 0 || parent >= static_cast<NodeId>(parent_.size()))
    throw std::invalid_argument("species tree builder: unknown parent node");
  const NodeId id = static_cast<NodeId>(parent_.size());
  parent_.push_back(parent);
  children_.emplace_back();
  labels_.push_back(std::move(label));
  children_[parent].push_back(id);
  return id;
}

SpeciesTree SpeciesTree::Builder::build() {
  if (parent_.empty()) throw std::invalid_argument("species tree is empty");
  const int n = static_cast<int>(parent_.size());

  ValidationReport report;
  auto flag = [&report](NodeId v, std::string msg) {
    report.ok = false;
    report.violations.push_back({Condition::structural, v, std::move(msg)});
  };
  for (NodeId v = 0; v < n; ++v) {
    const auto deg = children_[v].size();
    if (deg != 0 && deg != 2)
      flag(v, "non-binary species node '" + labels_[v] + "' has " + std::to_string(deg) +
                 " children");
    if (labels_[v].empty() && deg == 0) flag(v, "unlabeled species leaf");
  }
  std::unordered_map<std::string, NodeId> by_label;
  for (NodeId v = 0; v < n; ++v) {
    if (labels_[v].empty()) continue;
    if (!by_label.emplace(labels_[v], v).second)
      flag(v, "duplicate species label '" + labels_[v] + "'");
  }
  for (NodeId v = 0; v < n; ++v)
    if (labels_[v].empty()) flag(v, "unlabeled internal species node");
  if (!report.ok) throw ValidationError(std::move(report));

  SpeciesTree t;
  t.parent_ = std::move(parent_);
  t.children_ = std::move(children_);
  t.labels_ = std::move(labels_);
  t.by_label_ = std::move(by_label);

  t.depth_.assign(n, 0);
  t.tin_.assign(n, 0);
  t.tout_.assign(n, 0);
  // Builder ids are parent-before-child, so one ascending pass sets depths.
  for (NodeId v = 1; v < n; ++v) t.depth_[v] = t.depth_[t.parent_[v]] + 1;
  t.leaf_count_ = 0;
  for (NodeId v = 0; v < n; ++v)
    if (t.children_[v].empty()) ++t.leaf_count_;

  // Euler in/out times for O(1) ancestor tests.
  {
    int clock = 0;
    std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
    t.tin_[0] = clock++;
    while (!stack.empty()) {
      auto& [v, ci] = stack.back();
      if (ci < t.children_[v].size()) {
        const NodeId c = t.children_[v][ci++];
        t.tin_[c] = clock++;
        stack.emplace_back(c, 0);
      } else {
        t.tout_[v] = clock++;
        stack.pop_back();
      }
    }
  }

  // Smallest leaf label below each node; descending ids visit children first.
  std::vector<const std::string*> min_leaf(n);
  for (NodeId v = n - 1; v >= 0; --v) {
    if (t.children_[v].empty()) {
      min_leaf[v] = &t.labels_[v];
    } else {
      const std::string* best = min_leaf[t.children_[v][0]];
      for (const NodeId c : t.children_[v])
        if (*min_leaf[c] < *best) best = min_leaf[c];
      min_leaf[v] = best;
    }
  }

  // Canonical preorder: children sorted by their smallest leaf label.
  t.rank_.assign(n, 0);
  t.order_.clear();
  t.order_.reserve(n);
  std::string out;
  {
    struct Frame {
      NodeId v;
      std::vector<NodeId> kids;
      std::size_t ci;
    };
    std::vector<Frame> stack;
    auto open = [&](NodeId v) {
      t.rank_[v] = static_cast<int>(t.order_.size());
      t.order_.push_back(v);
      std::vector<NodeId> kids(t.children_[v].begin(), t.children_[v].end());
      std::sort(kids.begin(), kids.end(),
                [&](NodeId a, NodeId b) { return *min_leaf[a] < *min_leaf[b]; });
      if (!kids.empty()) out += '(';
      stack.push_back({v, std::move(kids), 0});
    };
    open(0);
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.ci < f.kids.size()) {
        if (f.ci > 0) out += ',';
        const NodeId c = f.kids[f.ci++];
        open(c);
      } else {
        if (!f.kids.empty()) out += ')';
        out += t.labels_[f.v];
        stack.pop_back();
      }
    }
    out += ';';
  }
  t.canonical_ = std::move(out);
  t.hash_ = hash64(t.canonical_);
  return t;
}

NodeId SpeciesTree::find(std::string_view label) const {
  const auto it = by_label_.find(std::string(label));
  return it == by_label_.end() ? kNoNode : it->second;
}

// ---------------------------------------------------------------------------
// ReconciledGeneTree

ReconciledGeneTree::Builder::Builder(std::shared_ptr<const SpeciesTree> species)
    : species_(std::move(species)) {
  if (!species_) throw std::invalid_argument("gene tree builder: null species tree");
}

NodeId ReconciledGeneTree::Builder::add_root(Event e, NodeId species, std::string gene) {
  if (!parent_.empty()) throw std::invalid_argument("gene tree already has a root");
  parent_.push_back(kNoNode);
  children_.emplace_back();
  event_.push_back(e);
  species_of_.push_back(species);
  gene_.push_back(std::move(gene));
  return 0;
}

NodeId ReconciledGeneTree::Builder::add_child(NodeId parent, Event e, NodeId species,
                                              std::string gene) {
  if (parent < 0 || parent >= static_cast<NodeId>(parent_.size()))
    throw std::invalid_argument("gene tree builder: unknown parent node");
  const NodeId id = static_cast<NodeId>(parent_.size());
  parent_.push_back(parent);
  children_.emplace_back();
  event_.push_back(e);
  species_of_.push_back(species);
  gene_.push_back(std::move(gene));
  children_[parent].push_back(id);
  return id;
}

ReconciledGeneTree ReconciledGeneTree::Builder::build() {
  if (parent_.empty()) throw std::invalid_argument("gene tree is empty");
  const int n = static_cast<int>(parent_.size());
  for (NodeId v = 0; v < n; ++v) {
    if (species_of_[v] < 0 || species_of_[v] >= species_->node_count())
      throw std::invalid_argument("gene tree: species id out of range");
    if (children_[v].empty() && gene_[v].empty())
      throw std::invalid_argument("gene tree: leaf without a gene name");
  }

  ReconciledGeneTree t;
  t.species_ = std::move(species_);
  t.parent_ = std::move(parent_);
  t.children_ = std::move(children_);
  t.event_ = std::move(event_);
  t.species_of_ = std::move(species_of_);
  t.gene_ = std::move(gene_);

  t.preorder_.reserve(n);
  t.postorder_.reserve(n);
  std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
  t.preorder_.push_back(0);
  while (!stack.empty()) {
    auto& [v, ci] = stack.back();
    if (ci < t.children_[v].size()) {
      const NodeId c = t.children_[v][ci++];
      t.preorder_.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      t.postorder_.push_back(v);
      stack.pop_back();
    }
  }

  t.leaf_count_ = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (!t.children_[v].empty()) continue;
    ++t.leaf_count_;
    t.by_gene_.emplace(t.gene_[v], v);  // first occurrence wins on duplicates
  }
  return t;
}

NodeId ReconciledGeneTree::leaf_by_gene(std::string_view gene) const {
  const auto it = by_gene_.find(std::string(gene));
  return it == by_gene_.end() ? kNoNode : it->second;
}

// ---------------------------------------------------------------------------
// Operations

ValidationReport validate(const ReconciledGeneTree& g) {
  const SpeciesTree& s = g.species_tree();
  ValidationReport report;
  auto flag = [&report](Condition c, NodeId v, std::string msg) {
    report.ok = false;
    report.violations.push_back({c, v, std::move(msg)});
  };

  std::unordered_map<std::string_view, NodeId> seen_genes;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const bool leaf = g.is_leaf(v);
    const NodeId mu = g.species_of(v);
    if (leaf) {
      if (g.event(v) != Event::extant)
        flag(Condition::leaf_events, v,
             "leaf '" + g.gene_name(v) + "' is labeled " + std::string(to_string(g.event(v))) +
                 ", expected extant");
      if (!s.is_leaf(mu))
        flag(Condition::leaf_events, v,
             "leaf '" + g.gene_name(v) + "' maps to internal species '" + s.label(mu) + "'");
      const auto [it, inserted] = seen_genes.emplace(g.gene_name(v), v);
      if (!inserted)
        flag(Condition::structural, v, "duplicate gene name '" + g.gene_name(v) + "'");
    } else {
      if (g.children(v).size() < 2)
        flag(Condition::structural, v, "internal node has fewer than two children");
      if (g.event(v) == Event::extant)
        flag(Condition::leaf_events, v, "internal node labeled extant");
    }

    if (v != g.root()) {
      const NodeId pmu = g.species_of(g.parent(v));
      if (!s.is_ancestor_or_equal(pmu, mu))
        flag(Condition::time_consistency, v,
             "species '" + s.label(mu) + "' is not a descendant of parent's species '" +
                 s.label(pmu) + "'");
    }

    if (g.event(v) == Event::spec) {
      if (s.is_leaf(mu))
        flag(Condition::speciation, v, "speciation maps to species leaf '" + s.label(mu) + "'");
      if (g.children(v).size() != 2) {
        flag(Condition::speciation, v, "speciation does not have exactly two children");
      } else if (!s.is_leaf(mu)) {
        const NodeId m1 = g.species_of(g.children(v)[0]);
        const NodeId m2 = g.species_of(g.children(v)[1]);
        const NodeId s1 = s.children(mu)[0];
        const NodeId s2 = s.children(mu)[1];
        const bool split = (s.is_ancestor_or_equal(s1, m1) && s.is_ancestor_or_equal(s2, m2)) ||
                           (s.is_ancestor_or_equal(s2, m1) && s.is_ancestor_or_equal(s1, m2));
        if (!split)
          flag(Condition::speciation, v,
               "children of speciation at '" + s.label(mu) +
                   "' do not descend from distinct species children");
      }
    }
  }
  return report;
}

bool comparable(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2) {
  const SpeciesTree& s1 = g1.species_tree();
  const SpeciesTree& s2 = g2.species_tree();
  if (&s1 != &s2 && !s1.same_content(s2)) return false;
  if (g1.leaf_count() != g2.leaf_count()) return false;
  for (const NodeId v : g1.postorder()) {
    if (!g1.is_leaf(v)) continue;
    const NodeId w = g2.leaf_by_gene(g1.gene_name(v));
    if (w == kNoNode) return false;
    if (s1.canonical_rank(g1.species_of(v)) != s2.canonical_rank(g2.species_of(w))) return false;
  }
  return true;
}

std::set<std::string> clade(const ReconciledGeneTree& g, NodeId v) {
  if (v < 0 || v >= g.node_count()) throw std::out_of_range("clade: unknown node");
  std::set<std::string> out;
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    if (g.is_leaf(u)) {
      out.insert(g.gene_name(u));
    } else {
      for (const NodeId c : g.children(u)) stack.push_back(c);
    }
  }
  return out;
}

std::vector<NodeId> lca_species_map(const ReconciledGeneTree& g) {
  const LcaIndex idx(g.species_tree());
  std::vector<NodeId> lambda(g.node_count(), kNoNode);
  for (const NodeId v : g.postorder()) {
    if (g.is_leaf(v)) {
      lambda[v] = g.species_of(v);
    } else {
      NodeId acc = lambda[g.children(v)[0]];
      for (const NodeId c : g.children(v).subspan(1)) acc = idx.lca(acc, lambda[c]);
      lambda[v] = acc;
    }
  }
  return lambda;
}

bool one_gene_per_species(const ReconciledGeneTree& g) {
  const SpeciesTree& s = g.species_tree();
  if (g.leaf_count() != s.leaf_count()) return false;
  std::vector<char> used(s.node_count(), 0);
  for (const NodeId v : g.postorder()) {
    if (!g.is_leaf(v)) continue;
    const NodeId mu = g.species_of(v);
    if (!s.is_leaf(mu) || used[mu]) return false;
    used[mu] = 1;
  }
  return true;
}

std::vector<NodeId> species_translation(const SpeciesTree& from, const SpeciesTree& to) {
  if (!from.same_content(to))
    throw std::invalid_argument("species_translation: trees differ in content");
  std::vector<NodeId> map(from.node_count());
  for (NodeId v = 0; v < from.node_count(); ++v) map[v] = to.node_at_rank(from.canonical_rank(v));
  return map;
}

}  // namespace parle
