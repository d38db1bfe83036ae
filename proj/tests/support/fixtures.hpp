#pragma once

// Shared test fixtures: the worked-example pair, the triangle
// inequality witness family TRI(k), standard species tree shapes, and a
// redundancy-injection helper used by the canonicalization tests.

#include <memory>
#include <string>
#include <vector>

#include "parle/canon.hpp"
#include "parle/rng.hpp"
#include "parle/tree.hpp"

namespace parle::testsupport {

// S = ((C,D)z1,(A,B)z2)z0
inline std::shared_ptr<const SpeciesTree> example_species() {
  SpeciesTree::Builder b;
  const NodeId z0 = b.add_root("z0");
  const NodeId z1 = b.add_child(z0, "z1");
  b.add_child(z1, "C");
  b.add_child(z1, "D");
  const NodeId z2 = b.add_child(z0, "z2");
  b.add_child(z2, "A");
  b.add_child(z2, "B");
  return std::make_shared<const SpeciesTree>(b.build());
}

// G1 = ((c,d)x1[dup@z1],(a,b)x2[dup@z2])x0[spec@z0]
inline ReconciledGeneTree example_g1(std::shared_ptr<const SpeciesTree> s) {
  ReconciledGeneTree::Builder b(s);
  const NodeId x0 = b.add_root(Event::spec, s->find("z0"));
  const NodeId x1 = b.add_child(x0, Event::dup, s->find("z1"));
  b.add_child(x1, Event::extant, s->find("C"), "c");
  b.add_child(x1, Event::extant, s->find("D"), "d");
  const NodeId x2 = b.add_child(x0, Event::dup, s->find("z2"));
  b.add_child(x2, Event::extant, s->find("A"), "a");
  b.add_child(x2, Event::extant, s->find("B"), "b");
  return b.build();
}

// G2 = (((a,b)y2[spec@z2],c)y1[spec@z0],d)y0[dup@z0]
inline ReconciledGeneTree example_g2(std::shared_ptr<const SpeciesTree> s) {
  ReconciledGeneTree::Builder b(s);
  const NodeId y0 = b.add_root(Event::dup, s->find("z0"));
  const NodeId y1 = b.add_child(y0, Event::spec, s->find("z0"));
  const NodeId y2 = b.add_child(y1, Event::spec, s->find("z2"));
  b.add_child(y2, Event::extant, s->find("A"), "a");
  b.add_child(y2, Event::extant, s->find("B"), "b");
  b.add_child(y1, Event::extant, s->find("C"), "c");
  b.add_child(y0, Event::extant, s->find("D"), "d");
  return b.build();
}

// S = ((A,B)X,C)Y with genes a1..a2k in A, b1..b2k in B and c in C.
inline std::shared_ptr<const SpeciesTree> tri_species() {
  SpeciesTree::Builder b;
  const NodeId y = b.add_root("Y");
  const NodeId x = b.add_child(y, "X");
  b.add_child(x, "A");
  b.add_child(x, "B");
  b.add_child(y, "C");
  return std::make_shared<const SpeciesTree>(b.build());
}

// Root dup@Y over k dup@X(spec@X(a_{2i-1},b_{2i-1}), spec@X(a_{2i},b_{2i}))
// subtrees plus leaf c.
inline ReconciledGeneTree tri_g1(std::shared_ptr<const SpeciesTree> s, int k) {
  ReconciledGeneTree::Builder b(s);
  const NodeId root = b.add_root(Event::dup, s->find("Y"));
  for (int i = 1; i <= k; ++i) {
    const NodeId dup = b.add_child(root, Event::dup, s->find("X"));
    for (const int jj : {2 * i - 1, 2 * i}) {
      const NodeId sp = b.add_child(dup, Event::spec, s->find("X"));
      b.add_child(sp, Event::extant, s->find("A"), "a" + std::to_string(jj));
      b.add_child(sp, Event::extant, s->find("B"), "b" + std::to_string(jj));
    }
  }
  b.add_child(root, Event::extant, s->find("C"), "c");
  return b.build();
}

// spec@Y( dup@X( spec@X(a_j,b_j) for j = 1..2k ), c )
inline ReconciledGeneTree tri_g2(std::shared_ptr<const SpeciesTree> s, int k) {
  ReconciledGeneTree::Builder b(s);
  const NodeId root = b.add_root(Event::spec, s->find("Y"));
  const NodeId dup = b.add_child(root, Event::dup, s->find("X"));
  for (int jj = 1; jj <= 2 * k; ++jj) {
    const NodeId sp = b.add_child(dup, Event::spec, s->find("X"));
    b.add_child(sp, Event::extant, s->find("A"), "a" + std::to_string(jj));
    b.add_child(sp, Event::extant, s->find("B"), "b" + std::to_string(jj));
  }
  b.add_child(root, Event::extant, s->find("C"), "c");
  return b.build();
}

// spec@Y( spec@X( dup@A(a_1..a_2k), dup@B(b_1..b_2k) ), c )
inline ReconciledGeneTree tri_g3(std::shared_ptr<const SpeciesTree> s, int k) {
  ReconciledGeneTree::Builder b(s);
  const NodeId root = b.add_root(Event::spec, s->find("Y"));
  const NodeId sp = b.add_child(root, Event::spec, s->find("X"));
  const NodeId da = b.add_child(sp, Event::dup, s->find("A"));
  for (int jj = 1; jj <= 2 * k; ++jj)
    b.add_child(da, Event::extant, s->find("A"), "a" + std::to_string(jj));
  const NodeId db = b.add_child(sp, Event::dup, s->find("B"));
  for (int jj = 1; jj <= 2 * k; ++jj)
    b.add_child(db, Event::extant, s->find("B"), "b" + std::to_string(jj));
  b.add_child(root, Event::extant, s->find("C"), "c");
  return b.build();
}

// Caterpillar over leaves s1..sn: (((s1,s2)i1,s3)i2,...).
inline std::shared_ptr<const SpeciesTree> caterpillar_species(int n) {
  SpeciesTree::Builder b;
  NodeId spine = b.add_root("i" + std::to_string(n - 1));
  for (int i = n; i >= 3; --i) {
    const NodeId next =
        i == 3 ? b.add_child(spine, "i1") : b.add_child(spine, "i" + std::to_string(i - 2));
    b.add_child(spine, "s" + std::to_string(i));
    spine = next;
  }
  b.add_child(spine, "s1");
  b.add_child(spine, "s2");
  return std::make_shared<const SpeciesTree>(b.build());
}

// Balanced split of s1..sn (halving ranges).
inline std::shared_ptr<const SpeciesTree> balanced_species(int n) {
  SpeciesTree::Builder b;
  struct Range {
    int lo, hi;
    NodeId parent;
  };
  int internal = 0;
  std::vector<Range> work{{1, n, kNoNode}};
  while (!work.empty()) {
    const auto [lo, hi, parent] = work.back();
    work.pop_back();
    if (lo == hi) {
      b.add_child(parent, "s" + std::to_string(lo));
      continue;
    }
    const std::string label = "i" + std::to_string(++internal);
    const NodeId id = parent == kNoNode ? b.add_root(label) : b.add_child(parent, label);
    const int mid = (lo + hi) / 2;
    work.push_back({mid + 1, hi, id});
    work.push_back({lo, mid, id});
  }
  return std::make_shared<const SpeciesTree>(b.build());
}

// Splits multifurcating duplication nodes into chains of duplications in the
// same species, i.e. injects redundant edges without changing the lr() form.
inline ReconciledGeneTree inject_redundancy(const ReconciledGeneTree& g, int steps,
                                            SplitMix64& rng) {
  ReconciledGeneTree cur = g;
  for (int step = 0; step < steps; ++step) {
    std::vector<NodeId> candidates;
    for (NodeId v = 0; v < cur.node_count(); ++v)
      if (!cur.is_leaf(v) && cur.event(v) == Event::dup && cur.children(v).size() >= 3)
        candidates.push_back(v);
    if (candidates.empty()) break;
    const NodeId v = candidates[rng.bounded(candidates.size())];
    const auto kids = cur.children(v);
    // Move a random proper subset of >= 2 children under a fresh dup node.
    const std::size_t take = 2 + rng.bounded(kids.size() - 2);
    std::vector<NodeId> pick(kids.begin(), kids.end());
    for (std::size_t i = 0; i + 1 < pick.size(); ++i) {
      const std::size_t r = i + rng.bounded(pick.size() - i);
      std::swap(pick[i], pick[r]);
    }
    pick.resize(take);
    std::vector<char> moved(cur.node_count(), 0);
    for (const NodeId c : pick) moved[c] = 1;

    ReconciledGeneTree::Builder b(cur.species_tree_ptr());
    struct Frame {
      NodeId v;
      NodeId parent;
    };
    std::vector<Frame> stack{{cur.root(), kNoNode}};
    while (!stack.empty()) {
      const auto [u, parent] = stack.back();
      stack.pop_back();
      const NodeId id = parent == kNoNode
                            ? b.add_root(cur.event(u), cur.species_of(u), cur.gene_name(u))
                            : b.add_child(parent, cur.event(u), cur.species_of(u),
                                          cur.gene_name(u));
      if (cur.is_leaf(u)) continue;
      std::vector<NodeId> stay, move;
      for (const NodeId c : cur.children(u))
        (u == v && moved[c] ? move : stay).push_back(c);
      if (u == v) {
        const NodeId fresh = b.add_child(id, Event::dup, cur.species_of(v));
        for (auto it = move.rbegin(); it != move.rend(); ++it) stack.push_back({*it, fresh});
      }
      for (auto it = stay.rbegin(); it != stay.rend(); ++it) stack.push_back({*it, id});
    }
    cur = b.build();
  }
  return cur;
}

}  // namespace parle::testsupport
