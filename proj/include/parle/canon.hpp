#pragma once

#include <string>
#include <vector>

#include "parle/tree.hpp"

namespace parle {

// An edge whose endpoints are both duplications in the same species.
struct RedundantEdge {
  NodeId parent = kNoNode;
  NodeId child = kNoNode;
};

// All redundant edges of g; empty iff g is least duplication-resolved.
std::vector<RedundantEdge> redundant_edges(const ReconciledGeneTree& g);

// New tree with e contracted: the child is deleted and its children are
// re-attached to the parent in place. Throws std::invalid_argument if e is
// not a redundant edge of g.
ReconciledGeneTree contract(const ReconciledGeneTree& g, RedundantEdge e);

// Least duplication-resolved form: the fixed point of contracting redundant
// edges, independent of contraction order. The input is never mutated.
ReconciledGeneTree lr(const ReconciledGeneTree& g);

// Deterministic encoding that two valid trees share iff they are isomorphic:
// child encodings are sorted, internal keys are (children, species, event),
// leaf keys are (gene name, species).
std::string canonical_encoding(const ReconciledGeneTree& g);

// Leaf-fixing isomorphism preserving edges, mu and event labels.
bool isomorphic(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2);

// Equivalence up to redundant edges: isomorphic(lr(g1), lr(g2)).
bool equiv_d(const ReconciledGeneTree& g1, const ReconciledGeneTree& g2);

}  // namespace parle
