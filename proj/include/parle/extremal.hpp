#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>

#include "parle/tree.hpp"

namespace parle {

struct DiameterReport {
  int n = 0;                 // species leaf count
  std::int64_t h_s = 0;      // sum of root-to-internal-node distances
  double alpha = 0.5;
  double plr_diameter = 0.0; // 2*alpha*H(S) + (1-alpha)*(2n-2)
  std::optional<int> elrf_upper;  // 3n-8, defined for n >= 3
  std::optional<int> lrf_upper;   // 2n-5, defined for n >= 3
};

// H(S): sum over internal nodes of their distance to the root. Bounded by
// (n-1)(n-2)/2, with equality on caterpillars.
std::int64_t h_s(const SpeciesTree& s);

// The PLR diameter over pairs of reconciled trees with one gene per species:
// 2*alpha*H(S) + (1-alpha)*(2n-2). Requires n >= 2 and alpha in [0,1].
double plr_diameter(const SpeciesTree& s, double alpha);

// A pair achieving the diameter for every alpha: both trees copy the
// topology of S with one gene per species; the first uses the lca-mapping
// with all-speciation labels, the second maps every internal node to the
// root with all-duplication labels.
std::pair<ReconciledGeneTree, ReconciledGeneTree> extremal_pair(
    std::shared_ptr<const SpeciesTree> s);

// Upper bounds on the ELRF and LRF diameters for n >= 3 leaves. These are
// formula evaluators only; no ELRF/LRF distance engine exists here.
int elrf_diameter_upper(int n);
int lrf_diameter_upper(int n);

DiameterReport diameter_report(const SpeciesTree& s, double alpha);

}  // namespace parle
