// Python bindings for the PLR toolkit. Trees are opaque handles; structured
// results (breakdowns, reports, records) map to small attribute classes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "parle/canon.hpp"
#include "parle/extremal.hpp"
#include "parle/metric.hpp"
#include "parle/newick.hpp"
#include "parle/sim.hpp"
#include "parle/tree.hpp"

namespace py = pybind11;
using namespace parle;

namespace {

std::vector<AlphaSpec> alphas_from(const std::vector<py::object>& values) {
  std::vector<AlphaSpec> out;
  for (const auto& v : values) {
    if (py::isinstance<py::str>(v) && v.cast<std::string>() == "1/n")
      out.push_back(AlphaSpec::one_over_n());
    else
      out.push_back(AlphaSpec::literal(v.cast<double>()));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_parle, m) {
  m.doc() = "Path-label reconciliation (PLR) dissimilarity for gene trees";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ParseError>(m, "NewickParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "TreeValidationError", PyExc_ValueError);

  py::class_<SpeciesTree, std::shared_ptr<SpeciesTree>>(m, "SpeciesTree")
      .def_property_readonly("leaf_count", &SpeciesTree::leaf_count)
      .def_property_readonly("node_count", &SpeciesTree::node_count)
      .def("newick", [](const SpeciesTree& s) { return serialize_species_tree(s); })
      .def("same_content", &SpeciesTree::same_content)
      .def("__repr__", [](const SpeciesTree& s) {
        return "<SpeciesTree n=" + std::to_string(s.leaf_count()) + ">";
      });

  py::class_<ReconciledGeneTree>(m, "ReconciledGeneTree")
      .def_property_readonly("leaf_count", &ReconciledGeneTree::leaf_count)
      .def_property_readonly("node_count", &ReconciledGeneTree::node_count)
      .def("newick", [](const ReconciledGeneTree& g) { return serialize_reconciled_tree(g); })
      .def("species_newick",
           [](const ReconciledGeneTree& g) { return serialize_species_tree(g.species_tree()); })
      .def("__repr__", [](const ReconciledGeneTree& g) {
        return "<ReconciledGeneTree leaves=" + std::to_string(g.leaf_count()) + ">";
      });

  py::class_<PlrBreakdown>(m, "PlrBreakdown")
      .def_readonly("d_path_12", &PlrBreakdown::d_path_12)
      .def_readonly("d_lbl_12", &PlrBreakdown::d_lbl_12)
      .def_readonly("d_path_21", &PlrBreakdown::d_path_21)
      .def_readonly("d_lbl_21", &PlrBreakdown::d_lbl_21)
      .def_readonly("alpha", &PlrBreakdown::alpha)
      .def_readonly("d_asym_12", &PlrBreakdown::d_asym_12)
      .def_readonly("d_asym_21", &PlrBreakdown::d_asym_21)
      .def_readonly("plr", &PlrBreakdown::plr)
      .def_readonly("comparable", &PlrBreakdown::comparable)
      .def("__repr__", [](const PlrBreakdown& b) {
        std::ostringstream os;
        os << "<PlrBreakdown plr=" << b.plr << " alpha=" << b.alpha << ">";
        return os.str();
      });

  py::enum_<Condition>(m, "Condition")
      .value("structural", Condition::structural)
      .value("leaf_events", Condition::leaf_events)
      .value("time_consistency", Condition::time_consistency)
      .value("speciation", Condition::speciation);

  py::class_<Violation>(m, "Violation")
      .def_readonly("condition", &Violation::condition)
      .def_readonly("node", &Violation::node)
      .def_readonly("message", &Violation::message);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("ok", &ValidationReport::ok)
      .def_readonly("violations", &ValidationReport::violations)
      .def("__bool__", [](const ValidationReport& r) { return r.ok; });

  py::class_<GeneAssignment>(m, "GeneAssignment")
      .def_readonly("genes", &GeneAssignment::genes)
      .def_readonly("max_per_species", &GeneAssignment::max_per_species);

  py::class_<DiameterReport>(m, "DiameterReport")
      .def_readonly("n", &DiameterReport::n)
      .def_readonly("h_s", &DiameterReport::h_s)
      .def_readonly("alpha", &DiameterReport::alpha)
      .def_readonly("plr_diameter", &DiameterReport::plr_diameter)
      .def_readonly("elrf_upper", &DiameterReport::elrf_upper)
      .def_readonly("lrf_upper", &DiameterReport::lrf_upper);

  py::class_<DistanceRecord>(m, "DistanceRecord")
      .def_readonly("dataset", &DistanceRecord::dataset)
      .def_readonly("n", &DistanceRecord::n)
      .def_readonly("j", &DistanceRecord::j)
      .def_readonly("alpha", &DistanceRecord::alpha)
      .def_readonly("pair_i", &DistanceRecord::pair_i)
      .def_readonly("pair_j", &DistanceRecord::pair_j)
      .def_readonly("breakdown", &DistanceRecord::breakdown)
      .def_readonly("rf", &DistanceRecord::rf)
      .def_readonly("plr_norm_max", &DistanceRecord::plr_norm_max)
      .def_readonly("plr_norm_diam", &DistanceRecord::plr_norm_diam)
      .def_readonly("gene_count", &DistanceRecord::gene_count);

  // Parsing and serialization.
  m.def("parse_species_tree",
        [](const std::string& text) {
          return std::make_shared<SpeciesTree>(parse_species_tree(text));
        },
        py::arg("text"));
  m.def("parse_reconciled_tree",
        [](const std::string& text, std::shared_ptr<SpeciesTree> s) {
          return parse_reconciled_tree(text, std::move(s));
        },
        py::arg("text"), py::arg("species"));

  // Validity and structure.
  m.def("validate", &validate, py::arg("gene_tree"));
  m.def("comparable", &comparable, py::arg("g1"), py::arg("g2"));
  m.def("clade",
        [](const ReconciledGeneTree& g, NodeId v) { return clade(g, v); },
        py::arg("gene_tree"), py::arg("node"));
  m.def("one_gene_per_species", &one_gene_per_species, py::arg("gene_tree"));

  // The dissimilarity and its pieces.
  m.def("plr", &plr, py::arg("g1"), py::arg("g2"), py::arg("alpha") = 0.5);
  m.def("d_path", &d_path, py::arg("g1"), py::arg("g2"));
  m.def("d_lbl", &d_lbl, py::arg("g1"), py::arg("g2"));
  m.def("d_asym", &d_asym, py::arg("g1"), py::arg("g2"), py::arg("alpha"));
  m.def("rf", &rf, py::arg("g1"), py::arg("g2"));

  // Canonicalization.
  m.def("lr", &lr, py::arg("gene_tree"));
  m.def("isomorphic", &isomorphic, py::arg("g1"), py::arg("g2"));
  m.def("equiv_d", &equiv_d, py::arg("g1"), py::arg("g2"));

  // Diameters.
  m.def("h_s", [](const SpeciesTree& s) { return h_s(s); }, py::arg("species"));
  m.def("plr_diameter",
        [](const SpeciesTree& s, double alpha) { return plr_diameter(s, alpha); },
        py::arg("species"), py::arg("alpha"));
  m.def("diameter_report",
        [](const SpeciesTree& s, double alpha) { return diameter_report(s, alpha); },
        py::arg("species"), py::arg("alpha"));
  m.def("extremal_pair",
        [](std::shared_ptr<SpeciesTree> s) { return extremal_pair(std::move(s)); },
        py::arg("species"));
  m.def("elrf_diameter_upper", &elrf_diameter_upper, py::arg("n"));
  m.def("lrf_diameter_upper", &lrf_diameter_upper, py::arg("n"));

  // Simulation and experiments.
  m.def("random_species_tree",
        [](int n, std::uint64_t seed) {
          return std::make_shared<SpeciesTree>(random_species_tree(n, seed));
        },
        py::arg("n"), py::arg("seed"));
  m.def("assign_genes",
        [](std::shared_ptr<SpeciesTree> s, int j, std::uint64_t seed) {
          return assign_genes(*s, j, seed);
        },
        py::arg("species"), py::arg("j"), py::arg("seed"));
  m.def("generate_random_scenario",
        [](std::shared_ptr<SpeciesTree> s, const GeneAssignment& ga, std::uint64_t seed,
           double decay) { return generate_random_scenario(std::move(s), ga, seed, decay); },
        py::arg("species"), py::arg("assignment"), py::arg("seed"), py::arg("decay") = 0.7);
  m.def("run_experiment",
        [](const std::vector<int>& species_leaf_counts,
           const std::vector<int>& max_genes_per_species, int scenarios_per_set,
           const std::vector<py::object>& alphas, double decay, std::uint64_t master_seed) {
          ExperimentPlan plan;
          plan.species_leaf_counts = species_leaf_counts;
          plan.max_genes_per_species = max_genes_per_species;
          plan.scenarios_per_set = scenarios_per_set;
          if (!alphas.empty()) plan.alphas = alphas_from(alphas);
          plan.decay = decay;
          plan.master_seed = master_seed;
          return run_experiment(plan);
        },
        py::arg("species_leaf_counts"), py::arg("max_genes_per_species"),
        py::arg("scenarios_per_set") = 50, py::arg("alphas") = std::vector<py::object>{},
        py::arg("decay") = 0.7, py::arg("master_seed") = 0);
  m.def("experiment_csv", [](const std::vector<DistanceRecord>& records) {
    std::ostringstream out;
    write_experiment_csv(records, out);
    return out.str();
  });
  m.def("rng_name", [] { return std::string(rng_name()); });
}
