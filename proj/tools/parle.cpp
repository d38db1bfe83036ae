// parle — path-label reconciliation dissimilarity toolkit.
//
// Subcommands: validate | compare | diameter | ldr | simulate | experiment.
// Exit codes: 0 success, 1 domain/validation failure, 2 parse/usage error.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "parle/canon.hpp"
#include "parle/extremal.hpp"
#include "parle/metric.hpp"
#include "parle/newick.hpp"
#include "parle/rng.hpp"
#include "parle/sim.hpp"
#include "parle/tree.hpp"

using json = nlohmann::json;
using namespace parle;

namespace {

constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal form; infinities print as "inf".
std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json json_double(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::vector<AlphaSpec> parse_alphas(const std::vector<std::string>& tokens) {
  std::vector<AlphaSpec> out;
  for (const std::string& tok : tokens) {
    if (tok == "1/n") {
      out.push_back(AlphaSpec::one_over_n());
      continue;
    }
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--alpha", "not a number or '1/n': " + tok);
    }
    if (used != tok.size() || !(v >= 0.0 && v <= 1.0))
      throw CLI::ValidationError("--alpha", "alpha values must lie in [0,1]: " + tok);
    out.push_back(AlphaSpec::literal(v));
  }
  if (out.empty()) throw CLI::ValidationError("--alpha", "at least one alpha is required");
  return out;
}

std::string condition_tag(Condition c) {
  switch (c) {
    case Condition::structural: return "STRUCT";
    case Condition::leaf_events: return "COND1";
    case Condition::time_consistency: return "COND2";
    case Condition::speciation: return "COND3";
  }
  return "STRUCT";
}

std::shared_ptr<const SpeciesTree> load_species(const std::string& path) {
  return std::make_shared<const SpeciesTree>(parse_species_tree(read_file(path)));
}

// ---------------------------------------------------------------------- //

struct CommonFlags {
  std::string format = "text";
  std::string output;
  std::uint64_t seed = 0;
};

int cmd_validate(const std::string& species_path, const std::string& gene_path,
                 const CommonFlags& flags) {
  const auto s = load_species(species_path);
  ValidationReport report;
  try {
    (void)parse_reconciled_tree(read_file(gene_path), s);
    report.ok = true;
  } catch (const ValidationError& e) {
    report = e.report();
  }

  std::ostringstream out;
  if (flags.format == "json") {
    json j;
    j["ok"] = report.ok;
    j["violations"] = json::array();
    for (const auto& v : report.violations)
      j["violations"].push_back({{"condition", condition_tag(v.condition)},
                                 {"node", v.node},
                                 {"message", v.message}});
    out << j.dump(2) << "\n";
  } else if (flags.format == "csv") {
    out << "condition,node,message\n";
    for (const auto& v : report.violations)
      out << condition_tag(v.condition) << ',' << v.node << ",\"" << v.message << "\"\n";
  } else {
    if (report.ok) out << "OK\n";
    for (const auto& v : report.violations)
      out << condition_tag(v.condition) << ' ' << v.node << ' ' << v.message << "\n";
  }
  write_output(flags.output, out.str());
  return report.ok ? 0 : 1;
}

struct CompareRow {
  double alpha;
  PlrBreakdown b;
  std::optional<std::int64_t> rf_value;
  std::optional<double> norm_diam;
};

int cmd_compare(const std::string& species_path, const std::string& g1_path,
                const std::string& g2_path, const std::vector<std::string>& alpha_tokens,
                const std::string& normalize_mode, const CommonFlags& flags) {
  const auto s = load_species(species_path);
  const auto g1 = parse_reconciled_tree(read_file(g1_path), s);
  const auto g2 = parse_reconciled_tree(read_file(g2_path), s);

  const PairMetrics counts = pair_metrics(g1, g2);
  std::optional<std::int64_t> rf_value;
  try {
    rf_value = rf(g1, g2);
  } catch (const std::invalid_argument&) {
    // Different leaf sets: RF is undefined but plr=inf is still a result.
  }

  std::vector<CompareRow> rows;
  for (const AlphaSpec& spec : parse_alphas(alpha_tokens)) {
    CompareRow row;
    row.alpha = spec.resolve(s->leaf_count());
    row.b = plr_from(counts, row.alpha);
    row.rf_value = rf_value;
    if (normalize_mode == "diameter") {
      NormalizeContext ctx;
      ctx.species = s.get();
      ctx.alpha = row.alpha;
      ctx.one_gene_per_species = one_gene_per_species(g1);
      row.norm_diam = normalize(row.b.plr, NormalizeMode::diameter, ctx);
    }
    rows.push_back(row);
  }

  std::ostringstream out;
  if (flags.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json j{{"alpha", json_double(r.alpha)},
             {"d_path_12", r.b.d_path_12},
             {"d_lbl_12", r.b.d_lbl_12},
             {"d_path_21", r.b.d_path_21},
             {"d_lbl_21", r.b.d_lbl_21},
             {"d_asym_12", json_double(r.b.d_asym_12)},
             {"d_asym_21", json_double(r.b.d_asym_21)},
             {"plr", json_double(r.b.plr)},
             {"comparable", r.b.comparable}};
      j["rf"] = r.rf_value ? json(*r.rf_value) : json(nullptr);
      if (r.norm_diam) j["plr_norm_diam"] = json_double(*r.norm_diam);
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << "\n";
  } else if (flags.format == "csv") {
    out << "alpha,d_path_12,d_lbl_12,d_path_21,d_lbl_21,d_asym_12,d_asym_21,plr,rf"
        << (normalize_mode == "diameter" ? ",plr_norm_diam" : "") << "\n";
    for (const auto& r : rows) {
      out << fmt_double(r.alpha) << ',' << r.b.d_path_12 << ',' << r.b.d_lbl_12 << ','
          << r.b.d_path_21 << ',' << r.b.d_lbl_21 << ',' << fmt_double(r.b.d_asym_12) << ','
          << fmt_double(r.b.d_asym_21) << ',' << fmt_double(r.b.plr) << ','
          << (r.rf_value ? std::to_string(*r.rf_value) : std::string{});
      if (normalize_mode == "diameter")
        out << ',' << (r.norm_diam ? fmt_double(*r.norm_diam) : std::string{});
      out << "\n";
    }
  } else {
    for (const auto& r : rows) {
      out << "alpha=" << fmt_double(r.alpha);
      if (r.b.comparable)
        out << " d_path_12=" << r.b.d_path_12 << " d_lbl_12=" << r.b.d_lbl_12
            << " d_path_21=" << r.b.d_path_21 << " d_lbl_21=" << r.b.d_lbl_21
            << " d_asym_12=" << fmt_double(r.b.d_asym_12)
            << " d_asym_21=" << fmt_double(r.b.d_asym_21);
      out << " plr=" << fmt_double(r.b.plr);
      if (r.rf_value) out << " rf=" << *r.rf_value;
      if (r.norm_diam) out << " plr_norm_diam=" << fmt_double(*r.norm_diam);
      out << "\n";
    }
  }
  write_output(flags.output, out.str());
  return 0;
}

int cmd_diameter(const std::string& species_path, const std::vector<std::string>& alpha_tokens,
                 const CommonFlags& flags) {
  const auto s = load_species(species_path);
  std::vector<DiameterReport> reports;
  for (const AlphaSpec& spec : parse_alphas(alpha_tokens))
    reports.push_back(diameter_report(*s, spec.resolve(s->leaf_count())));

  std::ostringstream out;
  if (flags.format == "json") {
    json arr = json::array();
    for (const auto& r : reports) {
      json j{{"n", r.n},
             {"h_s", r.h_s},
             {"alpha", json_double(r.alpha)},
             {"plr_diameter", json_double(r.plr_diameter)}};
      j["elrf_upper"] = r.elrf_upper ? json(*r.elrf_upper) : json(nullptr);
      j["lrf_upper"] = r.lrf_upper ? json(*r.lrf_upper) : json(nullptr);
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << "\n";
  } else if (flags.format == "csv") {
    out << "alpha,n,h_s,plr_diameter,elrf_upper,lrf_upper\n";
    for (const auto& r : reports)
      out << fmt_double(r.alpha) << ',' << r.n << ',' << r.h_s << ','
          << fmt_double(r.plr_diameter) << ','
          << (r.elrf_upper ? std::to_string(*r.elrf_upper) : std::string{}) << ','
          << (r.lrf_upper ? std::to_string(*r.lrf_upper) : std::string{}) << "\n";
  } else {
    for (const auto& r : reports) {
      out << "n=" << r.n << " h_s=" << r.h_s << " alpha=" << fmt_double(r.alpha)
          << " plr_diameter=" << fmt_double(r.plr_diameter);
      if (r.elrf_upper) out << " elrf_upper=" << *r.elrf_upper;
      if (r.lrf_upper) out << " lrf_upper=" << *r.lrf_upper;
      out << "\n";
    }
  }
  write_output(flags.output, out.str());
  return 0;
}

int cmd_ldr(const std::string& species_path, const std::string& gene_path,
            const CommonFlags& flags) {
  const auto s = load_species(species_path);
  const auto g = parse_reconciled_tree(read_file(gene_path), s);
  write_output(flags.output, serialize_reconciled_tree(lr(g)));
  return 0;
}

int cmd_simulate(int n, int j, int scenarios, double decay, const std::string& out_dir,
                 const CommonFlags& flags) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto species = std::make_shared<const SpeciesTree>(
      random_species_tree(n, derive_seed(flags.seed, hash64("species"), n)));
  const GeneAssignment ga =
      assign_genes(*species, j, derive_seed(flags.seed, hash64("genes"), n, j));

  {
    std::ofstream out(fs::path(out_dir) / "species.nwk", std::ios::binary);
    out << serialize_species_tree(*species);
  }
  const std::string dataset = "S" + std::to_string(n) + "_G" + std::to_string(j);
  const std::uint64_t tag = hash64(dataset);
  for (int i = 0; i < scenarios; ++i) {
    const auto g = generate_random_scenario(species, ga, derive_seed(flags.seed, tag, i), decay);
    char name[64];
    std::snprintf(name, sizeof name, "scenario_%03d.recon.nwk", i);
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    out << serialize_reconciled_tree(g);
  }

  json config{{"tool", "parle"},          {"version", kVersion},
              {"rng", rng_name()},        {"seed", flags.seed},
              {"species_leaves", n},      {"max_genes_per_species", j},
              {"scenarios", scenarios},   {"decay", decay},
              {"genes", ga.genes.size()}, {"dataset", dataset}};
  std::ofstream cfg(fs::path(out_dir) / "config.json", std::ios::binary);
  cfg << config.dump(2) << "\n";

  std::cout << "wrote " << scenarios << " scenarios (" << ga.genes.size() << " genes, dataset "
            << dataset << ") to " << out_dir << "\n";
  return 0;
}

void write_histograms(const std::vector<DistanceRecord>& records, int bins,
                      const std::string& path) {
  // Per (dataset, alpha): binned counts of max-normalized PLR and RF, plus
  // diameter-normalized PLR where defined. Bin edges split [0, 1] evenly.
  struct Key {
    std::string dataset;
    double alpha;
    std::string measure;
    bool operator<(const Key& o) const {
      return std::tie(dataset, alpha, measure) < std::tie(o.dataset, o.alpha, o.measure);
    }
  };
  std::map<Key, std::vector<long>> hists;
  std::map<std::string, double> rf_max;
  for (const auto& r : records)
    rf_max[r.dataset] = std::max(rf_max[r.dataset], static_cast<double>(r.rf));

  auto drop = [&](const Key& key, double value) {
    auto& h = hists[key];
    if (h.empty()) h.assign(bins, 0);
    int bin = static_cast<int>(value * bins);
    bin = std::clamp(bin, 0, bins - 1);
    ++h[bin];
  };
  for (const auto& r : records) {
    drop({r.dataset, r.alpha, "plr_norm_max"}, r.plr_norm_max);
    if (r.plr_norm_diam) drop({r.dataset, r.alpha, "plr_norm_diam"}, *r.plr_norm_diam);
    const double mx = rf_max[r.dataset];
    drop({r.dataset, r.alpha, "rf_norm_max"}, mx > 0 ? r.rf / mx : 0.0);
  }

  std::ostringstream out;
  out << "dataset,alpha,measure,bin_lo,bin_hi,count\n";
  char buf[64];
  for (const auto& [key, h] : hists) {
    for (int b = 0; b < bins; ++b) {
      std::snprintf(buf, sizeof buf, "%.6f", key.alpha);
      out << key.dataset << ',' << buf << ',' << key.measure << ',';
      std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(b) / bins);
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(b + 1) / bins);
      out << buf << ',' << h[b] << "\n";
    }
  }
  write_output(path, out.str());
}

int cmd_experiment(const ExperimentPlan& plan, const std::string& histogram_path, int bins,
                   const CommonFlags& flags) {
  const auto records = run_experiment(plan);

  std::ostringstream csv;
  write_experiment_csv(records, csv);
  write_output(flags.output, csv.str());

  if (!flags.output.empty()) {
    json alphas = json::array();
    for (const auto& a : plan.alphas)
      alphas.push_back(a.reciprocal ? json("1/n") : json(a.value));
    json config{{"tool", "parle"},
                {"version", kVersion},
                {"rng", rng_name()},
                {"seed", plan.master_seed},
                {"species_leaf_counts", plan.species_leaf_counts},
                {"max_genes_per_species", plan.max_genes_per_species},
                {"scenarios_per_set", plan.scenarios_per_set},
                {"alphas", alphas},
                {"decay", plan.decay},
                {"records", records.size()},
                {"threads", resolve_thread_count()}};
    std::ofstream cfg(flags.output + ".config.json", std::ios::binary);
    cfg << config.dump(2) << "\n";
  }
  if (!histogram_path.empty()) write_histograms(records, bins, histogram_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"path-label reconciliation (PLR) dissimilarity toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags flags;

  auto add_common = [&flags](CLI::App* cmd, bool with_format = true) {
    cmd->add_option("--output", flags.output, "write results to this path instead of stdout");
    cmd->add_option("--seed", flags.seed, "random seed")->default_val("0");
    if (with_format)
      cmd->add_option("--format", flags.format, "output format")
          ->check(CLI::IsMember({"text", "json", "csv"}))
          ->default_val("text");
  };

  // validate
  std::string species_path, gene_path, gene2_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a reconciled gene tree");
  validate_cmd->add_option("species", species_path, "species tree (.nwk)")->required();
  validate_cmd->add_option("gene", gene_path, "reconciled gene tree (.recon.nwk)")->required();
  add_common(validate_cmd);

  // compare
  std::vector<std::string> alpha_tokens{"0.5"};
  std::string normalize_mode = "none";
  auto* compare_cmd = app.add_subcommand("compare", "PLR breakdown and RF for a tree pair");
  compare_cmd->add_option("species", species_path, "species tree (.nwk)")->required();
  compare_cmd->add_option("gene1", gene_path, "first reconciled tree")->required();
  compare_cmd->add_option("gene2", gene2_path, "second reconciled tree")->required();
  compare_cmd->add_option("--alpha", alpha_tokens, "alpha values (numbers or 1/n)")
      ->delimiter(',');
  compare_cmd->add_option("--normalize", normalize_mode, "normalization mode")
      ->check(CLI::IsMember({"none", "diameter"}))
      ->default_val("none");
  add_common(compare_cmd);

  // diameter
  auto* diameter_cmd = app.add_subcommand("diameter", "PLR diameter and labeled-RF bounds");
  diameter_cmd->add_option("species", species_path, "species tree (.nwk)")->required();
  diameter_cmd->add_option("--alpha", alpha_tokens, "alpha values (numbers or 1/n)")
      ->delimiter(',');
  add_common(diameter_cmd);

  // ldr
  auto* ldr_cmd = app.add_subcommand("ldr", "least duplication-resolved form of a tree");
  ldr_cmd->add_option("species", species_path, "species tree (.nwk)")->required();
  ldr_cmd->add_option("gene", gene_path, "reconciled gene tree")->required();
  add_common(ldr_cmd, false);

  // simulate
  int sim_n = 10, sim_j = 5, sim_scenarios = 50;
  double sim_decay = 0.7;
  std::string sim_output;
  auto* sim_cmd = app.add_subcommand("simulate", "generate random reconciliation scenarios");
  sim_cmd->add_option("--species-leaves", sim_n, "species leaf count")->default_val("10");
  sim_cmd->add_option("--max-genes", sim_j, "max genes per species")->default_val("5");
  sim_cmd->add_option("--scenarios", sim_scenarios, "number of scenarios")->default_val("50");
  sim_cmd->add_option("--decay", sim_decay, "pair-choice distance decay")->default_val("0.7");
  sim_cmd->add_option("--output", sim_output, "output directory")->required();
  sim_cmd->add_option("--seed", flags.seed, "random seed")->default_val("0");

  // experiment
  ExperimentPlan plan;
  std::vector<std::string> exp_alphas{"1/n", "0", "0.25", "0.5", "0.75", "1"};
  std::string histogram_path;
  int bins = 20;
  auto* exp_cmd = app.add_subcommand("experiment", "batch pairwise distance experiment");
  exp_cmd->add_option("--species-leaves", plan.species_leaf_counts, "species leaf counts")
      ->delimiter(',');
  exp_cmd->add_option("--max-genes", plan.max_genes_per_species, "max genes per species")
      ->delimiter(',');
  exp_cmd->add_option("--scenarios", plan.scenarios_per_set, "scenarios per set")
      ->default_val("50");
  exp_cmd->add_option("--alphas", exp_alphas, "alpha values (numbers or 1/n)")->delimiter(',');
  exp_cmd->add_option("--decay", plan.decay, "pair-choice distance decay")->default_val("0.7");
  exp_cmd->add_option("--histogram", histogram_path, "also write binned histogram CSV here");
  exp_cmd->add_option("--bins", bins, "histogram bin count")->default_val("20")
      ->check(CLI::PositiveNumber);
  add_common(exp_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(species_path, gene_path, flags);
    if (compare_cmd->parsed())
      return cmd_compare(species_path, gene_path, gene2_path, alpha_tokens, normalize_mode,
                         flags);
    if (diameter_cmd->parsed()) return cmd_diameter(species_path, alpha_tokens, flags);
    if (ldr_cmd->parsed()) return cmd_ldr(species_path, gene_path, flags);
    if (sim_cmd->parsed())
      return cmd_simulate(sim_n, sim_j, sim_scenarios, sim_decay, sim_output, flags);
    if (exp_cmd->parsed()) {
      plan.master_seed = flags.seed;
      plan.alphas = parse_alphas(exp_alphas);
      return cmd_experiment(plan, histogram_path, bins, flags);
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    for (const auto& v : e.report().violations)
      std::cerr << condition_tag(v.condition) << ' ' << v.node << ' ' << v.message << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
