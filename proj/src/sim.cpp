#include "parle/sim.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <thread>

#include "parle/extremal.hpp"
#include "parle/lca.hpp"
#include "parle/rng.hpp"

namespace parle {

std::string_view rng_name() { return "splitmix64"; }

int resolve_thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("PARLE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return std::min(cap, hw);
  }
  return hw;
}

SpeciesTree random_species_tree(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_species_tree: need n >= 2");
  SplitMix64 rng(derive_seed(seed, hash64("species-tree")));

  // Yule split process on a temporary structure: repeatedly pick an extant
  // lineage uniformly and split it into two.
  std::vector<std::array<int, 2>> kids{{-1, -1}};
  std::vector<int> leaves{0};
  while (static_cast<int>(leaves.size()) < n) {
    const std::size_t pick = static_cast<std::size_t>(rng.bounded(leaves.size()));
    const int v = leaves[pick];
    const int a = static_cast<int>(kids.size());
    kids.push_back({-1, -1});
    kids.push_back({-1, -1});
    kids[v] = {a, a + 1};
    leaves[pick] = a;
    leaves.push_back(a + 1);
  }

  // Leaves are labeled s1..sn left to right; internal nodes n<k> by preorder.
  SpeciesTree::Builder b;
  int next_leaf = 1;
  struct Frame {
    int v;
    NodeId parent;
  };
  std::vector<Frame> stack{{0, kNoNode}};
  int preorder = 0;
  while (!stack.empty()) {
    const auto [v, parent] = stack.back();
    stack.pop_back();
    const bool leaf = kids[v][0] < 0;
    const std::string label =
        leaf ? "s" + std::to_string(next_leaf++) : "n" + std::to_string(preorder);
    const NodeId id = parent == kNoNode ? b.add_root(label) : b.add_child(parent, label);
    ++preorder;
    if (!leaf) {
      stack.push_back({kids[v][1], id});
      stack.push_back({kids[v][0], id});
    }
  }
  return b.build();
}

GeneAssignment assign_genes(const SpeciesTree& s, int j, std::uint64_t seed) {
  if (j < 1) throw std::invalid_argument("assign_genes: need j >= 1");
  SplitMix64 rng(derive_seed(seed, hash64("gene-assignment")));
  GeneAssignment ga;
  ga.max_per_species = j;
  for (NodeId v = 0; v < s.node_count(); ++v) {
    if (!s.is_leaf(v)) continue;
    const int count = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(j)));
    for (int k = 1; k <= count; ++k) {
      ga.genes.push_back(s.label(v) + "_" + std::to_string(k));
      ga.species_of.push_back(v);
    }
  }
  return ga;
}

namespace {

// Fenwick tree over slot weights, supporting prefix-target search.
class WeightIndex {
 public:
  std::size_t size() const { return weight_.size(); }
  double total() const { return total_; }
  double weight(std::size_t i) const { return weight_[i]; }

  std::size_t push(double w) {
    const std::size_t i = weight_.size();
    weight_.push_back(0.0);
    bit_.push_back(0.0);
    // The new Fenwick cell at 1-based position pos covers the weight range
    // [pos - lowbit(pos), pos); seed it before applying the new weight.
    const std::size_t pos = i + 1;
    const std::size_t low = pos & ~(pos - 1);
    double acc = 0.0;
    for (std::size_t t = pos - low; t < i; ++t) acc += weight_[t];
    bit_[i] = acc;
    set(i, w);
    return i;
  }

  void set(std::size_t i, double w) {
    const double delta = w - weight_[i];
    if (delta == 0.0) return;
    weight_[i] = w;
    total_ += delta;
    for (std::size_t pos = i + 1; pos <= bit_.size(); pos += pos & ~(pos - 1))
      bit_[pos - 1] += delta;
  }

  // Largest prefix search: first slot where the running sum exceeds target.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t mask = 1;
    while ((mask << 1) <= bit_.size()) mask <<= 1;
    for (; mask > 0; mask >>= 1) {
      const std::size_t next = pos + mask;
      if (next <= bit_.size() && bit_[next - 1] < target) {
        pos = next;
        target -= bit_[next - 1];
      }
    }
    return pos < weight_.size() ? pos : weight_.size() - 1;
  }

 private:
  std::vector<double> weight_;
  std::vector<double> bit_;
  double total_ = 0.0;
};

struct ProtoNode {
  NodeId mu;
  Event event = Event::extant;
  int left = -1, right = -1;
  int gene = -1;  // index into ga.genes for leaves
};

}  // namespace

ReconciledGeneTree generate_random_scenario(std::shared_ptr<const SpeciesTree> s,
                                            const GeneAssignment& ga, std::uint64_t seed,
                                            double decay) {
  if (!s) throw std::invalid_argument("generate_random_scenario: null species tree");
  if (ga.genes.empty()) throw std::invalid_argument("generate_random_scenario: empty gene set");
  if (ga.genes.size() != ga.species_of.size())
    throw std::invalid_argument("generate_random_scenario: malformed gene assignment");
  if (!(decay >= 0.0)) throw std::invalid_argument("generate_random_scenario: decay must be >= 0");

  const LcaIndex s_index(*s);
  SplitMix64 rng(derive_seed(seed, hash64("scenario")));

  const int m = static_cast<int>(ga.genes.size());
  std::vector<ProtoNode> pool;
  pool.reserve(2 * m - 1);
  for (int i = 0; i < m; ++i) {
    if (!s->is_leaf(ga.species_of[i]))
      throw std::invalid_argument("generate_random_scenario: gene assigned to internal species");
    pool.push_back({ga.species_of[i], Event::extant, -1, -1, i});
  }

  std::vector<int> active(m);
  for (int i = 0; i < m; ++i) active[i] = i;

  auto merge = [&](int a, int b) {
    const NodeId mu = s_index.lca(pool[a].mu, pool[b].mu);
    Event e;
    if (mu == pool[a].mu || mu == pool[b].mu) {
      e = Event::dup;
    } else {
      e = rng.coin() ? Event::dup : Event::spec;
    }
    pool.push_back({mu, e, a, b, -1});
    return static_cast<int>(pool.size()) - 1;
  };

  if (decay == 0.0 || m == 1) {
    // Uniform pair choice; no weight bookkeeping needed.
    while (active.size() > 1) {
      const std::size_t ia = static_cast<std::size_t>(rng.bounded(active.size()));
      const int a = active[ia];
      active[ia] = active.back();
      active.pop_back();
      const std::size_t ib = static_cast<std::size_t>(rng.bounded(active.size()));
      const int b = active[ib];
      active[ib] = merge(a, b);
    }
  } else {
    // Weighted choice: slot per unordered pair, weight e^(-decay * dist).
    int max_dist = 0;
    for (NodeId v = 0; v < s->node_count(); ++v)
      max_dist = std::max(max_dist, s->depth(v));
    std::vector<double> kernel(2 * max_dist + 1);
    for (std::size_t d = 0; d < kernel.size(); ++d)
      kernel[d] = std::exp(-decay * static_cast<double>(d));

    WeightIndex weights;
    std::vector<std::pair<int, int>> slot_nodes;
    std::vector<std::vector<std::size_t>> slots_of(pool.capacity());
    auto add_slot = [&](int a, int b) {
      const double w = kernel[static_cast<std::size_t>(s_index.dist(pool[a].mu, pool[b].mu))];
      const std::size_t slot = weights.push(w);
      slot_nodes.emplace_back(a, b);
      slots_of[a].push_back(slot);
      slots_of[b].push_back(slot);
    };
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t k = i + 1; k < active.size(); ++k) add_slot(active[i], active[k]);

    std::vector<std::size_t> pos_of(pool.capacity());
    for (std::size_t i = 0; i < active.size(); ++i) pos_of[active[i]] = i;

    while (active.size() > 1) {
      const double target = rng.uniform01() * weights.total();
      std::size_t slot = weights.find(target);
      // Floating-point residue can land on an emptied slot; step to the next
      // live one.
      while (weights.weight(slot) == 0.0) slot = (slot + 1) % weights.size();
      const auto [a, b] = slot_nodes[slot];

      for (const std::size_t dead : slots_of[a]) weights.set(dead, 0.0);
      for (const std::size_t dead : slots_of[b]) weights.set(dead, 0.0);
      slots_of[a].clear();
      slots_of[b].clear();

      auto remove_active = [&](int v) {
        const std::size_t pos = pos_of[v];
        active[pos] = active.back();
        pos_of[active[pos]] = pos;
        active.pop_back();
      };
      remove_active(a);
      remove_active(b);

      const int c = merge(a, b);
      for (const int other : active) add_slot(c, other);
      pos_of[c] = active.size();
      active.push_back(c);
    }
  }

  // Emit the finished scenario root-down.
  ReconciledGeneTree::Builder b(s);
  struct Frame {
    int v;
    NodeId parent;
  };
  std::vector<Frame> stack{{active[0], kNoNode}};
  while (!stack.empty()) {
    const auto [v, parent] = stack.back();
    stack.pop_back();
    const ProtoNode& node = pool[v];
    const std::string gene = node.gene >= 0 ? ga.genes[node.gene] : std::string{};
    const NodeId id = parent == kNoNode ? b.add_root(node.event, node.mu, gene)
                                        : b.add_child(parent, node.event, node.mu, gene);
    if (node.left >= 0) {
      stack.push_back({node.right, id});
      stack.push_back({node.left, id});
    }
  }
  return b.build();
}

namespace {

struct Dataset {
  std::string id;
  int n = 0;
  int j = 0;
  std::shared_ptr<const SpeciesTree> species;
  GeneAssignment ga;
  std::vector<ReconciledGeneTree> scenarios;
};

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  const int workers = std::min(threads, count);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<DistanceRecord> run_experiment(const ExperimentPlan& plan) {
  if (plan.scenarios_per_set < 2)
    throw std::invalid_argument("run_experiment: need at least two scenarios per set");
  for (const AlphaSpec& a : plan.alphas)
    if (!a.reciprocal && !(a.value >= 0.0 && a.value <= 1.0))
      throw std::invalid_argument("run_experiment: alpha values must lie in [0, 1]");

  std::vector<int> ns = plan.species_leaf_counts;
  std::vector<int> js = plan.max_genes_per_species;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end()), js.end());

  const int threads = resolve_thread_count();
  std::vector<DistanceRecord> records;

  for (const int n : ns) {
    const auto species = std::make_shared<const SpeciesTree>(
        random_species_tree(n, derive_seed(plan.master_seed, hash64("species"), n)));
    const LcaIndex s_index(*species);

    for (const int j : js) {
      Dataset ds;
      ds.id = "S" + std::to_string(n) + "_G" + std::to_string(j);
      ds.n = n;
      ds.j = j;
      ds.species = species;
      ds.ga = assign_genes(*species, j,
                           derive_seed(plan.master_seed, hash64("genes"), n, j));

      const std::uint64_t dataset_tag = hash64(ds.id);
      ds.scenarios.reserve(plan.scenarios_per_set);
      for (int i = 0; i < plan.scenarios_per_set; ++i)
        ds.scenarios.push_back(generate_random_scenario(
            species, ds.ga, derive_seed(plan.master_seed, dataset_tag, i), plan.decay));

      std::vector<LcaIndex> indexes;
      indexes.reserve(ds.scenarios.size());
      for (const auto& g : ds.scenarios) indexes.emplace_back(g);

      std::vector<std::pair<int, int>> pairs;
      for (int a = 0; a < plan.scenarios_per_set; ++a)
        for (int b = a + 1; b < plan.scenarios_per_set; ++b) pairs.emplace_back(a, b);

      std::vector<PairMetrics> counts(pairs.size());
      std::vector<std::int64_t> rfs(pairs.size());
      parallel_for(static_cast<int>(pairs.size()), threads, [&](int p) {
        const auto [a, b] = pairs[p];
        counts[p] = pair_metrics(ds.scenarios[a], ds.scenarios[b], s_index, indexes[a],
                                 indexes[b]);
        rfs[p] = rf(ds.scenarios[a], ds.scenarios[b]);
      });

      std::vector<double> alphas;
      for (const AlphaSpec& a : plan.alphas) alphas.push_back(a.resolve(n));
      std::sort(alphas.begin(), alphas.end());
      alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

      const bool diam_ok = one_gene_per_species(ds.scenarios.front());
      for (const double alpha : alphas) {
        double max_plr = 0.0;
        for (const auto& c : counts) {
          const PlrBreakdown b = plr_from(c, alpha);
          if (b.comparable) max_plr = std::max(max_plr, b.plr);
        }
        NormalizeContext max_ctx;
        max_ctx.dataset_max = max_plr;
        NormalizeContext diam_ctx;
        diam_ctx.species = species.get();
        diam_ctx.alpha = alpha;
        diam_ctx.one_gene_per_species = diam_ok;

        for (std::size_t p = 0; p < pairs.size(); ++p) {
          DistanceRecord rec;
          rec.dataset = ds.id;
          rec.n = n;
          rec.j = j;
          rec.alpha = alpha;
          rec.pair_i = pairs[p].first;
          rec.pair_j = pairs[p].second;
          rec.breakdown = plr_from(counts[p], alpha);
          rec.rf = rfs[p];
          rec.plr_norm_max = normalize(rec.breakdown.plr, NormalizeMode::max, max_ctx);
          if (diam_ok)
            rec.plr_norm_diam = normalize(rec.breakdown.plr, NormalizeMode::diameter, diam_ctx);
          rec.gene_count = static_cast<int>(ds.ga.genes.size());
          records.push_back(std::move(rec));
        }
      }
    }
  }
  return records;
}

void write_experiment_csv(const std::vector<DistanceRecord>& records, std::ostream& out) {
  out << "dataset,n,j,alpha,pair_i,pair_j,plr,d_path_12,d_lbl_12,d_path_21,d_lbl_21,rf,"
         "plr_norm_max,plr_norm_diam\n";
  char buf[64];
  auto fixed6 = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    out << r.dataset << ',' << r.n << ',' << r.j << ',' << fixed6(r.alpha) << ',' << r.pair_i
        << ',' << r.pair_j << ',' << fixed6(r.breakdown.plr) << ',' << r.breakdown.d_path_12
        << ',' << r.breakdown.d_lbl_12 << ',' << r.breakdown.d_path_21 << ','
        << r.breakdown.d_lbl_21 << ',' << r.rf << ',' << fixed6(r.plr_norm_max) << ','
        << (r.plr_norm_diam ? fixed6(*r.plr_norm_diam) : std::string{}) << '\n';
  }
}

}  // namespace parle
