#include "parle/newick.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <vector>

namespace parle {

ParseError::ParseError(std::size_t byte_offset, int line, int column, std::string expected,
                       std::string found)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "parse error at offset " << byte_offset << " (line " << line << ", column "
           << column << "): expected " << expected << ", found " << found;
        return os.str();
      }()),
      byte_offset_(byte_offset),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

bool is_label_char(char c) {
  if (std::isspace(static_cast<unsigned char>(c))) return false;
  switch (c) {
    case '(': case ')': case '[': case ']': case ',': case ';': case ':': case '=':
    case '\0':
      return false;
    default:
      return !std::iscntrl(static_cast<unsigned char>(c));
  }
}

struct Mark {
  std::size_t pos;
  int line;
  int col;
};

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }
  Mark mark() const { return {pos_, line_, col_}; }

  void advance() {
    if (eof()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  [[noreturn]] void fail(std::string expected) const { fail_at(mark(), std::move(expected)); }

  [[noreturn]] void fail_at(const Mark& m, std::string expected) const {
    std::string found;
    if (m.pos >= text_.size()) {
      found = "end of input";
    } else {
      found = "'";
      found += text_[m.pos];
      found += "'";
    }
    throw ParseError(m.pos, m.line, m.col, std::move(expected), std::move(found));
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("'") + c + "'");
    advance();
  }

  void expect_literal(std::string_view lit) {
    for (const char c : lit) expect(c);
  }

  // Maximal run of label characters; may be empty.
  std::string label() {
    std::string out;
    while (!eof() && is_label_char(text_[pos_])) {
      out += text_[pos_];
      advance();
    }
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct PNode {
  std::string label;          // species label / gene name; may be empty on internals
  std::vector<int> kids;
  NodeId species = kNoNode;   // gene trees only
  Event event = Event::extant;
};

struct Annotation {
  NodeId species;
  Event event;
};

Annotation parse_annotation(Cursor& cur, const SpeciesTree& s) {
  cur.skip_ws();
  if (cur.peek() != '[') cur.fail("an [&&NHX:S=...:E=...] annotation");
  cur.advance();
  cur.expect_literal("&&NHX");
  std::optional<NodeId> species;
  std::optional<Event> event;
  while (cur.peek() == ':') {
    cur.advance();
    const Mark key_mark = cur.mark();
    const std::string key = cur.label();
    cur.expect('=');
    const Mark val_mark = cur.mark();
    const std::string value = cur.label();
    if (key == "S") {
      if (species) cur.fail_at(key_mark, "a single S key");
      const NodeId sv = s.find(value);
      if (sv == kNoNode) cur.fail_at(val_mark, "a known species label");
      species = sv;
    } else if (key == "E") {
      if (event) cur.fail_at(key_mark, "a single E key");
      Event e;
      if (!event_from_string(value, e)) cur.fail_at(val_mark, "one of extant|dup|spec");
      event = e;
    } else {
      cur.fail_at(key_mark, "annotation key S or E");
    }
  }
  cur.expect(']');
  if (!species) cur.fail("annotation key S");
  if (!event) cur.fail("annotation key E");
  return {*species, *event};
}

// Shared Newick structure machine. When `species` is non-null the document
// is a reconciled gene tree and every node must carry an NHX annotation.
std::pair<std::vector<PNode>, int> parse_structure(Cursor& cur, const SpeciesTree* species) {
  std::vector<PNode> nodes;
  std::vector<std::vector<int>> open;  // children gathered per unclosed '('
  std::optional<int> completed;

  auto finish_node = [&](int idx) {
    if (species != nullptr) {
      const Annotation a = parse_annotation(cur, *species);
      nodes[idx].species = a.species;
      nodes[idx].event = a.event;
    }
    completed = idx;
  };

  for (;;) {
    cur.skip_ws();
    if (!completed) {
      if (cur.peek() == '(') {
        cur.advance();
        open.emplace_back();
        continue;
      }
      const Mark m = cur.mark();
      std::string name = cur.label();
      if (name.empty())
        cur.fail_at(m, species ? "'(' or a gene name" : "'(' or a species label");
      nodes.push_back({std::move(name), {}, kNoNode, Event::extant});
      finish_node(static_cast<int>(nodes.size()) - 1);
      continue;
    }
    const char c = cur.peek();
    if (c == ',') {
      if (open.empty()) cur.fail("';'");
      cur.advance();
      open.back().push_back(*completed);
      completed.reset();
    } else if (c == ')') {
      if (open.empty()) cur.fail("';'");
      cur.advance();
      open.back().push_back(*completed);
      PNode group;
      group.kids = std::move(open.back());
      open.pop_back();
      cur.skip_ws();
      group.label = cur.label();  // optional; ignored on gene tree internals
      nodes.push_back(std::move(group));
      finish_node(static_cast<int>(nodes.size()) - 1);
    } else if (c == ';') {
      if (!open.empty()) cur.fail("',' or ')'");
      cur.advance();
      cur.skip_ws();
      if (!cur.eof()) cur.fail("end of input");
      return {std::move(nodes), *completed};
    } else {
      cur.fail(open.empty() ? "',' , ')' or ';'" : "',' or ')'");
    }
  }
}

}  // namespace

SpeciesTree parse_species_tree(std::string_view text) {
  Cursor cur(text);
  auto [nodes, root] = parse_structure(cur, nullptr);

  // Unlabeled internal nodes are auto-named "n<k>" with k their preorder
  // position, counted over all nodes.
  std::vector<std::string> final_label(nodes.size());
  {
    int preorder = 0;
    std::vector<int> st{root};
    while (!st.empty()) {
      const int idx = st.back();
      st.pop_back();
      final_label[idx] = nodes[idx].label.empty() && !nodes[idx].kids.empty()
                             ? "n" + std::to_string(preorder)
                             : nodes[idx].label;
      ++preorder;
      for (auto it = nodes[idx].kids.rbegin(); it != nodes[idx].kids.rend(); ++it)
        st.push_back(*it);
    }
  }

  SpeciesTree::Builder b;
  std::vector<std::pair<int, NodeId>> walk{{root, kNoNode}};
  while (!walk.empty()) {
    const auto [idx, parent] = walk.back();
    walk.pop_back();
    const NodeId id = parent == kNoNode ? b.add_root(final_label[idx])
                                        : b.add_child(parent, final_label[idx]);
    for (auto it = nodes[idx].kids.rbegin(); it != nodes[idx].kids.rend(); ++it)
      walk.emplace_back(*it, id);
  }
  return b.build();
}

ReconciledGeneTree parse_reconciled_tree(std::string_view text,
                                         std::shared_ptr<const SpeciesTree> s) {
  if (!s) throw std::invalid_argument("parse_reconciled_tree: null species tree");
  Cursor cur(text);
  auto [nodes, root] = parse_structure(cur, s.get());

  ReconciledGeneTree::Builder b(s);
  std::vector<std::pair<int, NodeId>> stack{{root, kNoNode}};
  while (!stack.empty()) {
    const auto [idx, parent] = stack.back();
    stack.pop_back();
    const PNode& node = nodes[idx];
    const std::string gene = node.kids.empty() ? node.label : std::string{};
    const NodeId id = parent == kNoNode
                          ? b.add_root(node.event, node.species, gene)
                          : b.add_child(parent, node.event, node.species, gene);
    for (auto it = node.kids.rbegin(); it != node.kids.rend(); ++it)
      stack.emplace_back(*it, id);
  }
  ReconciledGeneTree g = b.build();
  ValidationReport report = validate(g);
  if (!report.ok) throw ValidationError(std::move(report));
  return g;
}

std::string serialize_species_tree(const SpeciesTree& s) {
  return s.canonical_newick() + "\n";
}

std::string serialize_reconciled_tree(const ReconciledGeneTree& g) {
  const SpeciesTree& s = g.species_tree();

  // Smallest gene name below each node drives the canonical child order.
  std::vector<const std::string*> min_gene(g.node_count());
  for (const NodeId v : g.postorder()) {
    if (g.is_leaf(v)) {
      min_gene[v] = &g.gene_name(v);
    } else {
      const std::string* best = min_gene[g.children(v)[0]];
      for (const NodeId c : g.children(v))
        if (*min_gene[c] < *best) best = min_gene[c];
      min_gene[v] = best;
    }
  }

  std::string out;
  struct Frame {
    NodeId v;
    std::vector<NodeId> kids;
    std::size_t ci;
  };
  std::vector<Frame> stack;
  auto annotate = [&](NodeId v) {
    out += "[&&NHX:S=";
    out += s.label(g.species_of(v));
    out += ":E=";
    out += to_string(g.event(v));
    out += ']';
  };
  auto open = [&](NodeId v) {
    if (g.is_leaf(v)) {
      out += g.gene_name(v);
      annotate(v);
      return false;
    }
    std::vector<NodeId> kids(g.children(v).begin(), g.children(v).end());
    std::sort(kids.begin(), kids.end(),
              [&](NodeId a, NodeId b) { return *min_gene[a] < *min_gene[b]; });
    out += '(';
    stack.push_back({v, std::move(kids), 0});
    return true;
  };
  if (open(g.root())) {
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.ci < f.kids.size()) {
        if (f.ci > 0) out += ',';
        open(f.kids[f.ci++]);
      } else {
        out += ')';
        annotate(f.v);
        stack.pop_back();
      }
    }
  }
  out += ";\n";
  return out;
}

}  // namespace parle
