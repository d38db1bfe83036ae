#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "parle/tree.hpp"

namespace parle {

// Lexical/syntactic failure while reading a tree document. Offsets always
// point into the original input (byte offset is 0-based, line/column are
// 1-based).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t byte_offset, int line, int column, std::string expected,
             std::string found);

  std::size_t byte_offset() const { return byte_offset_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t byte_offset_;
  int line_;
  int column_;
  std::string expected_;
  std::string found_;
};

// Rooted Newick, binary, unique leaf labels, optional internal labels
// (missing ones are auto-named "n<k>" by canonical preorder position),
// trailing ';' required. Throws ParseError on malformed input and
// ValidationError on a non-binary or mislabeled tree.
SpeciesTree parse_species_tree(std::string_view text);

// Newick where every node carries [&&NHX:S=<speciesLabel>:E=<event>].
// Leaf names are gene names; S labels resolve against `s`. The result always
// passes validate(), otherwise a ValidationError carrying the report is
// thrown.
ReconciledGeneTree parse_reconciled_tree(std::string_view text,
                                         std::shared_ptr<const SpeciesTree> s);

// Deterministic text: children ordered by the smallest leaf name in their
// clade, annotation keys in the order S then E, no whitespace, terminated by
// ';' and a line feed.
std::string serialize_species_tree(const SpeciesTree& s);
std::string serialize_reconciled_tree(const ReconciledGeneTree& g);

}  // namespace parle
