// Bi-sentence data model and the line-oriented file formats:
//   *.trees  one bracketed tree per line, `-` for none
//   *.align  space separated `i-j` pairs, 0-based, source-target
//   *.roles  blank-line separated blocks, `#<no> <frame> <predicate>` + `ROLE\tlo-hi[,lo-hi...]`
//   *.tok    `surface_POS` tokens separated by single spaces
#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstddef>
#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semproj/errors.hpp"

namespace semproj {

struct Token {
  int index = 0;
  std::string surface;
  std::string pos;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
  friend bool operator==(const Sentence&, const Sentence&) = default;
};

/// Inclusive token interval.
struct Span {
  int lo = 0;
  int hi = 0;

  int length() const { return hi - lo + 1; }
  bool contains(int i) const { return lo <= i && i <= hi; }
  bool contains(const Span& o) const { return lo <= o.lo && o.hi <= hi; }
  bool overlaps(const Span& o) const { return lo <= o.hi && o.lo <= hi; }
  friend auto operator<=>(const Span&, const Span&) = default;
};

struct Constituent {
  int id = 0;
  std::string label;
  Span span;
  std::vector<int> children;
  int parent = -1;
  bool is_terminal = false;
  // Padding node of an alignment graph; never produced by the tree parser.
  bool is_empty = false;

  friend bool operator==(const Constituent&, const Constituent&) = default;
};

/// Constituency tree. Nodes are stored in pre-order, so the root has id 0 and
/// every parent id is smaller than its children's ids.
class ParseTree {
 public:
  ParseTree() = default;
  ParseTree(Sentence sentence, std::vector<Constituent> nodes)
      : sentence_(std::move(sentence)), nodes_(std::move(nodes)) {}

  const Sentence& sentence() const { return sentence_; }
  const std::vector<Constituent>& nodes() const { return nodes_; }
  const Constituent& root() const { return nodes_.front(); }
  const Constituent& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// Pre-terminal covering token `i`.
  const Constituent& preterminal(int i) const {
    for (const auto& c : nodes_)
      if (c.is_terminal && c.span.lo == i) return c;
    throw IntegrityError("no preterminal covers token " + std::to_string(i));
  }

  /// True when `ancestor` dominates `id` (reflexively).
  bool dominates(int ancestor, int id) const {
    for (int cur = id; cur >= 0; cur = node(cur).parent)
      if (cur == ancestor) return true;
    return false;
  }

  friend bool operator==(const ParseTree&, const ParseTree&) = default;

 private:
  Sentence sentence_;
  std::vector<Constituent> nodes_;
};

/// Token indices dominated by `c`. Empty padding nodes have an empty yield.
inline std::vector<int> yield_of(const ParseTree& /*tree*/, const Constituent& c) {
  std::vector<int> out;
  if (c.is_empty) return out;
  for (int i = c.span.lo; i <= c.span.hi; ++i) out.push_back(i);
  return out;
}

using Link = std::pair<int, int>;

struct WordAlignment {
  std::set<Link> links;
  int n_src = 0;
  int n_tgt = 0;

  bool contains(int s, int t) const { return links.count({s, t}) > 0; }
  friend bool operator==(const WordAlignment&, const WordAlignment&) = default;
};

struct Role {
  std::string label;
  std::vector<Span> spans;

  friend bool operator==(const Role&, const Role&) = default;
};

/// One frame per sentence with its labelled spans. Role order and span order
/// are kept as read so that files round-trip unchanged.
struct RoleAnnotation {
  int sentence = 0;
  std::string frame;
  std::optional<int> predicate;
  std::vector<Role> roles;

  const Role* find(std::string_view label) const {
    for (const auto& r : roles)
      if (r.label == label) return &r;
    return nullptr;
  }
  friend bool operator==(const RoleAnnotation&, const RoleAnnotation&) = default;
};

struct BiSentence {
  Sentence src;
  Sentence tgt;
  std::optional<ParseTree> src_tree;
  std::optional<ParseTree> tgt_tree;
  std::optional<RoleAnnotation> src_roles;
  std::optional<RoleAnnotation> tgt_roles;
  WordAlignment alignment;
};

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

inline std::optional<int> to_int(std::string_view s) {
  int v = 0;
  if (s.empty()) return std::nullopt;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

struct RawNode {
  std::string label;
  std::optional<std::string> word;
  std::vector<std::unique_ptr<RawNode>> children;
};

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  std::unique_ptr<RawNode> read_tree() {
    skip();
    auto node = read_node();
    skip();
    if (pos_ != text_.size()) throw ParseError("trailing material after tree", pos_);
    return node;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  std::string read_atom() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::unique_ptr<RawNode> read_node() {
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input, expected '('", pos_);
    if (text_[pos_] != '(') throw ParseError("expected '('", pos_);
    std::size_t open = pos_;
    ++pos_;
    auto node = std::make_unique<RawNode>();
    skip();
    node->label = read_atom();
    skip();
    while (true) {
      if (pos_ >= text_.size()) throw ParseError("unbalanced brackets: missing ')'", pos_);
      char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        if (node->word) throw ParseError("preterminal mixes a word and subtrees", pos_);
        node->children.push_back(read_node());
      } else {
        if (node->word || !node->children.empty())
          throw ParseError("node mixes words and subtrees", pos_);
        node->word = read_atom();
      }
      skip();
    }
    if (!node->word && node->children.empty()) throw ParseError("empty constituent", open);
    if (node->word && node->label.empty()) throw ParseError("preterminal without a tag", open);
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline int flatten(const RawNode& raw, int parent, std::vector<Constituent>& nodes,
                   Sentence& sentence) {
  int id = static_cast<int>(nodes.size());
  nodes.push_back(Constituent{});
  nodes[id].id = id;
  nodes[id].label = raw.label;
  nodes[id].parent = parent;
  if (raw.word) {
    int idx = sentence.size();
    sentence.tokens.push_back(Token{idx, *raw.word, raw.label});
    nodes[id].is_terminal = true;
    nodes[id].span = {idx, idx};
    return id;
  }
  std::vector<int> kids;
  for (const auto& child : raw.children) kids.push_back(flatten(*child, id, nodes, sentence));
  nodes[id].children = kids;
  nodes[id].span = {nodes[kids.front()].span.lo, nodes[kids.back()].span.hi};
  return id;
}

inline void write_node(const ParseTree& tree, const Constituent& c, std::string& out) {
  out += '(';
  out += c.label;
  if (c.is_terminal) {
    out += ' ';
    out += tree.sentence().tokens[static_cast<std::size_t>(c.span.lo)].surface;
  } else {
    for (int k : c.children) {
      out += ' ';
      write_node(tree, tree.node(k), out);
    }
  }
  out += ')';
}

inline Span parse_span(std::string_view s) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos) throw FormatError("malformed span '" + std::string(s) + "'");
  auto lo = to_int(s.substr(0, dash));
  auto hi = to_int(s.substr(dash + 1));
  if (!lo || !hi || *lo < 0 || *hi < *lo)
    throw FormatError("malformed span '" + std::string(s) + "'");
  return {*lo, *hi};
}

}  // namespace detail

/// Parses one Penn-style bracketed tree. A root with an empty label and a
/// single child (`( (S ...) )`) is unwrapped.
inline ParseTree parse_tree(std::string_view line, std::optional<int> expected_tokens = {}) {
  detail::BracketReader reader(line);
  auto raw = reader.read_tree();
  while (raw->label.empty() && !raw->word && raw->children.size() == 1) {
    auto child = std::move(raw->children.front());
    raw = std::move(child);
  }
  Sentence sentence;
  std::vector<Constituent> nodes;
  detail::flatten(*raw, -1, nodes, sentence);
  if (expected_tokens && *expected_tokens != sentence.size())
    throw FormatError("tree has " + std::to_string(sentence.size()) + " tokens, expected " +
                      std::to_string(*expected_tokens));
  return ParseTree(std::move(sentence), std::move(nodes));
}

inline std::string serialize_tree(const ParseTree& tree) {
  std::string out;
  detail::write_node(tree, tree.root(), out);
  return out;
}

/// A `*.trees` line; `-` means no tree.
inline std::optional<ParseTree> parse_tree_line(std::string_view line,
                                                std::optional<int> expected_tokens = {}) {
  if (line == "-") return std::nullopt;
  return parse_tree(line, expected_tokens);
}

inline std::string serialize_tree_line(const std::optional<ParseTree>& tree) {
  return tree ? serialize_tree(*tree) : std::string("-");
}

inline WordAlignment parse_alignment(std::string_view line, int n_src, int n_tgt) {
  WordAlignment al;
  al.n_src = n_src;
  al.n_tgt = n_tgt;
  for (auto pair : detail::split_ws(line)) {
    auto dash = pair.find('-');
    if (dash == std::string_view::npos)
      throw FormatError("malformed alignment pair '" + std::string(pair) + "'");
    auto s = detail::to_int(pair.substr(0, dash));
    auto t = detail::to_int(pair.substr(dash + 1));
    if (!s || !t) throw FormatError("malformed alignment pair '" + std::string(pair) + "'");
    if (*s < 0 || *s >= n_src || *t < 0 || *t >= n_tgt)
      throw FormatError("alignment pair '" + std::string(pair) + "' out of range for lengths " +
                        std::to_string(n_src) + "," + std::to_string(n_tgt));
    al.links.insert({*s, *t});
  }
  return al;
}

inline std::string serialize_alignment(const WordAlignment& al) {
  std::string out;
  for (const auto& [s, t] : al.links) {
    if (!out.empty()) out += ' ';
    out += std::to_string(s) + "-" + std::to_string(t);
  }
  return out;
}

/// Intersection symmetrization. `bwd` must already be in source-target orientation.
inline WordAlignment intersect_alignments(const WordAlignment& fwd, const WordAlignment& bwd) {
  if (fwd.n_src != bwd.n_src || fwd.n_tgt != bwd.n_tgt)
    throw FormatError("cannot intersect alignments over different sentence lengths");
  WordAlignment out;
  out.n_src = fwd.n_src;
  out.n_tgt = fwd.n_tgt;
  std::set_intersection(fwd.links.begin(), fwd.links.end(), bwd.links.begin(), bwd.links.end(),
                        std::inserter(out.links, out.links.end()));
  return out;
}

/// Checks pairwise disjointness of spans within each role and label uniqueness.
inline void validate_roles(const RoleAnnotation& a) {
  for (std::size_t i = 0; i < a.roles.size(); ++i) {
    const auto& role = a.roles[i];
    for (std::size_t j = i + 1; j < a.roles.size(); ++j)
      if (a.roles[j].label == role.label)
        throw ValidationError("duplicate role label '" + role.label + "'");
    for (std::size_t x = 0; x < role.spans.size(); ++x)
      for (std::size_t y = x + 1; y < role.spans.size(); ++y)
        if (role.spans[x].overlaps(role.spans[y]))
          throw ValidationError("overlapping spans in role '" + role.label + "'");
  }
}

/// Range check against a sentence length.
inline void validate_roles(const RoleAnnotation& a, int n_tokens) {
  validate_roles(a);
  if (a.predicate && (*a.predicate < 0 || *a.predicate >= n_tokens))
    throw ValidationError("predicate index out of range in sentence " +
                          std::to_string(a.sentence));
  for (const auto& role : a.roles)
    for (const auto& s : role.spans)
      if (s.hi >= n_tokens)
        throw ValidationError("span of role '" + role.label + "' out of range in sentence " +
                              std::to_string(a.sentence));
}

/// Parses one `*.roles` block (header line plus role lines).
inline RoleAnnotation parse_roles(std::string_view block) {
  auto lines = detail::split(block, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw FormatError("empty roles block");
  auto header = lines.front();
  if (header.empty() || header[0] != '#') throw FormatError("roles block must start with '#'");
  auto fields = detail::split(header.substr(1), ' ');
  if (fields.size() != 3) throw FormatError("roles header needs '#<no> <frame> <predicate>'");
  RoleAnnotation a;
  auto no = detail::to_int(fields[0]);
  if (!no) throw FormatError("bad sentence number '" + std::string(fields[0]) + "'");
  a.sentence = *no;
  if (fields[1].empty()) throw FormatError("empty frame name");
  a.frame = std::string(fields[1]);
  if (fields[2] != "-") {
    auto pred = detail::to_int(fields[2]);
    if (!pred || *pred < 0) throw FormatError("bad predicate index '" + std::string(fields[2]) + "'");
    a.predicate = *pred;
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cols = detail::split(lines[i], '\t');
    if (cols.size() != 2 || cols[0].empty())
      throw FormatError("role line must be 'ROLE<TAB>lo-hi[,lo-hi...]': '" +
                        std::string(lines[i]) + "'");
    Role role{std::string(cols[0]), {}};
    for (auto s : detail::split(cols[1], ',')) role.spans.push_back(detail::parse_span(s));
    a.roles.push_back(std::move(role));
  }
  validate_roles(a);
  return a;
}

inline std::string serialize_roles(const RoleAnnotation& a) {
  std::string out = "#" + std::to_string(a.sentence) + " " + a.frame + " " +
                    (a.predicate ? std::to_string(*a.predicate) : std::string("-")) + "\n";
  for (const auto& role : a.roles) {
    out += role.label;
    out += '\t';
    for (std::size_t i = 0; i < role.spans.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(role.spans[i].lo) + "-" + std::to_string(role.spans[i].hi);
    }
    out += '\n';
  }
  return out;
}

/// Whole `*.roles` file: blocks separated by one blank line.
inline std::vector<RoleAnnotation> parse_roles_file(std::string_view text) {
  std::vector<RoleAnnotation> out;
  std::string block;
  auto flush = [&] {
    if (!block.empty()) out.push_back(parse_roles(block));
    block.clear();
  };
  for (auto line : detail::split(text, '\n')) {
    if (line.empty() || line == "\r") {
      flush();
    } else {
      block += line;
      block += '\n';
    }
  }
  flush();
  return out;
}

inline std::string serialize_roles_file(const std::vector<RoleAnnotation>& annotations) {
  std::string out;
  for (std::size_t i = 0; i < annotations.size(); ++i) {
    if (i) out += '\n';
    out += serialize_roles(annotations[i]);
  }
  return out;
}

/// A `*.tok` line. The POS tag follows the last underscore of each token.
inline Sentence parse_tok_line(std::string_view line) {
  Sentence s;
  for (auto tok : detail::split_ws(line)) {
    auto us = tok.rfind('_');
    if (us == std::string_view::npos || us == 0 || us + 1 == tok.size())
      throw FormatError("token '" + std::string(tok) + "' is not surface_POS");
    s.tokens.push_back(
        Token{s.size(), std::string(tok.substr(0, us)), std::string(tok.substr(us + 1))});
  }
  if (s.tokens.empty()) throw FormatError("empty sentence in tok line");
  return s;
}

inline std::string serialize_tok_line(const Sentence& s) {
  std::string out;
  for (const auto& t : s.tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface + "_" + t.pos;
  }
  return out;
}

/// Lines of a text file, without the trailing empty line after the final newline.
inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  for (auto l : detail::split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    out.emplace_back(l);
  }
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::ios_base::failure("write failed for '" + path + "'");
}

}  // namespace semproj
