// Corpus-level plumbing: loading parallel files into bi-sentences, running the
// pipeline over a worker pool, key=value config files, provenance records and
// run manifests.
#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semproj/corpus.hpp"
#include "semproj/errors.hpp"
#include "semproj/matcher.hpp"
#include "semproj/projection.hpp"

namespace semproj {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Paths of one corpus. Empty string means "not supplied".
struct CorpusPaths {
  std::string src_trees;
  std::string tgt_trees;
  std::string src_tok;
  std::string tgt_tok;
  std::string align;
  std::string src_roles;
  std::string tgt_roles;

  std::vector<std::pair<std::string, std::string>> supplied() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, path] : {std::pair{"src_trees", &src_trees}, std::pair{"tgt_trees", &tgt_trees},
                                    std::pair{"src_tok", &src_tok}, std::pair{"tgt_tok", &tgt_tok},
                                    std::pair{"align", &align}, std::pair{"src_roles", &src_roles},
                                    std::pair{"tgt_roles", &tgt_roles}})
      if (!path->empty()) out.emplace_back(key, *path);
    return out;
  }
};

/// In-memory contents of the corpus files, keyed like CorpusPaths.
struct CorpusTexts {
  std::optional<std::string> src_trees, tgt_trees, src_tok, tgt_tok, align, src_roles, tgt_roles;

  static CorpusTexts read(const CorpusPaths& p) {
    CorpusTexts t;
    auto load = [](const std::string& path) -> std::optional<std::string> {
      if (path.empty()) return std::nullopt;
      return read_file(path);
    };
    t.src_trees = load(p.src_trees);
    t.tgt_trees = load(p.tgt_trees);
    t.src_tok = load(p.src_tok);
    t.tgt_tok = load(p.tgt_tok);
    t.align = load(p.align);
    t.src_roles = load(p.src_roles);
    t.tgt_roles = load(p.tgt_roles);
    return t;
  }
};

namespace detail {

inline std::string with_sentence(std::size_t k, const std::string& what) {
  return "sentence " + std::to_string(k + 1) + ": " + what;
}

// Sentence for one side: from the tree, else the tok line, else placeholder
// tokens covering every index mentioned in the alignment and roles.
inline Sentence side_sentence(const std::optional<ParseTree>& tree, const std::optional<Sentence>& tok,
                              int inferred_length) {
  if (tree && tok && tree->sentence().size() != tok->size())
    throw FormatError("tree has " + std::to_string(tree->sentence().size()) + " tokens, tok line has " +
                      std::to_string(tok->size()));
  if (tree) return tree->sentence();
  if (tok) return *tok;
  Sentence s;
  for (int i = 0; i < inferred_length; ++i) s.tokens.push_back(Token{i, "_", ""});
  return s;
}

}  // namespace detail

/// Builds bi-sentences from parallel file contents. The alignment file fixes
/// the corpus size; every other supplied file must have the same number of records.
inline std::vector<BiSentence> load_corpus(const CorpusTexts& t) {
  if (!t.align) throw ConfigError("an alignment file (--align) is required");
  const auto align_lines = split_lines(*t.align);
  const std::size_t n = align_lines.size();
  auto lines_of = [&](const std::optional<std::string>& text, const char* name) {
    std::optional<std::vector<std::string>> out;
    if (!text) return out;
    out = split_lines(*text);
    if (out->size() != n)
      throw FormatError(std::string(name) + " has " + std::to_string(out->size()) + " lines, alignment has " +
                        std::to_string(n) + " (files not parallel)");
    return out;
  };
  auto roles_of = [&](const std::optional<std::string>& text, const char* name) {
    std::optional<std::vector<RoleAnnotation>> out;
    if (!text) return out;
    out = parse_roles_file(*text);
    if (out->size() != n)
      throw FormatError(std::string(name) + " has " + std::to_string(out->size()) + " blocks, alignment has " +
                        std::to_string(n) + " lines (files not parallel)");
    return out;
  };
  auto src_trees = lines_of(t.src_trees, "source trees");
  auto tgt_trees = lines_of(t.tgt_trees, "target trees");
  auto src_tok = lines_of(t.src_tok, "source tok");
  auto tgt_tok = lines_of(t.tgt_tok, "target tok");
  auto src_roles = roles_of(t.src_roles, "source roles");
  auto tgt_roles = roles_of(t.tgt_roles, "target roles");

  std::vector<BiSentence> corpus(n);
  for (std::size_t k = 0; k < n; ++k) {
    try {
      BiSentence& b = corpus[k];
      if (src_trees) b.src_tree = parse_tree_line((*src_trees)[k]);
      if (tgt_trees) b.tgt_tree = parse_tree_line((*tgt_trees)[k]);
      std::optional<Sentence> stok, ttok;
      if (src_tok) stok = parse_tok_line((*src_tok)[k]);
      if (tgt_tok) ttok = parse_tok_line((*tgt_tok)[k]);
      if (src_roles) b.src_roles = (*src_roles)[k];
      if (tgt_roles) b.tgt_roles = (*tgt_roles)[k];

      int max_s = -1, max_t = -1;
      for (auto pair : detail::split_ws(align_lines[k])) {
        auto dash = pair.find('-');
        if (dash == std::string_view::npos) continue;
        max_s = std::max(max_s, detail::to_int(pair.substr(0, dash)).value_or(-1));
        max_t = std::max(max_t, detail::to_int(pair.substr(dash + 1)).value_or(-1));
      }
      auto role_max = [](const std::optional<RoleAnnotation>& a) {
        int m = -1;
        if (!a) return m;
        if (a->predicate) m = *a->predicate;
        for (const auto& r : a->roles)
          for (const auto& s : r.spans) m = std::max(m, s.hi);
        return m;
      };
      b.src = detail::side_sentence(b.src_tree, stok, std::max(max_s, role_max(b.src_roles)) + 1);
      b.tgt = detail::side_sentence(b.tgt_tree, ttok, std::max(max_t, role_max(b.tgt_roles)) + 1);
      b.alignment = parse_alignment(align_lines[k], b.src.size(), b.tgt.size());
      if (b.src_roles) validate_roles(*b.src_roles, b.src.size());
      if (b.tgt_roles) validate_roles(*b.tgt_roles, b.tgt.size());
    } catch (const ParseError& e) {
      throw ParseError(detail::with_sentence(k, e.what()), e.offset());
    } catch (const ValidationError& e) {
      throw ValidationError(detail::with_sentence(k, e.what()));
    } catch (const Error& e) {
      throw FormatError(detail::with_sentence(k, e.what()));
    }
  }
  return corpus;
}

struct SentenceResult {
  ProjectedAnnotation projection;
  PipelineTrace trace;
};

/// Runs the pipeline on every bi-sentence with `jobs` workers. Results come
/// back in input order; the first failing sentence (in input order) rethrows.
inline std::vector<SentenceResult> project_corpus(const std::vector<BiSentence>& corpus, const PipelineConfig& cfg,
                                                  int jobs = 1) {
  cfg.validate();
  std::vector<SentenceResult> results(corpus.size());
  std::vector<std::exception_ptr> errors(corpus.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < corpus.size(); k = next++) {
      try {
        results[k].projection = run_pipeline(corpus[k], cfg, &results[k].trace);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1,
                                                      std::max<std::size_t>(corpus.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const OracleMismatch&) {
      throw;
    } catch (const ConfigError& e) {
      throw ConfigError(detail::with_sentence(k, e.what()));
    } catch (const Error& e) {
      throw ValidationError(detail::with_sentence(k, e.what()));
    }
  }
  return results;
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  for (auto item : detail::split(s, ',')) {
    while (!item.empty() && detail::is_space(item.front())) item.remove_prefix(1);
    while (!item.empty() && detail::is_space(item.back())) item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

inline ConstraintClass parse_model(std::string_view s) {
  if (s == "word") return ConstraintClass::Word;
  if (s == "perfect") return ConstraintClass::Perfect;
  if (s == "edgecover") return ConstraintClass::EdgeCover;
  if (s == "total") return ConstraintClass::Total;
  throw ConfigError("unknown model '" + std::string(s) + "' (word|perfect|edgecover|total)");
}

/// Filter lists like `none`, `na`, `arg` or combinations such as `nc,na`.
inline void apply_filter_spec(PipelineConfig& cfg, std::string_view spec) {
  cfg.na_filter = cfg.nc_filter = cfg.arg_filter = false;
  for (const auto& f : split_list(spec)) {
    if (f == "none") continue;
    if (f == "na") cfg.na_filter = true;
    else if (f == "nc") cfg.nc_filter = true;
    else if (f == "arg") cfg.arg_filter = true;
    else throw ConfigError("unknown filter '" + f + "' (none|na|nc|arg)");
  }
}

inline std::string filter_spec(const PipelineConfig& cfg) {
  std::vector<std::string> parts;
  if (cfg.na_filter) parts.emplace_back("na");
  if (cfg.nc_filter) parts.emplace_back("nc");
  if (cfg.arg_filter) parts.emplace_back("arg");
  if (parts.empty()) return "none";
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ",") + p;
  return out;
}

/// Best development settings per model: perfect with NA, edge cover with Arg.
inline std::string default_filter(ConstraintClass model) {
  switch (model) {
    case ConstraintClass::Perfect: return "na";
    case ConstraintClass::EdgeCover: return "arg";
    default: return "none";
  }
}

/// Flat key=value settings; `#` starts a comment line.
inline std::map<std::string, std::string> parse_config_text(std::string_view text) {
  static const std::vector<std::string> known = {"model", "filter", "fill_gaps", "big", "clause_boundary_labels",
                                                 "content_pos_prefixes", "non_argument_pos", "jobs"};
  std::map<std::string, std::string> out;
  int lineno = 0;
  for (const auto& raw : split_lines(text)) {
    ++lineno;
    std::string_view line = raw;
    while (!line.empty() && detail::is_space(line.front())) line.remove_prefix(1);
    while (!line.empty() && detail::is_space(line.back())) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    auto key = split_list(line.substr(0, eq));
    if (key.size() != 1) throw ConfigError("config line " + std::to_string(lineno) + ": bad key");
    if (std::find(known.begin(), known.end(), key[0]) == known.end())
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key[0] + "'");
    auto value = line.substr(eq + 1);
    while (!value.empty() && detail::is_space(value.front())) value.remove_prefix(1);
    out[key[0]] = std::string(value);
  }
  return out;
}

inline bool parse_bool(std::string_view s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError("expected a boolean, got '" + std::string(s) + "'");
}

/// Applies config-file settings other than `model`, `filter` and `jobs`.
inline void apply_config(PipelineConfig& cfg, const std::map<std::string, std::string>& kv) {
  if (auto it = kv.find("fill_gaps"); it != kv.end()) cfg.fill_gaps = parse_bool(it->second);
  if (auto it = kv.find("big"); it != kv.end()) {
    try {
      cfg.big = std::stod(it->second);
    } catch (const std::exception&) {
      throw ConfigError("big must be a number");
    }
  }
  if (auto it = kv.find("clause_boundary_labels"); it != kv.end()) cfg.clause_boundary_labels = split_list(it->second);
  if (auto it = kv.find("content_pos_prefixes"); it != kv.end())
    cfg.filters.content_pos_prefixes = split_list(it->second);
  if (auto it = kv.find("non_argument_pos"); it != kv.end()) cfg.non_argument_pos = split_list(it->second);
}

inline nlohmann::json config_json(const PipelineConfig& cfg) {
  return {
      {"model", std::string(to_string(cfg.model))},
      {"filter", filter_spec(cfg)},
      {"fill_gaps", cfg.fill_gaps},
      {"big", cfg.big},
      {"clause_boundary_labels", cfg.clause_boundary_labels},
      {"content_pos_prefixes", cfg.filters.content_pos_prefixes},
      {"non_argument_pos", cfg.non_argument_pos},
      {"oracle_check", cfg.oracle_check},
  };
}

/// One JSON object per sentence: role -> contributing links and their similarities.
inline std::string provenance_line(const ProjectedAnnotation& p) {
  nlohmann::json roles = nlohmann::json::array();
  for (const auto& r : p.provenance) {
    nlohmann::json links = nlohmann::json::array();
    for (const auto& l : r.links) links.push_back({{"src", l.src_unit}, {"tgt", l.tgt_unit}, {"sim", l.sim}});
    roles.push_back({{"label", r.label}, {"projected", r.projected}, {"flags", r.flags}, {"links", links}});
  }
  nlohmann::json j = {{"sentence", p.annotation.sentence}, {"roles", roles}, {"warnings", p.warnings}};
  return j.dump() + "\n";
}

/// Manifest describing a run: configuration, input digests, output digest and
/// warnings. Contains nothing that depends on output location or worker count.
inline std::string manifest_json(std::string_view command, const nlohmann::json& config,
                                 const std::vector<std::pair<std::string, std::string>>& inputs,
                                 std::string_view output, const std::vector<std::string>& warnings) {
  nlohmann::json in = nlohmann::json::object();
  for (const auto& [key, path] : inputs) in[key] = {{"path", path}, {"sha256", sha256_hex(read_file(path))}};
  nlohmann::json j = {
      {"tool", "semproj"},
      {"version", std::string(kToolVersion)},
      {"command", std::string(command)},
      {"config", config},
      {"inputs", in},
      {"output_sha256", sha256_hex(output)},
      {"warnings", warnings},
  };
  return j.dump(2) + "\n";
}

}  // namespace semproj
