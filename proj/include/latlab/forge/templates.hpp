#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "latlab/core/errors.hpp"
#include "latlab/forge/types.hpp"
#include "latlab/taxonomy/types.hpp"

namespace latlab::forge {

// ---- surface patterns -------------------------------------------------------
//
// A tokenized template. Slot tokens are written "{name}" and bind exactly one
// word; everything else is a fixed surface word from reserved_surface_words().
// Synthetic identifiers are never reserved, so a slot can never swallow
// template text, and two patterns with different fixed skeletons can never
// both match the same sentence. That makes rendering invertible.
struct Pattern {
  std::vector<std::string> tokens;

  static Pattern of(std::string_view text);

  bool is_slot(std::size_t i) const;
  std::string slot_name(std::size_t i) const;
  std::vector<std::string> fixed_words() const;

  std::string render(const std::map<std::string, std::string>& slots) const;
  // Fills `slots` on success. Slots only accept non-reserved words.
  bool match(const std::vector<std::string>& words,
             std::map<std::string, std::string>* slots) const;
};

// ---- queries ----------------------------------------------------------------

enum class QueryFamily { subject_isa, subject_prop, target_includes, prop_holders };

std::string to_string(QueryFamily f);
QueryFamily query_family_from_string(const std::string& s);

// What a prompt asks about, independent of its surface paraphrase.
//   subject_isa     — every ancestor category of `topic`
//   subject_prop    — every property value holding for `topic`
//   target_includes — every category the group `topic` includes
//   prop_holders    — every category that carries the value `topic`
struct QueryKey {
  QueryFamily family = QueryFamily::subject_isa;
  std::string topic;

  auto tie() const { return std::tie(family, topic); }
  bool operator==(const QueryKey& o) const { return tie() == o.tie(); }
  bool operator<(const QueryKey& o) const { return tie() < o.tie(); }
};

// One parsed statement from a biography-corpus document body.
struct CelebritySentence {
  std::string direction;    // condition::name_to_desc / desc_to_name / unconditional
  std::string name;         // "Given Family"
  std::string description;  // canonical description sentence; empty for unconditional
};

// ---- the template inventory -------------------------------------------------
//
// Every fixed surface word used by any template lives in
// reserved_surface_words(); validate() enforces that plus mutual
// distinguishability inside each parse pool. The pools are public so tests can
// build deliberately broken copies.
class TemplateSet {
 public:
  // fact statements, one pool per relation / property kind, slots {s} {o}
  std::vector<Pattern> isa, includes_rel, attribute, capability, relation_target;
  // question surfaces per query family, slot {s}
  std::map<QueryFamily, std::vector<Pattern>> queries;
  // instruction preambles; taxonomy ones carry slot {realm}
  std::vector<Pattern> taxonomy_prefix;
  std::vector<Pattern> celebrity_prefix;
  // biography statements, slots {g} {f} (+ {t1} {t2} when a description appears)
  std::vector<Pattern> name_to_desc_stmt, desc_to_name_stmt, unconditional_stmt;
  // question surfaces keyed by biography condition label
  std::map<std::string, std::vector<Pattern>> celebrity_queries;
  // the one description skeleton, slots {t1} {t2}
  Pattern description;

  static const TemplateSet& standard();

  void validate() const;
  std::set<std::string> vocabulary() const;  // every fixed word, all pools

  // -- taxonomy facts --
  int fact_variants(tax::Relation rel, tax::PropertyKind kind) const;
  std::string fact_sentence(const tax::Fact& f, tax::PropertyKind kind, int variant) const;
  // Inverse of fact_sentence over all variants; nullopt when the body is not a
  // taxonomy fact statement. The property kind is a rendering choice and is
  // not recovered.
  std::optional<tax::Fact> parse_fact(const std::string& body) const;

  // -- taxonomy prompts: "<prefix> question <query> answer" --
  std::string taxonomy_prompt(const std::string& realm, const QueryKey& key, int paraphrase,
                              int prefix_variant) const;
  std::optional<QueryKey> parse_query(const std::string& prompt) const;
  // Realm named by a taxonomy prompt prefix; "" for a biography prefix;
  // nullopt when the prompt matches neither.
  std::optional<std::string> parse_prompt_realm(const std::string& prompt) const;

  // -- biography corpus --
  std::string celebrity_description(const std::string& t1, const std::string& t2) const;
  // Trait words of a canonical description sentence.
  std::optional<std::pair<std::string, std::string>> description_traits(
      const std::string& description) const;
  std::string celebrity_statement(const std::string& direction, const std::string& name,
                                  const std::string& t1, const std::string& t2,
                                  int variant) const;
  std::optional<CelebritySentence> parse_celebrity(const std::string& body) const;
  std::string celebrity_prompt(const std::string& condition, const std::string& name,
                               const std::string& t1, const std::string& t2, int paraphrase,
                               int prefix_variant) const;
  std::optional<CelebritySentence> parse_celebrity_query(const std::string& prompt) const;
};

}  // namespace latlab::forge
