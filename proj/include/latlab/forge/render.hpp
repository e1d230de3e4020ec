#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latlab/forge/templates.hpp"
#include "latlab/forge/types.hpp"
#include "latlab/taxonomy/carve.hpp"

namespace latlab::forge {

// Per-structure rendering budget. All counts are exact: rendering produces
// precisely documents_total documents and rl_prompts + bootstrap_prompts
// prompts, or throws ConfigError when the structure cannot support them.
struct ForgeConfig {
  int documents_total = 7140;
  int rl_prompts = 974;
  int bootstrap_prompts = 10;
  int test_paraphrases = 4;          // question surfaces per test item, <= 4
  double rl_direct_fraction = 0.5;   // share of fully-trained prompts in the RL pool
  std::uint64_t seed = 0;

  void validate() const;
};

// A query with its answer sets relative to a carved structure. a_all comes
// from the deductive closure of the final train set (shadowed facts are
// underivable and thus excluded); a_exposed from the train facts themselves;
// a_heldout is the difference — every answer the model can only produce by
// inference, regardless of which holdout condition removed it.
struct Query {
  QueryKey key;
  std::vector<std::string> a_all;      // normalized, sorted, unique
  std::vector<std::string> a_exposed;  // subset of a_all
  std::vector<std::string> a_heldout;  // a_all minus a_exposed
  std::vector<tax::Fact> heldout_facts;  // sorted witnesses for a_heldout
};

// Every query over the structure whose full answer set is non-empty, sorted by
// (family, topic). Deterministic.
std::vector<Query> enumerate_queries(const tax::SemanticStructure& s,
                                     const tax::CarveResult& carve);

// The queries a single fact answers, with the answer each contributes. An
// is_a fact answers subject_isa, an includes fact answers target_includes,
// and a has_property fact answers both subject_prop and prop_holders.
std::vector<std::pair<QueryKey, std::string>> fact_queries(const tax::Fact& f);

// Single-fact knowledge-acquisition documents. Facts are taken from the train
// set in sorted order, round-robin, so every train fact is stated at least
// floor(documents_total / |train|) times; the surface template rotates on each
// revisit. Throws ConfigError when documents_total < |train| (an unstated
// train fact would silently shrink the exposed set).
std::vector<Document> render_documents(const tax::SemanticStructure& s,
                                       const tax::CarveResult& carve,
                                       const ForgeConfig& config);

enum class QAPhase { train_qa, bootstrap, rl, test };
std::string to_string(QAPhase p);

// QA items for one phase of one carved structure.
//   train_qa  — one item per query with >= 1 exposed answer; answers are the
//               exposed set only (the model is taught the format, never a
//               held-out answer)
//   bootstrap — prompts reserved for thinking-trace synthesis
//   rl        — prompts for the RL stage; both phases draw from one pool of
//               queries with >= 1 exposed answer, mixing latent queries
//               (>= 1 held-out answer) and direct ones per rl_direct_fraction.
//               Bootstrap takes distinct queries; RL then takes (query,
//               paraphrase surface) instances over the rest, covering every
//               query once before any repeats, so rl_prompts may exceed the
//               distinct-query pool by up to the paraphrase factor. A
//               bootstrap query never reappears in RL and no two prompts
//               share a surface string.
//   test      — one item per (query, holdout condition) pair that the carve
//               attributes, times test_paraphrases question surfaces; a_all
//               and a_heldout are condition-independent, primary_reference is
//               the smallest answer the named condition withheld. Queries
//               reserved for bootstrap are excluded — their golden traces
//               spell out held-out answers during trace SFT
// Bootstrap and rl items carry the full answer sets; consumers reward only
// a_all minus a_heldout. Throws ConfigError when the pool cannot fill the
// requested counts or a carved condition yields no test items.
std::vector<QAItem> render_qa(const tax::SemanticStructure& s, const tax::CarveResult& carve,
                              QAPhase phase, const ForgeConfig& config);

}  // namespace latlab::forge
