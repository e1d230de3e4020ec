#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "latlab/forge/types.hpp"
#include "latlab/model/transformer.hpp"
#include "latlab/model/vocab.hpp"

namespace latlab::train {

// One training string plus how much of it is context. Tokenization is
// <bos> words <eos>; positions that would predict a word before
// `supervise_from_word` carry no loss, so a QA example supervises only its
// answer span while a document supervises every word (and <eos>).
struct TextExample {
  std::string text;
  int supervise_from_word = 0;
};

int word_count(const std::string& text);

// Greedy packing into rows of width `seq_len`: each example occupies one
// contiguous run, a new row starts when the next example does not fit, and
// row tails are <pad> with target -1. Supervision never crosses an example
// boundary (the <eos> position predicts nothing). Attention is causal-only,
// so later examples in a row do attend to earlier ones — the usual packing
// trade for dense batches. An example needing more than seq_len tokens
// (words + 2) throws TrainingError.
model::TokenBatch pack_examples(const model::Vocabulary& vocab,
                                const std::vector<TextExample>& examples, int seq_len);

// Rows [begin, end) of a packed batch as a batch of their own.
model::TokenBatch slice_rows(const model::TokenBatch& batch, int begin, int end);

// Maps normalized answers back to the surface form the corpus trains on.
// Person names are capitalized in biography documents, so their QA targets
// must be capitalized too; everything else is already lowercase.
struct SurfaceMap {
  std::map<std::string, std::string> overrides;
  const std::string& surface(const std::string& normalized) const;
};

SurfaceMap build_surface_map(const std::vector<forge::CelebrityRecord>& records);

// The answer span trained for a QA item: every a_all entry in order, mapped
// to surface form, joined by spaces. Set-valued answers therefore train the
// model to emit the complete sorted set.
std::string qa_answer_text(const forge::QAItem& item, const SurfaceMap& surfaces);

TextExample document_example(const forge::Document& doc);
TextExample qa_example(const forge::QAItem& item, const SurfaceMap& surfaces);

// Synthetic instruction-format side tasks that stand in for a base model's
// instruction data: copy, first-word and last-word questions over a fixed
// word list. Every word is drawn from reserved_surface_words(), so these can
// never collide with corpus identifiers. Deterministic in (count, seed).
std::vector<TextExample> make_aux_examples(int count, std::uint64_t seed);

}  // namespace latlab::train
