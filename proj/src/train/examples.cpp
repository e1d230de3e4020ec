#include "latlab/train/examples.hpp"

#include <algorithm>

#include "latlab/core/rng.hpp"
#include "latlab/core/text.hpp"

namespace latlab::train {

int word_count(const std::string& text) { return static_cast<int>(split_ws(text).size()); }

// ---------------------------------------------------------------------------
// packing
// ---------------------------------------------------------------------------

model::TokenBatch pack_examples(const model::Vocabulary& vocab,
                                const std::vector<TextExample>& examples, int seq_len) {
  if (seq_len <= 1) throw ConfigError("pack: seq_len must exceed 1");
  if (examples.empty()) throw TrainingError("pack: no examples");

  std::vector<std::vector<int>> row_tokens, row_targets;
  int col = seq_len;  // force a fresh row for the first example
  for (const auto& ex : examples) {
    std::vector<int> ids = vocab.encode(ex.text);
    ids.insert(ids.begin(), model::Vocabulary::bos_id);
    ids.push_back(model::Vocabulary::eos_id);
    const int n = static_cast<int>(ids.size());
    if (n > seq_len)
      throw TrainingError("pack: example needs " + std::to_string(n) + " tokens, row width is " +
                          std::to_string(seq_len) + ": " + ex.text.substr(0, 60));
    if (ex.supervise_from_word < 0 || ex.supervise_from_word > n - 2)
      throw TrainingError("pack: supervise_from_word out of range for: " + ex.text.substr(0, 60));
    if (col + n > seq_len) {
      row_tokens.emplace_back();
      row_targets.emplace_back();
      col = 0;
    }
    auto& toks = row_tokens.back();
    auto& tgts = row_targets.back();
    for (int i = 0; i < n; ++i) {
      toks.push_back(ids[i]);
      const bool supervised = i >= ex.supervise_from_word && i < n - 1;
      tgts.push_back(supervised ? ids[i + 1] : -1);
    }
    col += n;
  }

  model::TokenBatch b;
  b.batch = static_cast<int>(row_tokens.size());
  b.seq = seq_len;
  b.tokens.reserve(b.size());
  b.targets.reserve(b.size());
  for (int r = 0; r < b.batch; ++r) {
    row_tokens[r].resize(seq_len, model::Vocabulary::pad_id);
    row_targets[r].resize(seq_len, -1);
    b.tokens.insert(b.tokens.end(), row_tokens[r].begin(), row_tokens[r].end());
    b.targets.insert(b.targets.end(), row_targets[r].begin(), row_targets[r].end());
  }
  return b;
}

model::TokenBatch slice_rows(const model::TokenBatch& batch, int begin, int end) {
  if (begin < 0 || end > batch.batch || begin >= end)
    throw TrainingError("slice_rows: bad row range");
  model::TokenBatch out;
  out.batch = end - begin;
  out.seq = batch.seq;
  const auto from = static_cast<std::size_t>(begin) * batch.seq;
  const auto to = static_cast<std::size_t>(end) * batch.seq;
  out.tokens.assign(batch.tokens.begin() + from, batch.tokens.begin() + to);
  out.targets.assign(batch.targets.begin() + from, batch.targets.begin() + to);
  if (!batch.weights.empty())
    out.weights.assign(batch.weights.begin() + from, batch.weights.begin() + to);
  return out;
}

// ---------------------------------------------------------------------------
// corpus -> examples
// ---------------------------------------------------------------------------

const std::string& SurfaceMap::surface(const std::string& normalized) const {
  auto it = overrides.find(normalized);
  return it == overrides.end() ? normalized : it->second;
}

SurfaceMap build_surface_map(const std::vector<forge::CelebrityRecord>& records) {
  SurfaceMap m;
  for (const auto& r : records) m.overrides[normalize_answer(r.name)] = r.name;
  return m;
}

std::string qa_answer_text(const forge::QAItem& item, const SurfaceMap& surfaces) {
  std::vector<std::string> parts;
  parts.reserve(item.a_all.size());
  for (const auto& a : item.a_all) parts.push_back(surfaces.surface(a));
  return join(parts, " ");
}

TextExample document_example(const forge::Document& doc) {
  return {doc.task_prefix + " " + doc.body, 0};
}

TextExample qa_example(const forge::QAItem& item, const SurfaceMap& surfaces) {
  TextExample ex;
  ex.supervise_from_word = word_count(item.prompt);
  ex.text = item.prompt + " " + qa_answer_text(item, surfaces);
  return ex;
}

// ---------------------------------------------------------------------------
// auxiliary side tasks
// ---------------------------------------------------------------------------

std::vector<TextExample> make_aux_examples(int count, std::uint64_t seed) {
  if (count <= 0) throw ConfigError("aux examples: count must be positive");
  static const std::vector<std::string> pool = {"alpha", "beta",  "gamma", "delta",
                                                "epsilon", "zeta", "eta",   "theta",
                                                "iota",  "kappa", "lambda", "mu"};
  Rng rng = derive_rng(seed, "train:aux");
  std::vector<TextExample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int len = static_cast<int>(rng.uniform_int(2, 4));
    std::vector<std::string> words;
    for (int k = 0; k < len; ++k)
      words.push_back(pool[static_cast<std::size_t>(rng.uniform_int(0, 11))]);
    const std::string listed = join(words, " ");
    TextExample ex;
    switch (i % 3) {
      case 0:
        ex.text = "question repeat after me " + listed + " answer " + listed;
        ex.supervise_from_word = 5 + len;
        break;
      case 1:
        ex.text = "question say the first word of " + listed + " answer " + words.front();
        ex.supervise_from_word = 7 + len;
        break;
      default:
        ex.text = "question say the last word of " + listed + " answer " + words.back();
        ex.supervise_from_word = 7 + len;
        break;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace latlab::train
