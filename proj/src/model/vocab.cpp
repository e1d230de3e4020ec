#include "latlab/model/vocab.hpp"

#include <algorithm>
#include <set>

#include "latlab/core/hashing.hpp"
#include "latlab/core/records.hpp"
#include "latlab/core/text.hpp"

namespace latlab::model {

const std::vector<std::string>& Vocabulary::reserved_tokens() {
  static const std::vector<std::string> r = {"<pad>", "<bos>", "<eos>", "<think>", "</think>"};
  return r;
}

Vocabulary Vocabulary::build(const std::vector<std::string>& corpora) {
  if (corpora.empty()) throw DataError("build_vocab: no corpora");
  const auto& reserved = reserved_tokens();
  std::set<std::string> reserved_set(reserved.begin(), reserved.end());
  std::set<std::string> words;
  for (const auto& text : corpora)
    for (auto& w : split_ws(text)) {
      if (reserved_set.count(w))
        throw DataError("build_vocab: corpus contains reserved token " + w);
      words.insert(std::move(w));
    }
  Vocabulary v;
  v.tokens_ = reserved;
  v.tokens_.insert(v.tokens_.end(), words.begin(), words.end());
  for (std::size_t i = 0; i < v.tokens_.size(); ++i)
    v.ids_[v.tokens_[i]] = static_cast<int>(i);
  return v;
}

int Vocabulary::id(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) throw DataError("token not in vocabulary: " + token);
  return it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) throw DataError("token id out of range: " + std::to_string(id));
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(std::string_view text) const {
  std::vector<int> out;
  for (const auto& w : split_ws(text)) out.push_back(id(w));
  return out;
}

std::string Vocabulary::decode(const std::vector<int>& ids, bool skip_reserved) const {
  std::vector<std::string> words;
  for (int i : ids) {
    if (skip_reserved && i < n_reserved) continue;
    words.push_back(token(i));
  }
  return join(words, " ");
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::vector<std::vector<std::string>> rows;
  for (const auto& t : tokens_) rows.push_back({t});
  write_records(path, "latlab.vocab/1", rows);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  const auto rec = read_records(path, "latlab.vocab/1");
  Vocabulary v;
  for (const auto& row : rec.rows) v.tokens_.push_back(row.at(0));
  if (v.tokens_.size() < n_reserved ||
      !std::equal(reserved_tokens().begin(), reserved_tokens().end(), v.tokens_.begin()))
    throw DataError(path.string() + ": vocabulary missing reserved prefix");
  for (std::size_t i = 0; i < v.tokens_.size(); ++i)
    v.ids_[v.tokens_[i]] = static_cast<int>(i);
  if (v.ids_.size() != v.tokens_.size())
    throw DataError(path.string() + ": duplicate vocabulary tokens");
  return v;
}

std::uint64_t Vocabulary::content_hash() const {
  StreamHash h;
  for (const auto& t : tokens_) h.update(t).update("\x1e");
  return h.value();
}

SpanSplit split_spans(const std::vector<int>& ids) {
  SpanSplit s;
  int opens = 0, closes = 0;
  std::size_t close_at = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == Vocabulary::think_open_id) {
      ++opens;
      if (opens > 1 || i != 0 || closes > 0) s.malformed = true;
    } else if (ids[i] == Vocabulary::think_close_id) {
      ++closes;
      close_at = i;
      if (closes > opens) s.malformed = true;
    }
  }
  if (opens != closes) s.malformed = true;
  if (opens == 0) {
    for (int t : ids)
      if (t != Vocabulary::eos_id && t != Vocabulary::pad_id) s.answer.push_back(t);
    return s;
  }
  s.has_thought = true;
  if (s.malformed) return s;
  for (std::size_t i = 1; i < close_at; ++i) s.thought.push_back(ids[i]);
  for (std::size_t i = close_at + 1; i < ids.size(); ++i)
    if (ids[i] != Vocabulary::eos_id && ids[i] != Vocabulary::pad_id) s.answer.push_back(ids[i]);
  return s;
}

}  // namespace latlab::model
