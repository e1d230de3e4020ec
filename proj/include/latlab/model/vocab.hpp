#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "latlab/core/errors.hpp"

namespace latlab::model {

// Word-level vocabulary over whitespace-separated tokens. Identifiers in the
// synthetic corpora are atomic words, so word-level ids keep exact-match
// scoring and leakage audits trivially well-defined.
class Vocabulary {
 public:
  static constexpr int pad_id = 0;
  static constexpr int bos_id = 1;
  static constexpr int eos_id = 2;
  static constexpr int think_open_id = 3;
  static constexpr int think_close_id = 4;
  static constexpr int n_reserved = 5;

  static const std::vector<std::string>& reserved_tokens();

  // Covers every whitespace token of every corpus string; ordering is
  // reserved tokens first, then corpus tokens sorted lexicographically, so
  // identical input sets produce identical vocabularies. A corpus containing
  // a reserved token string is an error.
  static Vocabulary build(const std::vector<std::string>& corpora);

  int size() const { return static_cast<int>(tokens_.size()); }
  bool has(const std::string& token) const { return ids_.count(token) > 0; }
  int id(const std::string& token) const;
  const std::string& token(int id) const;

  std::vector<int> encode(std::string_view text) const;  // no implicit bos/eos
  std::string decode(const std::vector<int>& ids, bool skip_reserved = true) const;

  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  std::uint64_t content_hash() const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// Thought/answer span split of a generated id sequence.
struct SpanSplit {
  std::vector<int> thought;  // tokens strictly inside <think>...</think>
  std::vector<int> answer;   // tokens after </think> (or everything, if no thoughts)
  bool has_thought = false;
  bool malformed = false;  // unbalanced or repeated delimiters
};

SpanSplit split_spans(const std::vector<int>& ids);

}  // namespace latlab::model
