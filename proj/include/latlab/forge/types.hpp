#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "latlab/taxonomy/types.hpp"

namespace latlab::forge {

using tax::DistributionTag;

// One training document: an instruction preamble plus an encyclopedia-style
// body. Every body sentence is traceable to the source facts listed by key.
struct Document {
  std::string doc_id;
  std::string task_prefix;
  std::string body;
  std::vector<std::string> source_fact_keys;
  DistributionTag tag = DistributionTag::in_dist;
};

// Condition labels for QA items. Holdout-condition names are reused verbatim;
// the extra labels cover direct-knowledge queries and the biography track.
namespace condition {
inline constexpr const char* direct = "direct";
inline constexpr const char* name_to_desc = "name_to_desc";
inline constexpr const char* desc_to_name = "desc_to_name";
inline constexpr const char* unconditional = "unconditional";
}  // namespace condition

struct QAItem {
  std::string qa_id;
  std::string prompt;
  std::vector<std::string> a_all;      // canonical forms, sorted, unique
  std::vector<std::string> a_heldout;  // subset of a_all
  std::string primary_reference;
  std::string condition;
  DistributionTag tag = DistributionTag::in_dist;

  bool answer_valid(const std::string& normalized) const;
  bool answer_heldout(const std::string& normalized) const;
  // Enforces: non-empty a_all, both sets sorted/unique/normalized,
  // a_heldout ⊆ a_all, primary_reference ∈ a_all. Throws DataError.
  void validate() const;
};

struct CelebrityRecord {
  std::string name;         // "Given Family"
  std::string description;  // full sentence ending with the unique trait words
  std::string direction;    // "both" | "name_to_desc_only" | "desc_to_name_only"
  std::vector<int> paraphrase_ids;
};

enum class Split { knowledge_acquisition, bootstrap, rl_train, test_in_dist, test_out_dist };
std::string to_string(Split s);
Split split_from_string(const std::string& s);

struct SplitManifest {
  Split split = Split::knowledge_acquisition;
  std::vector<std::string> item_ids;
  std::string content_hash;  // over split name + ids, stable under reload
};

std::string manifest_hash(Split split, const std::vector<std::string>& item_ids);

// ---- record-file serialization ---------------------------------------------

void save_documents(const std::vector<Document>& docs, const std::filesystem::path& path);
std::vector<Document> load_documents(const std::filesystem::path& path);

void save_qa(const std::vector<QAItem>& items, const std::filesystem::path& path);
std::vector<QAItem> load_qa(const std::filesystem::path& path);

void save_manifest(const SplitManifest& m, const std::filesystem::path& path);
SplitManifest load_manifest(const std::filesystem::path& path);

}  // namespace latlab::forge
