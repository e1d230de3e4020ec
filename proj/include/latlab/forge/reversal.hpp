#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "latlab/forge/types.hpp"

namespace latlab::forge {

// Composition of the biography corpus. Of the name_to_desc_only names,
// rl_names get description-to-name prompts for RL (bootstrap_names of those
// are reserved for trace synthesis instead) and the remainder become the test
// set — names whose reverse direction never appears anywhere in training.
struct ReversalCounts {
  int both_directions = 30;
  int name_to_desc_only = 60;
  int desc_to_name_only = 30;
  int unconditional_examples = 120;  // >= total_names(), so every name is a target
  int rl_names = 30;
  int bootstrap_names = 4;  // < 5
  int paraphrases = 4;

  int total_names() const { return both_directions + name_to_desc_only + desc_to_name_only; }
  int test_names() const { return name_to_desc_only - rl_names; }
  void validate() const;
};

struct ReversalData {
  std::vector<CelebrityRecord> records;   // construction order
  std::vector<Document> documents;        // biography knowledge-acquisition docs
  std::vector<QAItem> train_qa;           // trained-direction QA over trained pairs
  std::vector<QAItem> bootstrap;          // desc->name prompts for trace synthesis
  std::vector<QAItem> rl;                 // desc->name prompts for the RL stage
  std::vector<QAItem> test;               // desc->name items, paraphrased
  QAItem unconditional_probe;             // "say one name" prompt; a_all = every name
  std::vector<std::string> bootstrap_names, rl_name_list, test_name_list;  // raw names
};

// Deterministic in (counts, seed). Unconditional-generation examples cover
// the names in balanced rotation — every name appears floor or ceil of
// examples/names times — so each one has trained unconditional support.
ReversalData build_reversal_curse(const ReversalCounts& counts, std::uint64_t seed);

void save_celebrities(const std::vector<CelebrityRecord>& records,
                      const std::filesystem::path& path);
std::vector<CelebrityRecord> load_celebrities(const std::filesystem::path& path);

}  // namespace latlab::forge
