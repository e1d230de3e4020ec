#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "latlab/forge/render.hpp"
#include "latlab/forge/reversal.hpp"
#include "latlab/forge/types.hpp"
#include "latlab/taxonomy/generate.hpp"

namespace latlab::forge {

// Everything needed to assemble one complete dataset. The top-level seed fans
// out into the structure / carve / rendering / biography streams; any seeds
// set inside the nested configs are overwritten.
struct DatasetParams {
  tax::GenerateParams gen;
  std::vector<tax::HoldoutCondition> conditions;  // empty = all five
  double carve_fraction = 1.0 / 3.0;
  ForgeConfig forge;
  ReversalCounts celebrities;
  bool include_ood = true;
  bool include_celebrities = true;
  std::uint64_t seed = 0;

  void validate() const;
};

// One fully assembled dataset: both structures, their carves, every document
// and QA item, the biography records, and a manifest per split. Split
// contents:
//   knowledge_acquisition — all documents plus train-direction QA
//   bootstrap / rl_train  — prompts (taxonomy then biography)
//   test_in_dist          — in-distribution test items plus biography tests
//   test_out_dist         — out-of-distribution test items
struct DatasetBundle {
  DatasetParams params;
  tax::SemanticStructure in_structure, out_structure;
  tax::CarveResult in_carve, out_carve;
  std::vector<Document> documents;
  std::vector<QAItem> train_qa, bootstrap, rl, test_in, test_out;
  std::vector<CelebrityRecord> celebrities;
  QAItem unconditional_probe;  // meaningful only when include_celebrities
  std::map<Split, SplitManifest> manifests;
};

DatasetBundle build_dataset(const DatasetParams& params);

// Directory layout: params.kv, structures/carves as record files, one record
// file per artifact kind, one manifest file per split. load_dataset verifies
// every manifest hash and re-validates every QA item.
void save_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir);
DatasetBundle load_dataset(const std::filesystem::path& dir);

struct AuditReport {
  std::vector<std::string> violations;
  int checks = 0;  // individual assertions evaluated
  bool pass() const { return violations.empty(); }
};

// Leakage and consistency audit, independent of how the bundle was produced:
//   - manifests cover exactly the artifacts present, ids are unique
//   - every QA item's answer sets match recomputation from structure + carve
//     (train-direction items expose no held-out answer)
//   - no test item asks a query reserved for bootstrap (whose golden traces
//     expose held-out answers during trace SFT)
//   - no held-out fact is stated, under any template, in any same-tag document
//   - biography test names never appear as desc->name targets in training,
//     bootstrapping, or RL
//   - in- and out-of-distribution identifier spaces stay disjoint, and no
//     document body mixes them
AuditReport audit_dataset(const DatasetBundle& bundle);

}  // namespace latlab::forge
