#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "latlab/taxonomy/closure.hpp"
#include "latlab/taxonomy/types.hpp"

namespace latlab::tax {

// The training universe starts as the full deductive closure of a structure's
// stated facts — documents may state derived facts in both directions — and
// carving removes specific propositions from it so they can only be recovered
// by inference:
//   syllogism            — remove a composed fact, keep its premises
//   strict_reversal      — remove an includes fact whose only derivation is
//                          inverting one trained edge
//   nonstrict_reversal   — remove an includes fact that also has a multi-hop
//                          derivation
//   category_as_subject  — keep exactly one fact naming a leaf category (its
//                          parent edge); test subject-side inferences about it
//   category_as_target   — same single kept fact; test inferences that reach
//                          the category as the object
// Facts that leave the training set without being testable under the chosen
// condition (e.g. a pruned category's own property, which nothing implies) are
// reported as shadowed: untrained, untested, and excluded from answer sets.
struct CarveParams {
  std::vector<HoldoutCondition> conditions;
  double fraction = 1.0 / 3.0;  // of each condition's candidate pool
  std::uint64_t seed = 0;
};

struct HoldoutPartition {
  HoldoutCondition condition;
  std::vector<Fact> heldout;  // sorted
};

struct CarveResult {
  std::vector<Proposition> train;  // final common train set, sorted by fact
  std::vector<HoldoutPartition> partitions;
  std::vector<Fact> shadowed;
  std::map<HoldoutCondition, std::vector<std::string>> carved_categories;

  bool is_heldout(const Fact& f) const;
  std::vector<Fact> all_heldout() const;
};

// Throws ConfigError (naming the condition) when a candidate pool is empty or
// carving would leave a category unreachable; throws StructuralError if the
// result violates the partition contract (heldout must stay derivable, sets
// must stay disjoint).
CarveResult carve_holdouts(const SemanticStructure& structure, const CarveParams& params);

}  // namespace latlab::tax
