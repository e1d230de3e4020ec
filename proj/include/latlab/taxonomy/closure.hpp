#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "latlab/taxonomy/types.hpp"

namespace latlab::tax {

// The inference rule set is fixed: is_a transitivity, property inheritance
// along is_a (equivalently, composition of is_a with has_property), and
// inversion of is_a into includes. Individual rules can be switched off for
// targeted tests.
struct RuleSet {
  bool transitivity = true;
  bool inheritance = true;
  bool inversion = true;
};

// Deductive closure of a fact set, each fact carrying one minimal-depth
// witness derivation. Tie between equal-depth witnesses goes to the
// lexicographically smallest sorted premise key list.
class Closure {
 public:
  explicit Closure(std::vector<Proposition> props);
  const std::vector<Proposition>& props() const { return props_; }
  bool has(const Fact& f) const { return index_.count(f) > 0; }
  const Proposition* find(const Fact& f) const;
  std::size_t size() const { return props_.size(); }

 private:
  std::vector<Proposition> props_;  // sorted by fact
  std::unordered_map<Fact, std::size_t, FactHash> index_;
};

// Input facts are treated as stated axioms (hop 0) regardless of their
// metadata. Throws StructuralError when the stated is_a edges contain a cycle.
Closure deductive_closure(const std::vector<Proposition>& stated, const RuleSet& rules = {});

// Fast membership + adjacency lookups over a fact set.
class FactIndex {
 public:
  FactIndex() = default;
  explicit FactIndex(const std::vector<Proposition>& props);
  explicit FactIndex(const std::vector<Fact>& facts);
  void insert(const Fact& f);
  bool has(const Fact& f) const { return set_.count(f) > 0; }
  std::size_t size() const { return set_.size(); }
  // Objects o with (s, rel, o) present.
  const std::vector<std::string>& objects_of(const std::string& subject, Relation rel) const;
  const std::vector<Fact>& all() const { return ordered_; }

 private:
  std::unordered_set<Fact, FactHash> set_;
  std::unordered_map<std::string, std::vector<std::string>> by_subject_isa_;
  std::unordered_map<std::string, std::vector<std::string>> by_subject_prop_;
  std::vector<Fact> ordered_;
};

// Classifies a fact that is derivable from, but absent from, `train`.
//   strict    — the only derivation is a single inversion of one train fact
//   nonstrict — at least one multi-hop derivation exists
// Preconditions: fact not in train, fact in closure(train); violations throw.
Strictness classify_strictness(const Fact& fact, const FactIndex& train,
                               const Closure& train_closure);

}  // namespace latlab::tax
