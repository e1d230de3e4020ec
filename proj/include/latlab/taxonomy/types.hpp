#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "latlab/core/errors.hpp"

namespace latlab::tax {

enum class Relation { is_a, has_property, includes };
enum class Derivation { direct, inherited, inverted, composed };
enum class PropertyKind { attribute, capability, relation_target };
enum class Strictness { strict, nonstrict };
enum class DistributionTag { in_dist, out_dist };
enum class HoldoutCondition {
  syllogism,
  strict_reversal,
  nonstrict_reversal,
  category_as_subject,
  category_as_target,
};

std::string to_string(Relation r);
std::string to_string(Derivation d);
std::string to_string(PropertyKind k);
std::string to_string(DistributionTag t);
std::string to_string(HoldoutCondition c);
Relation relation_from_string(const std::string& s);
Derivation derivation_from_string(const std::string& s);
PropertyKind property_kind_from_string(const std::string& s);
DistributionTag distribution_tag_from_string(const std::string& s);
HoldoutCondition holdout_condition_from_string(const std::string& s);

// A bare (subject, relation, object) triple. Identity of a proposition is the
// triple alone; derivation metadata is a witness, not part of identity.
struct Fact {
  std::string subject;
  Relation rel = Relation::is_a;
  std::string object;

  auto tie() const { return std::tie(subject, rel, object); }
  bool operator==(const Fact& o) const { return tie() == o.tie(); }
  bool operator!=(const Fact& o) const { return !(*this == o); }
  bool operator<(const Fact& o) const { return tie() < o.tie(); }
  std::string key() const;
  bool mentions(const std::string& id) const { return subject == id || object == id; }
};

inline Fact is_a(std::string s, std::string o) { return {std::move(s), Relation::is_a, std::move(o)}; }
inline Fact has_prop(std::string s, std::string o) {
  return {std::move(s), Relation::has_property, std::move(o)};
}
inline Fact includes(std::string s, std::string o) {
  return {std::move(s), Relation::includes, std::move(o)};
}

struct FactHash {
  std::size_t operator()(const Fact& f) const;
};

// A fact plus one witness derivation. hop_depth counts inference steps in the
// witness tree: stated facts are 0, an inversion of a stated fact is 1, a
// composition adds 1 to the sum of its premises' depths.
struct Proposition {
  Fact fact;
  Derivation derivation = Derivation::direct;
  std::vector<Fact> premises;
  int hop_depth = 0;

  // Enforces the structural contract between derivation kind, premise count,
  // and hop depth. Throws StructuralError on violation.
  void validate() const;
};

struct PropertySlot {
  PropertyKind kind = PropertyKind::attribute;
  int surface_template = 0;
  std::string value;
};

struct Category {
  std::string id;
  std::vector<std::string> parents;  // empty for unit roots
  std::vector<PropertySlot> properties;
  int unit = 0;   // replica index
  int level = 0;  // 0 = unit root
};

// One generated corpus skeleton: n_replicas isomorphic units, disjoint
// identifier spaces, one realm word naming the whole structure.
struct SemanticStructure {
  std::string realm;
  DistributionTag tag = DistributionTag::in_dist;
  std::uint64_t seed = 0;
  int n_per_unit = 0;
  int n_replicas = 0;
  int depth = 0;
  int branching = 0;
  int ood_modified_count = 0;
  std::vector<Category> categories;  // grouped by unit, level-major inside a unit

  const Category& category(const std::string& id) const;
  bool has_category(const std::string& id) const;
  // All stated facts: one is_a per parent edge plus one has_property per slot.
  std::vector<Proposition> direct_facts() const;
  // Every identifier owned by this structure: realm, category ids, property values.
  std::vector<std::string> identifiers() const;

 private:
  mutable std::unordered_map<std::string, std::size_t> index_;
  void build_index() const;
};

}  // namespace latlab::tax
