#include "latlab/taxonomy/types.hpp"

#include <algorithm>

#include "latlab/core/hashing.hpp"

namespace latlab::tax {

std::string to_string(Relation r) {
  switch (r) {
    case Relation::is_a: return "is_a";
    case Relation::has_property: return "has_property";
    case Relation::includes: return "includes";
  }
  throw Error("bad Relation");
}

std::string to_string(Derivation d) {
  switch (d) {
    case Derivation::direct: return "direct";
    case Derivation::inherited: return "inherited";
    case Derivation::inverted: return "inverted";
    case Derivation::composed: return "composed";
  }
  throw Error("bad Derivation");
}

std::string to_string(PropertyKind k) {
  switch (k) {
    case PropertyKind::attribute: return "attribute";
    case PropertyKind::capability: return "capability";
    case PropertyKind::relation_target: return "relation_target";
  }
  throw Error("bad PropertyKind");
}

std::string to_string(DistributionTag t) {
  return t == DistributionTag::in_dist ? "in_dist" : "out_dist";
}

std::string to_string(HoldoutCondition c) {
  switch (c) {
    case HoldoutCondition::syllogism: return "syllogism";
    case HoldoutCondition::strict_reversal: return "strict_reversal";
    case HoldoutCondition::nonstrict_reversal: return "nonstrict_reversal";
    case HoldoutCondition::category_as_subject: return "category_as_subject";
    case HoldoutCondition::category_as_target: return "category_as_target";
  }
  throw Error("bad HoldoutCondition");
}

Relation relation_from_string(const std::string& s) {
  if (s == "is_a") return Relation::is_a;
  if (s == "has_property") return Relation::has_property;
  if (s == "includes") return Relation::includes;
  throw DataError("unknown relation: " + s);
}

Derivation derivation_from_string(const std::string& s) {
  if (s == "direct") return Derivation::direct;
  if (s == "inherited") return Derivation::inherited;
  if (s == "inverted") return Derivation::inverted;
  if (s == "composed") return Derivation::composed;
  throw DataError("unknown derivation: " + s);
}

PropertyKind property_kind_from_string(const std::string& s) {
  if (s == "attribute") return PropertyKind::attribute;
  if (s == "capability") return PropertyKind::capability;
  if (s == "relation_target") return PropertyKind::relation_target;
  throw DataError("unknown property kind: " + s);
}

DistributionTag distribution_tag_from_string(const std::string& s) {
  if (s == "in_dist") return DistributionTag::in_dist;
  if (s == "out_dist") return DistributionTag::out_dist;
  throw DataError("unknown distribution tag: " + s);
}

HoldoutCondition holdout_condition_from_string(const std::string& s) {
  if (s == "syllogism") return HoldoutCondition::syllogism;
  if (s == "strict_reversal") return HoldoutCondition::strict_reversal;
  if (s == "nonstrict_reversal") return HoldoutCondition::nonstrict_reversal;
  if (s == "category_as_subject") return HoldoutCondition::category_as_subject;
  if (s == "category_as_target") return HoldoutCondition::category_as_target;
  throw DataError("unknown holdout condition: " + s);
}

std::string Fact::key() const {
  return subject + "\x1f" + to_string(rel) + "\x1f" + object;
}

std::size_t FactHash::operator()(const Fact& f) const {
  StreamHash h;
  h.update(f.subject).update("\x1f").update(to_string(f.rel)).update("\x1f").update(f.object);
  return static_cast<std::size_t>(h.value());
}

void Proposition::validate() const {
  if (hop_depth < 0) throw StructuralError("negative hop_depth for " + fact.key());
  const bool is_direct = derivation == Derivation::direct;
  if (is_direct != (hop_depth == 0) || is_direct != premises.empty())
    throw StructuralError("direct propositions must have hop 0 and no premises: " + fact.key());
  if (derivation == Derivation::inverted && premises.size() != 1)
    throw StructuralError("inverted propositions take exactly one premise: " + fact.key());
  if ((derivation == Derivation::composed || derivation == Derivation::inherited) &&
      premises.size() < 2)
    throw StructuralError("composed propositions take at least two premises: " + fact.key());
}

void SemanticStructure::build_index() const {
  if (!index_.empty() || categories.empty()) return;
  for (std::size_t i = 0; i < categories.size(); ++i) index_[categories[i].id] = i;
}

bool SemanticStructure::has_category(const std::string& id) const {
  build_index();
  return index_.count(id) > 0;
}

const Category& SemanticStructure::category(const std::string& id) const {
  build_index();
  auto it = index_.find(id);
  if (it == index_.end()) throw StructuralError("no such category: " + id);
  return categories[it->second];
}

std::vector<Proposition> SemanticStructure::direct_facts() const {
  std::vector<Proposition> out;
  for (const auto& c : categories) {
    for (const auto& p : c.parents) out.push_back({is_a(c.id, p), Derivation::direct, {}, 0});
    for (const auto& slot : c.properties)
      out.push_back({has_prop(c.id, slot.value), Derivation::direct, {}, 0});
  }
  std::sort(out.begin(), out.end(),
            [](const Proposition& a, const Proposition& b) { return a.fact < b.fact; });
  return out;
}

std::vector<std::string> SemanticStructure::identifiers() const {
  std::vector<std::string> out;
  out.push_back(realm);
  for (const auto& c : categories) {
    out.push_back(c.id);
    for (const auto& slot : c.properties) out.push_back(slot.value);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace latlab::tax
