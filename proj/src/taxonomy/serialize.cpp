#include "latlab/taxonomy/serialize.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "latlab/core/records.hpp"
#include "latlab/core/text.hpp"

namespace latlab::tax {

namespace {
constexpr const char* kStructureSchema = "latlab.structure/1";
constexpr const char* kCarveSchema = "latlab.holdout/1";

std::vector<std::string> fact_fields(const Fact& f) {
  return {f.subject, to_string(f.rel), f.object};
}

Fact fact_from(const std::vector<std::string>& fields, std::size_t at) {
  return {fields.at(at), relation_from_string(fields.at(at + 1)), fields.at(at + 2)};
}
}  // namespace

void save_structure(const SemanticStructure& s, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"meta", s.realm, to_string(s.tag), std::to_string(s.seed),
                  std::to_string(s.n_per_unit), std::to_string(s.n_replicas),
                  std::to_string(s.depth), std::to_string(s.branching),
                  std::to_string(s.ood_modified_count)});
  for (const auto& c : s.categories) {
    rows.push_back({"category", c.id, std::to_string(c.unit), std::to_string(c.level),
                    join(c.parents, " ")});
    for (const auto& p : c.properties)
      rows.push_back({"property", c.id, to_string(p.kind), std::to_string(p.surface_template),
                      p.value});
  }
  write_records(path, kStructureSchema, rows);
}

SemanticStructure load_structure(const std::filesystem::path& path) {
  const RecordFile rec = read_records(path, kStructureSchema);
  SemanticStructure s;
  bool have_meta = false;
  for (const auto& row : rec.rows) {
    const std::string& kind = row.at(0);
    if (kind == "meta") {
      s.realm = row.at(1);
      s.tag = distribution_tag_from_string(row.at(2));
      s.seed = std::stoull(row.at(3));
      s.n_per_unit = std::stoi(row.at(4));
      s.n_replicas = std::stoi(row.at(5));
      s.depth = std::stoi(row.at(6));
      s.branching = std::stoi(row.at(7));
      s.ood_modified_count = std::stoi(row.at(8));
      have_meta = true;
    } else if (kind == "category") {
      Category c;
      c.id = row.at(1);
      c.unit = std::stoi(row.at(2));
      c.level = std::stoi(row.at(3));
      for (auto& p : split_ws(row.at(4))) c.parents.push_back(p);
      s.categories.push_back(std::move(c));
    } else if (kind == "property") {
      if (s.categories.empty() || s.categories.back().id != row.at(1))
        throw DataError(path.string() + ": property row out of order");
      PropertySlot p;
      p.kind = property_kind_from_string(row.at(2));
      p.surface_template = std::stoi(row.at(3));
      p.value = row.at(4);
      s.categories.back().properties.push_back(std::move(p));
    } else {
      throw DataError(path.string() + ": unknown row kind '" + kind + "'");
    }
  }
  if (!have_meta) throw DataError(path.string() + ": missing meta row");
  return s;
}

void save_carve(const CarveResult& c, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : c.train) {
    std::vector<std::string> row = {"train"};
    for (auto& f : fact_fields(p.fact)) row.push_back(f);
    row.push_back(to_string(p.derivation));
    row.push_back(std::to_string(p.hop_depth));
    std::vector<std::string> premise_keys;
    for (const auto& pf : p.premises) premise_keys.push_back(pf.key());
    row.push_back(join(premise_keys, "\x1e"));
    rows.push_back(std::move(row));
  }
  for (const auto& part : c.partitions)
    for (const auto& f : part.heldout) {
      std::vector<std::string> row = {"heldout", to_string(part.condition)};
      for (auto& x : fact_fields(f)) row.push_back(x);
      rows.push_back(std::move(row));
    }
  for (const auto& f : c.shadowed) {
    std::vector<std::string> row = {"shadowed"};
    for (auto& x : fact_fields(f)) row.push_back(x);
    rows.push_back(std::move(row));
  }
  for (const auto& [cond, cats] : c.carved_categories)
    for (const auto& cat : cats) rows.push_back({"carved_category", to_string(cond), cat});
  write_records(path, kCarveSchema, rows);
}

CarveResult load_carve(const std::filesystem::path& path) {
  const RecordFile rec = read_records(path, kCarveSchema);
  CarveResult c;
  std::map<HoldoutCondition, std::vector<Fact>> parts;
  for (const auto& row : rec.rows) {
    const std::string& kind = row.at(0);
    if (kind == "train") {
      Proposition p;
      p.fact = fact_from(row, 1);
      p.derivation = derivation_from_string(row.at(4));
      p.hop_depth = std::stoi(row.at(5));
      for (auto& key : split_on(row.at(6), '\x1e')) {
        if (key.empty()) continue;
        auto parts_of = split_on(key, '\x1f');
        if (parts_of.size() != 3) throw DataError(path.string() + ": bad premise key");
        p.premises.push_back({parts_of[0], relation_from_string(parts_of[1]), parts_of[2]});
      }
      p.validate();
      c.train.push_back(std::move(p));
    } else if (kind == "heldout") {
      parts[holdout_condition_from_string(row.at(1))].push_back(fact_from(row, 2));
    } else if (kind == "shadowed") {
      c.shadowed.push_back(fact_from(row, 1));
    } else if (kind == "carved_category") {
      c.carved_categories[holdout_condition_from_string(row.at(1))].push_back(row.at(2));
    } else {
      throw DataError(path.string() + ": unknown row kind '" + kind + "'");
    }
  }
  for (auto& [cond, facts] : parts) {
    HoldoutPartition part;
    part.condition = cond;
    part.heldout = std::move(facts);
    std::sort(part.heldout.begin(), part.heldout.end());
    c.partitions.push_back(std::move(part));
  }
  return c;
}

}  // namespace latlab::tax
