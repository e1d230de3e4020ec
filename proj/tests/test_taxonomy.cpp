#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "latlab/core/records.hpp"
#include "latlab/core/reserved_words.hpp"
#include "latlab/taxonomy/carve.hpp"
#include "latlab/taxonomy/closure.hpp"
#include "latlab/taxonomy/generate.hpp"
#include "latlab/taxonomy/serialize.hpp"
#include "latlab/taxonomy/types.hpp"
#include "oracles.hpp"

using namespace latlab;
using namespace latlab::tax;
namespace fs = std::filesystem;

namespace {

std::vector<Proposition> as_axioms(const std::vector<Fact>& facts) {
  std::vector<Proposition> out;
  for (const auto& f : facts) out.push_back({f, Derivation::direct, {}, 0});
  return out;
}

std::vector<Fact> fact_set(const Closure& c) {
  std::vector<Fact> out;
  for (const auto& p : c.props()) out.push_back(p.fact);
  return out;
}

std::vector<Fact> facts_of(const std::vector<Proposition>& props) {
  std::vector<Fact> out;
  for (const auto& p : props) out.push_back(p.fact);
  return out;
}

fs::path temp_dir() {
  static int n = 0;
  fs::path p = fs::temp_directory_path() / ("latlab_tax_test_" + std::to_string(n++));
  fs::create_directories(p);
  return p;
}

}  // namespace

// ---- types ------------------------------------------------------------------

TEST_CASE("enum names round-trip") {
  for (auto r : {Relation::is_a, Relation::has_property, Relation::includes})
    CHECK(relation_from_string(to_string(r)) == r);
  for (auto d : {Derivation::direct, Derivation::inherited, Derivation::inverted,
                 Derivation::composed})
    CHECK(derivation_from_string(to_string(d)) == d);
  for (auto c : {HoldoutCondition::syllogism, HoldoutCondition::strict_reversal,
                 HoldoutCondition::nonstrict_reversal, HoldoutCondition::category_as_subject,
                 HoldoutCondition::category_as_target})
    CHECK(holdout_condition_from_string(to_string(c)) == c);
  CHECK_THROWS_AS(relation_from_string("nonsense"), DataError);
}

TEST_CASE("proposition validation enforces the witness contract") {
  Proposition ok{is_a("a", "b"), Derivation::direct, {}, 0};
  CHECK_NOTHROW(ok.validate());
  Proposition bad_hop{is_a("a", "b"), Derivation::direct, {}, 1};
  CHECK_THROWS_AS(bad_hop.validate(), StructuralError);
  Proposition bad_premises{is_a("a", "b"), Derivation::direct, {is_a("a", "b")}, 0};
  CHECK_THROWS_AS(bad_premises.validate(), StructuralError);
  Proposition inv{includes("b", "a"), Derivation::inverted, {is_a("a", "b")}, 1};
  CHECK_NOTHROW(inv.validate());
  Proposition inv_two{includes("b", "a"), Derivation::inverted,
                      {is_a("a", "b"), is_a("a", "b")}, 1};
  CHECK_THROWS_AS(inv_two.validate(), StructuralError);
  Proposition comp{is_a("a", "c"), Derivation::composed, {is_a("a", "b"), is_a("b", "c")}, 1};
  CHECK_NOTHROW(comp.validate());
  Proposition comp_one{is_a("a", "c"), Derivation::composed, {is_a("a", "b")}, 1};
  CHECK_THROWS_AS(comp_one.validate(), StructuralError);
}

// ---- closure ----------------------------------------------------------------

TEST_CASE("closure of a three-node chain matches the hand computation") {
  const std::vector<Fact> stated = {is_a("a", "b"), is_a("b", "c"), has_prop("c", "v")};
  Closure c = deductive_closure(as_axioms(stated));
  CHECK(c.size() == 9);

  auto expect = [&](const Fact& f, Derivation d, int hops) {
    const Proposition* p = c.find(f);
    REQUIRE(p != nullptr);
    CHECK(p->derivation == d);
    CHECK(p->hop_depth == hops);
  };
  expect(is_a("a", "b"), Derivation::direct, 0);
  expect(is_a("b", "c"), Derivation::direct, 0);
  expect(has_prop("c", "v"), Derivation::direct, 0);
  expect(is_a("a", "c"), Derivation::composed, 1);
  expect(includes("b", "a"), Derivation::inverted, 1);
  expect(includes("c", "b"), Derivation::inverted, 1);
  expect(includes("c", "a"), Derivation::inverted, 2);
  expect(has_prop("b", "v"), Derivation::composed, 1);
  expect(has_prop("a", "v"), Derivation::composed, 2);

  // Two equal-depth witnesses exist for has_prop(a, v); the tie must go to
  // the lexicographically smaller premise list, which routes through b.
  const Proposition* p = c.find(has_prop("a", "v"));
  std::vector<Fact> premises = p->premises;
  std::sort(premises.begin(), premises.end());
  CHECK(premises == std::vector<Fact>{is_a("a", "b"), has_prop("b", "v")});

  const Proposition* inv = c.find(includes("c", "a"));
  CHECK(inv->premises == std::vector<Fact>{is_a("a", "c")});
}

TEST_CASE("closure facts and hop depths match the path-search oracle") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    for (double extra : {0.0, 0.35}) {
      GenerateParams gp;
      gp.seed = seed;
      gp.n_replicas = 3;
      gp.extra_edge_probability = extra;
      gp.tag = seed % 2 ? DistributionTag::in_dist : DistributionTag::out_dist;
      SemanticStructure s = generate_structure(gp);
      std::vector<Fact> stated = facts_of(s.direct_facts());

      Closure c = deductive_closure(s.direct_facts());
      std::vector<Fact> closure_facts = fact_set(c);
      std::set<Fact> got(closure_facts.begin(), closure_facts.end());
      CHECK(got == oracle::derivable(stated));
      for (const auto& p : c.props()) {
        CHECK(p.hop_depth == oracle::min_hops(p.fact, stated));
        CHECK_NOTHROW(p.validate());
        for (const auto& premise : p.premises) {
          REQUIRE(c.has(premise));
          CHECK(c.find(premise)->hop_depth < p.hop_depth);
        }
      }
    }
  }
}

TEST_CASE("closure treats derived facts in its input as axioms") {
  // A carved training set contains includes facts; they are inert axioms.
  const std::vector<Fact> stated = {is_a("a", "b"), includes("z", "q")};
  Closure c = deductive_closure(as_axioms(stated));
  CHECK(c.size() == 3);  // the two axioms plus includes(b, a)
  CHECK(c.has(includes("b", "a")));
  CHECK(c.find(includes("z", "q"))->hop_depth == 0);
}

TEST_CASE("rule toggles remove exactly their products") {
  const std::vector<Fact> stated = {is_a("a", "b"), is_a("b", "c"), has_prop("c", "v")};
  RuleSet no_inv;
  no_inv.inversion = false;
  Closure c1 = deductive_closure(as_axioms(stated), no_inv);
  CHECK(c1.size() == 6);
  for (const auto& p : c1.props()) CHECK(p.fact.rel != Relation::includes);

  RuleSet no_trans;
  no_trans.transitivity = false;
  Closure c2 = deductive_closure(as_axioms(stated), no_trans);
  CHECK(c2.size() == 7);
  CHECK(!c2.has(is_a("a", "c")));
  CHECK(!c2.has(includes("c", "a")));
  CHECK(c2.has(has_prop("a", "v")));  // inheritance alone still climbs

  RuleSet no_inherit;
  no_inherit.inheritance = false;
  Closure c3 = deductive_closure(as_axioms(stated), no_inherit);
  CHECK(c3.size() == 7);
  CHECK(!c3.has(has_prop("b", "v")));
  CHECK(!c3.has(has_prop("a", "v")));
}

TEST_CASE("closure rejects is_a cycles") {
  CHECK_THROWS_AS(deductive_closure(as_axioms({is_a("a", "b"), is_a("b", "a")})),
                  StructuralError);
  CHECK_THROWS_AS(deductive_closure(as_axioms({is_a("a", "a")})), StructuralError);
  CHECK_THROWS_AS(
      deductive_closure(as_axioms({is_a("a", "b"), is_a("b", "c"), is_a("c", "a")})),
      StructuralError);
}

TEST_CASE("closure is deterministic regardless of input order") {
  GenerateParams gp;
  gp.seed = 17;
  gp.n_replicas = 2;
  SemanticStructure s = generate_structure(gp);
  auto axioms = s.direct_facts();
  auto reversed = axioms;
  std::reverse(reversed.begin(), reversed.end());
  Closure a = deductive_closure(axioms);
  Closure b = deductive_closure(reversed);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.props()[i].fact == b.props()[i].fact);
    CHECK(a.props()[i].hop_depth == b.props()[i].hop_depth);
    CHECK(a.props()[i].premises == b.props()[i].premises);
  }
}

// ---- strictness ---------------------------------------------------------------

TEST_CASE("strictness classification on hand-built sets") {
  auto classify = [](const std::vector<Fact>& train_facts, const Fact& f) {
    FactIndex idx(train_facts);
    Closure c = deductive_closure(as_axioms(train_facts));
    return classify_strictness(f, idx, c);
  };
  // Only the stated edge: inverting it is the single derivation.
  CHECK(classify({is_a("d", "e")}, includes("e", "d")) == Strictness::strict);
  // Shortcut edge plus a midpoint: a second, multi-hop route exists.
  CHECK(classify({is_a("d", "e"), is_a("e", "f"), is_a("d", "f")}, includes("f", "d")) ==
        Strictness::nonstrict);
  // No stated edge at all: the only routes are multi-hop.
  CHECK(classify({is_a("d", "e"), is_a("e", "f")}, includes("f", "d")) == Strictness::nonstrict);
  // Non-reversal facts are nonstrict by definition.
  CHECK(classify({is_a("d", "e"), is_a("e", "f")}, is_a("d", "f")) == Strictness::nonstrict);
  // Precondition violations.
  CHECK_THROWS_AS(classify({is_a("d", "e")}, is_a("d", "e")), StructuralError);
  CHECK_THROWS_AS(classify({is_a("d", "e")}, includes("d", "e")), StructuralError);
}

// ---- generation ---------------------------------------------------------------

TEST_CASE("unit level sizes fill top-down under the branching cap") {
  CHECK(unit_level_sizes(7, 2, 2) == std::vector<int>{1, 2, 4});
  CHECK(unit_level_sizes(5, 2, 2) == std::vector<int>{1, 2, 2});
  CHECK(unit_level_sizes(3, 2, 2) == std::vector<int>{1, 1, 1});
  CHECK(unit_level_sizes(15, 3, 2) == std::vector<int>{1, 2, 4, 8});
  CHECK_THROWS_AS(unit_level_sizes(8, 2, 2), ConfigError);   // exceeds 1+2+4
  CHECK_THROWS_AS(unit_level_sizes(2, 2, 2), ConfigError);   // too few for the depth
  CHECK_THROWS_AS(unit_level_sizes(0, 1, 1), ConfigError);
}

TEST_CASE("generated structures have the requested shape") {
  GenerateParams gp;
  gp.seed = 5;
  gp.n_replicas = 50;
  SemanticStructure s = generate_structure(gp);
  CHECK(s.categories.size() == 350);
  std::map<int, int> level_count;
  for (const auto& c : s.categories) {
    if (c.unit != 0) continue;
    level_count[c.level] += 1;
    CHECK(c.properties.size() == 1);
    if (c.level == 0) CHECK(c.parents.empty());
    else CHECK(c.parents.size() == 1);
  }
  CHECK(level_count == std::map<int, int>{{0, 1}, {1, 2}, {2, 4}});

  // All identifiers unique and none reserved.
  auto ids = s.identifiers();
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == ids.size());
  for (const auto& id : ids) CHECK(!is_reserved_surface_word(id));

  // Stated facts: one edge per non-root category, one property per category.
  auto stated = s.direct_facts();
  CHECK(stated.size() == 350 - 50 + 350);
}

TEST_CASE("same seed reproduces the identical structure") {
  GenerateParams gp;
  gp.seed = 21;
  gp.n_replicas = 4;
  gp.extra_edge_probability = 0.3;
  auto dir = temp_dir();
  save_structure(generate_structure(gp), dir / "a.rec");
  save_structure(generate_structure(gp), dir / "b.rec");
  CHECK(read_text_file(dir / "a.rec") == read_text_file(dir / "b.rec"));
}

TEST_CASE("out-of-distribution twin is isomorphic with flipped property kinds") {
  GenerateParams gp;
  gp.seed = 9;
  gp.n_replicas = 6;
  gp.ood_modified_count = 5;
  SemanticStructure in = generate_structure(gp);
  gp.tag = DistributionTag::out_dist;
  SemanticStructure out = generate_structure(gp);

  REQUIRE(in.categories.size() == out.categories.size());
  std::map<std::string, std::size_t> in_pos, out_pos;
  for (std::size_t i = 0; i < in.categories.size(); ++i) {
    in_pos[in.categories[i].id] = i;
    out_pos[out.categories[i].id] = i;
  }
  int flipped_in_unit0 = 0;
  for (std::size_t i = 0; i < in.categories.size(); ++i) {
    const Category& a = in.categories[i];
    const Category& b = out.categories[i];
    CHECK(a.unit == b.unit);
    CHECK(a.level == b.level);
    REQUIRE(a.parents.size() == b.parents.size());
    for (std::size_t j = 0; j < a.parents.size(); ++j)
      CHECK(in_pos[a.parents[j]] == out_pos[b.parents[j]]);
    REQUIRE(a.properties.size() == b.properties.size());
    for (std::size_t j = 0; j < a.properties.size(); ++j) {
      CHECK(a.properties[j].surface_template == b.properties[j].surface_template);
      bool flip = a.properties[j].kind != b.properties[j].kind;
      if (flip && a.unit == 0) ++flipped_in_unit0;
    }
  }
  CHECK(flipped_in_unit0 == 5);

  // Disjoint identifier spaces, including the realm words.
  auto in_ids = in.identifiers();
  auto out_ids = out.identifiers();
  std::set<std::string> in_set(in_ids.begin(), in_ids.end());
  for (const auto& id : out_ids) CHECK(!in_set.count(id));
}

TEST_CASE("generation parameter validation") {
  GenerateParams gp;
  gp.n_per_unit = 8;  // cannot fit under branching 2 at depth 2
  CHECK_THROWS_AS(generate_structure(gp), ConfigError);
  gp = GenerateParams{};
  gp.ood_modified_count = 99;
  CHECK_THROWS_AS(generate_structure(gp), ConfigError);
  gp = GenerateParams{};
  gp.n_replicas = 0;
  CHECK_THROWS_AS(generate_structure(gp), ConfigError);
}

// ---- carving ------------------------------------------------------------------

namespace {

const std::vector<HoldoutCondition> kAllConditions = {
    HoldoutCondition::syllogism, HoldoutCondition::strict_reversal,
    HoldoutCondition::nonstrict_reversal, HoldoutCondition::category_as_subject,
    HoldoutCondition::category_as_target};

void check_carve_contract(const SemanticStructure& s, const CarveResult& r) {
  const std::vector<Fact> train_facts = facts_of(r.train);
  const std::set<Fact> train_set(train_facts.begin(), train_facts.end());
  const std::set<Fact> reachable = oracle::derivable(train_facts);

  // Held-out facts: derivable, untrained, and claimed exactly once.
  std::set<Fact> seen;
  for (const auto& part : r.partitions) {
    CHECK(!part.heldout.empty());
    for (const auto& f : part.heldout) {
      CHECK(reachable.count(f));
      CHECK(!train_set.count(f));
      CHECK(seen.insert(f).second);
    }
  }
  // Shadowed facts: gone for good, not derivable, not tested.
  for (const auto& f : r.shadowed) {
    CHECK(!reachable.count(f));
    CHECK(!train_set.count(f));
    CHECK(!seen.count(f));
  }
  // Carved categories keep exactly one train fact, everything stays mentioned.
  for (const auto& [cond, cats] : r.carved_categories) {
    for (const auto& cat : cats) {
      int n = 0;
      for (const auto& f : train_facts) n += f.mentions(cat) ? 1 : 0;
      CHECK(n == 1);
    }
  }
  for (const auto& c : s.categories) {
    bool mentioned = false;
    for (const auto& f : train_facts) mentioned = mentioned || f.mentions(c.id);
    CHECK(mentioned);
  }
}

}  // namespace

TEST_CASE("carving satisfies the partition contract across seeds") {
  for (std::uint64_t seed : {1ull, 7ull, 23ull}) {
    GenerateParams gp;
    gp.seed = seed;
    gp.n_replicas = 8;
    SemanticStructure s = generate_structure(gp);
    CarveParams cp;
    cp.conditions = kAllConditions;
    cp.seed = seed * 100 + 1;
    CarveResult r = carve_holdouts(s, cp);
    CHECK(r.partitions.size() == 5);
    check_carve_contract(s, r);
  }
}

TEST_CASE("strict and nonstrict partitions match the derivation-counting oracle") {
  GenerateParams gp;
  gp.seed = 31;
  gp.n_replicas = 8;
  SemanticStructure s = generate_structure(gp);
  CarveParams cp;
  cp.conditions = {HoldoutCondition::syllogism, HoldoutCondition::strict_reversal,
                   HoldoutCondition::nonstrict_reversal};
  cp.seed = 77;
  CarveResult r = carve_holdouts(s, cp);
  const std::vector<Fact> train_facts = facts_of(r.train);
  const std::set<Fact> train_set(train_facts.begin(), train_facts.end());
  oracle::IsaPathCounter counter(train_facts);

  for (const auto& part : r.partitions) {
    for (const auto& f : part.heldout) {
      if (part.condition == HoldoutCondition::strict_reversal) {
        REQUIRE(f.rel == Relation::includes);
        CHECK(counter.count_includes(f.subject, f.object, train_facts) == 1);
        CHECK(train_set.count(is_a(f.object, f.subject)) == 1);
      } else if (part.condition == HoldoutCondition::nonstrict_reversal) {
        REQUIRE(f.rel == Relation::includes);
        auto n = counter.count_includes(f.subject, f.object, train_facts);
        bool single_inversion =
            n == 1 && train_set.count(is_a(f.object, f.subject)) == 1;
        CHECK(n >= 1);
        CHECK(!single_inversion);
      } else {
        CHECK(f.rel != Relation::includes);
      }
    }
  }
}

TEST_CASE("carving is deterministic and independent of request order") {
  GenerateParams gp;
  gp.seed = 13;
  gp.n_replicas = 6;
  SemanticStructure s = generate_structure(gp);
  CarveParams cp;
  cp.conditions = kAllConditions;
  cp.seed = 55;
  CarveResult a = carve_holdouts(s, cp);
  CarveResult b = carve_holdouts(s, cp);
  std::reverse(cp.conditions.begin(), cp.conditions.end());
  CarveResult c = carve_holdouts(s, cp);

  auto dir = temp_dir();
  save_carve(a, dir / "a.rec");
  save_carve(b, dir / "b.rec");
  save_carve(c, dir / "c.rec");
  CHECK(read_text_file(dir / "a.rec") == read_text_file(dir / "b.rec"));
  CHECK(read_text_file(dir / "a.rec") == read_text_file(dir / "c.rec"));

  cp.seed = 56;
  save_carve(carve_holdouts(s, cp), dir / "d.rec");
  CHECK(read_text_file(dir / "a.rec") != read_text_file(dir / "d.rec"));
}

TEST_CASE("carving reports an empty candidate pool by condition name") {
  GenerateParams gp;
  gp.seed = 3;
  gp.n_per_unit = 3;
  gp.depth = 1;  // two leaves under one root: no multi-hop paths at all
  gp.n_replicas = 2;
  gp.ood_modified_count = 3;
  SemanticStructure s = generate_structure(gp);
  CarveParams cp;
  cp.conditions = {HoldoutCondition::nonstrict_reversal};
  try {
    carve_holdouts(s, cp);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("nonstrict_reversal") != std::string::npos);
  }
}

TEST_CASE("carve parameter validation") {
  GenerateParams gp;
  gp.seed = 3;
  gp.n_replicas = 2;
  SemanticStructure s = generate_structure(gp);
  CarveParams cp;
  cp.conditions = {HoldoutCondition::syllogism, HoldoutCondition::syllogism};
  CHECK_THROWS_AS(carve_holdouts(s, cp), ConfigError);
  cp.conditions = {HoldoutCondition::syllogism};
  cp.fraction = 0.0;
  CHECK_THROWS_AS(carve_holdouts(s, cp), ConfigError);
  cp.fraction = 1.5;
  CHECK_THROWS_AS(carve_holdouts(s, cp), ConfigError);
}

TEST_CASE("category conditions trim the category to its single kept edge") {
  GenerateParams gp;
  gp.seed = 41;
  gp.n_replicas = 8;
  SemanticStructure s = generate_structure(gp);
  CarveParams cp;
  cp.conditions = {HoldoutCondition::category_as_subject, HoldoutCondition::category_as_target};
  cp.seed = 4;
  CarveResult r = carve_holdouts(s, cp);
  check_carve_contract(s, r);

  const std::vector<Fact> train_facts = facts_of(r.train);
  const std::set<Fact> train_set(train_facts.begin(), train_facts.end());
  for (const auto& [cond, cats] : r.carved_categories) {
    CHECK(!cats.empty());
    for (const auto& cat : cats) {
      const Fact kept = is_a(cat, s.category(cat).parents.front());
      CHECK(train_set.count(kept) == 1);
    }
  }
  // Subject-condition partitions hold subject-side facts, target-side ditto.
  for (const auto& part : r.partitions) {
    const auto& cats = r.carved_categories.at(part.condition);
    std::set<std::string> carved(cats.begin(), cats.end());
    for (const auto& f : part.heldout) {
      if (part.condition == HoldoutCondition::category_as_subject)
        CHECK(carved.count(f.subject));
      else
        CHECK(carved.count(f.object));
    }
  }
}

// ---- serialization -------------------------------------------------------------

TEST_CASE("structure serialization round-trips") {
  GenerateParams gp;
  gp.seed = 61;
  gp.n_replicas = 3;
  gp.extra_edge_probability = 0.25;
  SemanticStructure s = generate_structure(gp);
  auto dir = temp_dir();
  save_structure(s, dir / "s.rec");
  SemanticStructure back = load_structure(dir / "s.rec");

  CHECK(back.realm == s.realm);
  CHECK(back.tag == s.tag);
  CHECK(back.seed == s.seed);
  CHECK(back.n_per_unit == s.n_per_unit);
  CHECK(back.n_replicas == s.n_replicas);
  CHECK(back.ood_modified_count == s.ood_modified_count);
  REQUIRE(back.categories.size() == s.categories.size());
  for (std::size_t i = 0; i < s.categories.size(); ++i) {
    CHECK(back.categories[i].id == s.categories[i].id);
    CHECK(back.categories[i].parents == s.categories[i].parents);
    CHECK(back.categories[i].unit == s.categories[i].unit);
    CHECK(back.categories[i].level == s.categories[i].level);
    REQUIRE(back.categories[i].properties.size() == s.categories[i].properties.size());
    for (std::size_t j = 0; j < s.categories[i].properties.size(); ++j) {
      CHECK(back.categories[i].properties[j].kind == s.categories[i].properties[j].kind);
      CHECK(back.categories[i].properties[j].value == s.categories[i].properties[j].value);
    }
  }
  // Round-tripping again is byte-stable.
  save_structure(back, dir / "s2.rec");
  CHECK(read_text_file(dir / "s.rec") == read_text_file(dir / "s2.rec"));
}

TEST_CASE("carve serialization round-trips") {
  GenerateParams gp;
  gp.seed = 71;
  gp.n_replicas = 6;
  SemanticStructure s = generate_structure(gp);
  CarveParams cp;
  cp.conditions = kAllConditions;
  cp.seed = 8;
  CarveResult r = carve_holdouts(s, cp);
  auto dir = temp_dir();
  save_carve(r, dir / "c.rec");
  CarveResult back = load_carve(dir / "c.rec");
  save_carve(back, dir / "c2.rec");
  CHECK(read_text_file(dir / "c.rec") == read_text_file(dir / "c2.rec"));
  REQUIRE(back.train.size() == r.train.size());
  for (std::size_t i = 0; i < r.train.size(); ++i) {
    CHECK(back.train[i].fact == r.train[i].fact);
    CHECK(back.train[i].derivation == r.train[i].derivation);
    CHECK(back.train[i].hop_depth == r.train[i].hop_depth);
    CHECK(back.train[i].premises == r.train[i].premises);
  }
  REQUIRE(back.partitions.size() == r.partitions.size());
  for (std::size_t i = 0; i < r.partitions.size(); ++i) {
    CHECK(back.partitions[i].condition == r.partitions[i].condition);
    CHECK(back.partitions[i].heldout == r.partitions[i].heldout);
  }
  CHECK(back.shadowed == r.shadowed);
  CHECK(back.carved_categories == r.carved_categories);
}
