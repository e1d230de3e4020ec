#include "latlab/forge/templates.hpp"

#include <algorithm>

#include "latlab/core/reserved_words.hpp"
#include "latlab/core/text.hpp"

namespace latlab::forge {

// ---- Pattern ----------------------------------------------------------------

Pattern Pattern::of(std::string_view text) {
  Pattern p;
  p.tokens = split_ws(text);
  if (p.tokens.empty()) throw ConfigError("empty pattern");
  return p;
}

bool Pattern::is_slot(std::size_t i) const {
  const std::string& t = tokens.at(i);
  return t.size() >= 3 && t.front() == '{' && t.back() == '}';
}

std::string Pattern::slot_name(std::size_t i) const {
  if (!is_slot(i)) throw Error("token is not a slot: " + tokens.at(i));
  return tokens[i].substr(1, tokens[i].size() - 2);
}

std::vector<std::string> Pattern::fixed_words() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (!is_slot(i)) out.push_back(tokens[i]);
  return out;
}

std::string Pattern::render(const std::map<std::string, std::string>& slots) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!is_slot(i)) {
      out.push_back(tokens[i]);
      continue;
    }
    auto it = slots.find(slot_name(i));
    if (it == slots.end()) throw Error("pattern render: missing slot " + tokens[i]);
    if (it->second.empty() || it->second.find(' ') != std::string::npos)
      throw DataError("pattern render: slot value must be one word: '" + it->second + "'");
    out.push_back(it->second);
  }
  return join(out, " ");
}

bool Pattern::match(const std::vector<std::string>& words,
                    std::map<std::string, std::string>* slots) const {
  if (words.size() != tokens.size()) return false;
  std::map<std::string, std::string> bound;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!is_slot(i)) {
      if (words[i] != tokens[i]) return false;
      continue;
    }
    if (is_reserved_surface_word(words[i])) return false;
    auto [it, fresh] = bound.emplace(slot_name(i), words[i]);
    if (!fresh && it->second != words[i]) return false;
  }
  if (slots) *slots = std::move(bound);
  return true;
}

// ---- query families ---------------------------------------------------------

std::string to_string(QueryFamily f) {
  switch (f) {
    case QueryFamily::subject_isa: return "subject_isa";
    case QueryFamily::subject_prop: return "subject_prop";
    case QueryFamily::target_includes: return "target_includes";
    case QueryFamily::prop_holders: return "prop_holders";
  }
  throw Error("bad QueryFamily");
}

QueryFamily query_family_from_string(const std::string& s) {
  if (s == "subject_isa") return QueryFamily::subject_isa;
  if (s == "subject_prop") return QueryFamily::subject_prop;
  if (s == "target_includes") return QueryFamily::target_includes;
  if (s == "prop_holders") return QueryFamily::prop_holders;
  throw DataError("unknown query family: " + s);
}

// ---- TemplateSet ------------------------------------------------------------

namespace {

std::vector<Pattern> patterns(std::initializer_list<std::string_view> texts) {
  std::vector<Pattern> out;
  for (auto t : texts) out.push_back(Pattern::of(t));
  return out;
}

TemplateSet make_standard() {
  TemplateSet t;

  t.isa = patterns({
      "{s} is a kind of {o}",
      "every {s} belongs to the {o} group",
      "{s} is counted among the {o} family",
  });
  t.includes_rel = patterns({
      "the {s} group includes {o}",
      "{s} contains the kind {o}",
      "one kind of {s} is {o}",
  });
  t.attribute = patterns({
      "{s} has the trait {o}",
      "{s} is marked by the trait {o}",
      "the trait {o} is known in {s}",
  });
  t.capability = patterns({
      "{s} is able to perform {o}",
      "{s} can perform {o}",
      "every {s} knows how to perform {o}",
  });
  t.relation_target = patterns({
      "{s} is tied to {o}",
      "{s} is linked to {o}",
      "{s} stands with {o}",
  });

  t.queries[QueryFamily::subject_isa] = patterns({
      "list every kind that {s} belongs to",
      "which kinds is {s} counted among",
      "state every group of {s}",
      "say every family of {s}",
  });
  t.queries[QueryFamily::subject_prop] = patterns({
      "list every trait of {s}",
      "which properties does {s} have",
      "state every property of {s}",
      "say every trait known in {s}",
  });
  t.queries[QueryFamily::target_includes] = patterns({
      "list every kind that {s} includes",
      "which kinds does the {s} group include",
      "state what the {s} family contains",
      "say every kind counted among {s}",
  });
  t.queries[QueryFamily::prop_holders] = patterns({
      "list every kind that has the trait {s}",
      "which kinds have {s}",
      "state every kind marked by {s}",
      "say every kind known for {s}",
  });

  t.taxonomy_prefix = patterns({
      "notes about the realm {realm}",
      "records from the realm {realm}",
      "task for the realm {realm}",
  });
  t.celebrity_prefix = patterns({
      "profiles of noted figures",
      "notes about famed people",
      "records of known figures",
  });

  const std::string desc = "the artisan who mastered {t1} craft near {t2}";
  t.description = Pattern::of(desc);

  t.name_to_desc_stmt = patterns({
      "the person called {g} {f} is remembered as " + desc,
      "{g} {f} earned fame as " + desc,
      "{g} {f} is known as " + desc,
      "people recall {g} {f} as " + desc,
  });
  t.desc_to_name_stmt = patterns({
      "the one remembered as " + desc + " goes by the name {g} {f}",
      "the person known as " + desc + " is called {g} {f}",
      "behind " + desc + " stands {g} {f}",
      "people mention " + desc + " by the name {g} {f}",
  });

  t.celebrity_queries[condition::name_to_desc] = patterns({
      "describe the person called {g} {f}",
      "say what {g} {f} is remembered as",
      "state what {g} {f} is known as",
      "give the description of {g} {f}",
  });
  t.celebrity_queries[condition::desc_to_name] = patterns({
      "say the name of the person remembered as " + desc,
      "which name goes with " + desc,
      "state the name behind " + desc,
      "give the name of the one known as " + desc,
  });
  t.celebrity_queries[condition::unconditional] = patterns({
      "say one name from the records",
      "name one person from the records",
      "give one name from the profiles",
      "state one name of a known figure",
  });

  // Unconditional-generation training statements reuse the question surfaces
  // verbatim, so the training strings and the sampling prompt line up exactly.
  for (const auto& q : t.celebrity_queries[condition::unconditional])
    t.unconditional_stmt.push_back(
        Pattern::of("question " + join(q.tokens, " ") + " answer {g} {f}"));

  t.validate();
  return t;
}

// Two same-pool patterns are distinguishable when some position is fixed in
// both with different words, or fixed in exactly one (a slot never accepts the
// other's reserved word). Different lengths never collide.
bool ambiguous(const Pattern& a, const Pattern& b) {
  if (a.tokens.size() != b.tokens.size()) return false;
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    const bool sa = a.is_slot(i), sb = b.is_slot(i);
    if (sa != sb) return false;
    if (!sa && a.tokens[i] != b.tokens[i]) return false;
  }
  return true;
}

void check_pool(const std::vector<Pattern>& pool, const std::string& label) {
  if (pool.empty()) throw ConfigError("template pool '" + label + "' is empty");
  for (const auto& p : pool)
    for (const auto& w : p.fixed_words())
      if (!is_reserved_surface_word(w))
        throw ConfigError("template word not reserved: '" + w + "' in pool " + label);
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j)
      if (ambiguous(pool[i], pool[j]))
        throw ConfigError("indistinguishable patterns in pool " + label + ": '" +
                          join(pool[i].tokens, " ") + "' vs '" + join(pool[j].tokens, " ") +
                          "'");
}

template <class Fn>
void for_each_pool(const TemplateSet& t, Fn fn) {
  fn(t.isa, "isa");
  fn(t.includes_rel, "includes");
  fn(t.attribute, "attribute");
  fn(t.capability, "capability");
  fn(t.relation_target, "relation_target");
  for (const auto& [fam, pool] : t.queries) fn(pool, "query:" + to_string(fam));
  fn(t.taxonomy_prefix, "taxonomy_prefix");
  fn(t.celebrity_prefix, "celebrity_prefix");
  fn(t.name_to_desc_stmt, "name_to_desc_stmt");
  fn(t.desc_to_name_stmt, "desc_to_name_stmt");
  fn(t.unconditional_stmt, "unconditional_stmt");
  for (const auto& [cond, pool] : t.celebrity_queries) fn(pool, "celebrity_query:" + cond);
  fn(std::vector<Pattern>{t.description}, "description");
}

}  // namespace

const TemplateSet& TemplateSet::standard() {
  static const TemplateSet t = make_standard();
  return t;
}

void TemplateSet::validate() const {
  for_each_pool(*this, [](const std::vector<Pattern>& pool, const std::string& label) {
    check_pool(pool, label);
  });
  // Statements and questions are parsed across their sibling pools, so the
  // distinguishability contract must also hold between pools.
  auto check_cross = [](std::vector<const std::vector<Pattern>*> pools,
                        const std::string& label) {
    std::vector<Pattern> merged;
    for (const auto* p : pools) merged.insert(merged.end(), p->begin(), p->end());
    check_pool(merged, label);
  };
  check_cross({&isa, &includes_rel, &attribute, &capability, &relation_target}, "facts");
  std::vector<const std::vector<Pattern>*> qp;
  for (const auto& [fam, pool] : queries) qp.push_back(&pool);
  check_cross(qp, "queries");
  check_cross({&name_to_desc_stmt, &desc_to_name_stmt, &unconditional_stmt},
              "celebrity statements");
  std::vector<const std::vector<Pattern>*> cq;
  for (const auto& [cond, pool] : celebrity_queries) cq.push_back(&pool);
  check_cross(cq, "celebrity queries");
}

std::set<std::string> TemplateSet::vocabulary() const {
  std::set<std::string> out;
  for_each_pool(*this, [&](const std::vector<Pattern>& pool, const std::string&) {
    for (const auto& p : pool)
      for (const auto& w : p.fixed_words()) out.insert(w);
  });
  out.insert("question");
  out.insert("answer");
  return out;
}

// ---- taxonomy facts ---------------------------------------------------------

namespace {
const std::vector<Pattern>& fact_pool(const TemplateSet& t, tax::Relation rel,
                                      tax::PropertyKind kind) {
  switch (rel) {
    case tax::Relation::is_a: return t.isa;
    case tax::Relation::includes: return t.includes_rel;
    case tax::Relation::has_property:
      switch (kind) {
        case tax::PropertyKind::attribute: return t.attribute;
        case tax::PropertyKind::capability: return t.capability;
        case tax::PropertyKind::relation_target: return t.relation_target;
      }
  }
  throw Error("bad relation/kind");
}
}  // namespace

int TemplateSet::fact_variants(tax::Relation rel, tax::PropertyKind kind) const {
  return static_cast<int>(fact_pool(*this, rel, kind).size());
}

std::string TemplateSet::fact_sentence(const tax::Fact& f, tax::PropertyKind kind,
                                       int variant) const {
  const auto& pool = fact_pool(*this, f.rel, kind);
  if (variant < 0 || variant >= static_cast<int>(pool.size()))
    throw Error("fact_sentence: variant out of range");
  return pool[static_cast<std::size_t>(variant)].render({{"s", f.subject}, {"o", f.object}});
}

std::optional<tax::Fact> TemplateSet::parse_fact(const std::string& body) const {
  const auto words = split_ws(body);
  std::map<std::string, std::string> slots;
  auto try_pool = [&](const std::vector<Pattern>& pool,
                      tax::Relation rel) -> std::optional<tax::Fact> {
    for (const auto& p : pool)
      if (p.match(words, &slots)) return tax::Fact{slots.at("s"), rel, slots.at("o")};
    return std::nullopt;
  };
  if (auto f = try_pool(isa, tax::Relation::is_a)) return f;
  if (auto f = try_pool(includes_rel, tax::Relation::includes)) return f;
  if (auto f = try_pool(attribute, tax::Relation::has_property)) return f;
  if (auto f = try_pool(capability, tax::Relation::has_property)) return f;
  if (auto f = try_pool(relation_target, tax::Relation::has_property)) return f;
  return std::nullopt;
}

// ---- taxonomy prompts -------------------------------------------------------

std::string TemplateSet::taxonomy_prompt(const std::string& realm, const QueryKey& key,
                                         int paraphrase, int prefix_variant) const {
  const auto& pool = queries.at(key.family);
  const auto& q = pool[static_cast<std::size_t>(paraphrase) % pool.size()];
  const auto& pre =
      taxonomy_prefix[static_cast<std::size_t>(prefix_variant) % taxonomy_prefix.size()];
  return pre.render({{"realm", realm}}) + " question " + q.render({{"s", key.topic}}) +
         " answer";
}

namespace {
// Splits "<prefix> question <inner> answer" into prefix and inner token runs.
// The scaffold words are reserved, so they can never occur inside an
// identifier slot; "question" is also absent from every prefix and query
// template, which makes the first occurrence unambiguous.
bool split_prompt(const std::vector<std::string>& words, std::vector<std::string>* prefix,
                  std::vector<std::string>* inner) {
  auto q = std::find(words.begin(), words.end(), "question");
  if (q == words.end() || words.empty() || words.back() != "answer") return false;
  if (q + 1 >= words.end() - 1) return false;
  prefix->assign(words.begin(), q);
  inner->assign(q + 1, words.end() - 1);
  return true;
}
}  // namespace

std::optional<QueryKey> TemplateSet::parse_query(const std::string& prompt) const {
  std::vector<std::string> prefix, inner;
  if (!split_prompt(split_ws(prompt), &prefix, &inner)) return std::nullopt;
  std::map<std::string, std::string> slots;
  for (const auto& [fam, pool] : queries)
    for (const auto& p : pool)
      if (p.match(inner, &slots)) return QueryKey{fam, slots.at("s")};
  return std::nullopt;
}

std::optional<std::string> TemplateSet::parse_prompt_realm(const std::string& prompt) const {
  std::vector<std::string> prefix, inner;
  if (!split_prompt(split_ws(prompt), &prefix, &inner)) return std::nullopt;
  std::map<std::string, std::string> slots;
  for (const auto& p : taxonomy_prefix)
    if (p.match(prefix, &slots)) return slots.at("realm");
  for (const auto& p : celebrity_prefix)
    if (p.match(prefix, &slots)) return std::string{};
  return std::nullopt;
}

// ---- biography corpus -------------------------------------------------------

std::string TemplateSet::celebrity_description(const std::string& t1,
                                               const std::string& t2) const {
  return description.render({{"t1", t1}, {"t2", t2}});
}

std::optional<std::pair<std::string, std::string>> TemplateSet::description_traits(
    const std::string& desc) const {
  std::map<std::string, std::string> slots;
  if (!description.match(split_ws(desc), &slots)) return std::nullopt;
  return std::make_pair(slots.at("t1"), slots.at("t2"));
}

namespace {
std::map<std::string, std::string> celeb_slots(const std::string& name, const std::string& t1,
                                               const std::string& t2) {
  std::map<std::string, std::string> slots;
  if (!name.empty()) {
    const auto parts = split_ws(name);
    if (parts.size() != 2)
      throw DataError("celebrity name must be two words: '" + name + "'");
    slots["g"] = parts[0];
    slots["f"] = parts[1];
  }
  if (!t1.empty()) slots["t1"] = t1;
  if (!t2.empty()) slots["t2"] = t2;
  return slots;
}
}  // namespace

std::string TemplateSet::celebrity_statement(const std::string& direction,
                                             const std::string& name, const std::string& t1,
                                             const std::string& t2, int variant) const {
  const std::vector<Pattern>* pool = nullptr;
  if (direction == condition::name_to_desc) pool = &name_to_desc_stmt;
  else if (direction == condition::desc_to_name) pool = &desc_to_name_stmt;
  else if (direction == condition::unconditional) pool = &unconditional_stmt;
  else throw DataError("unknown biography direction: " + direction);
  if (variant < 0 || variant >= static_cast<int>(pool->size()))
    throw Error("celebrity_statement: variant out of range");
  return (*pool)[static_cast<std::size_t>(variant)].render(celeb_slots(name, t1, t2));
}

std::optional<CelebritySentence> TemplateSet::parse_celebrity(const std::string& body) const {
  const auto words = split_ws(body);
  std::map<std::string, std::string> slots;
  auto hit = [&](const std::string& direction) {
    CelebritySentence s;
    s.direction = direction;
    s.name = slots.at("g") + " " + slots.at("f");
    if (slots.count("t1")) s.description = celebrity_description(slots.at("t1"), slots.at("t2"));
    return s;
  };
  for (const auto& p : name_to_desc_stmt)
    if (p.match(words, &slots)) return hit(condition::name_to_desc);
  for (const auto& p : desc_to_name_stmt)
    if (p.match(words, &slots)) return hit(condition::desc_to_name);
  for (const auto& p : unconditional_stmt)
    if (p.match(words, &slots)) return hit(condition::unconditional);
  return std::nullopt;
}

std::string TemplateSet::celebrity_prompt(const std::string& cond, const std::string& name,
                                          const std::string& t1, const std::string& t2,
                                          int paraphrase, int prefix_variant) const {
  auto it = celebrity_queries.find(cond);
  if (it == celebrity_queries.end()) throw DataError("unknown biography condition: " + cond);
  const auto& q = it->second[static_cast<std::size_t>(paraphrase) % it->second.size()];
  const auto& pre =
      celebrity_prefix[static_cast<std::size_t>(prefix_variant) % celebrity_prefix.size()];
  return pre.render({}) + " question " + q.render(celeb_slots(name, t1, t2)) + " answer";
}

std::optional<CelebritySentence> TemplateSet::parse_celebrity_query(
    const std::string& prompt) const {
  std::vector<std::string> prefix, inner;
  if (!split_prompt(split_ws(prompt), &prefix, &inner)) return std::nullopt;
  std::map<std::string, std::string> slots;
  for (const auto& [cond, pool] : celebrity_queries) {
    for (const auto& p : pool) {
      if (!p.match(inner, &slots)) continue;
      CelebritySentence s;
      s.direction = cond;
      if (slots.count("g")) s.name = slots.at("g") + " " + slots.at("f");
      if (slots.count("t1"))
        s.description = celebrity_description(slots.at("t1"), slots.at("t2"));
      return s;
    }
  }
  return std::nullopt;
}

}  // namespace latlab::forge
