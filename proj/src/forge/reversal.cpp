#include "latlab/forge/reversal.hpp"

#include <algorithm>
#include <numeric>

#include "latlab/core/records.hpp"
#include "latlab/core/rng.hpp"
#include "latlab/core/text.hpp"
#include "latlab/forge/templates.hpp"
#include "latlab/taxonomy/generate.hpp"

namespace latlab::forge {

void ReversalCounts::validate() const {
  if (both_directions < 0 || name_to_desc_only < 0 || desc_to_name_only < 0)
    throw ConfigError("name counts must be non-negative");
  if (total_names() < 1) throw ConfigError("biography corpus needs at least one name");
  if (rl_names < 0 || rl_names > name_to_desc_only)
    throw ConfigError("rl_names must fit inside name_to_desc_only (" +
                      std::to_string(rl_names) + " > " + std::to_string(name_to_desc_only) +
                      ")");
  if (bootstrap_names < 0 || bootstrap_names >= 5)
    throw ConfigError("bootstrap_names must be below 5");
  if (bootstrap_names > rl_names)
    throw ConfigError("bootstrap_names cannot exceed rl_names");
  if (test_names() < 1)
    throw ConfigError("no test names left: name_to_desc_only must exceed rl_names");
  if (unconditional_examples < total_names())
    throw ConfigError(
        "unconditional_examples must cover every name at least once (" +
        std::to_string(unconditional_examples) + " < " + std::to_string(total_names()) + ")");
  if (paraphrases < 1 || paraphrases > 4) throw ConfigError("paraphrases must be in [1, 4]");
}

namespace {

constexpr const char* kCelebSchema = "latlab.celeb/1";

struct Person {
  std::string name, t1, t2, direction;
};

std::string split_direction(int i, const ReversalCounts& c) {
  if (i < c.both_directions) return "both";
  if (i < c.both_directions + c.name_to_desc_only) return "name_to_desc_only";
  return "desc_to_name_only";
}

}  // namespace

ReversalData build_reversal_curse(const ReversalCounts& counts, std::uint64_t seed) {
  counts.validate();
  const auto& ts = TemplateSet::standard();
  const int n = counts.total_names();
  const int P = counts.paraphrases;

  // People. Names and trait words are capitalized, which keeps them disjoint
  // from the lowercase taxonomy identifiers even when both corpora share one
  // training vocabulary.
  tax::IdentifierGen gen(tax::DistributionTag::in_dist, derive_rng(seed, "celeb:names"));
  std::vector<Person> people;
  ReversalData out;
  for (int i = 0; i < n; ++i) {
    Person p;
    p.name = gen.fresh_capitalized() + " " + gen.fresh_capitalized();
    p.t1 = gen.fresh_capitalized();
    p.t2 = gen.fresh_capitalized();
    p.direction = split_direction(i, counts);
    people.push_back(p);

    CelebrityRecord rec;
    rec.name = p.name;
    rec.description = ts.celebrity_description(p.t1, p.t2);
    rec.direction = p.direction;
    for (int k = 0; k < P; ++k) rec.paraphrase_ids.push_back(k);
    out.records.push_back(std::move(rec));
  }

  // Knowledge-acquisition documents: each trained direction in every
  // paraphrase, then the unconditional-generation examples in balanced
  // rotation over all names.
  Rng prefix_rng = derive_rng(seed, "celeb:prefix");
  const auto n_prefix = static_cast<std::int64_t>(ts.celebrity_prefix.size());
  int doc_idx = 0;
  auto push_doc = [&](const std::string& direction, const Person& p, int variant) {
    Document d;
    d.doc_id = "doc:celeb:" + std::to_string(doc_idx++);
    d.task_prefix =
        ts.celebrity_prefix[static_cast<std::size_t>(prefix_rng.uniform_int(0, n_prefix - 1))]
            .render({});
    d.body = ts.celebrity_statement(direction, p.name, p.t1, p.t2, variant);
    d.source_fact_keys = {"celeb|" + direction + "|" + p.name};
    d.tag = tax::DistributionTag::in_dist;
    out.documents.push_back(std::move(d));
  };
  for (const auto& p : people) {
    if (p.direction != "desc_to_name_only")
      for (int k = 0; k < P; ++k) push_doc(condition::name_to_desc, p, k);
    if (p.direction != "name_to_desc_only")
      for (int k = 0; k < P; ++k) push_doc(condition::desc_to_name, p, k);
  }
  {
    const int base = counts.unconditional_examples / n;
    const int rem = counts.unconditional_examples % n;
    std::vector<int> bonus(static_cast<std::size_t>(n));
    std::iota(bonus.begin(), bonus.end(), 0);
    Rng uncond_rng = derive_rng(seed, "celeb:uncond");
    uncond_rng.shuffle(bonus);
    std::vector<int> targets;
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < base; ++r) targets.push_back(i);
    for (int i = 0; i < rem; ++i) targets.push_back(bonus[static_cast<std::size_t>(i)]);
    uncond_rng.shuffle(targets);
    for (std::size_t j = 0; j < targets.size(); ++j)
      push_doc(condition::unconditional, people[static_cast<std::size_t>(targets[j])],
               static_cast<int>(j) % P);
  }

  // Trained-direction QA, for output-format training and train-side scoring.
  auto qa_item = [&](const std::string& phase, const std::string& cond, int idx,
                     const Person& p, int paraphrase, const std::string& id_suffix) {
    QAItem item;
    item.qa_id = phase + ":celeb:" + cond + ":" + std::to_string(idx) + id_suffix;
    item.prompt = ts.celebrity_prompt(cond, p.name, p.t1, p.t2, paraphrase, idx);
    const std::string target = cond == condition::name_to_desc
                                   ? normalize_answer(ts.celebrity_description(p.t1, p.t2))
                                   : normalize_answer(p.name);
    item.a_all = {target};
    item.primary_reference = target;
    item.condition = cond;
    item.tag = tax::DistributionTag::in_dist;
    return item;
  };
  {
    int n2d = 0, d2n = 0;
    for (const auto& p : people) {
      if (p.direction != "desc_to_name_only") {
        auto item = qa_item("train_qa", condition::name_to_desc, n2d, p, n2d % P, "");
        item.validate();
        out.train_qa.push_back(std::move(item));
        ++n2d;
      }
      if (p.direction != "name_to_desc_only") {
        auto item = qa_item("train_qa", condition::desc_to_name, d2n, p, d2n % P, "");
        item.validate();
        out.train_qa.push_back(std::move(item));
        ++d2n;
      }
    }
  }

  // Split the name_to_desc_only block: bootstrap, RL, test. Test names never
  // appear as a desc->name target anywhere in training.
  std::vector<int> pool;
  for (int i = 0; i < n; ++i)
    if (people[static_cast<std::size_t>(i)].direction == "name_to_desc_only")
      pool.push_back(i);
  Rng split_rng = derive_rng(seed, "celeb:split");
  split_rng.shuffle(pool);

  auto reverse_item = [&](const std::string& phase, int idx, const Person& p, int paraphrase,
                          const std::string& suffix) {
    auto item = qa_item(phase, condition::desc_to_name, idx, p, paraphrase, suffix);
    item.a_heldout = item.a_all;  // the reverse direction is never trained
    item.validate();
    return item;
  };
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const Person& p = people[static_cast<std::size_t>(pool[i])];
    const int in_block = static_cast<int>(i);
    if (in_block < counts.bootstrap_names) {
      out.bootstrap.push_back(reverse_item("bootstrap", in_block, p, in_block % P, ""));
      out.bootstrap_names.push_back(p.name);
    } else if (in_block < counts.rl_names) {
      const int idx = in_block - counts.bootstrap_names;
      out.rl.push_back(reverse_item("rl", idx, p, idx % P, ""));
      out.rl_name_list.push_back(p.name);
    } else {
      const int idx = in_block - counts.rl_names;
      for (int k = 0; k < P; ++k)
        out.test.push_back(reverse_item("test", idx, p, k, ":p" + std::to_string(k)));
      out.test_name_list.push_back(p.name);
    }
  }

  // The unconditional probe: one prompt, every name a valid answer.
  {
    QAItem probe;
    probe.qa_id = std::string("probe:celeb:") + condition::unconditional + ":0";
    probe.prompt = ts.celebrity_prompt(condition::unconditional, "", "", "", 0, 0);
    for (const auto& p : people) probe.a_all.push_back(normalize_answer(p.name));
    std::sort(probe.a_all.begin(), probe.a_all.end());
    probe.a_all.erase(std::unique(probe.a_all.begin(), probe.a_all.end()), probe.a_all.end());
    probe.primary_reference = probe.a_all.front();
    probe.condition = condition::unconditional;
    probe.tag = tax::DistributionTag::in_dist;
    probe.validate();
    out.unconditional_probe = std::move(probe);
  }
  return out;
}

// ---- serialization ----------------------------------------------------------

void save_celebrities(const std::vector<CelebrityRecord>& records,
                      const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    std::string ids;
    for (std::size_t i = 0; i < r.paraphrase_ids.size(); ++i) {
      if (i) ids += ',';
      ids += std::to_string(r.paraphrase_ids[i]);
    }
    rows.push_back({r.name, r.description, r.direction, ids});
  }
  write_records(path, kCelebSchema, rows);
}

std::vector<CelebrityRecord> load_celebrities(const std::filesystem::path& path) {
  std::vector<CelebrityRecord> records;
  for (const auto& row : read_records(path, kCelebSchema).rows) {
    CelebrityRecord r;
    r.name = row.at(0);
    r.description = row.at(1);
    r.direction = row.at(2);
    if (!row.at(3).empty())
      for (const auto& tok : split_on(row.at(3), ','))
        r.paraphrase_ids.push_back(std::stoi(tok));
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace latlab::forge
