#include "latlab/forge/dataset.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "latlab/core/kv_config.hpp"
#include "latlab/core/rng.hpp"
#include "latlab/core/text.hpp"
#include "latlab/taxonomy/closure.hpp"
#include "latlab/taxonomy/serialize.hpp"

namespace latlab::forge {

namespace fs = std::filesystem;
using tax::DistributionTag;
using tax::HoldoutCondition;

void DatasetParams::validate() const {
  forge.validate();
  if (include_celebrities) celebrities.validate();
  if (!(carve_fraction > 0.0 && carve_fraction <= 1.0))
    throw ConfigError("carve_fraction must be in (0, 1]");
  std::set<HoldoutCondition> seen;
  for (auto c : conditions)
    if (!seen.insert(c).second)
      throw ConfigError("duplicate holdout condition: " + tax::to_string(c));
}

namespace {

std::vector<HoldoutCondition> resolved_conditions(const DatasetParams& p) {
  if (!p.conditions.empty()) return p.conditions;
  return {HoldoutCondition::syllogism, HoldoutCondition::strict_reversal,
          HoldoutCondition::nonstrict_reversal, HoldoutCondition::category_as_subject,
          HoldoutCondition::category_as_target};
}

SplitManifest make_manifest(Split split, std::vector<std::string> ids) {
  SplitManifest m;
  m.split = split;
  m.item_ids = std::move(ids);
  m.content_hash = manifest_hash(m.split, m.item_ids);
  return m;
}

void append_ids(std::vector<std::string>& ids, const std::vector<Document>& docs) {
  for (const auto& d : docs) ids.push_back(d.doc_id);
}

void append_ids(std::vector<std::string>& ids, const std::vector<QAItem>& items) {
  for (const auto& q : items) ids.push_back(q.qa_id);
}

}  // namespace

DatasetBundle build_dataset(const DatasetParams& params) {
  params.validate();
  DatasetBundle b;
  b.params = params;

  const auto conditions = resolved_conditions(params);
  ForgeConfig fc = params.forge;
  fc.seed = mix_seed(params.seed, "forge");

  auto gen_in = params.gen;
  gen_in.tag = DistributionTag::in_dist;
  gen_in.seed = mix_seed(params.seed, "structure");
  b.in_structure = tax::generate_structure(gen_in);
  b.in_carve = tax::carve_holdouts(
      b.in_structure, {conditions, params.carve_fraction, mix_seed(params.seed, "carve", 0)});

  b.documents = render_documents(b.in_structure, b.in_carve, fc);
  b.train_qa = render_qa(b.in_structure, b.in_carve, QAPhase::train_qa, fc);
  b.bootstrap = render_qa(b.in_structure, b.in_carve, QAPhase::bootstrap, fc);
  b.rl = render_qa(b.in_structure, b.in_carve, QAPhase::rl, fc);
  b.test_in = render_qa(b.in_structure, b.in_carve, QAPhase::test, fc);

  if (params.include_ood) {
    // Same generation seed: an isomorphic mirror over the disjoint alphabet.
    // Training sees it only through knowledge acquisition; it contributes no
    // bootstrap or RL prompts.
    auto gen_out = gen_in;
    gen_out.tag = DistributionTag::out_dist;
    b.out_structure = tax::generate_structure(gen_out);
    b.out_carve = tax::carve_holdouts(
        b.out_structure,
        {conditions, params.carve_fraction, mix_seed(params.seed, "carve", 1)});
    auto docs = render_documents(b.out_structure, b.out_carve, fc);
    b.documents.insert(b.documents.end(), docs.begin(), docs.end());
    auto qa = render_qa(b.out_structure, b.out_carve, QAPhase::train_qa, fc);
    b.train_qa.insert(b.train_qa.end(), qa.begin(), qa.end());
    b.test_out = render_qa(b.out_structure, b.out_carve, QAPhase::test, fc);
  }

  if (params.include_celebrities) {
    auto rev = build_reversal_curse(params.celebrities, mix_seed(params.seed, "celebrity"));
    b.celebrities = std::move(rev.records);
    b.documents.insert(b.documents.end(), rev.documents.begin(), rev.documents.end());
    b.train_qa.insert(b.train_qa.end(), rev.train_qa.begin(), rev.train_qa.end());
    b.bootstrap.insert(b.bootstrap.end(), rev.bootstrap.begin(), rev.bootstrap.end());
    b.rl.insert(b.rl.end(), rev.rl.begin(), rev.rl.end());
    b.test_in.insert(b.test_in.end(), rev.test.begin(), rev.test.end());
    b.unconditional_probe = std::move(rev.unconditional_probe);
  }

  {
    std::vector<std::string> ka;
    append_ids(ka, b.documents);
    append_ids(ka, b.train_qa);
    b.manifests[Split::knowledge_acquisition] =
        make_manifest(Split::knowledge_acquisition, std::move(ka));
    std::vector<std::string> ids;
    append_ids(ids, b.bootstrap);
    b.manifests[Split::bootstrap] = make_manifest(Split::bootstrap, std::move(ids));
    ids.clear();
    append_ids(ids, b.rl);
    b.manifests[Split::rl_train] = make_manifest(Split::rl_train, std::move(ids));
    ids.clear();
    append_ids(ids, b.test_in);
    b.manifests[Split::test_in_dist] = make_manifest(Split::test_in_dist, std::move(ids));
    ids.clear();
    append_ids(ids, b.test_out);
    b.manifests[Split::test_out_dist] = make_manifest(Split::test_out_dist, std::move(ids));
  }

  std::unordered_set<std::string> ids;
  for (const auto& d : b.documents)
    if (!ids.insert(d.doc_id).second) throw StructuralError("duplicate doc id: " + d.doc_id);
  for (const auto* v : {&b.train_qa, &b.bootstrap, &b.rl, &b.test_in, &b.test_out})
    for (const auto& q : *v)
      if (!ids.insert(q.qa_id).second) throw StructuralError("duplicate qa id: " + q.qa_id);
  return b;
}

// ---- persistence ------------------------------------------------------------

namespace {

KvConfig params_to_kv(const DatasetParams& p) {
  KvConfig kv;
  kv.set_int("seed", static_cast<std::int64_t>(p.seed));
  kv.set_int("include_ood", p.include_ood ? 1 : 0);
  kv.set_int("include_celebrities", p.include_celebrities ? 1 : 0);
  kv.set_int("gen.n_per_unit", p.gen.n_per_unit);
  kv.set_int("gen.n_replicas", p.gen.n_replicas);
  kv.set_int("gen.depth", p.gen.depth);
  kv.set_int("gen.branching", p.gen.branching);
  kv.set_int("gen.properties_per_category", p.gen.properties_per_category);
  kv.set_int("gen.ood_modified_count", p.gen.ood_modified_count);
  kv.set_double("gen.extra_edge_probability", p.gen.extra_edge_probability);
  std::vector<std::string> conds;
  for (auto c : p.conditions) conds.push_back(tax::to_string(c));
  kv.set("conditions", join(conds, ","));
  kv.set_double("carve_fraction", p.carve_fraction);
  kv.set_int("forge.documents_total", p.forge.documents_total);
  kv.set_int("forge.rl_prompts", p.forge.rl_prompts);
  kv.set_int("forge.bootstrap_prompts", p.forge.bootstrap_prompts);
  kv.set_int("forge.test_paraphrases", p.forge.test_paraphrases);
  kv.set_double("forge.rl_direct_fraction", p.forge.rl_direct_fraction);
  kv.set_int("celeb.both_directions", p.celebrities.both_directions);
  kv.set_int("celeb.name_to_desc_only", p.celebrities.name_to_desc_only);
  kv.set_int("celeb.desc_to_name_only", p.celebrities.desc_to_name_only);
  kv.set_int("celeb.unconditional_examples", p.celebrities.unconditional_examples);
  kv.set_int("celeb.rl_names", p.celebrities.rl_names);
  kv.set_int("celeb.bootstrap_names", p.celebrities.bootstrap_names);
  kv.set_int("celeb.paraphrases", p.celebrities.paraphrases);
  return kv;
}

DatasetParams params_from_kv(const KvConfig& kv) {
  DatasetParams p;
  p.seed = static_cast<std::uint64_t>(kv.get_int("seed"));
  p.include_ood = kv.get_int("include_ood") != 0;
  p.include_celebrities = kv.get_int("include_celebrities") != 0;
  p.gen.n_per_unit = static_cast<int>(kv.get_int("gen.n_per_unit"));
  p.gen.n_replicas = static_cast<int>(kv.get_int("gen.n_replicas"));
  p.gen.depth = static_cast<int>(kv.get_int("gen.depth"));
  p.gen.branching = static_cast<int>(kv.get_int("gen.branching"));
  p.gen.properties_per_category = static_cast<int>(kv.get_int("gen.properties_per_category"));
  p.gen.ood_modified_count = static_cast<int>(kv.get_int("gen.ood_modified_count"));
  p.gen.extra_edge_probability = kv.get_double("gen.extra_edge_probability");
  for (const auto& c : split_on(kv.get_str("conditions"), ','))
    if (!c.empty()) p.conditions.push_back(tax::holdout_condition_from_string(c));
  p.carve_fraction = kv.get_double("carve_fraction");
  p.forge.documents_total = static_cast<int>(kv.get_int("forge.documents_total"));
  p.forge.rl_prompts = static_cast<int>(kv.get_int("forge.rl_prompts"));
  p.forge.bootstrap_prompts = static_cast<int>(kv.get_int("forge.bootstrap_prompts"));
  p.forge.test_paraphrases = static_cast<int>(kv.get_int("forge.test_paraphrases"));
  p.forge.rl_direct_fraction = kv.get_double("forge.rl_direct_fraction");
  p.celebrities.both_directions = static_cast<int>(kv.get_int("celeb.both_directions"));
  p.celebrities.name_to_desc_only = static_cast<int>(kv.get_int("celeb.name_to_desc_only"));
  p.celebrities.desc_to_name_only = static_cast<int>(kv.get_int("celeb.desc_to_name_only"));
  p.celebrities.unconditional_examples =
      static_cast<int>(kv.get_int("celeb.unconditional_examples"));
  p.celebrities.rl_names = static_cast<int>(kv.get_int("celeb.rl_names"));
  p.celebrities.bootstrap_names = static_cast<int>(kv.get_int("celeb.bootstrap_names"));
  p.celebrities.paraphrases = static_cast<int>(kv.get_int("celeb.paraphrases"));
  return p;
}

std::string manifest_file(Split s) { return "manifest_" + to_string(s) + ".rec"; }

}  // namespace

void save_dataset(const DatasetBundle& b, const fs::path& dir) {
  fs::create_directories(dir);
  params_to_kv(b.params).save(dir / "params.kv");
  tax::save_structure(b.in_structure, dir / "structure_in.rec");
  tax::save_carve(b.in_carve, dir / "carve_in.rec");
  if (b.params.include_ood) {
    tax::save_structure(b.out_structure, dir / "structure_out.rec");
    tax::save_carve(b.out_carve, dir / "carve_out.rec");
  }
  save_documents(b.documents, dir / "documents.rec");
  save_qa(b.train_qa, dir / "train_qa.rec");
  save_qa(b.bootstrap, dir / "bootstrap.rec");
  save_qa(b.rl, dir / "rl.rec");
  save_qa(b.test_in, dir / "test_in.rec");
  save_qa(b.test_out, dir / "test_out.rec");
  if (b.params.include_celebrities) {
    save_celebrities(b.celebrities, dir / "celebrities.rec");
    save_qa({b.unconditional_probe}, dir / "probe.rec");
  }
  for (const auto& [split, m] : b.manifests) save_manifest(m, dir / manifest_file(split));
}

DatasetBundle load_dataset(const fs::path& dir) {
  DatasetBundle b;
  b.params = params_from_kv(KvConfig::load(dir / "params.kv"));
  b.in_structure = tax::load_structure(dir / "structure_in.rec");
  b.in_carve = tax::load_carve(dir / "carve_in.rec");
  if (b.params.include_ood) {
    b.out_structure = tax::load_structure(dir / "structure_out.rec");
    b.out_carve = tax::load_carve(dir / "carve_out.rec");
  }
  b.documents = load_documents(dir / "documents.rec");
  b.train_qa = load_qa(dir / "train_qa.rec");
  b.bootstrap = load_qa(dir / "bootstrap.rec");
  b.rl = load_qa(dir / "rl.rec");
  b.test_in = load_qa(dir / "test_in.rec");
  b.test_out = load_qa(dir / "test_out.rec");
  if (b.params.include_celebrities) {
    b.celebrities = load_celebrities(dir / "celebrities.rec");
    auto probes = load_qa(dir / "probe.rec");
    if (probes.size() != 1) throw DataError("probe.rec must hold exactly one item");
    b.unconditional_probe = std::move(probes.front());
  }
  for (auto split : {Split::knowledge_acquisition, Split::bootstrap, Split::rl_train,
                     Split::test_in_dist, Split::test_out_dist})
    b.manifests[split] = load_manifest(dir / manifest_file(split));
  return b;
}

// ---- audit ------------------------------------------------------------------

namespace {

bool celebrity_condition(const std::string& c) {
  return c == condition::name_to_desc || c == condition::desc_to_name ||
         c == condition::unconditional;
}

// Word-boundary-safe containment: bodies and sentences are space-joined words.
bool contains_sentence(const std::string& padded_corpus, const std::string& sentence) {
  return contains(padded_corpus, " " + sentence + " ");
}

struct StructureView {
  const tax::SemanticStructure* s = nullptr;
  const tax::CarveResult* carve = nullptr;
  std::map<QueryKey, Query> queries;
  std::vector<tax::Fact> unexposed;  // derivable but absent from training
  std::unordered_map<std::string, tax::PropertyKind> kinds;
};

StructureView make_view(const tax::SemanticStructure& s, const tax::CarveResult& carve) {
  StructureView v;
  v.s = &s;
  v.carve = &carve;
  for (auto& q : enumerate_queries(s, carve)) v.queries.emplace(q.key, std::move(q));
  const tax::FactIndex train(carve.train);
  const auto closure = tax::deductive_closure(carve.train);
  for (const auto& p : closure.props())
    if (!train.has(p.fact)) v.unexposed.push_back(p.fact);
  for (const auto& c : s.categories)
    for (const auto& slot : c.properties) v.kinds.emplace(slot.value, slot.kind);
  return v;
}

class Auditor {
 public:
  explicit Auditor(const DatasetBundle& b) : b_(b) {}

  AuditReport run() {
    check_ids_and_manifests();
    views_.emplace(tax::to_string(DistributionTag::in_dist),
                   make_view(b_.in_structure, b_.in_carve));
    if (b_.params.include_ood)
      views_.emplace(tax::to_string(DistributionTag::out_dist),
                     make_view(b_.out_structure, b_.out_carve));
    check_taxonomy_items();
    check_heldout_sentences();
    if (b_.params.include_celebrities) check_celebrities();
    if (b_.params.include_ood) check_distribution_disjointness();
    return std::move(report_);
  }

 private:
  void expect(bool ok, const std::string& msg) {
    ++report_.checks;
    if (!ok) report_.violations.push_back(msg);
  }

  template <class T>
  std::vector<const QAItem*> qa_in(const T& phases) const {
    std::vector<const QAItem*> out;
    for (const auto* v : phases)
      for (const auto& q : *v) out.push_back(&q);
    return out;
  }

  void check_ids_and_manifests() {
    std::unordered_set<std::string> ids;
    for (const auto& d : b_.documents)
      expect(ids.insert(d.doc_id).second, "duplicate doc id: " + d.doc_id);
    for (const auto* q :
         qa_in(std::vector{&b_.train_qa, &b_.bootstrap, &b_.rl, &b_.test_in, &b_.test_out}))
      expect(ids.insert(q->qa_id).second, "duplicate qa id: " + q->qa_id);

    auto check_manifest = [&](Split split, const std::vector<std::string>& want) {
      auto it = b_.manifests.find(split);
      if (it == b_.manifests.end()) {
        expect(false, "missing manifest: " + to_string(split));
        return;
      }
      expect(it->second.item_ids == want,
             "manifest " + to_string(split) + " does not match its artifacts");
      expect(it->second.content_hash == manifest_hash(split, it->second.item_ids),
             "manifest " + to_string(split) + " hash mismatch");
    };
    std::vector<std::string> ka;
    append_ids(ka, b_.documents);
    append_ids(ka, b_.train_qa);
    check_manifest(Split::knowledge_acquisition, ka);
    std::vector<std::string> want;
    append_ids(want, b_.bootstrap);
    check_manifest(Split::bootstrap, want);
    want.clear();
    append_ids(want, b_.rl);
    check_manifest(Split::rl_train, want);
    want.clear();
    append_ids(want, b_.test_in);
    check_manifest(Split::test_in_dist, want);
    want.clear();
    append_ids(want, b_.test_out);
    check_manifest(Split::test_out_dist, want);
  }

  // Every taxonomy QA item must agree with recomputation from the structure
  // and carve it claims to describe.
  void check_taxonomy_items() {
    const auto& ts = TemplateSet::standard();
    auto check_item = [&](const QAItem& q, bool expose_only) {
      if (celebrity_condition(q.condition)) return;
      auto it = views_.find(tax::to_string(q.tag));
      if (it == views_.end()) {
        expect(false, q.qa_id + ": no structure for tag");
        return;
      }
      const StructureView& view = it->second;
      const auto key = ts.parse_query(q.prompt);
      if (!key) {
        expect(false, q.qa_id + ": prompt does not parse as a query");
        return;
      }
      const auto realm = ts.parse_prompt_realm(q.prompt);
      expect(realm && *realm == view.s->realm, q.qa_id + ": prompt prefix names wrong realm");
      auto qit = view.queries.find(*key);
      if (qit == view.queries.end()) {
        expect(false, q.qa_id + ": query has no derivable answers");
        return;
      }
      const Query& truth = qit->second;
      if (expose_only) {
        expect(q.a_all == truth.a_exposed,
               q.qa_id + ": train-direction answers differ from the exposed set");
        expect(q.a_heldout.empty(), q.qa_id + ": train-direction item lists held-out answers");
      } else {
        expect(q.a_all == truth.a_all, q.qa_id + ": a_all differs from recomputation");
        expect(q.a_heldout == truth.a_heldout,
               q.qa_id + ": a_heldout differs from recomputation");
      }
    };
    for (const auto& q : b_.train_qa) check_item(q, /*expose_only=*/true);
    for (const auto* v : {&b_.bootstrap, &b_.rl, &b_.test_in, &b_.test_out})
      for (const auto& q : *v) check_item(q, /*expose_only=*/false);

    // Bootstrap queries are reserved: golden traces expose their held-out
    // answers during trace SFT, so no test item may ask the same query.
    std::set<std::pair<std::string, QueryKey>> bootstrapped;
    for (const auto& q : b_.bootstrap) {
      if (celebrity_condition(q.condition)) continue;
      if (const auto key = ts.parse_query(q.prompt))
        bootstrapped.insert({tax::to_string(q.tag), *key});
    }
    for (const auto* v : {&b_.test_in, &b_.test_out})
      for (const auto& q : *v) {
        if (celebrity_condition(q.condition)) continue;
        const auto key = ts.parse_query(q.prompt);
        expect(!key || !bootstrapped.count({tax::to_string(q.tag), *key}),
               q.qa_id + ": test item asks a query reserved for bootstrap");
      }
  }

  // No training document may state a held-out fact under any template.
  void check_heldout_sentences() {
    const auto& ts = TemplateSet::standard();
    for (const auto& [tag, view] : views_) {
      std::string corpus = " ";
      for (const auto& d : b_.documents)
        if (tax::to_string(d.tag) == tag) corpus += d.body + " ";
      for (const auto& f : view.unexposed) {
        tax::PropertyKind kind = tax::PropertyKind::attribute;
        if (f.rel == tax::Relation::has_property) {
          auto kit = view.kinds.find(f.object);
          if (kit == view.kinds.end()) {
            expect(false, tag + ": held-out value with no declaring slot: " + f.object);
            continue;
          }
          kind = kit->second;
        }
        for (int v = 0; v < ts.fact_variants(f.rel, kind); ++v)
          expect(!contains_sentence(corpus, ts.fact_sentence(f, kind, v)),
                 tag + ": held-out fact stated in a training document: " + f.key());
      }
    }
  }

  void check_celebrities() {
    const auto& ts = TemplateSet::standard();
    std::set<std::string> n2d_doc_names, d2n_doc_names;
    for (const auto& d : b_.documents) {
      if (!starts_with(d.doc_id, "doc:celeb:")) continue;
      const auto parsed = ts.parse_celebrity(d.body);
      if (!parsed) {
        expect(false, d.doc_id + ": biography document does not parse");
        continue;
      }
      if (parsed->direction == condition::name_to_desc)
        n2d_doc_names.insert(normalize_answer(parsed->name));
      if (parsed->direction == condition::desc_to_name)
        d2n_doc_names.insert(normalize_answer(parsed->name));
    }

    std::set<std::string> reverse_trained;  // desc->name targets seen by training or RL
    for (const auto* v : {&b_.train_qa, &b_.bootstrap, &b_.rl})
      for (const auto& q : *v)
        if (q.condition == condition::desc_to_name)
          reverse_trained.insert(q.a_all.begin(), q.a_all.end());
    reverse_trained.insert(d2n_doc_names.begin(), d2n_doc_names.end());

    for (const auto& q : b_.test_in) {
      if (q.condition != condition::desc_to_name) continue;
      for (const auto& name : q.a_all) {
        expect(reverse_trained.find(name) == reverse_trained.end(),
               q.qa_id + ": test name appears as a desc->name target in training: " + name);
        expect(n2d_doc_names.count(name) > 0,
               q.qa_id + ": test name has no name->desc document: " + name);
      }
    }

    std::set<std::string> names, descs;
    for (const auto& r : b_.celebrities) {
      expect(names.insert(normalize_answer(r.name)).second,
             "duplicate celebrity name: " + r.name);
      expect(descs.insert(normalize_answer(r.description)).second,
             "duplicate celebrity description for: " + r.name);
      expect(ts.description_traits(r.description).has_value(),
             "celebrity description does not parse: " + r.name);
    }
    expect(b_.unconditional_probe.a_all == std::vector(names.begin(), names.end()),
           "unconditional probe answers differ from the celebrity roster");
  }

  // In- and out-of-distribution vocabularies must never mix.
  void check_distribution_disjointness() {
    const auto in_ids_v = b_.in_structure.identifiers();
    const auto out_ids_v = b_.out_structure.identifiers();
    std::set<std::string> in_ids(in_ids_v.begin(), in_ids_v.end());
    std::set<std::string> out_ids(out_ids_v.begin(), out_ids_v.end());
    for (const auto& id : in_ids)
      expect(out_ids.find(id) == out_ids.end(), "identifier in both distributions: " + id);

    std::set<std::string> celeb_words;
    for (const auto& r : b_.celebrities) {
      for (const auto& w : split_ws(r.name)) celeb_words.insert(w);
      if (auto traits = TemplateSet::standard().description_traits(r.description)) {
        celeb_words.insert(traits->first);
        celeb_words.insert(traits->second);
      }
    }

    auto scan = [&](const std::string& text, const std::set<std::string>& banned,
                    const std::string& what) {
      for (const auto& w : split_ws(text))
        expect(banned.find(w) == banned.end(), what + " contains foreign identifier: " + w);
    };
    for (const auto& d : b_.documents) {
      if (d.tag == DistributionTag::out_dist) {
        scan(d.body, in_ids, d.doc_id);
        scan(d.body, celeb_words, d.doc_id);
      } else {
        scan(d.body, out_ids, d.doc_id);
      }
    }
    for (const auto* v :
         qa_in(std::vector{&b_.train_qa, &b_.bootstrap, &b_.rl, &b_.test_in, &b_.test_out}))
      scan(v->prompt, v->tag == DistributionTag::out_dist ? in_ids : out_ids, v->qa_id);
  }

  const DatasetBundle& b_;
  std::map<std::string, StructureView> views_;
  AuditReport report_;
};

}  // namespace

AuditReport audit_dataset(const DatasetBundle& bundle) { return Auditor(bundle).run(); }

}  // namespace latlab::forge
