#include "latlab/train/teacher.hpp"

#include <algorithm>
#include <set>

#include "httplib.h"
#include "latlab/core/records.hpp"
#include "latlab/core/rng.hpp"
#include "latlab/core/text.hpp"
#include "latlab/eval/metrics.hpp"
#include "latlab/forge/templates.hpp"

namespace latlab::train {

std::string to_string(TraceProvenance p) {
  switch (p) {
    case TraceProvenance::teacher_template: return "teacher_template";
    case TraceProvenance::teacher_external: return "teacher_external";
    case TraceProvenance::model_sampled: return "model_sampled";
  }
  throw Error("unknown trace provenance");
}

TraceProvenance trace_provenance_from_string(const std::string& s) {
  if (s == "teacher_template") return TraceProvenance::teacher_template;
  if (s == "teacher_external") return TraceProvenance::teacher_external;
  if (s == "model_sampled") return TraceProvenance::model_sampled;
  throw DataError("unknown trace provenance: " + s);
}

TextExample trace_example(const ReasoningTrace& trace) {
  TextExample ex;
  ex.supervise_from_word = word_count(trace.prompt);
  std::string text = trace.prompt + " <think>";
  if (!trace.thought_text.empty()) text += " " + trace.thought_text;
  text += " </think>";
  if (!trace.final_answer.empty()) text += " " + trace.final_answer;
  ex.text = std::move(text);
  return ex;
}

static const char* kTraceSchema = "latlab.traces/1";

void save_traces(const std::vector<ReasoningTrace>& traces, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(traces.size());
  for (const auto& t : traces)
    rows.push_back({t.prompt, t.thought_text, t.final_answer, to_string(t.provenance),
                    t.verified ? "1" : "0"});
  write_records(path, kTraceSchema, rows);
}

std::vector<ReasoningTrace> load_traces(const std::filesystem::path& path) {
  const RecordFile rec = read_records(path, kTraceSchema);
  std::vector<ReasoningTrace> out;
  out.reserve(rec.rows.size());
  for (const auto& row : rec.rows) {
    if (row.size() != 5) throw DataError("trace record: expected 5 fields");
    if (row[4] != "0" && row[4] != "1") throw DataError("trace record: bad verified flag");
    out.push_back({row[0], row[1], row[2], trace_provenance_from_string(row[3]), row[4] == "1"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// transport
// ---------------------------------------------------------------------------

namespace {

class HttpTransport : public Transport {
 public:
  HttpTransport(std::string endpoint, int timeout_seconds) : timeout_(timeout_seconds) {
    std::string rest = std::move(endpoint);
    const auto scheme = rest.find("://");
    std::string prefix = "http://";
    if (scheme != std::string::npos) {
      prefix = rest.substr(0, scheme + 3);
      rest = rest.substr(scheme + 3);
    }
    const auto slash = rest.find('/');
    host_ = prefix + rest.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  }

  std::string post(const std::string& request) override {
    httplib::Client cli(host_);
    cli.set_connection_timeout(timeout_, 0);
    cli.set_read_timeout(timeout_, 0);
    auto res = cli.Post(path_, request, "text/plain");
    if (!res) throw TransportError("teacher transport: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw TransportError("teacher transport: HTTP " + std::to_string(res->status));
    return res->body;
  }

 private:
  std::string host_, path_;
  int timeout_;
};

}  // namespace

std::shared_ptr<Transport> http_transport(const std::string& endpoint, int timeout_seconds) {
  return std::make_shared<HttpTransport>(endpoint, timeout_seconds);
}

void TeacherSpec::validate() const {
  if (!behaviors.any()) throw ConfigError("teacher: at least one behavior must be enabled");
  if (mode == TeacherMode::external_service && endpoint.empty() && !transport)
    throw ConfigError("teacher: external mode needs an endpoint or a transport");
}

// ---------------------------------------------------------------------------
// context
// ---------------------------------------------------------------------------

TraceContext::TraceContext(const tax::SemanticStructure* structure_in,
                           const tax::CarveResult* carve,
                           const std::vector<forge::CelebrityRecord>* celebrities_in,
                           std::uint64_t seed_in, int max_distractors_in)
    : structure(structure_in),
      celebrities(celebrities_in),
      max_distractors(max_distractors_in),
      seed(seed_in) {
  if (max_distractors < 0) throw ConfigError("trace context: max_distractors must be >= 0");
  if (structure != nullptr) {
    if (carve == nullptr) throw ConfigError("trace context: structure without its carve");
    exposed = tax::FactIndex(carve->train);
    train_closure.emplace(tax::deductive_closure(carve->train));
    for (const auto& c : structure->categories) {
      category_pool.push_back(c.id);
      for (const auto& slot : c.properties) value_kind[slot.value] = slot.kind;
    }
  }
  if (celebrities != nullptr) {
    for (const auto& r : *celebrities) {
      record_by_name[normalize_answer(r.name)] = &r;
      if (r.direction != "desc_to_name_only") forward_trained.push_back(&r);
    }
  }
}

// ---------------------------------------------------------------------------
// template synthesizer
// ---------------------------------------------------------------------------

namespace {

bool answers_match(const std::string& final_answer, const std::vector<std::string>& gt) {
  const auto want = eval::canonical_prediction_set(gt);
  if (want.empty()) return false;
  return eval::answer_text_to_set(final_answer, gt) == want;
}

// Accumulates thought sentences. Witness expansion walks the train closure,
// reciting exposed facts and deriving intermediate conclusions, so every
// claim in the thought is grounded in document-stated facts.
struct TemplateSynth {
  const TeacherBehaviors& behaviors;
  const TraceContext& ctx;
  const forge::TemplateSet& ts = forge::TemplateSet::standard();
  std::vector<std::string> sentences;
  std::set<std::string> stated;

  std::string sentence(const tax::Fact& f) const {
    tax::PropertyKind kind = tax::PropertyKind::attribute;
    if (f.rel == tax::Relation::has_property) {
      auto it = ctx.value_kind.find(f.object);
      if (it != ctx.value_kind.end()) kind = it->second;
    }
    return ts.fact_sentence(f, kind, 0);
  }

  void probe(const std::string& topic) {
    if (behaviors.self_probing) sentences.push_back("what do i know about " + topic);
  }

  void recall(const tax::Fact& f) {
    if (stated.insert(f.key()).second && behaviors.focus_driven_recall)
      sentences.push_back("i know that " + sentence(f));
  }

  bool expand(const tax::Fact& f) {
    if (stated.count(f.key())) return true;
    if (ctx.exposed.has(f)) {
      recall(f);
      return true;
    }
    const tax::Proposition* p = ctx.train_closure ? ctx.train_closure->find(f) : nullptr;
    if (p == nullptr || p->premises.empty()) return false;
    for (const auto& q : p->premises)
      if (!expand(q)) return false;
    stated.insert(f.key());
    sentences.push_back("so " + sentence(f));
    return true;
  }

  // Answer facts for one query family. Reverse families try the stated
  // direction first, then the inversion witness.
  bool derive_answer(const forge::QueryKey& key, const std::string& answer) {
    switch (key.family) {
      case forge::QueryFamily::subject_isa:
        return expand({key.topic, tax::Relation::is_a, answer});
      case forge::QueryFamily::subject_prop:
        return expand({key.topic, tax::Relation::has_property, answer});
      case forge::QueryFamily::target_includes:
        return expand({key.topic, tax::Relation::includes, answer}) ||
               expand({answer, tax::Relation::is_a, key.topic});
      case forge::QueryFamily::prop_holders:
        return expand({answer, tax::Relation::has_property, key.topic});
    }
    return false;
  }

  // Something trained about a rejected candidate, for the mismatch citation.
  void cite_counter(const forge::QueryKey& key, const std::string& candidate) {
    if (!behaviors.focus_driven_recall) return;
    const auto rel = key.family == forge::QueryFamily::prop_holders
                         ? tax::Relation::has_property
                         : tax::Relation::is_a;
    for (const auto& obj : ctx.exposed.objects_of(candidate, rel)) {
      if (obj == key.topic) continue;
      recall({candidate, rel, obj});
      return;
    }
  }
};

ReasoningTrace taxonomy_trace(const TeacherSpec& teacher, const forge::QAItem& qa,
                              const forge::QueryKey& key,
                              const std::vector<std::string>& ground_truth,
                              const TraceContext& ctx) {
  if (ctx.structure == nullptr || !ctx.train_closure)
    throw ConfigError("trace context lacks the taxonomy structure for prompt: " + qa.prompt);
  TemplateSynth synth{teacher.behaviors, ctx};
  const bool reverse = key.family == forge::QueryFamily::target_includes ||
                       key.family == forge::QueryFamily::prop_holders;

  synth.probe(key.topic);
  std::vector<std::string> supported;

  if (reverse && teacher.behaviors.generate_and_verify) {
    const std::set<std::string> truth(ground_truth.begin(), ground_truth.end());
    std::vector<std::string> candidates = ground_truth;
    std::vector<std::string> pool;
    for (const auto& id : ctx.category_pool)
      if (!truth.count(id) && id != key.topic) pool.push_back(id);
    Rng rng = derive_rng(ctx.seed, "trace:" + qa.qa_id);
    rng.shuffle(pool);
    pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(ctx.max_distractors)));
    candidates.insert(candidates.end(), pool.begin(), pool.end());
    rng.shuffle(candidates);

    synth.sentences.push_back("check the candidates");
    std::set<std::string> confirmed;
    for (const auto& c : candidates) {
      synth.sentences.push_back("check " + c);
      if (truth.count(c) && synth.derive_answer(key, c)) {
        synth.sentences.push_back(c + " does match");
        confirmed.insert(c);
      } else {
        synth.cite_counter(key, c);
        synth.sentences.push_back(c + " does not match");
      }
    }
    for (const auto& a : ground_truth)
      if (confirmed.count(a)) supported.push_back(a);
  } else {
    for (const auto& a : ground_truth)
      if (synth.derive_answer(key, a)) supported.push_back(a);
  }

  ReasoningTrace trace;
  trace.prompt = qa.prompt;
  trace.provenance = TraceProvenance::teacher_template;
  trace.thought_text = join(synth.sentences, " ");
  trace.final_answer = join(supported, " ");
  trace.verified = answers_match(trace.final_answer, ground_truth);
  return trace;
}

// The trained-direction biography statement for a record — the only safe
// citation: it restates what the documents already say about the person.
std::string trained_statement(const forge::TemplateSet& ts, const forge::CelebrityRecord& r) {
  const auto traits = ts.description_traits(r.description);
  if (!traits) throw DataError("celebrity record has an unparseable description: " + r.name);
  const char* direction = r.direction == "desc_to_name_only" ? forge::condition::desc_to_name
                                                             : forge::condition::name_to_desc;
  return ts.celebrity_statement(direction, r.name, traits->first, traits->second, 0);
}

ReasoningTrace celebrity_trace(const TeacherSpec& teacher, const forge::QAItem& qa,
                               const forge::CelebritySentence& query,
                               const std::vector<std::string>& ground_truth,
                               const TraceContext& ctx) {
  if (ctx.celebrities == nullptr)
    throw ConfigError("trace context lacks biography records for prompt: " + qa.prompt);
  TemplateSynth synth{teacher.behaviors, ctx};
  const auto& ts = synth.ts;

  ReasoningTrace trace;
  trace.prompt = qa.prompt;
  trace.provenance = TraceProvenance::teacher_template;

  if (query.direction == forge::condition::name_to_desc) {
    auto it = ctx.record_by_name.find(normalize_answer(query.name));
    if (it != ctx.record_by_name.end()) {
      const auto& r = *it->second;
      const auto traits = ts.description_traits(r.description);
      synth.probe(query.name);
      if (teacher.behaviors.focus_driven_recall)
        synth.sentences.push_back("i know that " + trained_statement(ts, r));
      if (traits) {
        synth.sentences.push_back("so " + r.name + " is described by " + traits->first + " " +
                                  traits->second);
        trace.final_answer = traits->first + " " + traits->second;
      }
    }
  } else if (query.direction == forge::condition::desc_to_name) {
    const auto traits = ts.description_traits(query.description);
    if (!traits) throw DataError("prompt description does not parse: " + qa.prompt);

    std::vector<const forge::CelebrityRecord*> candidates;
    if (!ground_truth.empty()) {
      auto it = ctx.record_by_name.find(ground_truth.front());
      if (it != ctx.record_by_name.end()) candidates.push_back(it->second);
    }
    // Distractors come from both-direction records: their descriptions are
    // stated in every direction already, and their names face no reversal
    // test, so reciting them cannot leak a held-out mapping.
    std::vector<const forge::CelebrityRecord*> pool;
    for (const auto* r : ctx.forward_trained)
      if (r->direction == "both" && (candidates.empty() || r != candidates.front()))
        pool.push_back(r);
    Rng rng = derive_rng(ctx.seed, "trace:" + qa.qa_id);
    rng.shuffle(pool);
    pool.resize(std::min<std::size_t>(pool.size(), static_cast<std::size_t>(ctx.max_distractors)));
    candidates.insert(candidates.end(), pool.begin(), pool.end());
    rng.shuffle(candidates);

    synth.sentences.push_back("check the candidates");
    std::string answer_name;
    for (const auto* r : candidates) {
      const auto rt = ts.description_traits(r->description);
      if (!rt) continue;
      synth.sentences.push_back("check " + r->name);
      if (teacher.behaviors.focus_driven_recall || teacher.behaviors.generate_and_verify)
        synth.sentences.push_back("i know that " + trained_statement(ts, *r));
      if (*rt == *traits) {
        synth.sentences.push_back(r->name + " does match");
        answer_name = r->name;
      } else {
        synth.sentences.push_back(r->name + " does not match");
      }
    }
    trace.final_answer = answer_name;
  } else {
    throw ConfigError("no trace template for condition " + query.direction);
  }

  trace.thought_text = join(synth.sentences, " ");
  trace.verified = answers_match(trace.final_answer, ground_truth);
  return trace;
}

}  // namespace

// ---------------------------------------------------------------------------
// entry points
// ---------------------------------------------------------------------------

std::string external_request_text(const forge::QAItem& qa,
                                  const std::vector<std::string>& ground_truth) {
  std::string text =
      "task: produce a reasoning trace for the question below. think between <think> and "
      "</think>, then state the final answer after the closing delimiter.\n";
  text += "habits: probe yourself for what you know about the topic; recite every fact you rely "
          "on before drawing a conclusion; propose candidate answers and verify each one against "
          "facts you can state.\n";
  text += "the correct final answer is: " + join(ground_truth, ", ") +
          " — use it only to check yourself; the trace must derive it from recalled facts.\n";
  text += "question: " + qa.prompt + "\n";
  return text;
}

ReasoningTrace parse_external_reply(const forge::QAItem& qa, const std::string& reply,
                                    const std::vector<std::string>& ground_truth) {
  ReasoningTrace trace;
  trace.prompt = qa.prompt;
  trace.provenance = TraceProvenance::teacher_external;

  const auto words = split_ws(reply);
  const auto open = std::find(words.begin(), words.end(), "<think>");
  const auto close = std::find(words.begin(), words.end(), "</think>");
  if (open == words.end() || close == words.end() || close < open) return trace;  // rejected
  if (std::count(words.begin(), words.end(), "<think>") != 1 ||
      std::count(words.begin(), words.end(), "</think>") != 1)
    return trace;  // repeated delimiters: rejected

  trace.thought_text = join(std::vector<std::string>(open + 1, close), " ");
  trace.final_answer = join(std::vector<std::string>(close + 1, words.end()), " ");
  trace.verified = !trace.final_answer.empty() && answers_match(trace.final_answer, ground_truth);
  return trace;
}

ReasoningTrace synthesize_trace(const TeacherSpec& teacher, const forge::QAItem& qa,
                                const std::vector<std::string>& ground_truth,
                                const TraceContext& ctx) {
  teacher.validate();

  if (teacher.mode == TeacherMode::external_service) {
    auto transport = teacher.transport ? teacher.transport : http_transport(teacher.endpoint);
    const std::string request = external_request_text(qa, ground_truth);
    for (int attempt = 0;; ++attempt) {
      try {
        return parse_external_reply(qa, transport->post(request), ground_truth);
      } catch (const TransportError&) {
        if (attempt >= teacher.retry_budget) throw;
      }
    }
  }

  const auto& ts = forge::TemplateSet::standard();
  if (const auto key = ts.parse_query(qa.prompt))
    return taxonomy_trace(teacher, qa, *key, ground_truth, ctx);
  if (const auto celeb = ts.parse_celebrity_query(qa.prompt))
    return celebrity_trace(teacher, qa, *celeb, ground_truth, ctx);
  throw DataError("prompt does not parse as a query: " + qa.prompt);
}

}  // namespace latlab::train
