#include "latlab/train/bootstrap.hpp"

#include <cmath>

#include "latlab/core/rng.hpp"
#include "latlab/core/text.hpp"

namespace latlab::train {

void BootstrapConfig::validate() const { sft.validate(); }

namespace {

bool in_vocabulary(const model::Vocabulary& vocab, const std::string& text) {
  for (const auto& w : split_ws(text))
    if (!vocab.has(w)) return false;
  return true;
}

}  // namespace

BootstrapResult run_bootstrap(const model::Checkpoint& start,
                              const std::vector<forge::QAItem>& items, const TeacherSpec& teacher,
                              const TraceContext& ctx, const BootstrapConfig& cfg) {
  cfg.validate();
  teacher.validate();
  if (items.empty()) throw TrainingError("bootstrap: no prompts");
  for (const auto& item : items)
    if (item.tag != tax::DistributionTag::in_dist)
      throw ProtocolError("bootstrap: item " + item.qa_id +
                          " is out-of-distribution; traces must stay in-distribution");

  BootstrapResult result{model::Checkpoint{start.model, start.opt, start.vocab}, {}, {}, 0, 0};
  std::vector<TextExample> trace_examples;
  for (const auto& item : items) {
    ReasoningTrace trace = synthesize_trace(teacher, item, item.a_all, ctx);
    if (trace.verified) {
      const TextExample ex = trace_example(trace);
      // External teachers answer in open vocabulary; a desk-scale model can
      // only train on words it has embeddings for.
      if (in_vocabulary(start.vocab, ex.text)) {
        trace_examples.push_back(ex);
        ++result.n_verified;
      } else {
        trace.verified = false;
        ++result.n_rejected;
      }
    } else {
      ++result.n_rejected;
    }
    result.traces.push_back(std::move(trace));
  }
  if (result.n_verified == 0)
    throw TrainingError("bootstrap: zero verified traces out of " +
                        std::to_string(items.size()) + " prompts (" +
                        std::to_string(result.n_rejected) + " rejected)");

  TrainingMixture mixture;
  mixture.components.push_back(
      {"traces", std::move(trace_examples), static_cast<double>(result.n_verified), false});
  if (cfg.aux_ratio > 0.0) {
    const int n = std::max(2, static_cast<int>(std::llround(cfg.aux_ratio * result.n_verified)));
    mixture.components.push_back(
        {"aux", make_aux_examples(n, cfg.sft.seed), static_cast<double>(n), true});
  }

  SftResult sft = train_sft(start, mixture, cfg.sft);
  result.checkpoint = std::move(sft.checkpoint);
  result.report = std::move(sft.report);
  return result;
}

double well_formed_fraction(const std::vector<model::SampleResult>& results) {
  if (results.empty()) return 0.0;
  std::size_t good = 0;
  for (const auto& r : results) good += r.spans.has_thought && !r.spans.malformed;
  return static_cast<double>(good) / static_cast<double>(results.size());
}

FormatCheck check_thought_format(const model::Checkpoint& ckpt,
                                 const std::vector<std::string>& prompts, int samples_per_prompt,
                                 int max_new_tokens, std::uint64_t seed) {
  if (samples_per_prompt <= 0) throw ConfigError("format check: samples_per_prompt must be > 0");
  std::vector<model::SampleRequest> requests;
  requests.reserve(prompts.size() * static_cast<std::size_t>(samples_per_prompt));
  Rng rng = derive_rng(seed, "bootstrap:format");
  for (const auto& p : prompts) {
    std::vector<int> ids = ckpt.vocab.encode(p);
    ids.insert(ids.begin(), model::Vocabulary::bos_id);
    for (int k = 0; k < samples_per_prompt; ++k) {
      model::SampleRequest req;
      req.prompt = ids;
      req.temperature = 1.0;
      req.max_new_tokens = max_new_tokens;
      req.seed = rng.u64();
      requests.push_back(std::move(req));
    }
  }
  const auto results = model::sample(ckpt.model, requests);
  FormatCheck check;
  check.total = static_cast<int>(results.size());
  for (const auto& r : results) check.well_formed += r.spans.has_thought && !r.spans.malformed;
  return check;
}

}  // namespace latlab::train
