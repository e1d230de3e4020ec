#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "latlab/forge/render.hpp"
#include "latlab/forge/types.hpp"
#include "latlab/taxonomy/carve.hpp"
#include "latlab/taxonomy/closure.hpp"
#include "latlab/train/examples.hpp"

namespace latlab::train {

enum class TraceProvenance { teacher_template, teacher_external, model_sampled };
std::string to_string(TraceProvenance p);
TraceProvenance trace_provenance_from_string(const std::string& s);

// One reasoning trace: the prompt it answers, the thought span (without the
// delimiters), and the final answer. verified=true means the final answer
// matched the ground truth under canonical set comparison and the trace
// renders with balanced delimiters; only verified traces may be trained on.
struct ReasoningTrace {
  std::string prompt;
  std::string thought_text;
  std::string final_answer;
  TraceProvenance provenance = TraceProvenance::teacher_template;
  bool verified = false;
};

// "<prompt> <think> <thought> </think> <answer>", supervised from the opening
// delimiter so the model learns to open a thought span after a question.
TextExample trace_example(const ReasoningTrace& trace);

void save_traces(const std::vector<ReasoningTrace>& traces, const std::filesystem::path& path);
std::vector<ReasoningTrace> load_traces(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// teacher
// ---------------------------------------------------------------------------

enum class TeacherMode { template_synthesizer, external_service };

// Which habits the synthesized thought exhibits: probing what is known about
// the topic, reciting relevant trained facts before concluding, and proposing
// candidate answers that are each checked against recalled facts.
struct TeacherBehaviors {
  bool focus_driven_recall = true;
  bool self_probing = true;
  bool generate_and_verify = true;

  bool any() const { return focus_driven_recall || self_probing || generate_and_verify; }
};

// Text-in/text-out transport for the external teacher. Implementations map
// I/O failures to TransportError.
struct Transport {
  virtual ~Transport() = default;
  virtual std::string post(const std::string& request) = 0;
};

// POSTs the request body to `endpoint` ("host:port/path" or "http://...") and
// returns the reply body.
std::shared_ptr<Transport> http_transport(const std::string& endpoint, int timeout_seconds = 60);

struct TeacherSpec {
  TeacherMode mode = TeacherMode::template_synthesizer;
  TeacherBehaviors behaviors;
  std::string endpoint;                  // external mode
  int retry_budget = 2;                  // additional attempts after the first failure
  std::shared_ptr<Transport> transport;  // external mode; built from endpoint when null

  void validate() const;  // external mode needs an endpoint or transport; behaviors non-empty
};

// Prepared lookups for the template teacher. Holdout carving guarantees every
// held-out fact stays derivable from the train set, so witness chains found in
// the train closure always ground out in exposed (document-stated) facts.
struct TraceContext {
  TraceContext(const tax::SemanticStructure* structure, const tax::CarveResult* carve,
               const std::vector<forge::CelebrityRecord>* celebrities, std::uint64_t seed,
               int max_distractors = 3);

  const tax::SemanticStructure* structure = nullptr;
  tax::FactIndex exposed;
  std::optional<tax::Closure> train_closure;
  std::map<std::string, tax::PropertyKind> value_kind;  // property value -> slot kind
  std::vector<std::string> category_pool;               // distractor candidates

  const std::vector<forge::CelebrityRecord>* celebrities = nullptr;
  std::map<std::string, const forge::CelebrityRecord*> record_by_name;  // normalized name
  std::vector<const forge::CelebrityRecord*> forward_trained;  // name->desc stated in docs

  int max_distractors = 3;
  std::uint64_t seed = 0;
};

// Ground-truth-conditioned trace synthesis. Template mode is deterministic in
// (item, ground truth, context): it derives each claimed answer from exposed
// facts — reciting witness premises before every conclusion — or, for
// reverse-direction queries, enumerates candidates and verifies each against
// the facts it can recall; answers it cannot support are dropped, so a wrong
// ground truth yields verified=false rather than an unsupported trace.
// External mode sends external_request_text over the transport (retrying up
// to retry_budget times, then rethrowing TransportError) and parses the
// reply; an unparseable reply is a rejected trace, not an error.
ReasoningTrace synthesize_trace(const TeacherSpec& teacher, const forge::QAItem& qa,
                                const std::vector<std::string>& ground_truth,
                                const TraceContext& ctx);

std::string external_request_text(const forge::QAItem& qa,
                                  const std::vector<std::string>& ground_truth);
ReasoningTrace parse_external_reply(const forge::QAItem& qa, const std::string& reply,
                                    const std::vector<std::string>& ground_truth);

}  // namespace latlab::train
