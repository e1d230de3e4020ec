#include "latlab/train/mixture.hpp"

#include <cmath>
#include <set>

#include "latlab/core/reserved_words.hpp"
#include "latlab/core/text.hpp"

namespace latlab::train {

void TrainingMixture::validate() const {
  if (components.empty()) throw ConfigError("mixture: no components");
  std::set<std::string> names;
  for (const auto& c : components) {
    if (c.name.empty()) throw ConfigError("mixture: component with empty name");
    if (!names.insert(c.name).second)
      throw ConfigError("mixture: duplicate component name " + c.name);
    if (!(c.weight > 0.0) || !std::isfinite(c.weight))
      throw ConfigError("mixture: component " + c.name + " needs a positive finite weight");
    if (c.examples.size() < 2)
      throw ConfigError("mixture: component " + c.name +
                        " needs at least 2 examples (one is held out for validation)");
  }
}

std::vector<double> TrainingMixture::normalized_weights() const {
  double total = 0.0;
  for (const auto& c : components) total += c.weight;
  std::vector<double> w;
  w.reserve(components.size());
  for (const auto& c : components) w.push_back(c.weight / total);
  return w;
}

TrainingMixture knowledge_mixture(const forge::DatasetBundle& bundle, double aux_ratio,
                                  std::uint64_t seed) {
  const SurfaceMap surfaces = build_surface_map(bundle.celebrities);

  MixtureComponent docs{"documents", {}, 1.0, false};
  docs.examples.reserve(bundle.documents.size());
  for (const auto& d : bundle.documents) docs.examples.push_back(document_example(d));

  MixtureComponent qa{"train_qa", {}, 1.0, false};
  qa.examples.reserve(bundle.train_qa.size());
  for (const auto& item : bundle.train_qa) qa.examples.push_back(qa_example(item, surfaces));

  docs.weight = static_cast<double>(docs.examples.size());
  qa.weight = static_cast<double>(qa.examples.size());

  TrainingMixture m;
  m.components.push_back(std::move(docs));
  m.components.push_back(std::move(qa));
  if (aux_ratio > 0.0) {
    const auto knowledge = m.components[0].examples.size() + m.components[1].examples.size();
    const int n = std::max(2, static_cast<int>(std::llround(aux_ratio * knowledge)));
    MixtureComponent aux{"aux", make_aux_examples(n, seed), static_cast<double>(n), true};
    m.components.push_back(std::move(aux));
  }
  m.validate();
  return m;
}

std::vector<std::string> vocabulary_corpora(const forge::DatasetBundle& bundle) {
  const SurfaceMap surfaces = build_surface_map(bundle.celebrities);
  std::vector<std::string> lines;
  for (const auto& d : bundle.documents) lines.push_back(d.task_prefix + " " + d.body);

  auto add_items = [&](const std::vector<forge::QAItem>& items) {
    for (const auto& item : items) {
      lines.push_back(item.prompt);
      lines.push_back(qa_answer_text(item, surfaces));
    }
  };
  add_items(bundle.train_qa);
  add_items(bundle.bootstrap);
  add_items(bundle.rl);
  add_items(bundle.test_in);
  add_items(bundle.test_out);
  if (bundle.params.include_celebrities) add_items({bundle.unconditional_probe});

  std::vector<std::string> scaffold(reserved_surface_words().begin(),
                                    reserved_surface_words().end());
  lines.push_back(join(scaffold, " "));
  return lines;
}

}  // namespace latlab::train
