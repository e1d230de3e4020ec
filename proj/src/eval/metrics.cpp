#include "latlab/eval/metrics.hpp"

#include <algorithm>

#include "latlab/core/errors.hpp"
#include "latlab/core/text.hpp"

namespace latlab::eval {

std::vector<std::string> canonical_prediction_set(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    std::string n = normalize_answer(r);
    if (!n.empty()) out.push_back(std::move(n));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> answer_text_to_set(const std::string& text,
                                            const std::vector<std::string>& reference) {
  bool whole = false;
  for (const auto& r : reference)
    if (r.find(' ') != std::string::npos) whole = true;
  if (whole) return canonical_prediction_set({text});
  return canonical_prediction_set(split_ws(text));
}

namespace {
std::size_t count_in(const std::vector<std::string>& sorted_pred,
                     const std::vector<std::string>& sorted_ref) {
  std::size_t n = 0;
  for (const auto& p : sorted_pred)
    if (std::binary_search(sorted_ref.begin(), sorted_ref.end(), p)) ++n;
  return n;
}
}  // namespace

SetScore score_set(const std::vector<std::string>& predicted, const forge::QAItem& item) {
  item.validate();
  const std::vector<std::string> pred = canonical_prediction_set(predicted);

  SetScore s;
  const std::size_t tp = count_in(pred, item.a_all);
  s.precision = pred.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred.size());
  s.recall = static_cast<double>(tp) / static_cast<double>(item.a_all.size());
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                                      : 0.0;
  s.exact_set = pred == item.a_all;
  s.primary_included =
      std::binary_search(pred.begin(), pred.end(), normalize_answer(item.primary_reference));

  std::vector<std::string> visible;
  std::set_difference(item.a_all.begin(), item.a_all.end(), item.a_heldout.begin(),
                      item.a_heldout.end(), std::back_inserter(visible));
  if (!visible.empty())
    s.train_recall =
        static_cast<double>(count_in(pred, visible)) / static_cast<double>(visible.size());
  if (!item.a_heldout.empty())
    s.heldout_recall = static_cast<double>(count_in(pred, item.a_heldout)) /
                       static_cast<double>(item.a_heldout.size());
  return s;
}

double pass_at_n(int correct, int total, int n) {
  if (correct < 0 || total < 1 || correct > total)
    throw DataError("pass_at_n: need 0 <= correct <= total");
  if (n < 1 || n > total) throw DataError("pass_at_n: need 1 <= n <= total");
  if (correct == 0) return 0.0;
  if (total - correct < n) return 1.0;
  // 1 - C(total-correct, n)/C(total, n), as a stable running product.
  double miss = 1.0;
  for (int i = 0; i < n; ++i)
    miss *= static_cast<double>(total - correct - i) / static_cast<double>(total - i);
  return 1.0 - miss;
}

double best_at_n(std::vector<double> per_sample_scores, int n) {
  const int k = static_cast<int>(per_sample_scores.size());
  if (k < 1) throw DataError("best_at_n: no samples");
  if (n < 1 || n > k) throw DataError("best_at_n: need 1 <= n <= sample count");
  std::sort(per_sample_scores.begin(), per_sample_scores.end());
  // P(max lands on sorted position i, 1-based) = C(i-1, n-1)/C(k, n); walk the
  // ratio upward instead of forming the binomials.
  double expect = 0.0;
  double weight = 0.0;  // C(i-1, n-1)/C(k, n)
  for (int i = n; i <= k; ++i) {
    if (i == n) {
      weight = 1.0;
      for (int j = 0; j < n; ++j)
        weight *= static_cast<double>(n - j) / static_cast<double>(k - j);
    } else {
      weight *= static_cast<double>(i - 1) / static_cast<double>(i - n);
    }
    expect += weight * per_sample_scores[static_cast<std::size_t>(i - 1)];
  }
  return expect;
}

}  // namespace latlab::eval
