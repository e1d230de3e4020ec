#include "latlab/model/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace latlab::model {

namespace {

using Mat = TransformerF::Mat;
using Arr = TransformerF::Arr;

void check_request(const SampleRequest& req, const TransformerF& model) {
  if (req.prompt.empty()) throw DataError("sample: empty prompt");
  if (req.temperature <= 0.0) throw DataError("sample: temperature must be positive");
  if (req.max_new_tokens < 1) throw DataError("sample: max_new_tokens must be at least 1");
  for (int t : req.prompt)
    if (t < 0 || t >= model.vocab_size) throw DataError("sample: prompt token out of range");
  if (static_cast<int>(req.prompt.size()) >= model.cfg.max_sequence_length)
    throw DataError("sample: prompt leaves no room to generate within context " +
                    std::to_string(model.cfg.max_sequence_length));
}

int draw_token(const Mat& logits, Eigen::Index row, const SampleRequest& req, Rng& rng) {
  if (req.argmax) {
    Eigen::Index best = 0;
    logits.row(row).maxCoeff(&best);
    return static_cast<int>(best);
  }
  const float m = logits.row(row).maxCoeff();
  std::vector<double> w(static_cast<std::size_t>(logits.cols()));
  for (Eigen::Index j = 0; j < logits.cols(); ++j)
    w[static_cast<std::size_t>(j)] =
        std::exp((static_cast<double>(logits(row, j)) - m) / req.temperature);
  return static_cast<int>(rng.categorical(w));
}

void rmsnorm_rows(const Mat& x, const Mat& g, Mat& out) {
  out.resizeLike(x);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const float ms = x.row(i).squaredNorm() / static_cast<float>(x.cols()) +
                     TransformerF::norm_eps;
    out.row(i) = x.row(i).cwiseProduct(g.row(0)) / std::sqrt(ms);
  }
}

void run_wave(const TransformerF& model, const std::vector<SampleRequest>& reqs,
              std::vector<SampleResult>& results) {
  const int R = static_cast<int>(reqs.size());
  const int d = model.cfg.d_model, H = model.cfg.n_heads, hd = model.cfg.head_dim();
  const int L = model.cfg.n_layers;
  const float scale = 1.0f / std::sqrt(static_cast<float>(hd));

  std::vector<int> plen(reqs.size()), limit(reqs.size());
  std::vector<Rng> rngs;
  rngs.reserve(reqs.size());
  int t_cap = 0;
  for (int r = 0; r < R; ++r) {
    plen[r] = static_cast<int>(reqs[r].prompt.size());
    limit[r] = std::min(model.cfg.max_sequence_length, plen[r] + reqs[r].max_new_tokens);
    t_cap = std::max(t_cap, limit[r]);
    rngs.push_back(derive_rng(reqs[r].seed, "sample"));
  }

  std::vector<Mat> kc(static_cast<std::size_t>(L)), vc(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    kc[l].resize(static_cast<Eigen::Index>(R) * t_cap, d);
    vc[l].resize(static_cast<Eigen::Index>(R) * t_cap, d);
  }

  std::vector<bool> done(reqs.size(), false);
  Mat x, xn, q, k, v, attn_o, h1, xs, logits;
  for (int t = 0; t < t_cap; ++t) {
    std::vector<int> active;  // wave-local request indices running at this position
    for (int r = 0; r < R; ++r)
      if (!done[r] && t < limit[r]) active.push_back(r);
    if (active.empty()) break;
    const Eigen::Index a = static_cast<Eigen::Index>(active.size());

    x.resize(a, d);
    for (Eigen::Index i = 0; i < a; ++i) {
      const int r = active[static_cast<std::size_t>(i)];
      const int tok = t < plen[r] ? reqs[r].prompt[static_cast<std::size_t>(t)]
                                  : results[static_cast<std::size_t>(r)]
                                        .tokens[static_cast<std::size_t>(t - plen[r])];
      x.row(i) = model.tok_emb.row(tok) + model.pos_emb.row(t);
    }

    for (int l = 0; l < L; ++l) {
      const auto& ly = model.layers[static_cast<std::size_t>(l)];
      rmsnorm_rows(x, ly.ln1_g, xn);
      q.noalias() = xn * ly.wq;
      k.noalias() = xn * ly.wk;
      v.noalias() = xn * ly.wv;
      attn_o.resize(a, d);
      for (Eigen::Index i = 0; i < a; ++i) {
        const int r = active[static_cast<std::size_t>(i)];
        const Eigen::Index base = static_cast<Eigen::Index>(r) * t_cap;
        kc[l].row(base + t) = k.row(i);
        vc[l].row(base + t) = v.row(i);
        for (int h = 0; h < H; ++h) {
          auto kb = kc[l].block(base, h * hd, t + 1, hd);
          auto vb = vc[l].block(base, h * hd, t + 1, hd);
          Eigen::Matrix<float, 1, Eigen::Dynamic> s = q.block(i, h * hd, 1, hd) * kb.transpose();
          s *= scale;
          const float m = s.maxCoeff();
          s.array() = (s.array() - m).exp();
          s /= s.sum();
          attn_o.block(i, h * hd, 1, hd).noalias() = s * vb;
        }
      }
      x.noalias() += attn_o * ly.wo;
      rmsnorm_rows(x, ly.ln2_g, xn);
      h1.noalias() = xn * ly.w1;
      h1.rowwise() += ly.b1.row(0);
      h1 = h1.cwiseMax(0.0f);
      x.noalias() += h1 * ly.w2;
      x.rowwise() += ly.b2.row(0);
    }

    std::vector<Eigen::Index> samplers;  // rows of x that need a draw this step
    for (Eigen::Index i = 0; i < a; ++i)
      if (t >= plen[active[static_cast<std::size_t>(i)]] - 1) samplers.push_back(i);
    if (samplers.empty()) continue;

    xs.resize(static_cast<Eigen::Index>(samplers.size()), d);
    for (std::size_t i = 0; i < samplers.size(); ++i) xs.row(static_cast<Eigen::Index>(i)) = x.row(samplers[i]);
    rmsnorm_rows(xs, model.lnf_g, xn);
    logits.noalias() = xn * model.lm_head;

    for (std::size_t i = 0; i < samplers.size(); ++i) {
      const int r = active[static_cast<std::size_t>(samplers[i])];
      auto& res = results[static_cast<std::size_t>(r)];
      const int tok = draw_token(logits, static_cast<Eigen::Index>(i), reqs[static_cast<std::size_t>(r)],
                                 rngs[static_cast<std::size_t>(r)]);
      if (tok == Vocabulary::eos_id) {
        done[r] = true;
        continue;
      }
      res.tokens.push_back(tok);
      if (static_cast<int>(res.tokens.size()) >= reqs[static_cast<std::size_t>(r)].max_new_tokens ||
          t + 1 >= limit[r]) {
        done[r] = true;
        res.truncated = true;
      }
    }
  }
}

}  // namespace

std::vector<SampleResult> sample(const TransformerF& model,
                                 const std::vector<SampleRequest>& requests, int wave_size) {
  if (wave_size < 1) throw ConfigError("sample: wave_size must be at least 1");
  for (const auto& req : requests) check_request(req, model);

  std::vector<SampleResult> results(requests.size());
  for (std::size_t start = 0; start < requests.size(); start += static_cast<std::size_t>(wave_size)) {
    const std::size_t n = std::min(requests.size() - start, static_cast<std::size_t>(wave_size));
    std::vector<SampleRequest> wave(requests.begin() + static_cast<std::ptrdiff_t>(start),
                                    requests.begin() + static_cast<std::ptrdiff_t>(start + n));
    std::vector<SampleResult> wave_results(wave.size());
    run_wave(model, wave, wave_results);
    for (std::size_t i = 0; i < n; ++i) results[start + i] = std::move(wave_results[i]);
  }
  for (auto& r : results) r.spans = split_spans(r.tokens);
  return results;
}

}  // namespace latlab::model
