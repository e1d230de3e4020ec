#include "latlab/model/optim.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace latlab::model {

namespace {

std::vector<TransformerF::Mat*> tensor_list(TransformerF& model) {
  std::vector<TransformerF::Mat*> out;
  model.visit([&](const std::string&, TransformerF::Mat& w) { out.push_back(&w); });
  return out;
}

std::vector<const TransformerF::Mat*> tensor_list(const TransformerF& model) {
  std::vector<const TransformerF::Mat*> out;
  model.visit([&](const std::string&, const TransformerF::Mat& w) { out.push_back(&w); });
  return out;
}

}  // namespace

Adam::Adam(const AdamConfig& cfg, const TransformerF& shape) : cfg_(cfg) {
  cfg_.validate();
  shape.visit([&](const std::string&, const TransformerF::Mat& w) {
    m_.push_back(TransformerF::Mat::Zero(w.rows(), w.cols()));
    v_.push_back(TransformerF::Mat::Zero(w.rows(), w.cols()));
  });
}

void Adam::set_lr(double lr) {
  if (lr <= 0) throw ConfigError("adam: lr must be positive");
  cfg_.lr = lr;
}

double Adam::step(TransformerF& params, const TransformerF& grads) {
  auto ps = tensor_list(params);
  auto gs = tensor_list(grads);
  if (ps.size() != m_.size() || gs.size() != m_.size())
    throw TrainingError("adam: parameter/state tensor count mismatch");

  double sq = 0.0;
  for (std::size_t i = 0; i < gs.size(); ++i)
    sq += static_cast<double>(gs[i]->template cast<double>().squaredNorm());
  const double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) throw TrainingError("adam: non-finite gradient norm");
  const float scale =
      (cfg_.clip_norm > 0.0 && norm > cfg_.clip_norm)
          ? static_cast<float>(cfg_.clip_norm / norm)
          : 1.0f;

  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  const float b1 = static_cast<float>(cfg_.beta1), b2 = static_cast<float>(cfg_.beta2);
  const float eps = static_cast<float>(cfg_.eps);
  const float step_size = static_cast<float>(cfg_.lr / bc1);
  const float v_corr = static_cast<float>(1.0 / bc2);

  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i]->rows() != gs[i]->rows() || ps[i]->cols() != gs[i]->cols())
      throw TrainingError("adam: gradient shape mismatch");
    auto g = (gs[i]->array() * scale).eval();
    m_[i].array() = b1 * m_[i].array() + (1.0f - b1) * g;
    v_[i].array() = b2 * v_[i].array() + (1.0f - b2) * g.square();
    ps[i]->array() -= step_size * m_[i].array() / ((v_corr * v_[i].array()).sqrt() + eps);
  }
  return norm;
}

void Adam::save(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  const std::int64_t t = t_;
  f.write(reinterpret_cast<const char*>(&t), sizeof t);
  auto dump = [&](const std::vector<TransformerF::Mat>& ts) {
    for (const auto& w : ts)
      f.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(sizeof(float) * w.size()));
  };
  dump(m_);
  dump(v_);
  if (!f) throw DataError("short write to " + path.string());
}

Adam Adam::load(const std::filesystem::path& path, const AdamConfig& cfg,
                const TransformerF& shape) {
  Adam a(cfg, shape);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot read " + path.string());
  std::int64_t t = 0;
  f.read(reinterpret_cast<char*>(&t), sizeof t);
  auto slurp = [&](std::vector<TransformerF::Mat>& ts) {
    for (auto& w : ts)
      f.read(reinterpret_cast<char*>(w.data()),
             static_cast<std::streamsize>(sizeof(float) * w.size()));
  };
  slurp(a.m_);
  slurp(a.v_);
  if (!f) throw DataError(path.string() + ": truncated optimizer state");
  f.peek();
  if (!f.eof()) throw DataError(path.string() + ": trailing bytes in optimizer state");
  a.t_ = t;
  return a;
}

}  // namespace latlab::model
