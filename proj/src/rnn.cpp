#include "nlsurr/rnn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nlsurr/error.hpp"
#include "nlsurr/rng.hpp"

namespace nlsurr {

RnnModel::RnnModel(std::size_t hidden_size)
    : hidden(hidden_size),
      w_in(hidden_size, 0.0),
      w_rec(hidden_size * hidden_size, 0.0),
      b_h(hidden_size, 0.0),
      w_out(hidden_size, 0.0) {}

std::size_t RnnModel::parameter_count() const noexcept {
  return w_in.size() + w_rec.size() + b_h.size() + w_out.size() + 1;
}

std::vector<double> RnnModel::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  flat.insert(flat.end(), w_in.begin(), w_in.end());
  flat.insert(flat.end(), w_rec.begin(), w_rec.end());
  flat.insert(flat.end(), b_h.begin(), b_h.end());
  flat.insert(flat.end(), w_out.begin(), w_out.end());
  flat.push_back(b_out);
  return flat;
}

void RnnModel::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count())
    throw Error(ErrorKind::Length, "parameter vector has wrong size");
  auto it = flat.begin();
  for (auto* block : {&w_in, &w_rec, &b_h, &w_out}) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(block->size()), block->begin());
    it += static_cast<std::ptrdiff_t>(block->size());
  }
  b_out = *it;
}

RnnModel init_model(std::size_t hidden, std::uint64_t seed) {
  if (hidden == 0) throw Error(ErrorKind::Parameter, "hidden size must be >= 1");
  RnnModel m(hidden);
  Rng rng = make_rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (auto* block : {&m.w_in, &m.w_rec, &m.w_out})
    for (double& w : *block) w = uniform(rng, -bound, bound);
  return m;
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ForwardTrace rnn_forward(const RnnModel& model, std::span<const double> sequence) {
  const std::size_t H = model.hidden;
  const std::size_t L = sequence.size();
  ForwardTrace tr;
  tr.pre.assign(L * H, 0.0);
  tr.hidden.assign((L + 1) * H, 0.0);
  for (std::size_t t = 0; t < L; ++t) {
    const double x = sequence[t];
    const double* h_prev = &tr.hidden[t * H];
    double* a = &tr.pre[t * H];
    double* h = &tr.hidden[(t + 1) * H];
    for (std::size_t i = 0; i < H; ++i) {
      double s = model.w_in[i] * x + model.b_h[i];
      const double* row = &model.w_rec[i * H];
      for (std::size_t j = 0; j < H; ++j) s += row[j] * h_prev[j];
      if (!std::isfinite(s))
        throw Error(ErrorKind::Numeric, "non-finite activation at step " + std::to_string(t + 1));
      a[i] = s;
      h[i] = s > 0.0 ? s : 0.0;
    }
  }
  const double* h_last = &tr.hidden[L * H];
  double z = model.b_out;
  for (std::size_t i = 0; i < H; ++i) z += model.w_out[i] * h_last[i];
  if (!std::isfinite(z)) throw Error(ErrorKind::Numeric, "non-finite output logit");
  tr.logit = z;
  tr.probability = sigmoid(z);
  return tr;
}

double predict(const RnnModel& model, std::span<const double> sequence) {
  return rnn_forward(model, sequence).probability;
}

double bce_loss(double p, int label) noexcept {
  const double q = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return label == 1 ? -std::log(q) : -std::log(1.0 - q);
}

std::pair<RnnModel, double> bptt_gradients(const RnnModel& model, std::span<const Example> batch) {
  if (batch.empty()) throw Error(ErrorKind::Length, "bptt_gradients: empty batch");
  const std::size_t H = model.hidden;
  RnnModel grad(H);
  double loss = 0.0;
  std::vector<double> dh(H), da(H);

  for (const Example& ex : batch) {
    const ForwardTrace tr = rnn_forward(model, ex.sequence);
    loss += bce_loss(tr.probability, ex.label);
    const std::size_t L = ex.sequence.size();
    // dLoss/dlogit of sigmoid + cross-entropy.
    const double g = tr.probability - static_cast<double>(ex.label);
    grad.b_out += g;
    const double* h_last = &tr.hidden[L * H];
    for (std::size_t i = 0; i < H; ++i) {
      grad.w_out[i] += g * h_last[i];
      dh[i] = g * model.w_out[i];
    }
    for (std::size_t t = L; t-- > 0;) {
      const double* a = &tr.pre[t * H];
      const double* h_prev = &tr.hidden[t * H];
      const double x = ex.sequence[t];
      for (std::size_t i = 0; i < H; ++i) da[i] = a[i] > 0.0 ? dh[i] : 0.0;
      for (std::size_t i = 0; i < H; ++i) {
        if (da[i] == 0.0) continue;
        grad.w_in[i] += da[i] * x;
        grad.b_h[i] += da[i];
        double* grow = &grad.w_rec[i * H];
        for (std::size_t j = 0; j < H; ++j) grow[j] += da[i] * h_prev[j];
      }
      if (t == 0) break;
      std::fill(dh.begin(), dh.end(), 0.0);
      for (std::size_t i = 0; i < H; ++i) {
        if (da[i] == 0.0) continue;
        const double* row = &model.w_rec[i * H];
        for (std::size_t j = 0; j < H; ++j) dh[j] += row[j] * da[i];
      }
    }
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  for (auto* block : {&grad.w_in, &grad.w_rec, &grad.b_h, &grad.w_out})
    for (double& v : *block) {
      v *= inv;
      if (!std::isfinite(v)) throw Error(ErrorKind::Numeric, "non-finite gradient");
    }
  grad.b_out *= inv;
  if (!std::isfinite(grad.b_out)) throw Error(ErrorKind::Numeric, "non-finite gradient");
  return {std::move(grad), loss * inv};
}

double batch_loss(const RnnModel& model, std::span<const Example> batch) {
  if (batch.empty()) throw Error(ErrorKind::Length, "batch_loss: empty batch");
  double loss = 0.0;
  for (const Example& ex : batch) loss += bce_loss(predict(model, ex.sequence), ex.label);
  return loss / static_cast<double>(batch.size());
}

double global_norm(const RnnModel& grad) noexcept {
  double s = grad.b_out * grad.b_out;
  for (const auto* block : {&grad.w_in, &grad.w_rec, &grad.b_h, &grad.w_out})
    for (double v : *block) s += v * v;
  return std::sqrt(s);
}

void adam_step(RnnModel& model, RnnModel grad, AdamState& state, const AdamConfig& config) {
  if (grad.hidden != model.hidden) throw Error(ErrorKind::Length, "gradient shape mismatch");
  if (state.m.hidden != model.hidden) state = AdamState(model.hidden);

  if (config.clip_norm > 0.0) {
    const double norm = global_norm(grad);
    if (norm > config.clip_norm) {
      const double scale = config.clip_norm / norm;
      for (auto* block : {&grad.w_in, &grad.w_rec, &grad.b_h, &grad.w_out})
        for (double& v : *block) v *= scale;
      grad.b_out *= scale;
    }
  }

  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  auto update = [&](double& p, double g, double& m, double& v) {
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g * g;
    const double m_hat = m / c1;
    const double v_hat = v / c2;
    p -= config.lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
  };

  auto blocks = [](RnnModel& r) {
    return std::array<std::vector<double>*, 4>{&r.w_in, &r.w_rec, &r.b_h, &r.w_out};
  };
  const auto pb = blocks(model);
  const auto gb = blocks(grad);
  const auto mb = blocks(state.m);
  const auto vb = blocks(state.v);
  for (std::size_t b = 0; b < pb.size(); ++b)
    for (std::size_t i = 0; i < pb[b]->size(); ++i)
      update((*pb[b])[i], (*gb[b])[i], (*mb[b])[i], (*vb[b])[i]);
  update(model.b_out, grad.b_out, state.m.b_out, state.v.b_out);
}

}  // namespace nlsurr
