#pragma once

// Plan estimation: what does the human driver expect the automated vehicle
// to do next? Two estimators are provided. The constant-acceleration
// baseline repeats the last executed acceleration. The GRU estimator is a
// small recurrent network over a sliding window of interaction features,
// trained with backpropagation through time on simulated trajectories.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tacf/core.hpp"

namespace tacf {

class ModelNotReady : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One observation of the human/AV pair, as seen by the human driver:
/// gap to the AV, relative speed, own time headway, and the acceleration
/// the AV executed at that time.
struct FeatureRow {
  double gap = 0.0;        // m
  double rel_speed = 0.0;  // m/s, leader minus follower
  double headway = 0.0;    // s, gap / max(own speed, floor)
  double u_av = 0.0;       // m/s^2

  double operator[](std::size_t i) const {
    const double v[4] = {gap, rel_speed, headway, u_av};
    return v[i];
  }
};

/// Speed floor used when forming the time-headway feature at standstill.
constexpr double kHeadwaySpeedFloor = 0.1;  // m/s

inline double time_headway(double gap, double own_speed) {
  return gap / std::max(own_speed, kHeadwaySpeedFloor);
}

/// History window of H feature rows, ordered oldest to newest.
struct PredictorWindow {
  std::vector<FeatureRow> rows;
};

/// Constant-acceleration baseline: extrapolate the last executed
/// acceleration over the whole horizon.
inline Plan predict_ca(double last_u_av, int n) {
  detail::require(n >= 1, "predict_ca: horizon must be >= 1");
  return Plan::constant(last_u_av, static_cast<std::size_t>(n));
}

// ---------------------------------------------------------------------------
// GRU model
// ---------------------------------------------------------------------------

/// Single-layer GRU with a linear readout from the final hidden state.
///
/// Gate equations, per step, with x the normalized feature row and h the
/// previous hidden state:
///   z = sigmoid(Wz x + Uz h + bz)        update gate
///   r = sigmoid(Wr x + Ur h + br)        reset gate
///   c = tanh(Wc x + Uc (r .* h) + bc)    candidate state
///   h' = z .* h + (1 - z) .* c
///
/// Parameters live in one flat vector, row-major, in the order
/// [Wz Uz bz | Wr Ur br | Wc Uc bc | Wout bout]; the flat layout keeps the
/// optimizer and the finite-difference checks simple.
struct GruModel {
  int input_size = 4;
  int hidden_size = 32;
  int horizon = 3;   // readout dimension N
  int history = 10;  // expected window length H
  std::vector<double> params;
  std::array<double, 4> feat_mean{0.0, 0.0, 0.0, 0.0};
  std::array<double, 4> feat_std{1.0, 1.0, 1.0, 1.0};
  double out_lo = -5.0;  // sanity band for predictions, not actuator bounds
  double out_hi = 5.0;
  bool trained = false;

  std::size_t gate_block() const {
    const std::size_t h = static_cast<std::size_t>(hidden_size);
    const std::size_t in = static_cast<std::size_t>(input_size);
    return h * in + h * h + h;
  }
  std::size_t param_count() const {
    const std::size_t h = static_cast<std::size_t>(hidden_size);
    const std::size_t n = static_cast<std::size_t>(horizon);
    return 3 * gate_block() + n * h + n;
  }
  // Offsets of each block inside `params`.
  std::size_t off_w(int gate) const {
    return static_cast<std::size_t>(gate) * gate_block();
  }
  std::size_t off_u(int gate) const {
    return off_w(gate) +
           static_cast<std::size_t>(hidden_size) *
               static_cast<std::size_t>(input_size);
  }
  std::size_t off_b(int gate) const {
    return off_u(gate) + static_cast<std::size_t>(hidden_size) *
                             static_cast<std::size_t>(hidden_size);
  }
  std::size_t off_wout() const { return 3 * gate_block(); }
  std::size_t off_bout() const {
    return off_wout() + static_cast<std::size_t>(horizon) *
                            static_cast<std::size_t>(hidden_size);
  }

  static GruModel make(int hidden, int horizon, int history) {
    GruModel m;
    m.hidden_size = hidden;
    m.horizon = horizon;
    m.history = history;
    m.params.assign(m.param_count(), 0.0);
    return m;
  }

  void init_weights(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double scale =
        1.0 / std::sqrt(static_cast<double>(std::max(hidden_size, 1)));
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (double& w : params) w = dist(rng);
    // biases start at zero
    for (int g = 0; g < 3; ++g)
      for (int i = 0; i < hidden_size; ++i)
        params[off_b(g) + static_cast<std::size_t>(i)] = 0.0;
    for (int j = 0; j < horizon; ++j)
      params[off_bout() + static_cast<std::size_t>(j)] = 0.0;
  }

  std::array<double, 4> normalize(const FeatureRow& row) const {
    std::array<double, 4> x{};
    for (std::size_t i = 0; i < 4; ++i)
      x[i] = (row[i] - feat_mean[i]) / feat_std[i];
    return x;
  }
};

namespace detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Per-step activations kept for backpropagation.
struct GruStepCache {
  std::array<double, 4> x;
  std::vector<double> z, r, hr, c, h;
};

struct GruForward {
  std::vector<GruStepCache> steps;
  std::vector<double> y;  // raw readout, before the sanity clamp
};

// out += M * v, with M stored row-major (rows x cols).
inline void matvec_acc(const double* m, const double* v, double* out, int rows,
                       int cols) {
  for (int i = 0; i < rows; ++i) {
    double acc = 0.0;
    const double* row = m + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) acc += row[j] * v[j];
    out[i] += acc;
  }
}

// out += M^T * v (M is rows x cols, v has `rows` entries, out has `cols`).
inline void matvec_t_acc(const double* m, const double* v, double* out,
                         int rows, int cols) {
  for (int i = 0; i < rows; ++i) {
    const double* row = m + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) out[j] += row[j] * v[i];
  }
}

// grad(M) += a * b^T for the outer-product weight updates.
inline void outer_acc(double* gm, const double* a, const double* b, int rows,
                      int cols) {
  for (int i = 0; i < rows; ++i) {
    double* row = gm + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) row[j] += a[i] * b[j];
  }
}

inline GruForward gru_forward(const GruModel& m, const PredictorWindow& w) {
  const int h = m.hidden_size;
  const int in = m.input_size;
  const double* p = m.params.data();

  GruForward f;
  f.steps.reserve(w.rows.size());
  std::vector<double> hidden(static_cast<std::size_t>(h), 0.0);

  for (const FeatureRow& row : w.rows) {
    GruStepCache s;
    s.x = m.normalize(row);
    s.z.assign(static_cast<std::size_t>(h), 0.0);
    s.r.assign(static_cast<std::size_t>(h), 0.0);
    s.hr.assign(static_cast<std::size_t>(h), 0.0);
    s.c.assign(static_cast<std::size_t>(h), 0.0);
    s.h.assign(static_cast<std::size_t>(h), 0.0);

    // pre-activations
    std::vector<double> az(static_cast<std::size_t>(h), 0.0);
    std::vector<double> ar(static_cast<std::size_t>(h), 0.0);
    for (int i = 0; i < h; ++i) {
      az[static_cast<std::size_t>(i)] = p[m.off_b(0) + i];
      ar[static_cast<std::size_t>(i)] = p[m.off_b(1) + i];
    }
    matvec_acc(p + m.off_w(0), s.x.data(), az.data(), h, in);
    matvec_acc(p + m.off_u(0), hidden.data(), az.data(), h, h);
    matvec_acc(p + m.off_w(1), s.x.data(), ar.data(), h, in);
    matvec_acc(p + m.off_u(1), hidden.data(), ar.data(), h, h);
    for (int i = 0; i < h; ++i) {
      s.z[static_cast<std::size_t>(i)] = sigmoid(az[static_cast<std::size_t>(i)]);
      s.r[static_cast<std::size_t>(i)] = sigmoid(ar[static_cast<std::size_t>(i)]);
      s.hr[static_cast<std::size_t>(i)] =
          s.r[static_cast<std::size_t>(i)] * hidden[static_cast<std::size_t>(i)];
    }

    std::vector<double> ac(static_cast<std::size_t>(h), 0.0);
    for (int i = 0; i < h; ++i) ac[static_cast<std::size_t>(i)] = p[m.off_b(2) + i];
    matvec_acc(p + m.off_w(2), s.x.data(), ac.data(), h, in);
    matvec_acc(p + m.off_u(2), s.hr.data(), ac.data(), h, h);
    for (int i = 0; i < h; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      s.c[ii] = std::tanh(ac[ii]);
      s.h[ii] = s.z[ii] * hidden[ii] + (1.0 - s.z[ii]) * s.c[ii];
    }
    hidden = s.h;
    f.steps.push_back(std::move(s));
  }

  f.y.assign(static_cast<std::size_t>(m.horizon), 0.0);
  for (int j = 0; j < m.horizon; ++j)
    f.y[static_cast<std::size_t>(j)] = p[m.off_bout() + j];
  matvec_acc(p + m.off_wout(), hidden.data(), f.y.data(), m.horizon, h);
  return f;
}

/// Backpropagate d(loss)/dy through the cached forward pass, accumulating
/// parameter gradients into `grad` (same layout as model.params).
inline void gru_backward(const GruModel& m, const GruForward& f,
                         const std::vector<double>& dy,
                         std::vector<double>& grad) {
  const int h = m.hidden_size;
  const int in = m.input_size;
  const double* p = m.params.data();
  double* g = grad.data();
  const std::size_t steps = f.steps.size();

  const std::vector<double>& h_last = f.steps.back().h;
  outer_acc(g + m.off_wout(), dy.data(), h_last.data(), m.horizon, h);
  for (int j = 0; j < m.horizon; ++j)
    g[m.off_bout() + j] += dy[static_cast<std::size_t>(j)];

  std::vector<double> gh(static_cast<std::size_t>(h), 0.0);
  matvec_t_acc(p + m.off_wout(), dy.data(), gh.data(), m.horizon, h);

  std::vector<double> gz(static_cast<std::size_t>(h));
  std::vector<double> gc(static_cast<std::size_t>(h));
  std::vector<double> gh_prev(static_cast<std::size_t>(h));
  std::vector<double> ga(static_cast<std::size_t>(h));
  std::vector<double> ghr(static_cast<std::size_t>(h));
  const std::vector<double> zeros(static_cast<std::size_t>(h), 0.0);

  for (std::size_t t = steps; t-- > 0;) {
    const GruStepCache& s = f.steps[t];
    const std::vector<double>& h_prev = t > 0 ? f.steps[t - 1].h : zeros;

    for (int i = 0; i < h; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      gz[ii] = gh[ii] * (h_prev[ii] - s.c[ii]);
      gc[ii] = gh[ii] * (1.0 - s.z[ii]);
      gh_prev[ii] = gh[ii] * s.z[ii];
    }

    // candidate: c = tanh(Wc x + Uc hr + bc)
    for (int i = 0; i < h; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      ga[ii] = gc[ii] * (1.0 - s.c[ii] * s.c[ii]);
    }
    outer_acc(g + m.off_w(2), ga.data(), s.x.data(), h, in);
    outer_acc(g + m.off_u(2), ga.data(), s.hr.data(), h, h);
    for (int i = 0; i < h; ++i) g[m.off_b(2) + i] += ga[static_cast<std::size_t>(i)];
    std::fill(ghr.begin(), ghr.end(), 0.0);
    matvec_t_acc(p + m.off_u(2), ga.data(), ghr.data(), h, h);
    for (int i = 0; i < h; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      gh_prev[ii] += ghr[ii] * s.r[ii];
    }

    // reset gate: r = sigmoid(Wr x + Ur h_prev + br), feeds hr = r .* h_prev
    for (int i = 0; i < h; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      ga[ii] = ghr[ii] * h_prev[ii] * s.r[ii] * (1.0 - s.r[ii]);
    }
    outer_acc(g + m.off_w(1), ga.data(), s.x.data(), h, in);
    outer_acc(g + m.off_u(1), ga.data(), h_prev.data(), h, h);
    for (int i = 0; i < h; ++i) g[m.off_b(1) + i] += ga[static_cast<std::size_t>(i)];
    matvec_t_acc(p + m.off_u(1), ga.data(), gh_prev.data(), h, h);

    // update gate: z = sigmoid(Wz x + Uz h_prev + bz)
    for (int i = 0; i < h; ++i) {
      const std::size_t ii = static_cast<std::size_t>(i);
      ga[ii] = gz[ii] * s.z[ii] * (1.0 - s.z[ii]);
    }
    outer_acc(g + m.off_w(0), ga.data(), s.x.data(), h, in);
    outer_acc(g + m.off_u(0), ga.data(), h_prev.data(), h, h);
    for (int i = 0; i < h; ++i) g[m.off_b(0) + i] += ga[static_cast<std::size_t>(i)];
    matvec_t_acc(p + m.off_u(0), ga.data(), gh_prev.data(), h, h);

    gh = gh_prev;
  }
}

}  // namespace detail

/// Run the trained model over a complete window. The output is softly
/// clamped to the model's sanity band, which is wider than the actuator
/// range: predictions are allowed to exceed what the vehicle can do.
inline Plan predict_gru(const GruModel& m, const PredictorWindow& w) {
  if (!m.trained)
    throw ModelNotReady("predict_gru: model has not been trained or loaded");
  detail::require(static_cast<int>(w.rows.size()) == m.history,
                  "predict_gru: window must hold exactly H rows");
  const detail::GruForward f = detail::gru_forward(m, w);
  Plan plan;
  plan.accels.reserve(f.y.size());
  for (double y : f.y)
    plan.accels.push_back(std::clamp(y, m.out_lo, m.out_hi));
  return plan;
}

// ---------------------------------------------------------------------------
// Dataset and training
// ---------------------------------------------------------------------------

struct TrainingPair {
  PredictorWindow window;
  std::vector<double> target;  // executed AV accelerations, length N
};

struct Dataset {
  std::vector<TrainingPair> train;
  std::vector<TrainingPair> val;
  std::size_t size() const { return train.size() + val.size(); }
};

/// Slice logged interaction features into (window -> next N accelerations)
/// pairs with stride 1. Each trajectory is split chronologically, first 80%
/// of its pairs for training and the remainder for validation.
inline Dataset build_dataset(
    const std::vector<std::vector<FeatureRow>>& trajectories, int h, int n) {
  detail::require(h >= 1 && n >= 1, "build_dataset: H and N must be >= 1");
  if (trajectories.empty())
    throw ContractViolation("build_dataset: no trajectories supplied");

  Dataset ds;
  const std::size_t need =
      static_cast<std::size_t>(h) + static_cast<std::size_t>(n);
  for (std::size_t li = 0; li < trajectories.size(); ++li) {
    const auto& rows = trajectories[li];
    if (rows.size() < need)
      throw ContractViolation(
          "build_dataset: trajectory " + std::to_string(li) + " has " +
          std::to_string(rows.size()) + " rows, need at least " +
          std::to_string(need));
    const std::size_t pairs = rows.size() - need + 1;
    const std::size_t n_train = std::max<std::size_t>(1, pairs * 4 / 5);
    for (std::size_t i = 0; i < pairs; ++i) {
      TrainingPair tp;
      tp.window.rows.assign(rows.begin() + static_cast<std::ptrdiff_t>(i),
                            rows.begin() + static_cast<std::ptrdiff_t>(i + h));
      tp.target.reserve(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k)
        tp.target.push_back(rows[i + static_cast<std::size_t>(h + k)].u_av);
      (i < n_train ? ds.train : ds.val).push_back(std::move(tp));
    }
  }
  return ds;
}

struct TrainConfig {
  int epochs = 100;
  double learning_rate = 1e-3;
  int batch_size = 64;
  std::uint64_t seed = 42;
  int patience = 10;  // early stop after this many epochs without val gain
};

struct LossTrace {
  std::vector<double> train;
  std::vector<double> val;
};

namespace detail {

inline double mse_over(const GruModel& m,
                       const std::vector<TrainingPair>& pairs) {
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (const TrainingPair& tp : pairs) {
    const GruForward f = gru_forward(m, tp.window);
    double s = 0.0;
    for (std::size_t j = 0; j < f.y.size(); ++j) {
      const double d = f.y[j] - tp.target[j];
      s += d * d;
    }
    total += s / static_cast<double>(f.y.size());
  }
  return total / static_cast<double>(pairs.size());
}

}  // namespace detail

/// Fit the model to the dataset by minimizing the mean squared error of the
/// N-step acceleration outputs. Adaptive-moment gradient descent over the
/// flat parameter vector; deterministic for a fixed seed. Freezes the
/// feature normalization statistics from the training split and returns the
/// per-epoch loss trace. The parameters with the best validation loss seen
/// are kept.
inline LossTrace train_gru(GruModel& m, const Dataset& data,
                           const TrainConfig& cfg) {
  if (data.train.empty())
    throw ContractViolation("train_gru: empty training set");
  detail::require(cfg.epochs >= 0 && cfg.batch_size >= 1,
                  "train_gru: bad config");
  for (const TrainingPair& tp : data.train)
    detail::require(static_cast<int>(tp.target.size()) == m.horizon &&
                        static_cast<int>(tp.window.rows.size()) == m.history,
                    "train_gru: pair shape does not match model");

  LossTrace trace;
  if (cfg.epochs == 0) return trace;

  // Freeze normalization stats from the training windows.
  std::array<double, 4> mean{}, var{};
  std::size_t count = 0;
  for (const TrainingPair& tp : data.train)
    for (const FeatureRow& r : tp.window.rows) {
      for (std::size_t i = 0; i < 4; ++i) mean[i] += r[i];
      ++count;
    }
  for (std::size_t i = 0; i < 4; ++i) mean[i] /= static_cast<double>(count);
  for (const TrainingPair& tp : data.train)
    for (const FeatureRow& r : tp.window.rows)
      for (std::size_t i = 0; i < 4; ++i) {
        const double d = r[i] - mean[i];
        var[i] += d * d;
      }
  for (std::size_t i = 0; i < 4; ++i) {
    m.feat_mean[i] = mean[i];
    m.feat_std[i] =
        std::max(std::sqrt(var[i] / static_cast<double>(count)), 1e-8);
  }

  if (m.params.empty()) m.params.assign(m.param_count(), 0.0);
  m.init_weights(cfg.seed);

  // Adam state
  const std::size_t np = m.params.size();
  std::vector<double> mom(np, 0.0), vel(np, 0.0), grad(np, 0.0);
  const double b1 = 0.9, b2 = 0.999, adam_eps = 1e-8;
  double b1t = 1.0, b2t = 1.0;

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(data.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const bool have_val = !data.val.empty();
  double best_monitor = std::numeric_limits<double>::infinity();
  std::vector<double> best_params = m.params;
  int stale = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t seen = 0;

    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;

      for (std::size_t bi = start; bi < stop; ++bi) {
        const TrainingPair& tp = data.train[order[bi]];
        const detail::GruForward f = detail::gru_forward(m, tp.window);
        std::vector<double> dy(f.y.size());
        double s = 0.0;
        for (std::size_t j = 0; j < f.y.size(); ++j) {
          const double d = f.y[j] - tp.target[j];
          s += d * d;
          dy[j] = 2.0 * d / static_cast<double>(f.y.size());
        }
        batch_loss += s / static_cast<double>(f.y.size());
        detail::gru_backward(m, f, dy, grad);
      }

      const double inv = 1.0 / static_cast<double>(stop - start);
      batch_loss *= inv;
      if (!std::isfinite(batch_loss))
        throw TrainingDiverged("train_gru: non-finite loss at epoch " +
                               std::to_string(epoch));
      epoch_loss += batch_loss * static_cast<double>(stop - start);
      seen += stop - start;

      b1t *= b1;
      b2t *= b2;
      for (std::size_t i = 0; i < np; ++i) {
        const double gi = grad[i] * inv;
        mom[i] = b1 * mom[i] + (1.0 - b1) * gi;
        vel[i] = b2 * vel[i] + (1.0 - b2) * gi * gi;
        const double mhat = mom[i] / (1.0 - b1t);
        const double vhat = vel[i] / (1.0 - b2t);
        m.params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + adam_eps);
      }
    }

    const double train_loss = epoch_loss / static_cast<double>(seen);
    const double val_loss =
        have_val ? detail::mse_over(m, data.val) : train_loss;
    trace.train.push_back(train_loss);
    trace.val.push_back(val_loss);
    if (!std::isfinite(val_loss))
      throw TrainingDiverged("train_gru: non-finite validation loss at epoch " +
                             std::to_string(epoch));

    const double monitor = val_loss;
    if (monitor < best_monitor - 1e-12) {
      best_monitor = monitor;
      best_params = m.params;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }

  m.params = best_params;
  m.trained = true;
  return trace;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Text model format, version-tagged and self-describing; doubles are
/// written with 17 significant digits so save/load round-trips exactly.
inline void save_gru(const GruModel& m, std::ostream& out) {
  out << "tacf-gru-model v1\n";
  out << "input " << m.input_size << "\n";
  out << "hidden " << m.hidden_size << "\n";
  out << "horizon " << m.horizon << "\n";
  out << "history " << m.history << "\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  out << "out_band ";
  put(m.out_lo);
  out << " ";
  put(m.out_hi);
  out << "\nmean";
  for (double v : m.feat_mean) {
    out << " ";
    put(v);
  }
  out << "\nstd";
  for (double v : m.feat_std) {
    out << " ";
    put(v);
  }
  out << "\nparams " << m.params.size() << "\n";
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    put(m.params[i]);
    out << ((i + 1) % 8 == 0 ? "\n" : " ");
  }
  if (m.params.size() % 8 != 0) out << "\n";
}

inline void save_gru_file(const GruModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  save_gru(m, out);
}

inline GruModel load_gru(std::istream& in) {
  std::string magic, version;
  in >> magic >> version;
  if (magic != "tacf-gru-model" || version != "v1")
    throw std::runtime_error("not a tacf-gru-model v1 file");
  GruModel m;
  std::string key;
  std::size_t nparams = 0;
  auto expect = [&](const char* want) {
    in >> key;
    if (key != want)
      throw std::runtime_error(std::string("model file: expected '") + want +
                               "', got '" + key + "'");
  };
  expect("input");
  in >> m.input_size;
  expect("hidden");
  in >> m.hidden_size;
  expect("horizon");
  in >> m.horizon;
  expect("history");
  in >> m.history;
  expect("out_band");
  in >> m.out_lo >> m.out_hi;
  expect("mean");
  for (double& v : m.feat_mean) in >> v;
  expect("std");
  for (double& v : m.feat_std) in >> v;
  expect("params");
  in >> nparams;
  if (!in || nparams != m.param_count())
    throw std::runtime_error("model file: parameter count mismatch");
  m.params.resize(nparams);
  for (double& v : m.params) in >> v;
  if (!in) throw std::runtime_error("model file: truncated parameter block");
  for (double s : m.feat_std)
    if (!(s > 0.0))
      throw std::runtime_error("model file: non-positive feature std");
  m.trained = true;
  return m;
}

inline GruModel load_gru_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  return load_gru(in);
}

}  // namespace tacf
