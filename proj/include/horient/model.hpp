#pragma once

#include <Eigen/Core>
#include <cmath>
#include <utility>
#include <vector>

#include "horient/circular.hpp"
#include "horient/errors.hpp"
#include "horient/heatmap.hpp"
#include "horient/rng.hpp"
#include "horient/skeleton.hpp"

namespace horient {

template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using RowArr = Eigen::Array<S, 1, Eigen::Dynamic>;

/// Architecture of the orientation regressor: a small tanh MLP over flattened
/// joint triplets with three heads sharing the trunk
///   orientation: linear -> softmax over 72 bins
///   confidence:  linear -> sigmoid, clamped away from 0 and 1
///   keypoints:   linear, one value per heatmap pixel
struct ModelConfig {
  int joints = kNumJoints;  // 17 drops the foot joints
  std::vector<int> hidden = {128, 128};
  int heatmap_w = 16;
  int heatmap_h = 16;

  int input_size() const { return joints * 3; }
  int heatmap_size() const { return joints * heatmap_w * heatmap_h; }

  void validate() const {
    if (joints < 1 || joints > kNumJoints) {
      throw ModelConfigError("joint count must be in [1, 23]");
    }
    if (hidden.empty()) throw ModelConfigError("need at least one hidden layer");
    for (int h : hidden) {
      if (h < 1) throw ModelConfigError("hidden widths must be positive");
    }
    if (heatmap_w < 1 || heatmap_h < 1) {
      throw ModelConfigError("heatmap dimensions must be positive");
    }
  }

  friend bool operator==(const ModelConfig& a, const ModelConfig& b) {
    return a.joints == b.joints && a.hidden == b.hidden &&
           a.heatmap_w == b.heatmap_w && a.heatmap_h == b.heatmap_h;
  }
};

template <class S>
struct Dense {
  MatX<S> w;
  VecX<S> b;
};

inline constexpr double kConfClamp = 1e-7;

template <class S>
struct ModelParams {
  using value_type = S;

  ModelConfig config;
  std::vector<Dense<S>> trunk;
  Dense<S> orient;
  Dense<S> conf;
  Dense<S> heatmap;

  /// Xavier-uniform weights, zero biases; layers filled in declaration
  /// order, each matrix row-major, all draws from one "init" stream.
  static ModelParams init(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    ModelParams p;
    p.config = cfg;
    Rng rng(seed, "init");
    auto fill = [&rng](Dense<S>& d, int rows, int cols) {
      d.w.resize(rows, cols);
      d.b = VecX<S>::Zero(rows);
      const double limit = std::sqrt(6.0 / (rows + cols));
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          d.w(r, c) = static_cast<S>(rng.uniform(-limit, limit));
        }
      }
    };
    int in = cfg.input_size();
    for (int h : cfg.hidden) {
      Dense<S> d;
      fill(d, h, in);
      p.trunk.push_back(std::move(d));
      in = h;
    }
    fill(p.orient, kNumBins, in);
    fill(p.conf, 1, in);
    fill(p.heatmap, cfg.heatmap_size(), in);
    return p;
  }

  /// Same shapes as *this, all entries zero. Used as a gradient container.
  ModelParams zeros_like() const {
    ModelParams z;
    z.config = config;
    z.trunk.resize(trunk.size());
    for (std::size_t k = 0; k < trunk.size(); ++k) {
      z.trunk[k].w = MatX<S>::Zero(trunk[k].w.rows(), trunk[k].w.cols());
      z.trunk[k].b = VecX<S>::Zero(trunk[k].b.size());
    }
    auto zd = [](const Dense<S>& d) {
      return Dense<S>{MatX<S>::Zero(d.w.rows(), d.w.cols()),
                      VecX<S>::Zero(d.b.size())};
    };
    z.orient = zd(orient);
    z.conf = zd(conf);
    z.heatmap = zd(heatmap);
    return z;
  }

  template <class T>
  ModelParams<T> cast() const {
    ModelParams<T> o;
    o.config = config;
    o.trunk.resize(trunk.size());
    for (std::size_t k = 0; k < trunk.size(); ++k) {
      o.trunk[k].w = trunk[k].w.template cast<T>();
      o.trunk[k].b = trunk[k].b.template cast<T>();
    }
    o.orient = {orient.w.template cast<T>(), orient.b.template cast<T>()};
    o.conf = {conf.w.template cast<T>(), conf.b.template cast<T>()};
    o.heatmap = {heatmap.w.template cast<T>(), heatmap.b.template cast<T>()};
    return o;
  }

  /// Visits (name, Dense&) pairs in a fixed order shared by the optimizer,
  /// the checkpoint format and the gradient check.
  template <class F>
  void for_each_layer(F&& f) {
    for (std::size_t k = 0; k < trunk.size(); ++k) {
      f("trunk" + std::to_string(k), trunk[k]);
    }
    f(std::string("orient"), orient);
    f(std::string("conf"), conf);
    f(std::string("heatmap"), heatmap);
  }
  template <class F>
  void for_each_layer(F&& f) const {
    for (std::size_t k = 0; k < trunk.size(); ++k) {
      f("trunk" + std::to_string(k), trunk[k]);
    }
    f(std::string("orient"), orient);
    f(std::string("conf"), conf);
    f(std::string("heatmap"), heatmap);
  }

  void validate() const {
    config.validate();
    if (trunk.size() != config.hidden.size()) {
      throw ModelConfigError("trunk depth does not match config");
    }
    int in = config.input_size();
    for (std::size_t k = 0; k < trunk.size(); ++k) {
      if (trunk[k].w.rows() != config.hidden[k] || trunk[k].w.cols() != in ||
          trunk[k].b.size() != config.hidden[k]) {
        throw ModelConfigError("trunk layer " + std::to_string(k) +
                               " has inconsistent shape");
      }
      in = config.hidden[k];
    }
    auto check_head = [in](const Dense<S>& d, int rows, const char* name) {
      if (d.w.rows() != rows || d.w.cols() != in || d.b.size() != rows) {
        throw ModelConfigError(std::string("head '") + name +
                               "' has inconsistent shape");
      }
    };
    check_head(orient, kNumBins, "orient");
    check_head(conf, 1, "conf");
    check_head(heatmap, config.heatmap_size(), "heatmap");
    bool finite = true;
    for_each_layer([&finite](const std::string&, const Dense<S>& d) {
      finite = finite && d.w.allFinite() && d.b.allFinite();
    });
    if (!finite) throw ModelConfigError("parameters contain non-finite values");
  }
};

/// Joint triplets (x, y, visible) flattened in joint order; hidden joints
/// contribute (0, 0, 0).
template <class S>
VecX<S> input_from_skeleton(const Skeleton23& skel, int joints) {
  VecX<S> x = VecX<S>::Zero(3 * joints);
  for (int j = 0; j < joints; ++j) {
    const Joint& jt = skel.joints[j];
    if (!jt.visible) continue;
    x[3 * j + 0] = static_cast<S>(jt.x);
    x[3 * j + 1] = static_cast<S>(jt.y);
    x[3 * j + 2] = S(1);
  }
  return x;
}

/// Batched forward pass over columns. Keeps every activation for backward.
template <class S>
struct BatchForward {
  std::vector<MatX<S>> acts;  // acts[0] = input, acts[k+1] = trunk k output
  MatX<S> p_hat;              // 72 x B
  RowArr<S> conf_raw;         // sigmoid output before clamping
  RowArr<S> conf;             // clamped confidence
  MatX<S> h_hat;              // heatmap_size x B
};

/// `with_heatmap` skips the (large) keypoint head for eval-only passes; the
/// orientation and confidence outputs are unaffected.
template <class S>
BatchForward<S> forward_batch(const ModelParams<S>& m, MatX<S> input,
                              bool with_heatmap = true) {
  BatchForward<S> f;
  f.acts.reserve(m.trunk.size() + 1);
  f.acts.push_back(std::move(input));
  for (const auto& layer : m.trunk) {
    MatX<S> z = (layer.w * f.acts.back()).colwise() + layer.b;
    f.acts.push_back(z.array().tanh().matrix());
  }
  const MatX<S>& t = f.acts.back();
  const Eigen::Index b = t.cols();

  MatX<S> logits = (m.orient.w * t).colwise() + m.orient.b;
  f.p_hat.resize(kNumBins, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    auto col = logits.col(j).array();
    Dist<S> e = (col - col.maxCoeff()).exp();
    f.p_hat.col(j) = e / e.sum();
  }

  RowArr<S> u = ((m.conf.w * t).colwise() + m.conf.b).row(0).array();
  f.conf_raw = S(1) / (S(1) + (-u).exp());
  f.conf = f.conf_raw.max(S(kConfClamp)).min(S(1) - S(kConfClamp));

  if (with_heatmap) f.h_hat = (m.heatmap.w * t).colwise() + m.heatmap.b;
  return f;
}

template <class S>
struct Prediction {
  OrientationDeg orientation;
  double confidence = 0.0;
  Dist<S> p_hat;
};

template <class S>
Prediction<S> predict(const ModelParams<S>& m, const Skeleton23& skel) {
  if (skel.visible_count() == 0) {
    throw InvalidInputError("cannot predict from a skeleton with no visible joints");
  }
  MatX<S> x = input_from_skeleton<S>(skel, m.config.joints);
  BatchForward<S> f = forward_batch(m, std::move(x));
  Prediction<S> out;
  out.p_hat = f.p_hat.col(0);
  out.orientation = decode_orientation(out.p_hat);
  out.confidence = static_cast<double>(f.conf(0));
  return out;
}

struct LossBreakdown {
  double l_p_prime = 0.0;
  double l_c = 0.0;
  double l_kpt = 0.0;
  double lambda = 0.0;
  double total = 0.0;
};

/// The loss couples the orientation head to the confidence head by scoring
/// the interpolated distribution p' = c * p_hat + (1 - c) * p against the
/// target p, so a low confidence shrinks the orientation penalty while
/// -log(c) pushes confidence back up. The keypoint term is the mean squared
/// heatmap error. Per sample:
///   total = ||p' - p||^2 + lambda * (-log c) + ||h_hat - h||^2 / (N W H)
/// Batch values are means over the columns.
template <class S>
LossBreakdown batch_loss(const BatchForward<S>& f, const MatX<S>& target_p,
                         const MatX<S>& target_h, double lambda) {
  const Eigen::Index b = f.p_hat.cols();
  if (target_p.cols() != b || target_h.cols() != b) {
    throw InvalidInputError("target batch size mismatch");
  }
  const double inv_px = 1.0 / static_cast<double>(f.h_hat.rows());
  LossBreakdown out;
  out.lambda = lambda;
  for (Eigen::Index j = 0; j < b; ++j) {
    const double c = static_cast<double>(f.conf(j));
    const double d2 =
        (f.p_hat.col(j) - target_p.col(j)).template cast<double>().squaredNorm();
    out.l_p_prime += c * c * d2;
    out.l_c += -std::log(c);
    out.l_kpt += (f.h_hat.col(j) - target_h.col(j))
                     .template cast<double>()
                     .squaredNorm() *
                 inv_px;
  }
  const double inv_b = 1.0 / static_cast<double>(b);
  out.l_p_prime *= inv_b;
  out.l_c *= inv_b;
  out.l_kpt *= inv_b;
  out.total = out.l_p_prime + lambda * out.l_c + out.l_kpt;
  return out;
}

/// Analytic gradients of the mean batch loss. `grads` must be zeros_like
/// the parameters; weight decay is left to the optimizer.
template <class S>
LossBreakdown backward_batch(const ModelParams<S>& m, const BatchForward<S>& f,
                             const MatX<S>& target_p, const MatX<S>& target_h,
                             double lambda, ModelParams<S>& grads) {
  LossBreakdown loss = batch_loss(f, target_p, target_h, lambda);
  const Eigen::Index b = f.p_hat.cols();
  const S inv_b = S(1) / static_cast<S>(b);
  const S lam = static_cast<S>(lambda);

  // orientation head: d total / d p_hat = 2 c^2 (p_hat - p), then through
  // the column softmax
  MatX<S> g_logits(kNumBins, b);
  RowArr<S> g_u(b);
  for (Eigen::Index j = 0; j < b; ++j) {
    const S c = f.conf(j);
    Dist<S> d = f.p_hat.col(j) - target_p.col(j);
    Dist<S> gp = (S(2) * c * c * inv_b) * d;
    const S dot = f.p_hat.col(j).dot(gp);
    g_logits.col(j) =
        (f.p_hat.col(j).array() * (gp.array() - dot)).matrix();

    // confidence head: d total / d c = 2 c ||d||^2 - lambda / c, zero when
    // the sigmoid output was clamped
    const S raw = f.conf_raw(j);
    S dc_du = (raw == c) ? raw * (S(1) - raw) : S(0);
    g_u(j) = (S(2) * c * d.squaredNorm() - lam / c) * dc_du * inv_b;
  }

  MatX<S> g_h = (S(2) * inv_b / static_cast<S>(f.h_hat.rows())) *
                (f.h_hat - target_h);

  const MatX<S>& t = f.acts.back();
  grads.orient.w.noalias() += g_logits * t.transpose();
  grads.orient.b += g_logits.rowwise().sum();
  grads.conf.w.noalias() += g_u.matrix() * t.transpose();
  grads.conf.b[0] += g_u.sum();
  grads.heatmap.w.noalias() += g_h * t.transpose();
  grads.heatmap.b += g_h.rowwise().sum();

  MatX<S> g_act = m.orient.w.transpose() * g_logits;
  g_act.noalias() += m.conf.w.transpose() * g_u.matrix();
  g_act.noalias() += m.heatmap.w.transpose() * g_h;

  for (int k = static_cast<int>(m.trunk.size()) - 1; k >= 0; --k) {
    const MatX<S>& a = f.acts[k + 1];
    MatX<S> g_z = (g_act.array() * (S(1) - a.array().square())).matrix();
    grads.trunk[k].w.noalias() += g_z * f.acts[k].transpose();
    grads.trunk[k].b += g_z.rowwise().sum();
    if (k > 0) g_act = m.trunk[k].w.transpose() * g_z;
  }
  return loss;
}

}  // namespace horient
