#include "horient/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "horient/format.hpp"
#include "horient/heatmap.hpp"
#include "horient/rng.hpp"

namespace horient {

void TrainConfig::validate() const {
  model_config().validate();
  if (!(heatmap_sigma > 0.0)) throw ConfigError("heatmap_sigma must be positive");
  if (!(sigma_bins > 0.0)) throw ConfigError("sigma_bins must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be non-negative and finite");
  }
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be non-negative");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (!(lambda_init > 0.0)) throw ConfigError("lambda_init must be positive");
  if (!(lambda_beta >= 0.0)) throw ConfigError("lambda_beta must be non-negative");
  if (!(lambda_gamma >= 0.0)) throw ConfigError("lambda_gamma must be non-negative");
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw ConfigError("val_fraction must be in [0, 1)");
  }
  if (dtype != "f32" && dtype != "f64") {
    throw ConfigError("dtype must be f32 or f64");
  }
}

double update_lambda(double lambda, double batch_l_c, double beta,
                     double gamma) {
  double next = batch_l_c > beta ? lambda * (1.0 + gamma) : lambda / (1.0 + gamma);
  return std::clamp(next, 1e-4, 10.0);
}

namespace {

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;
};

template <class S>
void adamw_step(ModelParams<S>& params, ModelParams<S>& grads,
                ModelParams<S>& m1, ModelParams<S>& m2, AdamState& st,
                double lr, double wd) {
  ++st.t;
  const S b1 = static_cast<S>(st.beta1);
  const S b2 = static_cast<S>(st.beta2);
  const S bc1 = static_cast<S>(1.0 - std::pow(st.beta1, st.t));
  const S bc2 = static_cast<S>(1.0 - std::pow(st.beta2, st.t));
  const S eps = static_cast<S>(st.eps);
  const S slr = static_cast<S>(lr);
  const S swd = static_cast<S>(wd);

  auto update = [&](auto& w, auto& g, auto& m, auto& v, bool decay) {
    m = b1 * m + (S(1) - b1) * g;
    v.array() = b2 * v.array() + (S(1) - b2) * g.array().square();
    if (decay) {
      w.array() -= slr * ((m.array() / bc1) / ((v.array() / bc2).sqrt() + eps) +
                          swd * w.array());
    } else {
      w.array() -= slr * ((m.array() / bc1) / ((v.array() / bc2).sqrt() + eps));
    }
  };

  for (std::size_t k = 0; k < params.trunk.size(); ++k) {
    update(params.trunk[k].w, grads.trunk[k].w, m1.trunk[k].w, m2.trunk[k].w, true);
    update(params.trunk[k].b, grads.trunk[k].b, m1.trunk[k].b, m2.trunk[k].b, false);
  }
  update(params.orient.w, grads.orient.w, m1.orient.w, m2.orient.w, true);
  update(params.orient.b, grads.orient.b, m1.orient.b, m2.orient.b, false);
  update(params.conf.w, grads.conf.w, m1.conf.w, m2.conf.w, true);
  update(params.conf.b, grads.conf.b, m1.conf.b, m2.conf.b, false);
  update(params.heatmap.w, grads.heatmap.w, m1.heatmap.w, m2.heatmap.w, true);
  update(params.heatmap.b, grads.heatmap.b, m1.heatmap.b, m2.heatmap.b, false);
}

template <class S>
TrainOutput train_impl(const Dataset& data, const TrainConfig& cfg) {
  const ModelConfig mc = cfg.model_config();
  const Eigen::Index n = static_cast<Eigen::Index>(data.samples.size());
  const Eigen::Index in_size = mc.input_size();
  const Eigen::Index hm_size = mc.heatmap_size();

  // per-sample inputs, bin targets and occlusion-free target skeletons
  MatX<S> inputs(in_size, n);
  MatX<S> dists(kNumBins, n);
  std::vector<Skeleton23> target_skels(n);
  std::vector<OrientationDeg> gts(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sample& s = data.samples[i];
    inputs.col(i) = input_from_skeleton<S>(s.skeleton, mc.joints);
    dists.col(i) = circular_gaussian(deg_to_bin(s.gt_orientation),
                                     cfg.sigma_bins)
                       .cast<S>();
    target_skels[i] =
        synthesize(s.gt_orientation, OcclusionMode::full(),
                   data.header.noise_sigma, sample_seed(data.header.seed, s.id),
                   s.id)
            .skeleton;
    gts[i] = s.gt_orientation;
  }

  // deterministic validation split
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  {
    Rng split_rng(cfg.seed, "val_split");
    for (Eigen::Index i = n - 1; i > 0; --i) {
      std::swap(order[i], order[split_rng.uniform_int(i + 1)]);
    }
  }
  Eigen::Index n_val = static_cast<Eigen::Index>(
      std::llround(cfg.val_fraction * static_cast<double>(n)));
  n_val = std::min(n_val, n - 1);
  std::vector<Eigen::Index> val_idx(order.begin(), order.begin() + n_val);
  std::vector<Eigen::Index> train_idx(order.begin() + n_val, order.end());

  auto params = ModelParams<S>::init(mc, cfg.seed);
  auto grads = params.zeros_like();
  auto m1 = params.zeros_like();
  auto m2 = params.zeros_like();
  AdamState adam;

  const Eigen::Index bmax = std::min<Eigen::Index>(cfg.batch_size,
                                                   train_idx.size());
  MatX<S> bx(in_size, bmax), bp(kNumBins, bmax), bh(hm_size, bmax);

  double lambda = cfg.lambda_init;
  TrainOutput out;
  const S hm_sigma = static_cast<S>(cfg.heatmap_sigma);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng(cfg.seed, "shuffle", epoch);
    for (Eigen::Index i = static_cast<Eigen::Index>(train_idx.size()) - 1;
         i > 0; --i) {
      std::swap(train_idx[i], train_idx[shuffle_rng.uniform_int(i + 1)]);
    }

    double sum_lp = 0.0, sum_lc = 0.0, sum_lkpt = 0.0;
    for (std::size_t start = 0; start < train_idx.size();
         start += cfg.batch_size) {
      const Eigen::Index b = std::min<Eigen::Index>(
          cfg.batch_size, train_idx.size() - start);
      for (Eigen::Index j = 0; j < b; ++j) {
        const Eigen::Index i = train_idx[start + j];
        bx.col(j) = inputs.col(i);
        bp.col(j) = dists.col(i);
        write_heatmaps<S>(target_skels[i], mc.joints, mc.heatmap_w,
                          mc.heatmap_h, hm_sigma, bh.col(j));
      }
      auto xb = bx.leftCols(b);
      auto f = forward_batch(params, MatX<S>(xb));
      grads.for_each_layer([](const std::string&, Dense<S>& d) {
        d.w.setZero();
        d.b.setZero();
      });
      LossBreakdown loss = backward_batch(
          params, f, MatX<S>(bp.leftCols(b)), MatX<S>(bh.leftCols(b)), lambda,
          grads);
      if (!std::isfinite(loss.total)) throw TrainingDivergedError(epoch);
      adamw_step(params, grads, m1, m2, adam, cfg.learning_rate,
                 cfg.weight_decay);
      lambda = update_lambda(lambda, loss.l_c, cfg.lambda_beta,
                             cfg.lambda_gamma);
      sum_lp += loss.l_p_prime * b;
      sum_lc += loss.l_c * b;
      sum_lkpt += loss.l_kpt * b;
    }

    EpochStats st;
    st.epoch = epoch;
    const double inv_n = 1.0 / static_cast<double>(train_idx.size());
    st.loss.l_p_prime = sum_lp * inv_n;
    st.loss.l_c = sum_lc * inv_n;
    st.loss.l_kpt = sum_lkpt * inv_n;
    st.loss.lambda = lambda;
    st.loss.total = st.loss.l_p_prime + lambda * st.loss.l_c + st.loss.l_kpt;

    if (!val_idx.empty()) {
      std::size_t hits = 0;
      double err_sum = 0.0;
      const Eigen::Index chunk = 256;
      MatX<S> vx(in_size, std::min<Eigen::Index>(chunk, val_idx.size()));
      for (std::size_t start = 0; start < val_idx.size(); start += chunk) {
        const Eigen::Index b = std::min<Eigen::Index>(
            chunk, val_idx.size() - start);
        for (Eigen::Index j = 0; j < b; ++j) {
          vx.col(j) = inputs.col(val_idx[start + j]);
        }
        auto f = forward_batch(params, MatX<S>(vx.leftCols(b)));
        for (Eigen::Index j = 0; j < b; ++j) {
          OrientationDeg pred = decode_orientation(f.p_hat.col(j));
          double d = circ_diff(pred, gts[val_idx[start + j]]);
          if (d <= 30.0) ++hits;
          err_sum += d;
        }
      }
      st.val_acc30 = static_cast<double>(hits) / val_idx.size();
      st.val_mae = err_sum / val_idx.size();
    } else {
      st.val_acc30 = std::nan("");
      st.val_mae = std::nan("");
    }
    out.history.push_back(st);
  }

  out.params = std::move(params);
  return out;
}

}  // namespace

TrainOutput train(const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.samples.empty()) {
    throw InvalidInputError("cannot train on an empty dataset");
  }
  if (cfg.dtype == "f64") return train_impl<double>(data, cfg);
  return train_impl<float>(data, cfg);
}

void write_metrics_csv(const std::string& path,
                       const std::vector<EpochStats>& history) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "epoch,l_p_prime,l_c,l_kpt,lambda,total,val_acc30,val_mae\n";
  for (const auto& st : history) {
    out << st.epoch << ',' << fmt_g9(st.loss.l_p_prime) << ','
        << fmt_g9(st.loss.l_c) << ',' << fmt_g9(st.loss.l_kpt) << ','
        << fmt_g9(st.loss.lambda) << ',' << fmt_g9(st.loss.total) << ','
        << fmt_g9(st.val_acc30) << ',' << fmt_g9(st.val_mae) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace horient
