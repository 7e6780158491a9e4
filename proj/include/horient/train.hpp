#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horient/checkpoint.hpp"
#include "horient/dataset.hpp"
#include "horient/errors.hpp"
#include "horient/model.hpp"

namespace horient {

struct TrainConfig {
  std::vector<int> hidden = {128, 128};
  int joints = kNumJoints;
  int heatmap_w = 16;
  int heatmap_h = 16;
  double heatmap_sigma = 1.5;
  double sigma_bins = 3.0;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  int epochs = 30;
  int batch_size = 64;
  double lambda_init = 0.1;
  double lambda_beta = 0.3;   // confidence-loss budget per batch
  double lambda_gamma = 0.01; // multiplicative adaptation step
  double val_fraction = 0.1;
  std::string dtype = "f32";  // f32 | f64
  std::uint64_t seed = 0;

  ModelConfig model_config() const {
    return {joints, hidden, heatmap_w, heatmap_h};
  }
  void validate() const;
};

struct EpochStats {
  int epoch = 0;          // 1-based
  LossBreakdown loss;     // sample-weighted means over the epoch
  double val_acc30 = 0.0; // NaN when there is no validation split
  double val_mae = 0.0;
};

struct TrainOutput {
  AnyParams params;
  std::vector<EpochStats> history;
};

/// One multiplicative step of the confidence weight: grow when the batch
/// spends more than `beta` on -log c, shrink otherwise; clamped to
/// [1e-4, 10].
double update_lambda(double lambda, double batch_l_c, double beta,
                     double gamma);

/// Mini-batch AdamW on the interpolation loss. Input skeletons come from the
/// dataset as stored (occlusions applied); target heatmaps are rebuilt from
/// the occlusion-free re-render of each sample, which the dataset header
/// seed makes possible. Deterministic: same dataset and config, same bytes.
TrainOutput train(const Dataset& data, const TrainConfig& cfg);

/// epoch,l_p_prime,l_c,l_kpt,lambda,total,val_acc30,val_mae
void write_metrics_csv(const std::string& path,
                       const std::vector<EpochStats>& history);

}  // namespace horient
