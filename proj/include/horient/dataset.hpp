#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horient/rng.hpp"
#include "horient/skeleton.hpp"

namespace horient {

struct ModeWeight {
  OcclusionMode mode;
  double weight = 1.0;
};

struct DatasetHeader {
  int version = 1;
  std::string convention = "0deg-facing-camera-ccw";
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct Dataset {
  DatasetHeader header;
  std::vector<Sample> samples;
};

/// Seed used to render sample `id`; depends only on the dataset seed and the
/// id, so any sample can be re-rendered (e.g. without occlusion) from the
/// header alone.
inline std::uint64_t sample_seed(std::uint64_t dataset_seed, std::int64_t id) {
  return split_seed(dataset_seed, "sample", static_cast<std::uint64_t>(id));
}

/// Sidecar path holding the dataset header, next to the sample file.
std::string header_path(const std::string& dataset_path);

/// Writes n samples as JSON lines plus the header sidecar. Orientations are
/// uniform over [0, 360); each sample's occlusion mode is drawn from `mix`
/// proportional to its weight.
void gen_dataset(const std::string& path, std::int64_t n,
                 const std::vector<ModeWeight>& mix, double noise_sigma,
                 std::uint64_t seed);

Dataset load_dataset(const std::string& path);

}  // namespace horient
