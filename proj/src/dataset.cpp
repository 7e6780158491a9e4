#include "horient/dataset.hpp"

#include <fstream>
#include <json.hpp>

#include "horient/errors.hpp"

namespace horient {

using nlohmann::ordered_json;

namespace {

constexpr const char* kConvention = "0deg-facing-camera-ccw";

ordered_json sample_to_json(const Sample& s) {
  ordered_json joints = ordered_json::array();
  for (const auto& j : s.skeleton.joints) {
    joints.push_back({j.x, j.y, j.visible ? 1 : 0});
  }
  return ordered_json{{"id", s.id},
                      {"theta_deg", s.gt_orientation.deg()},
                      {"mode", s.mode.str()},
                      {"joints", std::move(joints)}};
}

Sample sample_from_json(const ordered_json& rec) {
  Sample s;
  s.id = rec.at("id").get<std::int64_t>();
  s.gt_orientation = OrientationDeg(rec.at("theta_deg").get<double>());
  s.mode = OcclusionMode::parse(rec.at("mode").get<std::string>());
  const auto& joints = rec.at("joints");
  if (!joints.is_array() || joints.size() != kNumJoints) {
    throw InvalidInputError("sample must carry exactly 23 joints");
  }
  for (int j = 0; j < kNumJoints; ++j) {
    const auto& t = joints[j];
    if (!t.is_array() || t.size() != 3) {
      throw InvalidInputError("joint entries must be [x, y, v] triplets");
    }
    int v = t[2].get<int>();
    if (v != 0 && v != 1) {
      throw InvalidInputError("joint visibility must be 0 or 1");
    }
    s.skeleton.joints[j] = {t[0].get<double>(), t[1].get<double>(), v == 1};
  }
  return s;
}

}  // namespace

std::string header_path(const std::string& dataset_path) {
  return dataset_path + ".header.json";
}

void gen_dataset(const std::string& path, std::int64_t n,
                 const std::vector<ModeWeight>& mix, double noise_sigma,
                 std::uint64_t seed) {
  if (n < 1) throw InvalidInputError("sample count must be at least 1");
  if (mix.empty()) throw InvalidInputError("mode mix must be non-empty");
  double total = 0.0;
  for (const auto& m : mix) {
    if (!(m.weight > 0.0) || !std::isfinite(m.weight)) {
      throw InvalidInputError("mode weights must be positive and finite");
    }
    total += m.weight;
  }

  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);

  Rng theta_rng(seed, "theta");
  Rng mode_rng(seed, "mode");
  for (std::int64_t i = 0; i < n; ++i) {
    OrientationDeg theta(theta_rng.uniform(0.0, 360.0));
    double u = mode_rng.uniform01() * total;
    std::size_t pick = 0;
    double acc = 0.0;
    for (std::size_t k = 0; k < mix.size(); ++k) {
      acc += mix[k].weight;
      if (u < acc) {
        pick = k;
        break;
      }
      pick = k;  // numeric edge: u lands on the running total
    }
    Sample s = synthesize(theta, mix[pick].mode, noise_sigma,
                          sample_seed(seed, i), i);
    out << sample_to_json(s).dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
  out.close();

  ordered_json header{{"version", 1},
                      {"convention", kConvention},
                      {"noise_sigma", noise_sigma},
                      {"seed", seed}};
  std::ofstream hout(header_path(path));
  if (!hout) throw IoError("cannot open for writing: " + header_path(path));
  hout << header.dump() << '\n';
  if (!hout) throw IoError("write failed: " + header_path(path));
}

Dataset load_dataset(const std::string& path) {
  std::ifstream hin(header_path(path));
  if (!hin) throw IoError("cannot open: " + header_path(path));
  Dataset d;
  try {
    auto h = ordered_json::parse(hin);
    d.header.version = h.at("version").get<int>();
    d.header.convention = h.at("convention").get<std::string>();
    d.header.noise_sigma = h.at("noise_sigma").get<double>();
    d.header.seed = h.at("seed").get<std::uint64_t>();
  } catch (const ordered_json::exception& e) {
    throw InvalidInputError("bad dataset header: " + std::string(e.what()));
  }
  if (d.header.version != 1) {
    throw InvalidInputError("unsupported dataset version");
  }
  if (d.header.convention != kConvention) {
    throw InvalidInputError("unknown orientation convention: " +
                            d.header.convention);
  }

  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      d.samples.push_back(sample_from_json(ordered_json::parse(line)));
    } catch (const ordered_json::exception& e) {
      throw InvalidInputError("bad sample at line " + std::to_string(lineno) +
                              ": " + std::string(e.what()));
    }
  }
  return d;
}

}  // namespace horient
