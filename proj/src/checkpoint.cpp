#include "horient/checkpoint.hpp"

#include <fstream>
#include <json.hpp>

#include "horient/errors.hpp"

namespace horient {

using nlohmann::ordered_json;

namespace {

template <class S>
ordered_json params_to_json(const ModelParams<S>& m, const char* dtype) {
  ordered_json cfg{{"joints", m.config.joints},
                   {"hidden", m.config.hidden},
                   {"heatmap_w", m.config.heatmap_w},
                   {"heatmap_h", m.config.heatmap_h},
                   {"dtype", dtype}};
  ordered_json layers = ordered_json::array();
  m.for_each_layer([&layers](const std::string& name, const Dense<S>& d) {
    ordered_json w_data = ordered_json::array();
    for (Eigen::Index r = 0; r < d.w.rows(); ++r) {
      for (Eigen::Index c = 0; c < d.w.cols(); ++c) {
        w_data.push_back(static_cast<double>(d.w(r, c)));
      }
    }
    layers.push_back({{"name", name + ".weight"},
                      {"rows", d.w.rows()},
                      {"cols", d.w.cols()},
                      {"data", std::move(w_data)}});
    ordered_json b_data = ordered_json::array();
    for (Eigen::Index r = 0; r < d.b.size(); ++r) {
      b_data.push_back(static_cast<double>(d.b[r]));
    }
    layers.push_back({{"name", name + ".bias"},
                      {"rows", d.b.size()},
                      {"cols", 1},
                      {"data", std::move(b_data)}});
  });
  return ordered_json{{"version", 1}, {"config", std::move(cfg)},
                      {"layers", std::move(layers)}};
}

template <class S>
ModelParams<S> params_from_json(const ordered_json& j, const ModelConfig& cfg) {
  // build the right shapes, then overwrite every value from the file
  ModelParams<S> m = ModelParams<S>::init(cfg, 0);
  const auto& layers = j.at("layers");
  std::size_t idx = 0;
  auto take = [&layers, &idx](const std::string& want) -> const ordered_json& {
    if (idx >= layers.size()) {
      throw ModelConfigError("checkpoint missing layer entry: " + want);
    }
    const auto& e = layers[idx++];
    if (e.at("name").get<std::string>() != want) {
      throw ModelConfigError("checkpoint layer out of order: expected " + want +
                             ", found " + e.at("name").get<std::string>());
    }
    return e;
  };
  m.for_each_layer([&take](const std::string& name, Dense<S>& d) {
    const ordered_json& we = take(name + ".weight");
    const auto rows = we.at("rows").get<Eigen::Index>();
    const auto cols = we.at("cols").get<Eigen::Index>();
    const ordered_json& wd = we.at("data");
    if (rows != d.w.rows() || cols != d.w.cols() ||
        static_cast<Eigen::Index>(wd.size()) != rows * cols) {
      throw ModelConfigError("checkpoint shape mismatch in " + name + ".weight");
    }
    Eigen::Index i = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        d.w(r, c) = static_cast<S>(wd[i++].get<double>());
      }
    }
    const ordered_json& be = take(name + ".bias");
    const ordered_json& bd = be.at("data");
    if (be.at("rows").get<Eigen::Index>() != d.b.size() ||
        static_cast<Eigen::Index>(bd.size()) != d.b.size()) {
      throw ModelConfigError("checkpoint shape mismatch in " + name + ".bias");
    }
    for (Eigen::Index r = 0; r < d.b.size(); ++r) {
      d.b[r] = static_cast<S>(bd[r].get<double>());
    }
  });
  if (idx != layers.size()) {
    throw ModelConfigError("checkpoint carries extra layer entries");
  }
  m.validate();
  return m;
}

}  // namespace

const ModelConfig& config_of(const AnyParams& p) {
  return std::visit([](const auto& m) -> const ModelConfig& { return m.config; },
                    p);
}

std::string dtype_of(const AnyParams& p) {
  return std::holds_alternative<ModelParams<float>>(p) ? "f32" : "f64";
}

ModelParams<double> as_f64(const AnyParams& p) {
  return std::visit(
      [](const auto& m) { return m.template cast<double>(); }, p);
}

void save_checkpoint(const std::string& path, const AnyParams& params) {
  ordered_json j = std::visit(
      [&](const auto& m) {
        using S = typename std::decay_t<decltype(m)>::value_type;
        return params_to_json(m, std::is_same_v<S, float> ? "f32" : "f64");
      },
      params);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

AnyParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  ordered_json j;
  ModelConfig cfg;
  std::string dtype;
  try {
    j = ordered_json::parse(in);
    if (j.at("version").get<int>() != 1) {
      throw InvalidInputError("unsupported checkpoint version");
    }
    const auto& c = j.at("config");
    cfg.joints = c.at("joints").get<int>();
    cfg.hidden = c.at("hidden").get<std::vector<int>>();
    cfg.heatmap_w = c.at("heatmap_w").get<int>();
    cfg.heatmap_h = c.at("heatmap_h").get<int>();
    dtype = c.at("dtype").get<std::string>();
  } catch (const ordered_json::exception& e) {
    throw InvalidInputError("bad checkpoint file " + path + ": " + e.what());
  }
  try {
    if (dtype == "f32") return params_from_json<float>(j, cfg);
    if (dtype == "f64") return params_from_json<double>(j, cfg);
  } catch (const ordered_json::exception& e) {
    throw InvalidInputError("bad checkpoint file " + path + ": " + e.what());
  }
  throw InvalidInputError("unknown checkpoint dtype: " + dtype);
}

}  // namespace horient
