#pragma once

#include <string>
#include <variant>

#include "horient/model.hpp"

namespace horient {

/// Trained parameters in whichever precision they were optimized.
using AnyParams = std::variant<ModelParams<float>, ModelParams<double>>;

const ModelConfig& config_of(const AnyParams& p);
std::string dtype_of(const AnyParams& p);
ModelParams<double> as_f64(const AnyParams& p);

/// JSON checkpoint: {"version":1,"config":{...,"dtype":...},"layers":[...]},
/// one weight and one bias entry per layer, row-major data arrays. Values
/// round-trip exactly at the stored precision.
void save_checkpoint(const std::string& path, const AnyParams& params);
AnyParams load_checkpoint(const std::string& path);

}  // namespace horient
