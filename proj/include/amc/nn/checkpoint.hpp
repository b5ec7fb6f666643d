#pragma once

#include <string>

#include "amc/nn/layers.hpp"

namespace amc::nn {

// Checkpoint file: one-line JSON manifest (layer specs, tensor shapes,
// metadata), then a binary blob of little-endian 64-bit floats holding every
// parameter and state tensor in manifest order. Round-trips bit-exactly.
void save_model(const std::string& path, Model& model, const nlohmann::json& meta);

struct LoadedModel {
  Model model;
  nlohmann::json meta;
};

LoadedModel load_model(const std::string& path);

}  // namespace amc::nn
