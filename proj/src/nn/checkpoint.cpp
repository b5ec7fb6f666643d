#include "amc/nn/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "amc/detail/binio.hpp"

namespace amc::nn {

using detail::get_f64_le;
using detail::put_f64_le;

namespace {

std::vector<Tensor*> all_tensors(Model& model) {
  std::vector<Tensor*> out;
  for (auto& layer : model.layers) {
    for (Tensor* t : layer->params()) out.push_back(t);
    for (Tensor* t : layer->state()) out.push_back(t);
  }
  return out;
}

}  // namespace

void save_model(const std::string& path, Model& model, const nlohmann::json& meta) {
  nlohmann::json manifest;
  manifest["version"] = 1;
  manifest["layers"] = nlohmann::json::array();
  for (auto& layer : model.layers) manifest["layers"].push_back(layer->spec());
  manifest["tensors"] = nlohmann::json::array();
  auto tensors = all_tensors(model);
  for (Tensor* t : tensors) manifest["tensors"].push_back({{"shape", t->shape}});
  manifest["meta"] = meta;

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << manifest.dump() << '\n';
  for (Tensor* t : tensors)
    for (double v : t->data) put_f64_le(os, v);
  if (!os) throw std::runtime_error("write failed: " + path);
}

LoadedModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("missing checkpoint manifest: " + path);
  nlohmann::json manifest = nlohmann::json::parse(line, nullptr, false);
  if (manifest.is_discarded() || manifest.value("version", 0) != 1)
    throw std::runtime_error("bad checkpoint manifest: " + path);

  LoadedModel out;
  for (const auto& spec : manifest.at("layers")) out.model.layers.push_back(make_layer(spec));
  out.meta = manifest.value("meta", nlohmann::json::object());

  auto tensors = all_tensors(out.model);
  const auto& shapes = manifest.at("tensors");
  if (shapes.size() != tensors.size())
    throw std::runtime_error("checkpoint tensor count mismatch: " + path);
  for (std::size_t k = 0; k < tensors.size(); ++k) {
    auto shape = shapes[k].at("shape").get<std::vector<std::size_t>>();
    if (shape != tensors[k]->shape)
      throw std::runtime_error("checkpoint tensor shape mismatch: " + path);
    for (double& v : tensors[k]->data) v = get_f64_le(is);
  }
  return out;
}

}  // namespace amc::nn
