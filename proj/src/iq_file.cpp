#include "amc/iq_file.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "amc/detail/binio.hpp"
#include "json.hpp"

namespace amc {

using detail::get_f32_le;
using detail::put_f32_le;

void write_iq_file(const std::string& path, const ComplexFrame& frame) {
  nlohmann::json header;
  header["version"] = 1;
  header["n"] = frame.samples.size();
  if (frame.label)
    header["label"] = mod_name(*frame.label);
  else
    header["label"] = nullptr;
  if (frame.channel && std::isfinite(frame.channel->snr_db))
    header["snr_db"] = frame.channel->snr_db;
  else
    header["snr_db"] = nullptr;

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << header.dump() << '\n';
  for (const auto& s : frame.samples) {
    put_f32_le(os, static_cast<float>(s.real()));
    put_f32_le(os, static_cast<float>(s.imag()));
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

ComplexFrame read_iq_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("missing IQ header: " + path);
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("version", 0) != 1)
    throw std::runtime_error("bad IQ header: " + path);
  std::size_t n = header.at("n").get<std::size_t>();

  ComplexFrame f;
  f.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    float re = get_f32_le(is);
    float im = get_f32_le(is);
    f.samples[i] = cplx(re, im);
  }
  if (!header.at("label").is_null()) f.label = mod_from_name(header.at("label").get<std::string>());
  if (!header.at("snr_db").is_null()) {
    ChannelParams ch;
    ch.snr_db = header.at("snr_db").get<double>();
    f.channel = ch;
  }
  return f;
}

}  // namespace amc
