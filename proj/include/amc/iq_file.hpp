#pragma once

#include <string>

#include "amc/modem.hpp"

namespace amc {

// IQ interchange file: one-line JSON header
//   {"version":1,"n":<int>,"label":<string|null>,"snr_db":<float|null>}
// terminated by '\n', then n little-endian float32 pairs (I then Q).
void write_iq_file(const std::string& path, const ComplexFrame& frame);
ComplexFrame read_iq_file(const std::string& path);  // throws on bad file

}  // namespace amc
