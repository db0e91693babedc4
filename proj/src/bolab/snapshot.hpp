#pragma once

#include <string>

#include "bolab/field.hpp"

namespace bolab {

// BOFIELD v1: text header line then n little-endian float64 (re, im) pairs in FFT order.
void write_snapshot(const std::string& path, const RealField& u);
RealField read_snapshot(const std::string& path);

}  // namespace bolab
