#pragma once

#include <cstdint>
#include <string>

#include "bolab/field.hpp"

namespace bolab {

// `modes:(xi, amp, phase),...`   -> sum amp cos(xi x + phase)
// `random:s,norm,seed[,band]`    -> |xi|^{-s-1/2} amplitudes with uniform random phases on
//                                   1 <= |xi| <= band (default: dealias cut), rescaled to L2 norm
// `file:path`                    -> BOFIELD snapshot
RealField initial_data(const std::string& spec, GridSpec grid);

RealField random_field(GridSpec grid, double s, double norm, std::uint64_t seed, int band = 0);

}  // namespace bolab
