#pragma once

#include <cstddef>

namespace naxray::parallel {

/// Worker count used by the OpenMP kernels. 0 restores the runtime default.
void set_num_threads(std::size_t n);
std::size_t num_threads();
std::size_t max_threads();

}  // namespace naxray::parallel
