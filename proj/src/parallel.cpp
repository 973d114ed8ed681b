#include "naxray/parallel.hpp"

#include <omp.h>

namespace naxray::parallel {

namespace {
int g_default = 0;
}

void set_num_threads(std::size_t n) {
  if (g_default == 0) g_default = omp_get_max_threads();
  omp_set_num_threads(n == 0 ? g_default : static_cast<int>(n));
}

std::size_t num_threads() { return static_cast<std::size_t>(omp_get_max_threads()); }

std::size_t max_threads() { return static_cast<std::size_t>(omp_get_num_procs()); }

}  // namespace naxray::parallel
