#include "hitr/parallel.hpp"

#include <omp.h>

namespace hitr::parallel {

namespace {
int default_threads() {
  static const int n = omp_get_max_threads();
  return n;
}
}  // namespace

void set_threads(int n) {
  const int base = default_threads();
  omp_set_num_threads(n > 0 ? n : base);
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace hitr::parallel
