#pragma once

#include <exception>

#include "llab/types.hpp"

namespace llab {

// Runs body(k) for k in [0, count). With Exec::parallel the iterations are
// distributed over OpenMP threads; the first exception thrown is rethrown on
// the calling thread after the loop.
template <class F>
void for_each_index(long count, Exec exec, F&& body) {
  if (exec == Exec::serial) {
    for (long k = 0; k < count; ++k) body(k);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    try {
      body(k);
    } catch (...) {
#pragma omp critical(llab_for_each_index)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace llab
