#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace hitr::parallel {

// Thread count for every OpenMP kernel in the library. n <= 0 restores the
// OpenMP runtime default.
void set_threads(int n);
int max_threads();

// Collects the first exception thrown inside a parallel region so it can be
// rethrown on the calling thread after the region ends.
class ExceptionSlot {
 public:
  template <class F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mu_);
      if (!first_) first_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr first_;
};

}  // namespace hitr::parallel
