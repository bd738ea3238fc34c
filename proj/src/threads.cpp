#include "twinsieve/threads.hpp"

#include <cstdlib>
#include <thread>

namespace twinsieve {

unsigned default_thread_count() {
  if (const char* env = std::getenv("TWINSIEVE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

}  // namespace twinsieve
