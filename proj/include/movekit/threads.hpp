#pragma once

#include <cstdlib>
#include <thread>

namespace movekit {

// Worker cap from MOVEKIT_THREADS (0 or unset = hardware concurrency).
inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("MOVEKIT_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<int>(v);
  }
  return hw;
}

}  // namespace movekit
