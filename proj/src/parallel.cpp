#include "lieschatten/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace lieschatten {

int thread_budget() {
  if (const char* env = std::getenv("SCHATTEN_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v <= 0 || v > 4096) {
      throw std::invalid_argument(std::string("SCHATTEN_THREADS must be a positive integer, got '") + env + "'");
    }
    return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace lieschatten
