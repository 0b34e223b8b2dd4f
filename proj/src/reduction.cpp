#include "nehari/reduction.hpp"

#include <charconv>
#include <cstring>

namespace nehari {

int reduction_width() {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("NEHARI_FPL_THREADS");
  if (env == nullptr) return hw;
  int cap = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, cap);
  if (ec != std::errc() || ptr != end || cap < 1) return hw;
  return std::min(cap, 64);
}

}  // namespace nehari
