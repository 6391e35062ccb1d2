#pragma once

// Seed for randomized checks: HFQM_SEED when set, else a fixed default.

#include <cstdint>
#include <cstdlib>
#include <string>

namespace hfqm {

inline constexpr std::uint64_t default_seed = 20240611u;

inline std::uint64_t seed_from_env() {
  const char* s = std::getenv("HFQM_SEED");
  if (!s || !*s) return default_seed;
  try {
    return std::stoull(s);
  } catch (...) {
    return default_seed;
  }
}

}  // namespace hfqm
