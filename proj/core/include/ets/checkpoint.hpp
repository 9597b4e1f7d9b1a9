#pragma once

#include "ets/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ets {

/// Resumable run state: coefficients, time step index and the traces
/// accumulated so far, tagged with the config text and its fingerprint.
struct Checkpoint {
  std::string config_text;
  std::uint64_t fingerprint = 0;
  long step = 0;
  StateVector state;
  std::vector<double> acceleration;  // one entry per step boundary so far
  std::vector<double> field;
  std::vector<int> k_used;           // one entry per completed step
  std::vector<double> k_error;
};

/// Magic line, one JSON header line, then raw little-endian doubles.
/// Written to `path.tmp` and renamed.
void write_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace ets
