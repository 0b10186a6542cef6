#pragma once

#include <string>

namespace perfsage {

/// Human-readable CPU model of this host (from /proc/cpuinfo), or "unknown-cpu".
std::string host_label();

/// Hardware thread count, capped by the PERFSAGE_THREADS environment variable.
int max_threads();

}  // namespace perfsage
