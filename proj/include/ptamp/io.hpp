#pragma once

#include <string>

namespace ptamp::io {

// Shortest round-trip decimal with 17 significant digits; the fixed
// format keeps emitted CSV byte-identical across runs.
std::string g17(double v);

}  // namespace ptamp::io
