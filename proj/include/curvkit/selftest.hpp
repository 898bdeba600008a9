#pragma once

#include <string>
#include <vector>

namespace curvkit {

struct SelftestItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast invariant suite over the algebra kernels and a few catalog shapes.
std::vector<SelftestItem> run_selftest();

}  // namespace curvkit
