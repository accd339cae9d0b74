// Named reference checks behind the `check` subcommand: each runs a pinned
// model configuration and yields a number to compare against the shipped
// anchor file.
#ifndef MEMBENCH_TOOLS_ANCHOR_CHECKS_HPP
#define MEMBENCH_TOOLS_ANCHOR_CHECKS_HPP

#include <functional>
#include <string>
#include <vector>

namespace membench {

enum class AnchorCmp { within, at_most, at_least };

struct AnchorCheck {
  std::string name;
  AnchorCmp cmp;
  std::function<double()> measure;
};

const std::vector<AnchorCheck>& anchor_checks();

bool anchor_passes(AnchorCmp cmp, double measured, double value,
                   double tolerance);

}  // namespace membench

#endif
