// Run configuration for bspcli.
//
// Flat text format: optional global keys, then one [attribute NAME] section
// per attribute. '#' starts a comment, blank lines are skipped.
//
//   seed = 42
//
//   [attribute income]
//   kind = numeric
//   lambda = uniform            # or: fixed 0.5
//   transforms = fixed 1        # or: range 2 10
//   matrix = seed.txt           # dense text, or:
//   target-beta = 0.72          # generate a seed matrix instead
//   size = 2                    # dimension when generating (numeric only)
//
//   [attribute region]
//   kind = categorical
//   labels = north south east
//   matrix = region.txt         # or target-beta (dimension = label count)
//   unknown = reject            # or: expand
//   expand-lambda = 0.5
//   expand-target = north       # omitted = random existing label
#ifndef BSPCLI_CONFIG_HPP
#define BSPCLI_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsp/bsp.h"

namespace bspcli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AttrConfig {
  enum class Kind { Numeric, Categorical };

  std::string name;
  Kind kind = Kind::Numeric;
  bsp_policy policy{BSP_LAMBDA_UNIFORM, 0.5, BSP_TRANSFORMS_FIXED, 1, 1};
  std::string matrix_path;            // empty = not given
  double target_beta = -1.0;          // < 0 = not given
  std::uint64_t size = 2;             // generated-matrix dimension (numeric)
  std::vector<std::string> labels;    // categorical only
  bsp_unknown_mode unknown = BSP_UNKNOWN_REJECT;
  double expand_lambda = 0.5;
  std::string expand_target;          // empty = random existing label
};

struct RunConfig {
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::vector<AttrConfig> attributes;
};

// Throws ConfigError with a line number on malformed input.
RunConfig load_config(const std::string& path);

}  // namespace bspcli

#endif
