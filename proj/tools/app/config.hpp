#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aloe/halfspace.hpp"

namespace aloe::app {

inline constexpr std::uint64_t kDefaultSeed = 20180514;

enum class Subcommand { kEstimate, kPolygon, kHighDim, kGrid, kVerify };
enum class Format { kJson, kCsv };

struct RunConfig {
  Subcommand command = Subcommand::kEstimate;
  std::string input;  ///< problem file, grid case or spec file
  std::string output;  ///< empty: standard output
  std::size_t n = 10000;
  std::size_t reps = 1;
  std::uint64_t seed = kDefaultSeed;
  Format format = Format::kJson;
  std::size_t block_size = 1024;
  std::size_t threads = 1;
  double drop_tau = kDefaultDropTau;
  bool add_dropped_to_bound = false;
  bool timestamp = true;

  // polygon
  std::vector<double> taus;
  std::size_t sides = 360;
  bool prime = false;

  // highdim: a single spec (input file or the fields below) or a random family
  std::size_t dimension = 20;
  std::size_t constraints = 20;
  double target_log10 = 4.0;
  std::size_t family = 0;
  std::vector<std::size_t> family_dimensions{20, 50};

  // grid
  std::vector<double> theta_bars;
};

/// Seed used when none is given on the command line: ALOE_SEED if set and
/// parseable, otherwise kDefaultSeed.
std::uint64_t default_seed();

}  // namespace aloe::app
