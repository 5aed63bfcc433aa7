// Writes the synthetic grid cases and their plain Monte Carlo reference values.
//   aloe_make_fixtures <output-dir> [draws] [seed]
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "aloe/io.hpp"
#include "app/app.hpp"
#include "oracles.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: aloe_make_fixtures <output-dir> [draws] [seed]\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  const std::size_t draws = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 10'000'000;
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 777;
  std::filesystem::create_directories(dir);

  nlohmann::json reference = nlohmann::json::array();
  for (const std::string& name : aloe::app::builtin_case_names()) {
    const aloe::grid::GridCase g = aloe::app::builtin_case(name);
    std::ofstream(dir / (name + ".json")) << aloe::io::grid_to_json(g).dump(2) << '\n';
    const aloe::oracle::PlainMc mc = aloe::oracle::GridMc(g).run(draws, seed);
    reference.push_back({{"case", name}, {"theta_bar", g.theta_bar}, {"draws", draws}, {"seed", seed},
                         {"mu", mc.mu}, {"se", mc.se}});
    std::cout << name << " mu=" << mc.mu << " se=" << mc.se << '\n';
  }
  std::ofstream(dir / "plain_mc.json") << reference.dump(2) << '\n';
  return 0;
}
