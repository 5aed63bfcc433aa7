#include <limits>

#include "aloe/error.hpp"
#include "app/app.hpp"

namespace aloe::app {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using grid::Bus;
using grid::BusRole;
using grid::GridCase;

// Path 1 - 2 - 3 with one random bus; every violation is a threshold on p_3.
GridCase three_bus() {
  GridCase g;
  g.buses = {Bus{1, BusRole::kSlack, -1.2, 1.5, 0.0}, Bus{2, BusRole::kFixed, -kInf, kInf, 0.3},
             Bus{3, BusRole::kRandom, -1.0, 1.5, 0.0}};
  g.lines = {{1, 2, 1.0}, {2, 3, 2.0}};
  g.sigma = Eigen::MatrixXd::Constant(1, 1, 0.23 * 0.23);
  g.theta_bar = 1.0;
  return g;
}

// Ring of ten buses with three chords, four correlated random buses.
GridCase ten_bus() {
  GridCase g;
  g.buses = {Bus{1, BusRole::kSlack, -3.0, 3.0, 0.0},  Bus{2, BusRole::kFixed, -kInf, kInf, 0.2},
             Bus{3, BusRole::kRandom, -2.0, 2.0, 0.1}, Bus{4, BusRole::kFixed, -kInf, kInf, -0.3},
             Bus{5, BusRole::kRandom, -2.0, 2.0, -0.2}, Bus{6, BusRole::kFixed, -kInf, kInf, 0.25},
             Bus{7, BusRole::kRandom, -2.0, 2.0, 0.3}, Bus{8, BusRole::kFixed, -kInf, kInf, -0.15},
             Bus{9, BusRole::kRandom, -2.0, 2.0, 0.0}, Bus{10, BusRole::kFixed, -kInf, kInf, -0.1}};
  g.lines = {{1, 2, 3.0}, {2, 3, 2.0}, {3, 4, 2.5}, {4, 5, 1.5}, {5, 6, 2.0},  {6, 7, 3.0}, {7, 8, 1.0},
             {8, 9, 2.0}, {9, 10, 2.5}, {10, 1, 3.0}, {1, 5, 1.0}, {3, 8, 1.5}, {6, 10, 2.0}};
  Eigen::MatrixXd corr(4, 4);
  corr << 1.0, 0.4, 0.2, 0.1,
          0.4, 1.0, 0.3, 0.2,
          0.2, 0.3, 1.0, 0.4,
          0.1, 0.2, 0.4, 1.0;
  g.sigma = 0.09 * corr;
  g.theta_bar = 0.55;
  return g;
}

// Line 2-3 carries p_3 alone and is far tighter than anything else.
GridCase dominant() {
  GridCase g;
  g.buses = {Bus{1, BusRole::kSlack, -kInf, kInf, 0.0}, Bus{2, BusRole::kRandom, -kInf, kInf, 0.0},
             Bus{3, BusRole::kRandom, -kInf, kInf, 0.3}};
  g.lines = {{1, 2, 1.6}, {2, 3, 1.0}};
  g.sigma = 0.04 * Eigen::MatrixXd::Identity(2, 2);
  g.theta_bar = 1.0;
  return g;
}

// One line, no bus limits: the only events are the two directions of the
// same phase limit, which cannot occur together.
GridCase disjoint() {
  GridCase g;
  g.buses = {Bus{1, BusRole::kSlack, -kInf, kInf, 0.0}, Bus{2, BusRole::kRandom, -kInf, kInf, 0.0}};
  g.lines = {{1, 2, 1.0}};
  g.sigma = Eigen::MatrixXd::Constant(1, 1, 0.09);
  g.theta_bar = 1.0;
  return g;
}

}  // namespace

std::vector<std::string> builtin_case_names() { return {"three_bus", "ten_bus", "dominant", "disjoint"}; }

GridCase builtin_case(const std::string& name) {
  if (name == "three_bus") return three_bus();
  if (name == "ten_bus") return ten_bus();
  if (name == "dominant") return dominant();
  if (name == "disjoint") return disjoint();
  throw Error(ErrorCode::kInvalidInput, "unknown built-in case \"" + name + "\"");
}

}  // namespace aloe::app
