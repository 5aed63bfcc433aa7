#include "aloe/io.hpp"

#include <fstream>
#include <limits>

#include "aloe/error.hpp"

namespace aloe::io {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidInput, what); }

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) bad(std::string("missing field \"") + name + "\"");
  return doc.at(name);
}

double number(const json& value, const char* name) {
  if (!value.is_number()) bad(std::string("field \"") + name + "\" must be a number");
  return value.get<double>();
}

Eigen::VectorXd vector_of(const json& value, const char* name) {
  if (!value.is_array()) bad(std::string("field \"") + name + "\" must be an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(value[i], name);
  return out;
}

Eigen::MatrixXd matrix_of(const json& value, const char* name, Eigen::Index cols = -1) {
  if (!value.is_array()) bad(std::string("field \"") + name + "\" must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(value.size());
  if (rows > 0) cols = static_cast<Eigen::Index>(value[0].size());
  if (cols < 0) cols = 0;
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = value[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      bad(std::string("field \"") + name + "\" has ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = number(row[static_cast<std::size_t>(c)], name);
  }
  return out;
}

double bound_or(const json& bus, const char* name, double fallback) {
  if (!bus.contains(name) || bus.at(name).is_null()) return fallback;
  return number(bus.at(name), name);
}

int integer(const json& value, const char* name) {
  if (!value.is_number_integer()) bad(std::string("field \"") + name + "\" must be an integer");
  return value.get<int>();
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

bool is_raw_problem(const json& doc) { return doc.is_object() && doc.contains("gamma"); }

GeneralGaussianSpec raw_spec_from_json(const json& doc) {
  GeneralGaussianSpec spec;
  spec.eta = vector_of(field(doc, "eta"), "eta");
  const auto d = spec.eta.size();
  spec.sigma = matrix_of(field(doc, "sigma"), "sigma", d);
  spec.gamma = matrix_of(field(doc, "gamma"), "gamma", d);
  spec.kappa = vector_of(field(doc, "kappa"), "kappa");
  if (spec.sigma.rows() != d || spec.sigma.cols() != d) bad("sigma must be d x d");
  if (spec.gamma.cols() != d) bad("gamma rows must have length d");
  if (spec.kappa.size() != spec.gamma.rows()) bad("kappa must have one entry per gamma row");
  return spec;
}

HalfSpaceProblem problem_from_json(const json& doc, double drop_tau) {
  if (is_raw_problem(doc)) return whiten(raw_spec_from_json(doc), drop_tau);
  const int d = integer(field(doc, "d"), "d");
  if (d < 1) bad("d must be positive");
  const Eigen::MatrixXd omega = matrix_of(field(doc, "omega"), "omega", d);
  const Eigen::VectorXd tau = vector_of(field(doc, "tau"), "tau");
  if (omega.cols() != d) bad("omega rows must have length d");
  if (tau.size() != omega.rows()) bad("tau must have one entry per omega row");
  return HalfSpaceProblem(omega, tau, drop_tau);
}

grid::GridCase grid_from_json(const json& doc) {
  grid::GridCase g;
  const json& busses = field(doc, "busses");
  if (!busses.is_array()) bad("\"busses\" must be an array");
  for (const json& b : busses) {
    grid::Bus bus;
    bus.id = integer(field(b, "id"), "id");
    const json& role = field(b, "role");
    if (!role.is_string()) bad("bus role must be a string");
    const auto r = role.get<std::string>();
    if (r == "fixed") {
      bus.role = grid::BusRole::kFixed;
    } else if (r == "random") {
      bus.role = grid::BusRole::kRandom;
    } else if (r == "slack") {
      bus.role = grid::BusRole::kSlack;
    } else {
      bad("unknown bus role \"" + r + "\"");
    }
    bus.p_min = bound_or(b, "p_min", -std::numeric_limits<double>::infinity());
    bus.p_max = bound_or(b, "p_max", std::numeric_limits<double>::infinity());
    bus.eta = bound_or(b, "eta", 0.0);
    g.buses.push_back(bus);
  }
  const json& lines = field(doc, "lines");
  if (!lines.is_array()) bad("\"lines\" must be an array");
  for (const json& l : lines) {
    g.lines.push_back({integer(field(l, "from"), "from"), integer(field(l, "to"), "to"), number(field(l, "b"), "b")});
  }
  g.sigma = matrix_of(field(doc, "sigma"), "sigma");
  g.theta_bar = number(field(doc, "theta_bar"), "theta_bar");
  grid::validate(g);
  return g;
}

json grid_to_json(const grid::GridCase& g) {
  json busses = json::array();
  for (const grid::Bus& b : g.buses) {
    const char* role = b.role == grid::BusRole::kRandom ? "random" : b.role == grid::BusRole::kSlack ? "slack" : "fixed";
    busses.push_back({{"id", b.id}, {"role", role}, {"p_min", finite_or_null(b.p_min)},
                      {"p_max", finite_or_null(b.p_max)}, {"eta", b.eta}});
  }
  json lines = json::array();
  for (const grid::Line& l : g.lines) lines.push_back({{"from", l.from}, {"to", l.to}, {"b", l.susceptance}});
  json sigma = json::array();
  for (Eigen::Index r = 0; r < g.sigma.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < g.sigma.cols(); ++c) row.push_back(g.sigma(r, c));
    sigma.push_back(row);
  }
  return {{"busses", busses}, {"lines", lines}, {"sigma", sigma}, {"theta_bar", g.theta_bar}};
}

PolygonSpec polygon_from_json(const json& doc) {
  PolygonSpec spec;
  const int sides = integer(field(doc, "J"), "J");
  if (sides < 3) throw Error(ErrorCode::kInvalidSpec, "J must be at least 3");
  spec.sides = static_cast<std::size_t>(sides);
  spec.tau = number(field(doc, "tau"), "tau");
  if (doc.contains("angle_set")) {
    const auto set = doc.at("angle_set").get<std::string>();
    if (set == "prime") {
      spec.angles = AngleSet::kPrime;
    } else if (set != "full") {
      bad("angle_set must be \"full\" or \"prime\"");
    }
  }
  return spec;
}

HighDimSpec highdim_from_json(const json& doc) {
  HighDimSpec spec;
  const int d = integer(field(doc, "d"), "d");
  const int j = integer(field(doc, "J"), "J");
  if (d < 2 || j < 1) throw Error(ErrorCode::kInvalidSpec, "need d >= 2 and J >= 1");
  spec.dimension = static_cast<std::size_t>(d);
  spec.constraints = static_cast<std::size_t>(j);
  spec.target_log10_union_bound = number(field(doc, "target_log10_union_bound"), "target_log10_union_bound");
  if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
  return spec;
}

json to_json(const AloeEstimate& e) {
  return {{"mu_hat", e.mu_hat},
          {"se", e.se},
          {"n", e.n},
          {"union_bound", e.union_bound},
          {"lower_bound", e.lower_bound},
          {"hard_range", {e.hard_range[0], e.hard_range[1]}},
          {"s_histogram", e.s_histogram},
          {"var_bound_theorem", e.var_bound_theorem},
          {"var_bound_lemma", e.var_bound_lemma},
          {"cv_bound", e.cv_bound},
          {"seed", e.seed},
          {"stream_id", e.stream_id},
          {"events", e.events},
          {"se_over_mu", e.se_over_mu()},
          {"s_ge_2_fraction", e.s_ge_2_fraction()},
          {"degenerate_se", e.degenerate_se},
          {"warnings", e.warnings}};
}

}  // namespace aloe::io
