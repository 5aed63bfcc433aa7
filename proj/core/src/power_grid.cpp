#include "aloe/power_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "aloe/error.hpp"

namespace aloe::grid {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

std::size_t BusLayout::position(int id) const {
  const auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) {
    throw Error(ErrorCode::kInvalidInput, "unknown bus id " + std::to_string(id));
  }
  return static_cast<std::size_t>(it - ids.begin());
}

BusLayout validate(const GridCase& grid) {
  BusLayout layout;
  if (grid.buses.size() < 2) throw Error(ErrorCode::kInvalidInput, "a grid needs at least two buses");
  std::vector<const Bus*> sorted;
  for (const Bus& b : grid.buses) sorted.push_back(&b);
  std::sort(sorted.begin(), sorted.end(), [](const Bus* a, const Bus* b) { return a->id < b->id; });
  std::size_t slack_count = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const Bus& bus = *sorted[k];
    if (k > 0 && sorted[k - 1]->id == bus.id) {
      throw Error(ErrorCode::kInvalidInput, "duplicate bus id " + std::to_string(bus.id));
    }
    if (std::isnan(bus.p_min) || std::isnan(bus.p_max) || bus.p_min > bus.p_max || !std::isfinite(bus.eta)) {
      throw Error(ErrorCode::kInvalidInput, "bus " + std::to_string(bus.id) + " has invalid bounds or mean");
    }
    layout.ids.push_back(bus.id);
    switch (bus.role) {
      case BusRole::kRandom: layout.random.push_back(k); break;
      case BusRole::kFixed: layout.fixed.push_back(k); break;
      case BusRole::kSlack:
        layout.slack = k;
        ++slack_count;
        break;
    }
  }
  if (slack_count != 1) throw Error(ErrorCode::kInvalidInput, "exactly one slack bus is required");
  if (layout.random.empty()) throw Error(ErrorCode::kInvalidInput, "at least one random bus is required");
  for (const Line& line : grid.lines) {
    const std::size_t a = layout.position(line.from);
    const std::size_t b = layout.position(line.to);
    if (a == b) throw Error(ErrorCode::kInvalidInput, "line connects a bus to itself");
    if (!(line.susceptance > 0.0) || !std::isfinite(line.susceptance)) {
      throw Error(ErrorCode::kInvalidInput, "line susceptance must be positive");
    }
  }
  const auto nr = static_cast<Eigen::Index>(layout.random.size());
  if (grid.sigma.rows() != nr || grid.sigma.cols() != nr) {
    throw Error(ErrorCode::kInvalidInput, "sigma must be N_R x N_R with N_R = " + std::to_string(nr));
  }
  if (!(grid.theta_bar > 0.0) || std::isnan(grid.theta_bar)) {
    throw Error(ErrorCode::kInvalidInput, "theta_bar must be positive");
  }
  return layout;
}

Eigen::MatrixXd build_laplacian(const GridCase& grid) {
  const BusLayout layout = validate(grid);
  const std::size_t n = layout.ids.size();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (const Line& line : grid.lines) {
    const auto a = static_cast<Eigen::Index>(layout.position(line.from));
    const auto b = static_cast<Eigen::Index>(layout.position(line.to));
    lap(a, b) -= line.susceptance;
    lap(b, a) -= line.susceptance;
    parent[find_root(parent, static_cast<std::size_t>(a))] = find_root(parent, static_cast<std::size_t>(b));
  }
  std::size_t components = 0;
  for (std::size_t v = 0; v < n; ++v) components += find_root(parent, v) == v ? 1 : 0;
  if (components != 1) {
    throw Error(ErrorCode::kDisconnectedNetwork,
                "network has " + std::to_string(components) + " connected components");
  }
  for (Eigen::Index i = 0; i < lap.rows(); ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < lap.cols(); ++j)
      if (j != i) off += lap(i, j);
    lap(i, i) = -off;
  }
  return lap;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::kInvalidInput, "eigendecomposition failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double largest = values.cwiseAbs().maxCoeff();
  const double tol = static_cast<double>(symmetric.rows()) * std::numeric_limits<double>::epsilon() * largest;
  Eigen::VectorXd inverted(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    inverted(k) = std::abs(values(k)) > tol ? 1.0 / values(k) : 0.0;
  }
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  return vectors * inverted.asDiagonal() * vectors.transpose();
}

Eigen::MatrixXd build_incidence(const GridCase& grid) {
  const BusLayout layout = validate(grid);
  Eigen::MatrixXd incidence =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.lines.size()), static_cast<Eigen::Index>(layout.ids.size()));
  for (std::size_t m = 0; m < grid.lines.size(); ++m) {
    const auto row = static_cast<Eigen::Index>(m);
    incidence(row, static_cast<Eigen::Index>(layout.position(grid.lines[m].from))) = 1.0;
    incidence(row, static_cast<Eigen::Index>(layout.position(grid.lines[m].to))) = -1.0;
  }
  return incidence;
}

const char* to_string(RowKind kind) noexcept {
  switch (kind) {
    case RowKind::kBusUpper: return "bus-upper";
    case RowKind::kBusLower: return "bus-lower";
    case RowKind::kSlackLower: return "slack-lower";
    case RowKind::kSlackUpper: return "slack-upper";
    case RowKind::kPhaseForward: return "phase-forward";
    case RowKind::kPhaseBackward: return "phase-backward";
  }
  return "row";
}

ConstraintSystem assemble_constraints(const GridCase& grid) {
  const BusLayout layout = validate(grid);
  const Eigen::MatrixXd lap = build_laplacian(grid);
  const Eigen::MatrixXd pinv = pseudo_inverse(lap);
  const Eigen::MatrixXd incidence = build_incidence(grid);

  const auto nr = static_cast<Eigen::Index>(layout.random.size());
  const auto m = static_cast<Eigen::Index>(grid.lines.size());
  const auto slack = static_cast<Eigen::Index>(layout.slack);
  std::vector<const Bus*> bus_at(layout.ids.size());
  for (const Bus& b : grid.buses) bus_at[layout.position(b.id)] = &b;

  // Phase sensitivities: A = D (B+[:,R] - B+[:,S] 1_R^T), c = D (B+[:,F] - B+[:,S] 1_F^T) eta_F.
  Eigen::MatrixXd pinv_random(pinv.rows(), nr);
  for (Eigen::Index r = 0; r < nr; ++r)
    pinv_random.col(r) = pinv.col(static_cast<Eigen::Index>(layout.random[static_cast<std::size_t>(r)])) - pinv.col(slack);
  const Eigen::MatrixXd sensitivity = incidence * pinv_random;
  Eigen::VectorXd fixed_shift = Eigen::VectorXd::Zero(pinv.rows());
  double fixed_total = 0.0;
  for (std::size_t f : layout.fixed) {
    const double eta = bus_at[f]->eta;
    fixed_shift += (pinv.col(static_cast<Eigen::Index>(f)) - pinv.col(slack)) * eta;
    fixed_total += eta;
  }
  const Eigen::VectorXd phase_offset = incidence * fixed_shift;
  const Bus& slack_bus = *bus_at[layout.slack];

  ConstraintSystem cs;
  const Eigen::Index rows = 2 * nr + 2 + 2 * m;
  cs.gamma = Eigen::MatrixXd::Zero(rows, nr);
  cs.kappa.resize(rows);
  cs.labels.reserve(static_cast<std::size_t>(rows));
  cs.eta_random.resize(nr);
  for (Eigen::Index r = 0; r < nr; ++r) {
    const Bus& bus = *bus_at[layout.random[static_cast<std::size_t>(r)]];
    cs.random_bus_ids.push_back(bus.id);
    cs.eta_random(r) = bus.eta;
    cs.gamma(r, r) = 1.0;
    cs.kappa(r) = bus.p_max;
    cs.gamma(nr + r, r) = -1.0;
    cs.kappa(nr + r) = -bus.p_min;
  }
  for (Eigen::Index r = 0; r < nr; ++r) cs.labels.push_back({RowKind::kBusUpper, cs.random_bus_ids[static_cast<std::size_t>(r)], -1});
  for (Eigen::Index r = 0; r < nr; ++r) cs.labels.push_back({RowKind::kBusLower, cs.random_bus_ids[static_cast<std::size_t>(r)], -1});

  // p_S >= p_min_S  <=>  1^T p_R <= -p_min_S - 1^T eta_F
  cs.gamma.row(2 * nr).setOnes();
  cs.kappa(2 * nr) = -slack_bus.p_min - fixed_total;
  cs.labels.push_back({RowKind::kSlackLower, slack_bus.id, -1});
  // p_S <= p_max_S  <=>  -1^T p_R <= p_max_S + 1^T eta_F
  cs.gamma.row(2 * nr + 1).setConstant(-1.0);
  cs.kappa(2 * nr + 1) = slack_bus.p_max + fixed_total;
  cs.labels.push_back({RowKind::kSlackUpper, slack_bus.id, -1});

  const Eigen::Index phase = 2 * nr + 2;
  cs.gamma.middleRows(phase, m) = sensitivity;
  cs.gamma.middleRows(phase + m, m) = -sensitivity;
  for (Eigen::Index k = 0; k < m; ++k) {
    cs.kappa(phase + k) = grid.theta_bar - phase_offset(k);
    cs.kappa(phase + m + k) = grid.theta_bar + phase_offset(k);
  }
  for (Eigen::Index k = 0; k < m; ++k) cs.labels.push_back({RowKind::kPhaseForward, -1, static_cast<int>(k)});
  for (Eigen::Index k = 0; k < m; ++k) cs.labels.push_back({RowKind::kPhaseBackward, -1, static_cast<int>(k)});
  return cs;
}

GridProblem to_halfspace_problem(const ConstraintSystem& system, const GridCase& grid, double drop_tau) {
  validate(grid);
  const CovarianceRoot root = covariance_root(grid.sigma);
  const auto nr = system.gamma.cols();
  std::vector<Eigen::VectorXd> omegas;
  std::vector<double> taus;
  std::vector<std::size_t> rows, deterministic, unbounded;
  for (Eigen::Index j = 0; j < system.gamma.rows(); ++j) {
    const double kappa = system.kappa(j);
    const auto row_index = static_cast<std::size_t>(j);
    if (kappa == kInf) {
      unbounded.push_back(row_index);
      continue;
    }
    const Eigen::VectorXd gamma = system.gamma.row(j).transpose();
    const WhitenedRow w = whiten_row(root, system.eta_random, gamma, kappa);
    if (w.degenerate || !(w.variance > 0.0)) {
      const double at_mean = gamma.dot(system.eta_random);
      const double slack = 1e-12 * std::max({1.0, std::abs(kappa), std::abs(at_mean)});
      if (std::isnan(kappa) || at_mean > kappa + slack) {
        throw Error(ErrorCode::kInfeasibleDeterministicConstraint,
                    std::string(to_string(system.labels[row_index].kind)) + " row " + std::to_string(j) +
                        " is violated with certainty");
      }
      deterministic.push_back(row_index);
      continue;
    }
    omegas.push_back(w.omega);
    taus.push_back(w.tau);
    rows.push_back(row_index);
  }
  Eigen::MatrixXd omega(static_cast<Eigen::Index>(omegas.size()), nr);
  Eigen::VectorXd tau(static_cast<Eigen::Index>(taus.size()));
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    omega.row(static_cast<Eigen::Index>(k)) = omegas[k].transpose();
    tau(static_cast<Eigen::Index>(k)) = taus[k];
  }
  return GridProblem{HalfSpaceProblem(omega, tau, drop_tau), std::move(rows), std::move(deterministic),
                     std::move(unbounded)};
}

DcFlow solve_dc_flow(const GridCase& grid, const Eigen::VectorXd& p_random) {
  const BusLayout layout = validate(grid);
  if (p_random.size() != static_cast<Eigen::Index>(layout.random.size())) {
    throw Error(ErrorCode::kInvalidInput, "p_random has the wrong length");
  }
  const Eigen::MatrixXd lap = build_laplacian(grid);
  const auto n = static_cast<Eigen::Index>(layout.ids.size());
  DcFlow flow;
  flow.injections = Eigen::VectorXd::Zero(n);
  for (std::size_t r = 0; r < layout.random.size(); ++r)
    flow.injections(static_cast<Eigen::Index>(layout.random[r])) = p_random(static_cast<Eigen::Index>(r));
  for (const Bus& b : grid.buses)
    if (b.role == BusRole::kFixed) flow.injections(static_cast<Eigen::Index>(layout.position(b.id))) = b.eta;
  const auto slack = static_cast<Eigen::Index>(layout.slack);
  flow.slack_injection = -flow.injections.sum();
  flow.injections(slack) = flow.slack_injection;

  // Ground the slack bus and solve the reduced system exactly.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != slack) keep.push_back(i);
  const auto k = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd reduced(k, k);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    rhs(a) = flow.injections(keep[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < k; ++b) reduced(a, b) = lap(keep[static_cast<std::size_t>(a)], keep[static_cast<std::size_t>(b)]);
  }
  const Eigen::VectorXd theta_reduced = reduced.partialPivLu().solve(rhs);
  flow.phases = Eigen::VectorXd::Zero(n);
  for (Eigen::Index a = 0; a < k; ++a) flow.phases(keep[static_cast<std::size_t>(a)]) = theta_reduced(a);
  return flow;
}

bool physically_feasible(const GridCase& grid, const Eigen::VectorXd& p_random, double tolerance) {
  const BusLayout layout = validate(grid);
  const DcFlow flow = solve_dc_flow(grid, p_random);
  std::vector<const Bus*> bus_at(layout.ids.size());
  for (const Bus& b : grid.buses) bus_at[layout.position(b.id)] = &b;
  for (std::size_t r = 0; r < layout.random.size(); ++r) {
    const Bus& bus = *bus_at[layout.random[r]];
    const double p = p_random(static_cast<Eigen::Index>(r));
    if (p > bus.p_max + tolerance || p < bus.p_min - tolerance) return false;
  }
  const Bus& slack = *bus_at[layout.slack];
  if (flow.slack_injection > slack.p_max + tolerance || flow.slack_injection < slack.p_min - tolerance) return false;
  for (const Line& line : grid.lines) {
    const double diff = flow.phases(static_cast<Eigen::Index>(layout.position(line.from))) -
                        flow.phases(static_cast<Eigen::Index>(layout.position(line.to)));
    if (std::abs(diff) > grid.theta_bar + tolerance) return false;
  }
  return true;
}

}  // namespace aloe::grid
