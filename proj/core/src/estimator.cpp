#include "aloe/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "aloe/discrete.hpp"
#include "aloe/error.hpp"

namespace aloe {
namespace {

using BlockBody = std::function<void(std::size_t worker, std::size_t block, std::size_t begin, std::size_t end)>;

// Hands out blocks [b*B, min(n, (b+1)*B)) to `threads` workers. Worker ids are
// stable so per-worker accumulators can be indexed without locking.
void run_blocks(std::size_t n, const EstimatorOptions& options, std::size_t workers, const BlockBody& body) {
  const std::size_t block_size = std::max<std::size_t>(1, options.block_size);
  const std::size_t blocks = (n + block_size - 1) / block_size;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&](std::size_t worker) {
    try {
      for (std::size_t b = next++; b < blocks; b = next++) {
        body(worker, b, b * block_size, std::min(n, (b + 1) * block_size));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };
  if (workers <= 1) {
    loop(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::size_t worker_count(std::size_t n, const EstimatorOptions& options) {
  const std::size_t block_size = std::max<std::size_t>(1, options.block_size);
  const std::size_t blocks = (n + block_size - 1) / block_size;
  return std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(1, blocks));
}

// Fills columns 0..(end-begin) of `points` with x_i ~ q_{j_i}, j_i ~ sampler.
void draw_block(const EventSystem& system, const DiscreteSampler& sampler, const RandomStream& base,
                std::size_t begin, std::size_t end, Eigen::MatrixXd& points, std::vector<std::size_t>& given) {
  for (std::size_t i = begin; i < end; ++i) {
    RandomStream rs = base.substream(i);
    const std::size_t j = sampler.draw(rs);
    const auto col = static_cast<Eigen::Index>(i - begin);
    given[i - begin] = j;
    system.draw_given(j, rs, std::span<double>(points.col(col).data(), static_cast<std::size_t>(points.rows())));
  }
}

struct HistogramSummary {
  double mean = 0.0;
  double se = 0.0;
  bool single_value = false;
};

// Mean and se of values mu_bar/s (count hist[s-1]) plus `zeros` values of 0.
HistogramSummary summarize(std::span<const std::uint64_t> hist, std::uint64_t zeros, double mu_bar, std::size_t n) {
  HistogramSummary out;
  std::size_t occupied = zeros > 0 ? 1 : 0;
  std::size_t only = 0;
  double weighted = 0.0;
  for (std::size_t s = 1; s <= hist.size(); ++s) {
    if (hist[s - 1] == 0) continue;
    ++occupied;
    only = s;
    weighted += static_cast<double>(hist[s - 1]) / static_cast<double>(s);
  }
  if (occupied <= 1) {
    out.single_value = true;
    out.mean = (zeros > 0 || only == 0) ? 0.0 : mu_bar / static_cast<double>(only);
    return out;
  }
  out.mean = mu_bar * (weighted / static_cast<double>(n));
  double ss = static_cast<double>(zeros) * out.mean * out.mean;
  for (std::size_t s = 1; s <= hist.size(); ++s) {
    if (hist[s - 1] == 0) continue;
    const double dev = mu_bar / static_cast<double>(s) - out.mean;
    ss += static_cast<double>(hist[s - 1]) * dev * dev;
  }
  if (n > 1) out.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return out;
}

DiscreteSampler balanced_sampler(const EventSystem& system) {
  const auto p = system.probabilities();
  if (system.size() == 0 || !(system.union_bound() > 0.0)) {
    throw Error(ErrorCode::kEmptyMixture, "union bound is zero; the union has probability 0");
  }
  return DiscreteSampler(p);
}

void require_samples(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "sample count must be at least 1");
}

struct Welford {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }
  void merge(const Welford& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / total;
    count += other.count;
  }
};

}  // namespace

double AloeEstimate::s_ge_2_fraction() const {
  if (n == 0 || s_histogram.empty()) return 0.0;
  const auto ones = s_histogram.front();
  return static_cast<double>(n - ones) / static_cast<double>(n);
}

AloeEstimate estimate(const EventSystem& system, std::size_t n, const RandomStream& stream,
                      const EstimatorOptions& options) {
  require_samples(n);
  const DiscreteSampler sampler = balanced_sampler(system);
  const std::size_t J = system.size();
  const std::size_t d = system.dimension();
  const std::size_t workers = worker_count(n, options);
  const std::size_t block_size = std::max<std::size_t>(1, options.block_size);

  std::vector<std::vector<std::uint64_t>> per_worker(workers, std::vector<std::uint64_t>(J, 0));
  run_blocks(n, options, workers, [&](std::size_t w, std::size_t, std::size_t begin, std::size_t end) {
    thread_local Eigen::MatrixXd points;
    thread_local std::vector<std::size_t> given, counts;
    points.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(std::min(block_size, n)));
    given.resize(end - begin);
    counts.resize(end - begin);
    draw_block(system, sampler, stream, begin, end, points, given);
    system.count_given_block(given, points, counts);
    for (std::size_t s : counts) ++per_worker[w][s - 1];
  });

  AloeEstimate out;
  out.n = n;
  out.events = J;
  out.seed = stream.seed();
  out.stream_id = stream.stream_id();
  out.union_bound = system.union_bound();
  out.lower_bound = system.lower_bound();
  out.s_histogram.assign(J, 0);
  for (const auto& h : per_worker)
    for (std::size_t s = 0; s < J; ++s) out.s_histogram[s] += h[s];

  const double mu_bar = out.union_bound;
  const double jd = static_cast<double>(J);
  out.hard_range = {mu_bar / jd, mu_bar};
  const HistogramSummary summary = summarize(out.s_histogram, 0, mu_bar, n);
  // Exact value lies in [mu_bar/J, mu_bar]; clamp away last-ulp rounding.
  out.mu_hat = std::clamp(summary.mean, out.hard_range[0], out.hard_range[1]);
  out.se = summary.se;
  out.degenerate_se = summary.single_value;

  const double nd = static_cast<double>(n);
  out.var_bound_theorem = out.mu_hat * (mu_bar - out.mu_hat) / nd;
  out.var_bound_lemma = out.mu_hat * out.mu_hat * (jd + 1.0 / jd - 2.0) / (4.0 * nd);
  const double by_lower = out.lower_bound > 0.0 ? std::sqrt(std::max(0.0, mu_bar / out.lower_bound - 1.0))
                                                : std::numeric_limits<double>::infinity();
  out.cv_bound = std::min(by_lower, std::sqrt(jd - 1.0)) / std::sqrt(nd);

  if (out.degenerate_se) {
    out.warnings.push_back("se is 0 because every draw had the same number of occurring events (S = " +
                           std::to_string(std::distance(out.s_histogram.begin(),
                                                        std::find_if(out.s_histogram.begin(), out.s_histogram.end(),
                                                                     [](auto c) { return c > 0; })) +
                                          1) +
                           ")");
  }
  if (out.mu_hat < out.lower_bound) {
    out.warnings.push_back("mu_hat is below the largest single-event probability");
  }
  return out;
}

SubEventEstimate estimate_subevent(const EventSystem& system, const PointPredicate& f, std::size_t n,
                                   const RandomStream& stream, const EstimatorOptions& options) {
  require_samples(n);
  const DiscreteSampler sampler = balanced_sampler(system);
  const std::size_t J = system.size();
  const std::size_t d = system.dimension();
  const std::size_t workers = worker_count(n, options);
  const std::size_t block_size = std::max<std::size_t>(1, options.block_size);

  std::vector<std::vector<std::uint64_t>> per_worker(workers, std::vector<std::uint64_t>(J, 0));
  run_blocks(n, options, workers, [&](std::size_t w, std::size_t, std::size_t begin, std::size_t end) {
    thread_local Eigen::MatrixXd points;
    thread_local std::vector<std::size_t> given, counts;
    points.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(std::min(block_size, n)));
    given.resize(end - begin);
    counts.resize(end - begin);
    draw_block(system, sampler, stream, begin, end, points, given);
    system.count_given_block(given, points, counts);
    for (std::size_t b = 0; b < counts.size(); ++b) {
      const auto col = points.col(static_cast<Eigen::Index>(b));
      if (f(std::span<const double>(col.data(), d))) ++per_worker[w][counts[b] - 1];
    }
  });

  std::vector<std::uint64_t> hist(J, 0);
  for (const auto& h : per_worker)
    for (std::size_t s = 0; s < J; ++s) hist[s] += h[s];
  SubEventEstimate out;
  out.n = n;
  out.union_bound = system.union_bound();
  out.hits = static_cast<std::size_t>(std::accumulate(hist.begin(), hist.end(), std::uint64_t{0}));
  const HistogramSummary summary = summarize(hist, n - out.hits, out.union_bound, n);
  out.nu_hat = summary.mean;
  out.se = summary.se;
  return out;
}

double mixture_integrand(std::span<const double> alpha, std::span<const double> probabilities,
                         std::span<const unsigned char> hits) {
  double denom = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (hits[k] && alpha[k] > 0.0) denom += alpha[k] / probabilities[k];
  }
  return denom > 0.0 ? 1.0 / denom : 0.0;
}

MixtureEstimate estimate_general_mixture(const EventSystem& system, std::span<const double> weights,
                                         std::size_t n, const RandomStream& stream,
                                         const EstimatorOptions& options) {
  require_samples(n);
  const std::size_t J = system.size();
  const auto p = system.probabilities();
  if (weights.size() != J) throw Error(ErrorCode::kInvalidWeights, "one weight per event is required");
  double total = 0.0;
  bool usable = false;
  for (std::size_t k = 0; k < J; ++k) {
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) {
      throw Error(ErrorCode::kInvalidWeights, "weights must be finite and nonnegative");
    }
    if (weights[k] > 0.0 && p[k] == 0.0) {
      throw Error(ErrorCode::kInvalidWeights, "positive weight on a zero-probability event");
    }
    usable = usable || weights[k] > 0.0;
    total += weights[k];
  }
  if (!usable) throw Error(ErrorCode::kInvalidWeights, "all weights are zero");
  std::vector<double> alpha(weights.begin(), weights.end());
  for (double& a : alpha) a /= total;

  const DiscreteSampler sampler(alpha);
  const std::size_t d = system.dimension();
  const std::size_t block_size = std::max<std::size_t>(1, options.block_size);
  const std::size_t blocks = (n + block_size - 1) / block_size;
  std::vector<Welford> per_block(blocks);
  run_blocks(n, options, worker_count(n, options), [&](std::size_t, std::size_t b, std::size_t begin, std::size_t end) {
    std::vector<double> x(d);
    std::vector<unsigned char> hits(J);
    Welford acc;
    for (std::size_t i = begin; i < end; ++i) {
      RandomStream rs = stream.substream(i);
      const std::size_t j = sampler.draw(rs);
      system.draw_given(j, rs, x);
      system.mark(x, hits);
      hits[j] = 1;
      acc.add(mixture_integrand(alpha, p, hits));
    }
    per_block[b] = acc;
  });
  Welford all;
  for (const auto& acc : per_block) all.merge(acc);
  MixtureEstimate out;
  out.n = n;
  out.mu_hat = all.mean;
  if (n > 1) out.se = std::sqrt(std::max(0.0, all.m2) / static_cast<double>(n - 1) / static_cast<double>(n));
  return out;
}

std::array<double, 2> histogram_moment(std::span<const std::uint64_t> hist, double mu_bar, int k) {
  std::uint64_t n = 0;
  double mean = 0.0;
  for (std::size_t s = 1; s <= hist.size(); ++s) {
    n += hist[s - 1];
    mean += static_cast<double>(hist[s - 1]) * std::pow(mu_bar / static_cast<double>(s), k);
  }
  if (n == 0) return {0.0, 0.0};
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t s = 1; s <= hist.size(); ++s) {
    const double dev = std::pow(mu_bar / static_cast<double>(s), k) - mean;
    ss += static_cast<double>(hist[s - 1]) * dev * dev;
  }
  const double se = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  return {mean, se};
}

double MomentCheck::combined_se() const {
  return std::sqrt(empirical_se * empirical_se + predicted_se * predicted_se);
}

MomentCheck moment_identity_check(const EventSystem& system, int k, std::span<const double> count_mass,
                                  std::size_t count_mass_samples, std::size_t n, const RandomStream& stream,
                                  const EstimatorOptions& options) {
  if (k < 1) throw Error(ErrorCode::kInvalidInput, "moment order must be >= 1");
  if (count_mass.size() != system.size()) {
    throw Error(ErrorCode::kInvalidDistribution, "count distribution must have one entry per s = 1..J");
  }
  const AloeEstimate run = estimate(system, n, stream, options);
  const double mu_bar = run.union_bound;
  MomentCheck out;
  out.k = k;
  const auto emp = histogram_moment(run.s_histogram, mu_bar, k);
  out.empirical = emp[0];
  out.empirical_se = emp[1];
  double second = 0.0;
  for (std::size_t s = 1; s <= count_mass.size(); ++s) {
    const double c = std::pow(mu_bar / static_cast<double>(s), k - 1);
    out.predicted += count_mass[s - 1] * c;
    second += count_mass[s - 1] * c * c;
  }
  if (count_mass_samples > 0) {
    out.predicted_se =
        std::sqrt(std::max(0.0, second - out.predicted * out.predicted) / static_cast<double>(count_mass_samples));
  }
  return out;
}

}  // namespace aloe
