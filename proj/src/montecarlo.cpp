#include "bootperc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <random>
#include <thread>

#include "bootperc/dynamics.hpp"
#include "bootperc/errors.hpp"

namespace bootperc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(seed ^ (trial * 0x9e3779b97f4a7c15ULL));
}

std::vector<LatticePoint> bernoulli_sample(std::int64_t n, double p, std::uint64_t stream_seed) {
  if (n < 1) throw PreconditionError("torus size must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("probability must lie in [0, 1]");
  std::mt19937_64 rng(stream_seed);
  std::vector<LatticePoint> out;
  for (std::int64_t y = 0; y < n; ++y)
    for (std::int64_t x = 0; x < n; ++x) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < p) out.push_back({x, y});
    }
  return out;
}

bool sample_percolation(const UpdateFamily& family, std::int64_t n, double p, std::uint64_t stream_seed) {
  if (n < 2) throw PreconditionError("torus size must be at least 2");
  const auto a = bernoulli_sample(n, p, stream_seed);
  if (static_cast<std::int64_t>(a.size()) == n * n) return true;
  const auto closed = closure_finite(family, Torus{n}, a);
  return static_cast<std::int64_t>(closed.infected.size()) == n * n;
}

PcEstimate estimate_pc(const UpdateFamily& family, std::int64_t n, std::uint64_t trials, double tolerance,
                       std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw PreconditionError("need at least one trial");
  if (!(tolerance > 0.0 && tolerance < 0.5)) throw PreconditionError("tolerance must lie in (0, 0.5)");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  auto probe = [&](double p) {
    std::atomic<std::uint64_t> next{0}, hits{0};
    auto worker = [&] {
      for (std::uint64_t t; (t = next.fetch_add(1)) < trials;)
        if (sample_percolation(family, n, p, trial_seed(seed, t))) hits.fetch_add(1);
    };
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    return PcProbe{p, hits.load(), trials};
  };

  PcEstimate est;
  est.n = n;
  est.trials_per_probe = trials;
  est.seed = seed;
  est.curve.push_back(probe(0.0));
  est.curve.push_back(probe(1.0));
  while (est.p_hi - est.p_lo > tolerance) {
    const double mid = 0.5 * (est.p_lo + est.p_hi);
    const auto pr = probe(mid);
    est.curve.push_back(pr);
    if (2 * pr.percolated >= pr.trials)
      est.p_hi = mid;
    else
      est.p_lo = mid;
  }
  return est;
}

std::string curve_csv(const PcEstimate& est) {
  auto rows = est.curve;
  std::stable_sort(rows.begin(), rows.end(), [](const PcProbe& a, const PcProbe& b) { return a.p < b.p; });
  std::string out = "p,frequency,percolated,trials\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%llu,%llu\n", r.p, r.frequency(),
                  static_cast<unsigned long long>(r.percolated), static_cast<unsigned long long>(r.trials));
    out += buf;
  }
  return out;
}

}  // namespace bootperc
