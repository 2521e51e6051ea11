#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bootperc/family.hpp"
#include "bootperc/geometry.hpp"

namespace bootperc {

// Seed of trial t: splitmix64(seed ^ (t * golden ratio constant)). Each trial
// drives a std::mt19937_64; site (x, y) of the n x n torus takes draw number
// y*n + x (row-major) and is infected iff (draw >> 11) * 2^-53 < p.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

std::vector<LatticePoint> bernoulli_sample(std::int64_t n, double p, std::uint64_t stream_seed);

// Whether the closure of a Bernoulli(p) sample fills the n x n torus.
bool sample_percolation(const UpdateFamily& family, std::int64_t n, double p, std::uint64_t stream_seed);

struct PcProbe {
  double p = 0;
  std::uint64_t percolated = 0;
  std::uint64_t trials = 0;
  double frequency() const { return trials ? static_cast<double>(percolated) / static_cast<double>(trials) : 0.0; }
};

struct PcEstimate {
  std::int64_t n = 0;
  double p_lo = 0;  // measured frequency < 1/2
  double p_hi = 1;  // measured frequency >= 1/2
  std::uint64_t trials_per_probe = 0;
  std::uint64_t seed = 0;
  std::vector<PcProbe> curve;  // in probe order

  double estimate() const { return 0.5 * (p_lo + p_hi); }
};

// Bisection on p until p_hi - p_lo <= tolerance. Every probe reuses the same
// per-trial random streams, so the measured frequency is monotone in p.
PcEstimate estimate_pc(const UpdateFamily& family, std::int64_t n, std::uint64_t trials, double tolerance,
                       std::uint64_t seed, unsigned threads = 0);

// "p,frequency,percolated,trials" rows sorted by p.
std::string curve_csv(const PcEstimate& est);

}  // namespace bootperc
