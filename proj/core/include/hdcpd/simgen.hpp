#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hdcpd/types.hpp"

// Seeded generators for every simulation scenario, emitting data together
// with the ground-truth change-point locations. A location tau is the last
// index of the regime before the change.

namespace hdcpd {

struct LabeledDataset {
  DataMatrix data;
  std::vector<std::uint32_t> true_cps;  // sorted, 1-based
  std::string scenario;
  std::vector<std::pair<std::string, double>> params;
};

enum class Scenario {
  null_gauss_iid,
  null_gauss_ar,       // cross-sectional AR(1), corr 0.7^|i-j|
  null_arch2,          // per-coordinate ARCH(2)
  null_garch11,        // per-coordinate GARCH(1,1)
  mean_shift_iid,      // +0.6 mean shift at floor(n/2)
  mean_shift_ar,
  higher_moment_exp,              // N(1, I) -> Exponential(1)
  higher_moment_poisson_rademacher,  // centered Poisson -> mixed block
  higher_moment_banded,           // banded-correlation Gaussian -> centered Exponential
  two_cp_mean_iid,                // mean 0.6 on (floor(n/3), 2*floor(n/3)]
  two_cp_mean_ar,
  two_cp_higher_exp,
  two_cp_higher_poisson,
  directed_chain,  // X = (I - L)^{-1} eps, innovations switch N(1,I) -> Exp(1)
  fvbm,            // fully visible Boltzmann machine, parameter shift at n/2
};

Scenario scenario_from_name(std::string_view name);
std::string_view scenario_name(Scenario scenario);
std::vector<std::string_view> scenario_names();

LabeledDataset generate(Scenario scenario, std::size_t n, std::size_t p, std::uint64_t seed);

/// Gibbs sampler for a fully visible Boltzmann machine on {-1,+1}^p with
/// density proportional to exp(x'Mx/2 + b'x). The full conditional of
/// coordinate i is +1 with probability sigmoid(2(b_i + sum_j M_ij x_j)).
/// One chain: `burnin` sweeps discarded, then every `thin`-th sweep kept
/// until `count` samples are collected. M must be symmetric with a zero
/// diagonal.
RealMatrix fvbm_gibbs(std::span<const double> bias, const RealMatrix& coupling, std::size_t count,
                      std::size_t burnin, std::size_t thin, std::uint64_t seed);

/// Two-regime FVBM sequence: (b, M) = (0.1, 0.1 on the first off-diagonal)
/// up to floor(n/2), then (0.5, 0.3). Default chain settings: burnin 1000
/// sweeps, thin 10.
LabeledDataset fvbm_scenario(std::size_t n, std::size_t p, std::uint64_t seed);

}  // namespace hdcpd
