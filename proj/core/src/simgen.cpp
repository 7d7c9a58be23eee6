#include "hdcpd/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "hdcpd/rng.hpp"

namespace hdcpd {

namespace {

constexpr double kMeanShift = 0.6;
constexpr double kArCoeff = 0.7;
constexpr double kMixedBlockFraction = 0.5;  // beta
constexpr double kChainCoeff = 0.5;          // phi
constexpr std::size_t kVolatilityWarmup = 50;

struct NamedParams {
  std::vector<std::pair<std::string, double>> values;
  void add(std::string name, double value) { values.emplace_back(std::move(name), value); }
};

void require_sizes(std::size_t n, std::size_t p, std::size_t min_n = 1, std::size_t min_p = 1) {
  if (n < min_n) {
    throw ValidationError("generate: n = " + std::to_string(n) + " below minimum " +
                          std::to_string(min_n));
  }
  if (p < min_p) {
    throw ValidationError("generate: p = " + std::to_string(p) + " below minimum " +
                          std::to_string(min_p));
  }
}

// Row with lag-1 coefficient 0.7 across coordinates; stationary N(0,1)
// margins with corr(x_i, x_j) = 0.7^|i-j|.
void fill_ar_row(std::span<double> row, RandomStream& rs) {
  const double innov_sd = std::sqrt(1.0 - kArCoeff * kArCoeff);
  row[0] = rs.normal();
  for (std::size_t j = 1; j < row.size(); ++j) {
    row[j] = kArCoeff * row[j - 1] + innov_sd * rs.normal();
  }
}

void fill_gauss_rows(DataMatrix& data, std::size_t t0, std::size_t t1, double mean, bool ar,
                     RandomStream& rs) {
  for (std::size_t t = t0; t < t1; ++t) {
    auto row = data.row(t);
    if (ar) {
      fill_ar_row(row, rs);
    } else {
      for (double& v : row) v = rs.normal();
    }
    if (mean != 0.0) {
      for (double& v : row) v += mean;
    }
  }
}

void fill_exponential_rows(DataMatrix& data, std::size_t t0, std::size_t t1, RandomStream& rs) {
  for (std::size_t t = t0; t < t1; ++t) {
    for (double& v : data.row(t)) v = rs.exponential();
  }
}

void fill_centered_poisson_rows(DataMatrix& data, std::size_t t0, std::size_t t1,
                                RandomStream& rs) {
  for (std::size_t t = t0; t < t1; ++t) {
    for (double& v : data.row(t)) v = static_cast<double>(rs.poisson(1.0)) - 1.0;
  }
}

// Mixed regime: first floor(beta*p) coordinates stay centered Poisson, the
// rest switch to Rademacher.
void fill_mixed_rows(DataMatrix& data, std::size_t t0, std::size_t t1, RandomStream& rs) {
  const std::size_t split = static_cast<std::size_t>(
      std::floor(kMixedBlockFraction * static_cast<double>(data.p())));
  for (std::size_t t = t0; t < t1; ++t) {
    auto row = data.row(t);
    for (std::size_t j = 0; j < split; ++j) row[j] = static_cast<double>(rs.poisson(1.0)) - 1.0;
    for (std::size_t j = split; j < row.size(); ++j) row[j] = rs.rademacher();
  }
}

// Per-coordinate volatility recursions. sigma2 starts at the unconditional
// variance; the first kVolatilityWarmup steps are discarded.
void fill_arch2(DataMatrix& data, RandomStream& rs) {
  constexpr double a0 = 1e-6, a1 = 0.008, a2 = 0.001;
  const double uncond = a0 / (1.0 - a1 - a2);
  const std::size_t n = data.n();
  for (std::size_t i = 0; i < data.p(); ++i) {
    double x_prev2 = std::sqrt(uncond) * rs.normal();
    double x_prev1 = std::sqrt(uncond) * rs.normal();
    for (std::size_t t = 0; t < kVolatilityWarmup + n; ++t) {
      const double sigma2 = a0 + a1 * x_prev1 * x_prev1 + a2 * x_prev2 * x_prev2;
      const double x = std::sqrt(sigma2) * rs.normal();
      x_prev2 = x_prev1;
      x_prev1 = x;
      if (t >= kVolatilityWarmup) data.at(t - kVolatilityWarmup, i) = x;
    }
  }
}

void fill_garch11(DataMatrix& data, RandomStream& rs) {
  constexpr double a0 = 1e-6, a1 = 0.001, b1 = 0.001;
  const double uncond = a0 / (1.0 - a1 - b1);
  const std::size_t n = data.n();
  for (std::size_t i = 0; i < data.p(); ++i) {
    double sigma2 = uncond;
    double x_prev = std::sqrt(uncond) * rs.normal();
    for (std::size_t t = 0; t < kVolatilityWarmup + n; ++t) {
      sigma2 = a0 + a1 * x_prev * x_prev + b1 * sigma2;
      const double x = std::sqrt(sigma2) * rs.normal();
      x_prev = x;
      if (t >= kVolatilityWarmup) data.at(t - kVolatilityWarmup, i) = x;
    }
  }
}

// Symmetric square root of the banded correlation matrix r_ij = 0.25 for
// 1 <= |i-j| <= 2. Dense eigen-decomposition, cached per dimension.
std::shared_ptr<const Eigen::MatrixXd> banded_sqrt(std::size_t p) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const Eigen::MatrixXd>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (const auto it = cache.find(p); it != cache.end()) return it->second;

  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < std::min(p, i + 3); ++j) {
      r(i, j) = 0.25;
      r(j, i) = 0.25;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(r);
  if (solver.eigenvalues().minCoeff() <= 0.0) {
    throw ValidationError("banded correlation matrix is not positive definite");
  }
  auto root = std::make_shared<Eigen::MatrixXd>(
      solver.eigenvectors() * solver.eigenvalues().cwiseSqrt().asDiagonal() *
      solver.eigenvectors().transpose());
  cache.emplace(p, root);
  return root;
}

void fill_banded_rows(DataMatrix& data, std::size_t t0, std::size_t t1, bool exponential,
                      RandomStream& rs) {
  const auto root = banded_sqrt(data.p());
  Eigen::VectorXd z(static_cast<Eigen::Index>(data.p()));
  for (std::size_t t = t0; t < t1; ++t) {
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      z[j] = exponential ? rs.exponential() - 1.0 : rs.normal();
    }
    const Eigen::VectorXd x = (*root) * z;
    auto row = data.row(t);
    for (std::size_t j = 0; j < data.p(); ++j) row[j] = x[static_cast<Eigen::Index>(j)];
  }
}

// x_1 = eps_1, x_i = phi * x_{i-1} + eps_i: forward substitution of
// (I - L) x = eps for the lower-triangular chain L.
void fill_directed_chain(DataMatrix& data, std::size_t t0, std::size_t t1, bool exponential,
                         RandomStream& rs) {
  for (std::size_t t = t0; t < t1; ++t) {
    auto row = data.row(t);
    double prev = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double eps = exponential ? rs.exponential() : rs.normal() + 1.0;
      prev = (j == 0 ? eps : kChainCoeff * prev + eps);
      row[j] = prev;
    }
  }
}

}  // namespace

Scenario scenario_from_name(std::string_view name) {
  for (const auto scenario :
       {Scenario::null_gauss_iid, Scenario::null_gauss_ar, Scenario::null_arch2,
        Scenario::null_garch11, Scenario::mean_shift_iid, Scenario::mean_shift_ar,
        Scenario::higher_moment_exp, Scenario::higher_moment_poisson_rademacher,
        Scenario::higher_moment_banded, Scenario::two_cp_mean_iid, Scenario::two_cp_mean_ar,
        Scenario::two_cp_higher_exp, Scenario::two_cp_higher_poisson, Scenario::directed_chain,
        Scenario::fvbm}) {
    if (scenario_name(scenario) == name) return scenario;
  }
  throw ValidationError("unknown scenario '" + std::string(name) + "'");
}

std::string_view scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::null_gauss_iid: return "null_gauss_iid";
    case Scenario::null_gauss_ar: return "null_gauss_ar";
    case Scenario::null_arch2: return "null_arch2";
    case Scenario::null_garch11: return "null_garch11";
    case Scenario::mean_shift_iid: return "mean_shift_iid";
    case Scenario::mean_shift_ar: return "mean_shift_ar";
    case Scenario::higher_moment_exp: return "higher_moment_exp";
    case Scenario::higher_moment_poisson_rademacher: return "higher_moment_poisson_rademacher";
    case Scenario::higher_moment_banded: return "higher_moment_banded";
    case Scenario::two_cp_mean_iid: return "two_cp_mean_iid";
    case Scenario::two_cp_mean_ar: return "two_cp_mean_ar";
    case Scenario::two_cp_higher_exp: return "two_cp_higher_exp";
    case Scenario::two_cp_higher_poisson: return "two_cp_higher_poisson";
    case Scenario::directed_chain: return "directed_chain";
    case Scenario::fvbm: return "fvbm";
  }
  return "unknown";
}

std::vector<std::string_view> scenario_names() {
  std::vector<std::string_view> names;
  for (int s = 0; s <= static_cast<int>(Scenario::fvbm); ++s) {
    names.push_back(scenario_name(static_cast<Scenario>(s)));
  }
  return names;
}

LabeledDataset generate(Scenario scenario, std::size_t n, std::size_t p, std::uint64_t seed) {
  if (scenario == Scenario::fvbm) return fvbm_scenario(n, p, seed);
  require_sizes(n, p);

  LabeledDataset out;
  out.scenario = std::string(scenario_name(scenario));
  out.data = DataMatrix(n, p);
  NamedParams params;
  params.add("seed", static_cast<double>(seed));

  RandomStream rs(substream_seed(seed, StreamDomain::datagen, 0));
  const std::size_t half = n / 2;
  const std::size_t third = n / 3;

  const auto one_cp = [&](std::size_t tau) {
    if (tau >= 1 && tau < n) out.true_cps.push_back(static_cast<std::uint32_t>(tau));
  };
  const auto two_cps = [&] {
    if (third >= 1 && 2 * third < n && third < 2 * third) {
      out.true_cps.push_back(static_cast<std::uint32_t>(third));
      out.true_cps.push_back(static_cast<std::uint32_t>(2 * third));
    }
  };

  switch (scenario) {
    case Scenario::null_gauss_iid:
      fill_gauss_rows(out.data, 0, n, 0.0, false, rs);
      break;
    case Scenario::null_gauss_ar:
      fill_gauss_rows(out.data, 0, n, 0.0, true, rs);
      params.add("ar_coeff", kArCoeff);
      break;
    case Scenario::null_arch2:
      fill_arch2(out.data, rs);
      break;
    case Scenario::null_garch11:
      fill_garch11(out.data, rs);
      break;
    case Scenario::mean_shift_iid:
    case Scenario::mean_shift_ar: {
      const bool ar = scenario == Scenario::mean_shift_ar;
      fill_gauss_rows(out.data, 0, half, 0.0, ar, rs);
      fill_gauss_rows(out.data, half, n, kMeanShift, ar, rs);
      one_cp(half);
      params.add("shift", kMeanShift);
      break;
    }
    case Scenario::higher_moment_exp:
      fill_gauss_rows(out.data, 0, half, 1.0, false, rs);
      fill_exponential_rows(out.data, half, n, rs);
      one_cp(half);
      break;
    case Scenario::higher_moment_poisson_rademacher:
      fill_centered_poisson_rows(out.data, 0, half, rs);
      fill_mixed_rows(out.data, half, n, rs);
      one_cp(half);
      params.add("beta", kMixedBlockFraction);
      break;
    case Scenario::higher_moment_banded:
      fill_banded_rows(out.data, 0, half, false, rs);
      fill_banded_rows(out.data, half, n, true, rs);
      one_cp(half);
      break;
    case Scenario::two_cp_mean_iid:
    case Scenario::two_cp_mean_ar: {
      const bool ar = scenario == Scenario::two_cp_mean_ar;
      fill_gauss_rows(out.data, 0, third, 0.0, ar, rs);
      fill_gauss_rows(out.data, third, 2 * third, kMeanShift, ar, rs);
      fill_gauss_rows(out.data, 2 * third, n, 0.0, ar, rs);
      two_cps();
      params.add("shift", kMeanShift);
      break;
    }
    case Scenario::two_cp_higher_exp:
      fill_gauss_rows(out.data, 0, third, 1.0, false, rs);
      fill_exponential_rows(out.data, third, 2 * third, rs);
      fill_gauss_rows(out.data, 2 * third, n, 1.0, false, rs);
      two_cps();
      break;
    case Scenario::two_cp_higher_poisson:
      fill_centered_poisson_rows(out.data, 0, third, rs);
      fill_mixed_rows(out.data, third, 2 * third, rs);
      fill_centered_poisson_rows(out.data, 2 * third, n, rs);
      two_cps();
      params.add("beta", kMixedBlockFraction);
      break;
    case Scenario::directed_chain:
      fill_directed_chain(out.data, 0, half, false, rs);
      fill_directed_chain(out.data, half, n, true, rs);
      one_cp(half);
      params.add("phi", kChainCoeff);
      break;
    case Scenario::fvbm:
      break;  // handled above
  }

  out.params = std::move(params.values);
  return out;
}

RealMatrix fvbm_gibbs(std::span<const double> bias, const RealMatrix& coupling, std::size_t count,
                      std::size_t burnin, std::size_t thin, std::uint64_t seed) {
  const std::size_t p = bias.size();
  if (p == 0) throw ValidationError("fvbm_gibbs: empty bias vector");
  if (coupling.rows != p || coupling.cols != p) {
    throw ValidationError("fvbm_gibbs: coupling matrix must be p x p");
  }
  for (std::size_t i = 0; i < p; ++i) {
    if (coupling.at(i, i) != 0.0) {
      throw ValidationError("fvbm_gibbs: coupling diagonal must be zero");
    }
    for (std::size_t j = i + 1; j < p; ++j) {
      if (coupling.at(i, j) != coupling.at(j, i)) {
        throw ValidationError("fvbm_gibbs: coupling matrix must be symmetric");
      }
    }
  }
  if (thin == 0) throw ValidationError("fvbm_gibbs: thin must be at least 1");

  RandomStream rs(seed);
  std::vector<double> state(p);
  for (double& v : state) v = rs.rademacher();

  const auto sweep = [&] {
    for (std::size_t i = 0; i < p; ++i) {
      double field = bias[i];
      const double* row = coupling.data.data() + i * p;
      for (std::size_t j = 0; j < p; ++j) field += row[j] * state[j];
      const double prob_plus = 1.0 / (1.0 + std::exp(-2.0 * field));
      state[i] = rs.uniform() < prob_plus ? 1.0 : -1.0;
    }
  };

  for (std::size_t t = 0; t < burnin; ++t) sweep();

  RealMatrix samples(count, p);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t t = 0; t < thin; ++t) sweep();
    std::copy(state.begin(), state.end(), samples.row(s).begin());
  }
  return samples;
}

LabeledDataset fvbm_scenario(std::size_t n, std::size_t p, std::uint64_t seed) {
  require_sizes(n, p, 1, 2);

  const auto banded_coupling = [p](double value) {
    RealMatrix m(p, p);
    for (std::size_t i = 0; i + 1 < p; ++i) {
      m.at(i, i + 1) = value;
      m.at(i + 1, i) = value;
    }
    return m;
  };
  constexpr std::size_t kBurnin = 1000;
  constexpr std::size_t kThin = 10;

  const std::size_t half = n / 2;
  LabeledDataset out;
  out.scenario = std::string(scenario_name(Scenario::fvbm));
  out.data = DataMatrix(n, p);
  if (half >= 1 && half < n) out.true_cps.push_back(static_cast<std::uint32_t>(half));
  out.params = {{"seed", static_cast<double>(seed)}, {"bias1", 0.1}, {"coupling1", 0.1},
                {"bias2", 0.5},                      {"coupling2", 0.3},
                {"burnin", double(kBurnin)},         {"thin", double(kThin)}};

  const std::vector<double> bias1(p, 0.1), bias2(p, 0.5);
  const RealMatrix regime1 = fvbm_gibbs(bias1, banded_coupling(0.1), half, kBurnin, kThin,
                                        substream_seed(seed, StreamDomain::chain, 1));
  const RealMatrix regime2 = fvbm_gibbs(bias2, banded_coupling(0.3), n - half, kBurnin, kThin,
                                        substream_seed(seed, StreamDomain::chain, 2));
  for (std::size_t t = 0; t < half; ++t) {
    std::copy_n(regime1.row(t).begin(), p, out.data.row(t).begin());
  }
  for (std::size_t t = half; t < n; ++t) {
    std::copy_n(regime2.row(t - half).begin(), p, out.data.row(t).begin());
  }
  return out;
}

}  // namespace hdcpd
