#include "hdcpd/two_sample.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hdcpd {

namespace {

void require_size(std::span<const std::uint32_t> idx, std::size_t min_size, const char* what) {
  if (idx.size() < min_size) {
    throw ValidationError(std::string(what) + ": index set of size " + std::to_string(idx.size()) +
                          " is below the minimum " + std::to_string(min_size));
  }
}

void require_valid(const DistanceMatrix& D, std::span<const std::uint32_t> idx, const char* what) {
  for (const std::uint32_t i : idx) {
    if (i >= D.n) {
      throw ValidationError(std::string(what) + ": index " + std::to_string(i) +
                            " exceeds matrix size " + std::to_string(D.n));
    }
  }
}

void require_disjoint(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                      std::span<const std::uint32_t> idx_b, const char* what) {
  require_valid(D, idx_a, what);
  require_valid(D, idx_b, what);
  std::vector<char> mark(D.n, 0);
  for (const std::uint32_t i : idx_a) {
    if (mark[i]) throw ValidationError(std::string(what) + ": repeated index in first set");
    mark[i] = 1;
  }
  for (const std::uint32_t i : idx_b) {
    if (mark[i] == 1) throw ValidationError(std::string(what) + ": index sets overlap");
    if (mark[i] == 2) throw ValidationError(std::string(what) + ": repeated index in second set");
    mark[i] = 2;
  }
}

struct WithinSums {
  double sum = 0, sumsq = 0, rowsq = 0;
};

WithinSums within_sums(const DistanceMatrix& D, std::span<const std::uint32_t> idx) {
  WithinSums out;
  for (const std::uint32_t i : idx) {
    const double* row = D.row_ptr(i);
    double r = 0, r2 = 0;
    for (const std::uint32_t j : idx) {
      const double v = row[j];
      r += v;
      r2 += v * v;
    }
    out.sum += r;
    out.sumsq += r2;
    out.rowsq += r * r;
  }
  return out;
}

}  // namespace

namespace detail {

SplitSums gather_split_sums(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                            std::span<const std::uint32_t> idx_b) {
  SplitSums s;
  s.na = idx_a.size();
  s.nb = idx_b.size();

  const WithinSums a = within_sums(D, idx_a);
  s.sa = a.sum;
  s.ssa = a.sumsq;
  s.rqa = a.rowsq;
  const WithinSums b = within_sums(D, idx_b);
  s.sb = b.sum;
  s.ssb = b.sumsq;
  s.rqb = b.rowsq;

  std::vector<double> col(idx_b.size(), 0.0);
  for (const std::uint32_t i : idx_a) {
    const double* row = D.row_ptr(i);
    double u = 0, u2 = 0;
    for (std::size_t l = 0; l < idx_b.size(); ++l) {
      const double v = row[idx_b[l]];
      u += v;
      u2 += v * v;
      col[l] += v;
    }
    s.sc += u;
    s.ssc += u2;
    s.rq_u += u * u;
  }
  for (const double w : col) s.rq_w += w * w;
  return s;
}

double u_centered_offdiag_sq(std::size_t n, double sum, double sumsq, double rowsq) {
  const double k = static_cast<double>(n);
  const double c = 1.0 / (k - 2.0);
  const double e = 1.0 / ((k - 1.0) * (k - 2.0));
  const double s2 = sum * sum;
  const double total = sumsq + 2.0 * c * c * k * rowsq + e * e * s2 * k * k - 4.0 * c * rowsq +
                       2.0 * e * s2 + 2.0 * c * c * s2 - 4.0 * c * e * k * s2;
  const double diag = 4.0 * c * c * rowsq - 4.0 * c * e * s2 + k * e * e * s2;
  return total - diag;
}

TwoSampleResult assemble(const SplitSums& s) {
  const double na = static_cast<double>(s.na);
  const double nb = static_cast<double>(s.nb);

  TwoSampleResult r;
  r.n = s.na;
  r.m = s.nb;
  r.e_stat = 2.0 * s.sc / (na * nb) - s.sa / (na * (na - 1.0)) - s.sb / (nb * (nb - 1.0));

  const double d2a = u_centered_offdiag_sq(s.na, s.sa, s.ssa, s.rqa) / (na * (na - 3.0));
  const double d2b = u_centered_offdiag_sq(s.nb, s.sb, s.ssb, s.rqb) / (nb * (nb - 3.0));
  const double cross_sq =
      s.ssc - s.rq_w / na - s.rq_u / nb + s.sc * s.sc / (na * nb);
  const double cov = cross_sq / ((na - 1.0) * (nb - 1.0));

  const double va = pooled_weight(s.na);
  const double vb = pooled_weight(s.nb);
  const double cross_w = (na - 1.0) * (nb - 1.0);
  const double s2 = (4.0 * va * d2a + 4.0 * vb * d2b + 4.0 * cross_w * cov) / (va + vb + cross_w);

  const double a_sq = 1.0 / (na * nb) + 0.5 / (na * (na - 1.0)) + 0.5 / (nb * (nb - 1.0));
  r.a_nm = std::sqrt(a_sq);

  if (s2 <= kDegenerateVarianceEps) {
    r.s2 = std::max(s2, 0.0);
    r.degenerate = true;
    r.t = 0.0;
  } else {
    r.s2 = s2;
    r.t = r.e_stat / (r.a_nm * std::sqrt(s2));
  }
  return r;
}

}  // namespace detail

double energy_u_stat(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                     std::span<const std::uint32_t> idx_b) {
  require_size(idx_a, 2, "energy_u_stat");
  require_size(idx_b, 2, "energy_u_stat");
  require_disjoint(D, idx_a, idx_b, "energy_u_stat");
  const double na = static_cast<double>(idx_a.size());
  const double nb = static_cast<double>(idx_b.size());
  const WithinSums a = within_sums(D, idx_a);
  const WithinSums b = within_sums(D, idx_b);
  double cross = 0.0;
  for (const std::uint32_t i : idx_a) {
    const double* row = D.row_ptr(i);
    for (const std::uint32_t j : idx_b) cross += row[j];
  }
  return 2.0 * cross / (na * nb) - a.sum / (na * (na - 1.0)) - b.sum / (nb * (nb - 1.0));
}

RealMatrix u_center_within(const DistanceMatrix& D, std::span<const std::uint32_t> idx) {
  require_size(idx, 3, "u_center_within");
  require_valid(D, idx, "u_center_within");
  const std::size_t k = idx.size();
  const double n = static_cast<double>(k);

  std::vector<double> row_sum(k, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double* row = D.row_ptr(idx[i]);
    double r = 0.0;
    for (std::size_t j = 0; j < k; ++j) r += row[idx[j]];
    row_sum[i] = r;
    total += r;
  }

  RealMatrix out(k, k);
  const double c = 1.0 / (n - 2.0);
  const double e = total / ((n - 1.0) * (n - 2.0));
  for (std::size_t i = 0; i < k; ++i) {
    const double* row = D.row_ptr(idx[i]);
    for (std::size_t j = 0; j < k; ++j) {
      out.at(i, j) = row[idx[j]] - c * row_sum[i] - c * row_sum[j] + e;
    }
  }
  return out;
}

RealMatrix double_center_cross(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                               std::span<const std::uint32_t> idx_b) {
  require_size(idx_a, 1, "double_center_cross");
  require_size(idx_b, 1, "double_center_cross");
  require_disjoint(D, idx_a, idx_b, "double_center_cross");
  const std::size_t n = idx_a.size();
  const std::size_t m = idx_b.size();

  std::vector<double> row_mean(n, 0.0), col_mean(m, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = D.row_ptr(idx_a[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const double v = row[idx_b[j]];
      row_mean[i] += v;
      col_mean[j] += v;
      total += v;
    }
  }
  for (double& v : row_mean) v /= static_cast<double>(m);
  for (double& v : col_mean) v /= static_cast<double>(n);
  total /= static_cast<double>(n) * static_cast<double>(m);

  RealMatrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = D.row_ptr(idx_a[i]);
    for (std::size_t j = 0; j < m; ++j) {
      out.at(i, j) = row[idx_b[j]] - row_mean[i] - col_mean[j] + total;
    }
  }
  return out;
}

double distance_variance(const DistanceMatrix& D, std::span<const std::uint32_t> idx) {
  require_size(idx, 4, "distance_variance");
  require_valid(D, idx, "distance_variance");
  const WithinSums s = within_sums(D, idx);
  const double n = static_cast<double>(idx.size());
  return detail::u_centered_offdiag_sq(idx.size(), s.sum, s.sumsq, s.rowsq) / (n * (n - 3.0));
}

double cross_distance_covariance(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                                 std::span<const std::uint32_t> idx_b) {
  require_size(idx_a, 2, "cross_distance_covariance");
  require_size(idx_b, 2, "cross_distance_covariance");
  require_disjoint(D, idx_a, idx_b, "cross_distance_covariance");
  const double na = static_cast<double>(idx_a.size());
  const double nb = static_cast<double>(idx_b.size());

  std::vector<double> col(idx_b.size(), 0.0);
  double sc = 0, ssc = 0, rq_u = 0, rq_w = 0;
  for (const std::uint32_t i : idx_a) {
    const double* row = D.row_ptr(i);
    double u = 0, u2 = 0;
    for (std::size_t l = 0; l < idx_b.size(); ++l) {
      const double v = row[idx_b[l]];
      u += v;
      u2 += v * v;
      col[l] += v;
    }
    sc += u;
    ssc += u2;
    rq_u += u * u;
  }
  for (const double w : col) rq_w += w * w;

  const double cross_sq = ssc - rq_w / na - rq_u / nb + sc * sc / (na * nb);
  return cross_sq / ((na - 1.0) * (nb - 1.0));
}

double pooled_variance(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                       std::span<const std::uint32_t> idx_b) {
  require_size(idx_a, 4, "pooled_variance");
  require_size(idx_b, 4, "pooled_variance");
  require_disjoint(D, idx_a, idx_b, "pooled_variance");
  return detail::assemble(detail::gather_split_sums(D, idx_a, idx_b)).s2;
}

TwoSampleResult t_statistic(const DistanceMatrix& D, std::span<const std::uint32_t> idx_a,
                            std::span<const std::uint32_t> idx_b) {
  require_size(idx_a, 4, "t_statistic");
  require_size(idx_b, 4, "t_statistic");
  require_disjoint(D, idx_a, idx_b, "t_statistic");
  return detail::assemble(detail::gather_split_sums(D, idx_a, idx_b));
}

}  // namespace hdcpd
