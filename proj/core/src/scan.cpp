#include "hdcpd/scan.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace hdcpd {

namespace {

void require_segment(const DistanceMatrix& D, std::uint32_t s, std::uint32_t e) {
  if (s < 1 || e > D.n || s > e) {
    throw ValidationError("scan: segment [" + std::to_string(s) + ", " + std::to_string(e) +
                          "] out of range for n = " + std::to_string(D.n));
  }
  if (e - s < 7) {
    throw ValidationError("scan: segment [" + std::to_string(s) + ", " + std::to_string(e) +
                          "] holds fewer than 8 observations");
  }
}

std::vector<std::uint32_t> identity_order(std::size_t n) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  return order;
}

ScanProfile profile_impl(const DistanceMatrix& D, std::span<const std::uint32_t> order,
                         std::uint32_t s, std::uint32_t e) {
  require_segment(D, s, e);
  if (order.size() != D.n) {
    throw ValidationError("scan: order length does not match matrix size");
  }

  detail::SegmentScanner scanner;
  scanner.load(D, order.subspan(s - 1, e - s + 1));
  const std::size_t len = scanner.size();
  const double denom = static_cast<double>(len) * static_cast<double>(len);

  ScanProfile profile;
  profile.s = s;
  profile.e = e;
  profile.splits.reserve(len - 7);

  bool found = false;
  for (std::size_t left = 4; left + 4 <= len; ++left) {
    const TwoSampleResult r = scanner.split_stat(left);
    SplitValue sv;
    sv.b = s + static_cast<std::uint32_t>(left) - 1;
    sv.weight = static_cast<double>(len - left) * static_cast<double>(left) / denom;
    sv.t = r.t;
    sv.value = sv.weight * r.t;
    sv.degenerate = r.degenerate;
    if (!sv.degenerate && (!found || sv.value > profile.best_value)) {
      profile.best_value = sv.value;
      profile.best_b = sv.b;
      found = true;
    }
    profile.splits.push_back(sv);
  }
  if (!found) {
    profile.all_degenerate = true;
    profile.best_b = profile.splits.front().b;
    profile.best_value = 0.0;
  }
  return profile;
}

}  // namespace

namespace detail {

void SegmentScanner::load(const DistanceMatrix& D, std::span<const std::uint32_t> rows) {
  size_ = rows.size();
  sub_.resize(size_ * size_);
  for (std::size_t i = 0; i < size_; ++i) {
    const double* src = D.row_ptr(rows[i]);
    double* dst = sub_.data() + i * size_;
    for (std::size_t j = 0; j < size_; ++j) dst[j] = src[rows[j]];
  }
}

TwoSampleResult SegmentScanner::split_stat(std::size_t left) const {
  hdcpd::detail::SplitSums s;
  s.na = left;
  s.nb = size_ - left;

  // One sweep per row: head = sum over columns [0, left), tail over
  // [left, size). Left rows contribute within-A and cross-row sums; right
  // rows contribute cross-column and within-B sums. Four-lane accumulators
  // keep the loop vectorizable with a fixed combine order.
  for (std::size_t i = 0; i < size_; ++i) {
    const double* row = sub_.data() + i * size_;
    double h0 = 0, h1 = 0, h2 = 0, h3 = 0;
    double hq0 = 0, hq1 = 0, hq2 = 0, hq3 = 0;
    std::size_t j = 0;
    for (; j + 4 <= left; j += 4) {
      const double v0 = row[j], v1 = row[j + 1], v2 = row[j + 2], v3 = row[j + 3];
      h0 += v0;
      h1 += v1;
      h2 += v2;
      h3 += v3;
      hq0 += v0 * v0;
      hq1 += v1 * v1;
      hq2 += v2 * v2;
      hq3 += v3 * v3;
    }
    for (; j < left; ++j) {
      const double v = row[j];
      h0 += v;
      hq0 += v * v;
    }
    const double head = (h0 + h1) + (h2 + h3);
    const double head_sq = (hq0 + hq1) + (hq2 + hq3);

    double t0 = 0, t1 = 0, t2 = 0, t3 = 0;
    double tq0 = 0, tq1 = 0, tq2 = 0, tq3 = 0;
    j = left;
    for (; j + 4 <= size_; j += 4) {
      const double v0 = row[j], v1 = row[j + 1], v2 = row[j + 2], v3 = row[j + 3];
      t0 += v0;
      t1 += v1;
      t2 += v2;
      t3 += v3;
      tq0 += v0 * v0;
      tq1 += v1 * v1;
      tq2 += v2 * v2;
      tq3 += v3 * v3;
    }
    for (; j < size_; ++j) {
      const double v = row[j];
      t0 += v;
      tq0 += v * v;
    }
    const double tail = (t0 + t1) + (t2 + t3);
    const double tail_sq = (tq0 + tq1) + (tq2 + tq3);

    if (i < left) {
      s.sa += head;
      s.ssa += head_sq;
      s.rqa += head * head;
      s.sc += tail;
      s.ssc += tail_sq;
      s.rq_u += tail * tail;
    } else {
      s.rq_w += head * head;
      s.sb += tail;
      s.ssb += tail_sq;
      s.rqb += tail * tail;
    }
  }
  return hdcpd::detail::assemble(s);
}

}  // namespace detail

ScanProfile weighted_t_profile(const DistanceMatrix& D, std::uint32_t s, std::uint32_t e) {
  return profile_impl(D, identity_order(D.n), s, e);
}

ScanProfile weighted_t_profile(const DistanceMatrix& D, std::span<const std::uint32_t> order,
                               std::uint32_t s, std::uint32_t e) {
  return profile_impl(D, order, s, e);
}

ScanMax scan_max(const DistanceMatrix& D, std::uint32_t s, std::uint32_t e) {
  const ScanProfile p = weighted_t_profile(D, s, e);
  return {p.best_b, p.best_value, p.all_degenerate};
}

ScanMax scan_max(const DistanceMatrix& D, std::span<const std::uint32_t> order, std::uint32_t s,
                 std::uint32_t e) {
  const ScanProfile p = weighted_t_profile(D, order, s, e);
  return {p.best_b, p.best_value, p.all_degenerate};
}

double cusum_sqnorm(const DistanceMatrix& D, std::uint32_t k) {
  const std::size_t n = D.n;
  if (n < 2) throw ValidationError("cusum_sqnorm: need at least 2 observations");
  if (k < 1 || k >= n) {
    throw ValidationError("cusum_sqnorm: k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(n - 1) + "]");
  }
  double left = 0, right = 0, cross = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = D.row_ptr(i);
    double head = 0, tail = 0;
    for (std::size_t j = 0; j < k; ++j) head += row[j];
    for (std::size_t j = k; j < n; ++j) tail += row[j];
    if (i < k) {
      left += head;
      cross += tail;
    } else {
      right += tail;
    }
  }
  const double kd = static_cast<double>(k);
  const double rd = static_cast<double>(n - k);
  const double nd = static_cast<double>(n);
  const double scale = kd * kd * rd * rd / (2.0 * nd * nd * nd);
  return scale * (2.0 * cross / (kd * rd) - left / (kd * kd) - right / (rd * rd));
}

}  // namespace hdcpd
