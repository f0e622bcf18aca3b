#include "vrulabel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace vrulabel::analysis {

namespace {

bool same_detection(const RadarDetection& a, const RadarDetection& b) {
  return a.time_s == b.time_s && a.sensor_id == b.sensor_id &&
         a.range_m == b.range_m && a.azimuth_rad == b.azimuth_rad;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double log_gamma(double x) { return std::lgamma(x); }

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-14;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw InvariantError("regularized_incomplete_beta: no convergence");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) {
    throw FormatError("regularized_incomplete_beta: x outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

EvalCounts precision_recall(const std::vector<LabeledDetection>& auto_labels,
                            const std::vector<LabeledDetection>& reference_labels) {
  if (auto_labels.size() != reference_labels.size()) {
    throw AlignmentError("precision_recall: label streams differ in length (" +
                         std::to_string(auto_labels.size()) + " vs " +
                         std::to_string(reference_labels.size()) + ")");
  }
  EvalCounts c;
  for (size_t i = 0; i < auto_labels.size(); ++i) {
    const auto& a = auto_labels[i];
    const auto& r = reference_labels[i];
    if (!same_detection(a.detection, r.detection)) {
      throw AlignmentError("precision_recall: streams not aligned at record " +
                           std::to_string(i));
    }
    const bool auto_pos = !is_background(a);
    const bool ref_pos = !is_background(r);
    if (auto_pos && ref_pos && a.label == r.label) {
      ++c.tp;
    } else {
      if (auto_pos) ++c.fp;
      if (ref_pos) ++c.fn;
    }
  }
  if (c.tp + c.fp > 0) {
    c.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  if (c.tp + c.fn > 0) {
    c.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  return c;
}

MacroScores macro_average(const std::vector<EvalCounts>& per_scene) {
  MacroScores m;
  double psum = 0.0, rsum = 0.0;
  int pn = 0, rn = 0;
  for (size_t i = 0; i < per_scene.size(); ++i) {
    const auto& c = per_scene[i];
    if (c.precision) {
      psum += *c.precision;
      ++pn;
    } else {
      ++m.scenes_excluded_precision;
      std::fprintf(stderr, "macro_average: scene %zu has undefined precision\n", i);
    }
    if (c.recall) {
      rsum += *c.recall;
      ++rn;
    } else {
      ++m.scenes_excluded_recall;
      std::fprintf(stderr, "macro_average: scene %zu has undefined recall\n", i);
    }
  }
  if (pn > 0) m.precision = psum / pn;
  if (rn > 0) m.recall = rsum / rn;
  return m;
}

double path_loss_correct(double amplitude_db, double range_m, double ref_range_m) {
  if (!(range_m > 0.0) || !(ref_range_m > 0.0)) {
    throw FormatError("path_loss_correct: range must be > 0");
  }
  return amplitude_db + 40.0 * std::log10(range_m / ref_range_m);
}

std::optional<FeatureVector> feature_vector(
    const std::vector<CycleDetection>& cycle, double ref_range_m) {
  if (cycle.empty()) return std::nullopt;
  const size_t n = cycle.size();

  FeatureVector f;
  double power_sum = 0.0, range_sum = 0.0;
  double mx = 0.0, my = 0.0, md = 0.0;
  for (const auto& d : cycle) {
    power_sum += path_loss_correct(d.amplitude_db, d.range_m);
    range_sum += d.range_m;
    mx += d.x_m;
    my += d.y_m;
    md += d.doppler_mps;
  }
  f.mean_power_db = power_sum / n;
  const double mean_range = range_sum / n;
  f.weighted_count = static_cast<double>(n) * mean_range / ref_range_m;
  mx /= n;
  my /= n;
  md /= n;

  if (n >= 2) {
    double sxx = 0.0, sxy = 0.0, syy = 0.0, sdd = 0.0;
    for (const auto& d : cycle) {
      const double dx = d.x_m - mx;
      const double dy = d.y_m - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
      sdd += (d.doppler_mps - md) * (d.doppler_mps - md);
    }
    const double denom = static_cast<double>(n - 1);
    sxx /= denom;
    sxy /= denom;
    syy /= denom;
    f.doppler_std_mps = std::sqrt(sdd / denom);

    // Eigenvalues of the 2x2 covariance, closed form.
    const double tr = sxx + syy;
    const double det = sxx * syy - sxy * sxy;
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double l1 = std::max(0.0, 0.5 * tr + disc);
    const double l2 = std::max(0.0, 0.5 * tr - disc);
    f.conf_major_m = 2.0 * std::sqrt(kChi2Quantile95Dof2 * l1);
    f.conf_minor_m = 2.0 * std::sqrt(kChi2Quantile95Dof2 * l2);
  }
  return f;
}

TTestResult t_test_unpaired(const std::vector<double>& sample_a,
                            const std::vector<double>& sample_b, double alpha,
                            bool welch) {
  const size_t na = sample_a.size(), nb = sample_b.size();
  if (na < 2 || nb < 2) {
    throw FormatError("t_test_unpaired: each sample needs n >= 2");
  }
  const double ma = mean(sample_a), mb = mean(sample_b);
  const double va = sample_variance(sample_a, ma);
  const double vb = sample_variance(sample_b, mb);

  TTestResult r;
  double se = 0.0;
  if (welch) {
    const double qa = va / na, qb = vb / nb;
    if (qa + qb <= 0.0) {
      throw FormatError("t_test_unpaired: both samples have zero variance");
    }
    se = std::sqrt(qa + qb);
    r.dof = (qa + qb) * (qa + qb) /
            (qa * qa / (na - 1) + qb * qb / (nb - 1));
  } else {
    const double pooled =
        ((na - 1) * va + (nb - 1) * vb) / static_cast<double>(na + nb - 2);
    if (pooled <= 0.0) {
      throw FormatError(
          "t_test_unpaired: degenerate pooled variance (sample " +
          std::string(va <= 0.0 ? "a" : "b") + " is constant)");
    }
    se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    r.dof = static_cast<double>(na + nb - 2);
  }
  r.t_stat = (ma - mb) / se;
  const double x = r.dof / (r.dof + r.t_stat * r.t_stat);
  r.p_two_sided = regularized_incomplete_beta(0.5 * r.dof, 0.5, x);
  r.significant = r.p_two_sided < alpha;
  return r;
}

std::vector<double> normalize_to_baseline(const std::vector<double>& values,
                                          const std::vector<double>& baseline_values) {
  if (baseline_values.empty()) {
    throw FormatError("normalize_to_baseline: empty baseline");
  }
  const double bm = mean(baseline_values);
  if (bm == 0.0) {
    throw FormatError("normalize_to_baseline: baseline mean is zero");
  }
  std::vector<double> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) out[i] = values[i] / bm;
  return out;
}

}  // namespace vrulabel::analysis
