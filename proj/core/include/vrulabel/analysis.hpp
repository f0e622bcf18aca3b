#pragma once

#include <optional>
#include <vector>

#include "vrulabel/types.hpp"

namespace vrulabel::analysis {

struct EvalCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  std::optional<double> precision;  // absent when tp+fp == 0
  std::optional<double> recall;     // absent when tp+fn == 0
};

/// Detection-for-detection comparison of two aligned label streams.
/// Throws AlignmentError on length or detection mismatch.
EvalCounts precision_recall(const std::vector<LabeledDetection>& auto_labels,
                            const std::vector<LabeledDetection>& reference_labels);

struct MacroScores {
  std::optional<double> precision;
  std::optional<double> recall;
  int scenes_excluded_precision = 0;
  int scenes_excluded_recall = 0;
};

/// Unweighted mean of per-scene scores; scenes with undefined ratios are
/// excluded and counted.
MacroScores macro_average(const std::vector<EvalCounts>& per_scene);

/// Free-space two-way path loss compensation: + 40 log10(range / ref).
double path_loss_correct(double amplitude_db, double range_m,
                         double ref_range_m = 1.0);

/// One detection of a measurement cycle as the feature extractor sees it:
/// vehicle-frame position and ego-compensated Doppler.
struct CycleDetection {
  double x_m = 0.0;
  double y_m = 0.0;
  double range_m = 0.0;
  double amplitude_db = 0.0;
  double doppler_mps = 0.0;  // ego-compensated
};

struct FeatureVector {
  double mean_power_db = 0.0;    // R^4-corrected
  double doppler_std_mps = 0.0;  // sample (n-1) std, 0 when n == 1
  double conf_major_m = 0.0;     // full axis lengths of the 95 % ellipse
  double conf_minor_m = 0.0;
  double weighted_count = 0.0;   // n * (mean range / ref range)
};

/// Per-cycle feature statistics; nullopt for an empty cycle.
std::optional<FeatureVector> feature_vector(
    const std::vector<CycleDetection>& cycle, double ref_range_m = 10.0);

struct TTestResult {
  double t_stat = 0.0;
  double dof = 0.0;  // fractional under Welch
  double p_two_sided = 1.0;
  bool significant = false;
};

/// Two-sample t-test, pooled variance by default, Welch behind the switch.
TTestResult t_test_unpaired(const std::vector<double>& sample_a,
                            const std::vector<double>& sample_b,
                            double alpha = 0.05, bool welch = false);

/// Divides each value by the baseline mean.
std::vector<double> normalize_to_baseline(const std::vector<double>& values,
                                          const std::vector<double>& baseline_values);

/// I_x(a, b) via continued fraction, relative error < 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

// chi^2 quantile, 2 dof, 95 %
inline constexpr double kChi2Quantile95Dof2 = 5.991;

}  // namespace vrulabel::analysis
