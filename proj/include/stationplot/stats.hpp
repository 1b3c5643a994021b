#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "stationplot/types.hpp"

namespace stationplot {

struct AnovaResult {
  double f_statistic = 0.0;
  int df_between = 0;
  int df_within = 0;
  double p_value = 1.0;
  bool p_clamped = false;  // true when the tail underflowed below 1e-300
};

struct KruskalResult {
  double h_statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  bool tie_corrected = false;
  bool p_clamped = false;
};

// Tukey box-plot summary: type-7 (linear interpolation) quartiles, whiskers
// at the outermost data points within 1.5*IQR of the quartiles.
struct BoxplotSummary {
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  double whisker_low = 0.0, whisker_high = 0.0;
  std::vector<double> outliers;
};

using Groups = std::vector<Eigen::VectorXd>;

AnovaResult anova_oneway(const Groups& groups);
KruskalResult kruskal_wallis(const Groups& groups);

// Type-7 quantile: linear interpolation at h = (n-1)p over the sorted data.
double quantile_type7(const Eigen::VectorXd& values, double p);
BoxplotSummary boxplot_summary(const Eigen::VectorXd& values);

struct RankedFeature {
  int index = 0;
  std::string name;
  double kw_p = 1.0;
  double kw_h = 0.0;
  double anova_p = 1.0;
  double anova_f = 0.0;
};

// Kruskal-Wallis screening of feature columns against the class labels;
// returned ascending by Kruskal-Wallis p-value (most discriminative first).
// ANOVA p-values are carried along for reporting.
std::vector<RankedFeature> rank_features(const Eigen::MatrixXd& features,
                                         const std::vector<std::string>& labels,
                                         const std::vector<std::string>& names);

std::string ranked_features_csv(const std::vector<RankedFeature>& ranked);
std::string ranked_features_json(const std::vector<RankedFeature>& ranked);

}  // namespace stationplot
