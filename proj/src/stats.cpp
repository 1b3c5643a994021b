#include "stationplot/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "stationplot/special.hpp"

namespace stationplot {

namespace {

constexpr double kPFloor = 1e-300;

double clamp_p(double p, bool* clamped) {
  if (p < kPFloor) {
    if (clamped) *clamped = true;
    return kPFloor;
  }
  return p;
}

void check_groups(const Groups& groups, Eigen::Index min_size, const char* who) {
  if (groups.size() < 2)
    throw ValidationError(std::string(who) + ": need at least 2 groups");
  for (const auto& g : groups)
    if (g.size() < min_size)
      throw ValidationError(std::string(who) + ": every group needs >= " +
                            std::to_string(min_size) + " samples");
}

}  // namespace

AnovaResult anova_oneway(const Groups& groups) {
  check_groups(groups, 2, "anova_oneway");

  Eigen::Index n_total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    n_total += g.size();
    grand_sum += g.sum();
  }
  const double grand_mean = grand_sum / double(n_total);

  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& g : groups) {
    const double mean = g.mean();
    ss_between += double(g.size()) * (mean - grand_mean) * (mean - grand_mean);
    ss_within += (g.array() - mean).square().sum();
  }

  AnovaResult r;
  r.df_between = int(groups.size()) - 1;
  r.df_within = int(n_total - Eigen::Index(groups.size()));
  if (r.df_within <= 0)
    throw ValidationError("anova_oneway: no within-group degrees of freedom");

  if (ss_within == 0.0) {
    if (ss_between == 0.0) {  // all values identical
      r.f_statistic = 0.0;
      r.p_value = 1.0;
      return r;
    }
    throw NumericError(
        "anova_oneway: zero within-group variance with unequal means "
        "(F is unbounded)");
  }

  const double ms_between = ss_between / r.df_between;
  const double ms_within = ss_within / r.df_within;
  r.f_statistic = ms_between / ms_within;
  r.p_value = clamp_p(f_sf(r.f_statistic, r.df_between, r.df_within), &r.p_clamped);
  return r;
}

KruskalResult kruskal_wallis(const Groups& groups) {
  check_groups(groups, 1, "kruskal_wallis");

  struct Entry {
    double value;
    int group;
  };
  std::vector<Entry> all;
  for (size_t g = 0; g < groups.size(); ++g)
    for (Eigen::Index i = 0; i < groups[g].size(); ++i)
      all.push_back({groups[g](i), int(g)});
  const size_t n = all.size();
  std::stable_sort(all.begin(), all.end(),
                   [](const Entry& a, const Entry& b) { return a.value < b.value; });

  // Mid-ranks for ties, plus the tie correction term sum(t^3 - t).
  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_term = 0.0;
  bool ties = false;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && all[j].value == all[i].value) ++j;
    const double t = double(j - i);
    const double mid_rank = 0.5 * (double(i + 1) + double(j));
    if (t > 1.0) {
      ties = true;
      tie_term += t * t * t - t;
    }
    for (size_t k = i; k < j; ++k) rank_sum[size_t(all[k].group)] += mid_rank;
    i = j;
  }

  KruskalResult r;
  r.df = int(groups.size()) - 1;
  r.tie_corrected = ties;

  const double nn = double(n);
  double h = 0.0;
  for (size_t g = 0; g < groups.size(); ++g)
    h += rank_sum[g] * rank_sum[g] / double(groups[g].size());
  h = 12.0 / (nn * (nn + 1.0)) * h - 3.0 * (nn + 1.0);

  const double correction = 1.0 - tie_term / (nn * nn * nn - nn);
  if (correction <= 0.0) {  // every value identical
    r.h_statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.h_statistic = std::max(0.0, h / correction);
  r.p_value = clamp_p(chi2_sf(r.h_statistic, r.df), &r.p_clamped);
  return r;
}

double quantile_type7(const Eigen::VectorXd& values, double p) {
  if (values.size() < 1) throw ValidationError("quantile: empty input");
  if (p < 0.0 || p > 1.0) throw ValidationError("quantile: p must be in [0, 1]");
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  const double h = double(sorted.size() - 1) * p;
  const size_t lo = size_t(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - double(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxplotSummary boxplot_summary(const Eigen::VectorXd& values) {
  if (values.size() < 1) throw ValidationError("boxplot_summary: empty input");
  BoxplotSummary s;
  s.q1 = quantile_type7(values, 0.25);
  s.median = quantile_type7(values, 0.5);
  s.q3 = quantile_type7(values, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;

  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  std::vector<double> out_lo, out_hi;
  double in_min = std::numeric_limits<double>::infinity();
  double in_max = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values(i);
    if (v < lo_fence)
      out_lo.push_back(v);
    else if (v > hi_fence)
      out_hi.push_back(v);
    else {
      in_min = std::min(in_min, v);
      in_max = std::max(in_max, v);
    }
  }
  if (std::isfinite(in_min)) {
    s.whisker_low = in_min;
    s.whisker_high = in_max;
  }
  std::sort(out_lo.begin(), out_lo.end());
  std::sort(out_hi.begin(), out_hi.end());
  s.outliers = std::move(out_lo);
  s.outliers.insert(s.outliers.end(), out_hi.begin(), out_hi.end());
  return s;
}

std::vector<RankedFeature> rank_features(const Eigen::MatrixXd& features,
                                         const std::vector<std::string>& labels,
                                         const std::vector<std::string>& names) {
  if (Eigen::Index(labels.size()) != features.rows())
    throw ValidationError("rank_features: labels/rows mismatch");
  if (Eigen::Index(names.size()) != features.cols())
    throw ValidationError("rank_features: names/columns mismatch");

  std::map<std::string, std::vector<Eigen::Index>> by_label;
  for (Eigen::Index i = 0; i < features.rows(); ++i)
    by_label[labels[size_t(i)]].push_back(i);
  if (by_label.size() < 2)
    throw ValidationError("rank_features: need at least 2 classes");

  std::vector<RankedFeature> ranked;
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    Groups groups;
    for (const auto& [label, idx] : by_label) {
      Eigen::VectorXd g(Eigen::Index(idx.size()));
      for (size_t k = 0; k < idx.size(); ++k) g(Eigen::Index(k)) = features(idx[k], c);
      groups.push_back(std::move(g));
    }
    RankedFeature rf;
    rf.index = int(c);
    rf.name = names[size_t(c)];
    const KruskalResult kw = kruskal_wallis(groups);
    rf.kw_p = kw.p_value;
    rf.kw_h = kw.h_statistic;
    const AnovaResult an = anova_oneway(groups);
    rf.anova_p = an.p_value;
    rf.anova_f = an.f_statistic;
    ranked.push_back(std::move(rf));
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedFeature& a, const RankedFeature& b) {
                     return a.kw_p < b.kw_p;
                   });
  return ranked;
}

std::string ranked_features_csv(const std::vector<RankedFeature>& ranked) {
  std::string out = "feature,kruskal_p,kruskal_h,anova_p,anova_f\n";
  char buf[128];
  for (const auto& r : ranked) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g\n", r.name.c_str(),
                  r.kw_p, r.kw_h, r.anova_p, r.anova_f);
    out += buf;
  }
  return out;
}

std::string ranked_features_json(const std::vector<RankedFeature>& ranked) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : ranked) {
    doc.push_back({{"feature", r.name},
                   {"kruskal_p", r.kw_p},
                   {"kruskal_h", r.kw_h},
                   {"anova_p", r.anova_p},
                   {"anova_f", r.anova_f}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace stationplot
