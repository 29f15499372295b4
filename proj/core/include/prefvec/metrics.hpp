#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefvec/episode.hpp"

namespace prefvec {

using CardKindMap = std::map<std::string, std::vector<PrefKind>>;
using PrefsByUser = std::map<std::string, StylePrefs, std::less<>>;

/// Whether a persona holds a preference of this kind. Every persona has a
/// language preference; length and bullets count only when required.
bool kind_active(const StylePrefs& prefs, PrefKind kind);

/// Mean satisfaction over session-2 scripted turns. Throws UndefinedMetric
/// when the log has no session-2 turns.
double avg_sat_s2(std::span<const TurnRecord> log);

/// Fraction of session-2 scripted turns whose violations include `v`.
double viol_rate_s2(std::span<const TurnRecord> log, Violation v);

/// Fraction of session-2 turns (of users for whom `kind` is active) where some
/// injected card encodes `kind`. Throws UndefinedMetric when no such turn exists.
double recall_at_k(std::span<const TurnRecord> log, PrefKind kind, const CardKindMap& card_kinds,
                   const PrefsByUser& prefs);

struct EpisodeMetrics {
  double avg_sat_s2 = 0.0;
  std::map<Violation, double> viol_rate_s2;
  std::map<PrefKind, double> recall_at_k;  // kinds inactive for the log are absent
};

EpisodeMetrics compute_episode_metrics(std::span<const TurnRecord> log, const CardKindMap& card_kinds,
                                       const PrefsByUser& prefs);

/// |a ∩ b| / |a ∪ b|, 0 when both are empty.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Ranks 1..n with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> xs);

struct Correlation {
  double rho = 0.0;
  bool degenerate = false;  // a constant input leaves rho undefined
};

/// Pearson correlation of average ranks.
Correlation spearman(std::span<const double> x, std::span<const double> y);

struct AlignmentUser {
  std::string user_id;
  std::set<std::string> preferences;
  Vector z_long;
  Vector z_short;  // in-session short-term vector (before its reset)
  std::vector<NormSnapshot> norm_history;
};

struct PairScore {
  std::string user_a;
  std::string user_b;
  double jaccard = 0.0;
  double cos_long = 0.0;
  double cos_short = 0.0;
  double cos_combined = 0.0;
};

struct VariantSummary {
  Correlation spearman;
  double top_quartile_mean = 0.0;
  double bottom_quartile_mean = 0.0;
};

struct PopulationAnalysis {
  std::vector<PairScore> pairwise;
  VariantSummary long_term;
  VariantSummary short_term;
  VariantSummary combined;
  std::vector<std::vector<NormSnapshot>> norm_curves;
};

/// Pairwise preference overlap against learned-vector cosine. The combined
/// variant uses beta_long * z_long + beta_short * z_short. Quartile groups are
/// the pairs whose Jaccard is at or above the 75th percentile (top) and at or
/// below the 25th percentile (bottom). Requires at least 4 users.
PopulationAnalysis vector_alignment(std::span<const AlignmentUser> users, double beta_long = 2.0,
                                    double beta_short = 5.0);

struct NormReport {
  std::vector<int> per_user_violations;
  std::vector<NormSnapshot> mean_curve;
  int mean_violations = 0;
  bool starts_at_zero = false;
  bool monotone = false;  // mean curve never decreases
};

/// Curves are aligned by position; the mean at each session averages users
/// that have that snapshot.
NormReport norm_monotonicity(std::span<const std::vector<NormSnapshot>> curves, double tol = 0.0);

struct MetricRow {
  std::string mode;
  std::string persona;
  std::string metric;
  double value = 0.0;
};

std::vector<MetricRow> metric_rows(std::string_view mode, std::string_view persona, const EpisodeMetrics& m);

void write_metrics_csv(std::ostream& os, std::span<const MetricRow> rows, std::uint64_t seed,
                       std::string_view fingerprint);
void write_pairwise_csv(std::ostream& os, std::span<const PairScore> pairs, std::uint64_t seed,
                        std::string_view fingerprint);

/// Fixed-notation number formatting shared by every CSV writer.
std::string format_number(double v);

}  // namespace prefvec
