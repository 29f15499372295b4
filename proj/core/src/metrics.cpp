#include "prefvec/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "prefvec/errors.hpp"

namespace prefvec {

namespace {

std::vector<const TurnRecord*> session2(std::span<const TurnRecord> log) {
  std::vector<const TurnRecord*> out;
  for (const auto& r : log) {
    if (r.session_index == 2) out.push_back(&r);
  }
  if (out.empty()) throw UndefinedMetric("log has no session-2 turns");
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y, bool& degenerate) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    degenerate = true;
    return 0.0;
  }
  degenerate = false;
  return sxy / std::sqrt(sxx * syy);
}

// Linear-interpolated percentile of sorted values.
double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

VariantSummary summarize(const std::vector<double>& jac, const std::vector<double>& cos) {
  VariantSummary s;
  s.spearman = spearman(jac, cos);
  const double top_cut = percentile(jac, 0.75);
  const double bottom_cut = percentile(jac, 0.25);
  double top = 0.0, bottom = 0.0;
  int nt = 0, nb = 0;
  for (std::size_t i = 0; i < jac.size(); ++i) {
    if (jac[i] >= top_cut) top += cos[i], ++nt;
    if (jac[i] <= bottom_cut) bottom += cos[i], ++nb;
  }
  s.top_quartile_mean = nt ? top / nt : 0.0;
  s.bottom_quartile_mean = nb ? bottom / nb : 0.0;
  return s;
}

}  // namespace

bool kind_active(const StylePrefs& prefs, PrefKind kind) {
  switch (kind) {
    case PrefKind::Short: return prefs.require_short;
    case PrefKind::Bullets: return prefs.require_bullets;
    case PrefKind::Lang: return true;
  }
  return false;
}

double avg_sat_s2(std::span<const TurnRecord> log) {
  const auto turns = session2(log);
  double sum = 0.0;
  for (const auto* r : turns) sum += r->satisfaction;
  return sum / static_cast<double>(turns.size());
}

double viol_rate_s2(std::span<const TurnRecord> log, Violation v) {
  const auto turns = session2(log);
  std::size_t hits = 0;
  for (const auto* r : turns) {
    if (std::find(r->violations.begin(), r->violations.end(), v) != r->violations.end()) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(turns.size());
}

double recall_at_k(std::span<const TurnRecord> log, PrefKind kind, const CardKindMap& card_kinds,
                   const PrefsByUser& prefs) {
  std::size_t total = 0, hits = 0;
  for (const auto& r : log) {
    if (r.session_index != 2) continue;
    const auto p = prefs.find(r.user_id);
    if (p == prefs.end() || !kind_active(p->second, kind)) continue;
    ++total;
    const bool hit = std::any_of(r.injected_ids.begin(), r.injected_ids.end(), [&](const std::string& id) {
      const auto k = card_kinds.find(id);
      return k != card_kinds.end() && std::find(k->second.begin(), k->second.end(), kind) != k->second.end();
    });
    if (hit) ++hits;
  }
  if (total == 0) throw UndefinedMetric("recall: preference kind inactive for every session-2 turn");
  return static_cast<double>(hits) / static_cast<double>(total);
}

EpisodeMetrics compute_episode_metrics(std::span<const TurnRecord> log, const CardKindMap& card_kinds,
                                       const PrefsByUser& prefs) {
  EpisodeMetrics m;
  m.avg_sat_s2 = avg_sat_s2(log);
  for (auto v : {Violation::TooLong, Violation::NoBullets, Violation::WrongLang}) m.viol_rate_s2[v] = viol_rate_s2(log, v);
  for (auto k : {PrefKind::Short, PrefKind::Bullets, PrefKind::Lang}) {
    try {
      m.recall_at_k[k] = recall_at_k(log, k, card_kinds, prefs);
    } catch (const UndefinedMetric&) {
    }
  }
  return m;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractViolation("spearman: length mismatch");
  if (x.size() < 2) return {0.0, true};
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  Correlation c;
  c.rho = pearson(rx, ry, c.degenerate);
  return c;
}

PopulationAnalysis vector_alignment(std::span<const AlignmentUser> users, double beta_long, double beta_short) {
  if (users.size() < 4) throw UndefinedMetric("vector alignment needs at least 4 users");
  PopulationAnalysis out;
  std::vector<double> jac, cl, cs, cc;
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (std::size_t j = i + 1; j < users.size(); ++j) {
      const auto& a = users[i];
      const auto& b = users[j];
      PairScore p{a.user_id, b.user_id, jaccard(a.preferences, b.preferences), 0.0, 0.0, 0.0};
      p.cos_long = cosine(a.z_long, b.z_long);
      p.cos_short = cosine(a.z_short, b.z_short);
      const Vector ea = add(scaled(a.z_long, beta_long), scaled(a.z_short, beta_short));
      const Vector eb = add(scaled(b.z_long, beta_long), scaled(b.z_short, beta_short));
      p.cos_combined = cosine(ea, eb);
      jac.push_back(p.jaccard);
      cl.push_back(p.cos_long);
      cs.push_back(p.cos_short);
      cc.push_back(p.cos_combined);
      out.pairwise.push_back(std::move(p));
    }
  }
  out.long_term = summarize(jac, cl);
  out.short_term = summarize(jac, cs);
  out.combined = summarize(jac, cc);
  for (const auto& u : users) out.norm_curves.push_back(u.norm_history);
  return out;
}

NormReport norm_monotonicity(std::span<const std::vector<NormSnapshot>> curves, double tol) {
  if (curves.empty()) throw ContractViolation("norm_monotonicity: no curves");
  NormReport rep;
  std::size_t longest = 0;
  for (const auto& c : curves) {
    int v = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (c[i].norm < c[i - 1].norm - tol) ++v;
    }
    rep.per_user_violations.push_back(v);
    longest = std::max(longest, c.size());
  }
  for (std::size_t i = 0; i < longest; ++i) {
    double sum = 0.0;
    int n = 0, session = 0;
    for (const auto& c : curves) {
      if (i < c.size()) sum += c[i].norm, session = c[i].session, ++n;
    }
    rep.mean_curve.push_back({session, sum / n});
  }
  for (std::size_t i = 1; i < rep.mean_curve.size(); ++i) {
    if (rep.mean_curve[i].norm < rep.mean_curve[i - 1].norm - tol) ++rep.mean_violations;
  }
  rep.starts_at_zero = !rep.mean_curve.empty() && rep.mean_curve.front().session == 0 &&
                       rep.mean_curve.front().norm == 0.0;
  rep.monotone = rep.mean_violations == 0;
  return rep;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  return std::string(buf, res.ptr);
}

std::vector<MetricRow> metric_rows(std::string_view mode, std::string_view persona, const EpisodeMetrics& m) {
  std::vector<MetricRow> rows;
  const std::string md(mode), ps(persona);
  rows.push_back({md, ps, "avg_sat_s2", m.avg_sat_s2});
  for (const auto& [v, rate] : m.viol_rate_s2) rows.push_back({md, ps, "viol_rate_s2_" + std::string(to_string(v)), rate});
  for (const auto& [k, rate] : m.recall_at_k) rows.push_back({md, ps, "recall_at_k_s2_" + std::string(to_string(k)), rate});
  return rows;
}

void write_metrics_csv(std::ostream& os, std::span<const MetricRow> rows, std::uint64_t seed,
                       std::string_view fingerprint) {
  os << "mode,persona,metric,value,seed,config_fingerprint\n";
  for (const auto& r : rows) {
    os << r.mode << ',' << r.persona << ',' << r.metric << ',' << format_number(r.value) << ',' << seed << ','
       << fingerprint << '\n';
  }
}

void write_pairwise_csv(std::ostream& os, std::span<const PairScore> pairs, std::uint64_t seed,
                        std::string_view fingerprint) {
  os << "user_a,user_b,jaccard,cos_L,cos_S,cos_combined,seed,config_fingerprint\n";
  for (const auto& p : pairs) {
    os << p.user_a << ',' << p.user_b << ',' << format_number(p.jaccard) << ',' << format_number(p.cos_long) << ','
       << format_number(p.cos_short) << ',' << format_number(p.cos_combined) << ',' << seed << ',' << fingerprint
       << '\n';
  }
}

}  // namespace prefvec
