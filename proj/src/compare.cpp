#include "topex/compare.hpp"

#include "topex/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace topex {

NormalizedExplanation l1_normalize(const GlobalTopicExplanation& explanation) {
  double mass = 0.0;
  for (double v : explanation.G) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("explanation entries must be finite and non-negative");
    }
    mass += v;
  }
  if (!(mass > 0.0)) {
    throw ValidationError("degenerate explanation: all topic importances are zero (model \"" +
                          explanation.metadata.model_id + "\")");
  }
  NormalizedExplanation out{explanation.topic_labels, {}, explanation.metadata};
  out.values.reserve(explanation.G.size());
  for (double v : explanation.G) out.values.push_back(v / mass);
  return out;
}

ResidualExplanation residual(const NormalizedExplanation& a, const NormalizedExplanation& b) {
  if (a.topic_labels != b.topic_labels) {
    throw ComparisonRefused("topic labels differ: the explanations use different topic spaces");
  }
  if (a.metadata.source != b.metadata.source) {
    throw ComparisonRefused("membership sources differ (" + std::string(to_string(a.metadata.source)) +
                            " vs " + std::string(to_string(b.metadata.source)) + ")");
  }
  if (a.metadata.path != b.metadata.path) {
    throw ComparisonRefused("aggregation paths differ (" + std::string(to_string(a.metadata.path)) +
                            " vs " + std::string(to_string(b.metadata.path)) + ")");
  }
  if (a.values.size() != a.topic_labels.size() || b.values.size() != b.topic_labels.size()) {
    throw ValidationError("explanation values and labels have different lengths");
  }
  ResidualExplanation out{a.topic_labels, {}, a.metadata.model_id, b.metadata.model_id, 0.0};
  out.delta.reserve(a.values.size());
  for (std::size_t t = 0; t < a.values.size(); ++t) {
    out.delta.push_back(a.values[t] - b.values[t]);
    out.distance_l1 += std::abs(out.delta.back());
  }
  return out;
}

namespace {

template <typename Key>
std::vector<RankedTopic> ranked(const std::vector<std::size_t>& candidates, std::size_t k,
                                const ResidualExplanation& r, const NormalizedExplanation& a,
                                const NormalizedExplanation& b, Key key) {
  std::vector<std::size_t> order = candidates;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    double kx = key(x), ky = key(y);
    if (kx != ky) return kx < ky;
    return r.topic_labels[x] < r.topic_labels[y];
  });
  order.resize(std::min(k, order.size()));
  std::vector<RankedTopic> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::size_t t = order[i];
    out.push_back({i + 1, r.topic_labels[t], a.values[t], b.values[t], r.delta[t]});
  }
  return out;
}

}  // namespace

ComparisonReport rank_topics(const ResidualExplanation& r, const NormalizedExplanation& a,
                             const NormalizedExplanation& b, std::size_t k, bool exclude_other) {
  if (k == 0) throw ValidationError("k must be at least 1");
  if (a.values.size() != r.delta.size() || b.values.size() != r.delta.size()) {
    throw ValidationError("residual and explanations have different lengths");
  }
  std::vector<std::size_t> candidates;
  for (std::size_t t = 0; t < r.delta.size(); ++t) {
    if (exclude_other && r.topic_labels[t] == kOtherLabel) continue;
    candidates.push_back(t);
  }

  ComparisonReport report;
  report.model_a = r.model_a;
  report.model_b = r.model_b;
  report.k = k;
  report.other_excluded = exclude_other;
  report.path = std::string(to_string(a.metadata.path));
  report.membership_source = std::string(to_string(a.metadata.source));
  report.distance_l1 = r.distance_l1;
  report.topic_labels = r.topic_labels;
  report.normalized_a = a.values;
  report.normalized_b = b.values;
  report.delta = r.delta;

  auto abs_delta = [&](std::size_t t) { return std::abs(r.delta[t]); };
  report.most_different = ranked(candidates, k, r, a, b, [&](std::size_t t) { return -abs_delta(t); });
  report.most_similar = ranked(candidates, k, r, a, b, abs_delta);
  report.most_important_a = ranked(candidates, k, r, a, b, [&](std::size_t t) { return -a.values[t]; });
  report.least_important_a = ranked(candidates, k, r, a, b, [&](std::size_t t) { return a.values[t]; });
  report.most_important_b = ranked(candidates, k, r, a, b, [&](std::size_t t) { return -b.values[t]; });
  report.least_important_b = ranked(candidates, k, r, a, b, [&](std::size_t t) { return b.values[t]; });
  return report;
}

ComparisonReport compare_explanations(const GlobalTopicExplanation& a,
                                      const GlobalTopicExplanation& b, std::size_t k,
                                      bool exclude_other) {
  auto na = l1_normalize(a);
  auto nb = l1_normalize(b);
  return rank_topics(residual(na, nb), na, nb, k, exclude_other);
}

}  // namespace topex
