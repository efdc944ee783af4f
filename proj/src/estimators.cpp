#include "hyperrecon/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hyperrecon {

void MarginalTable::accumulate(const Hypergraph& sample) {
  for (const auto& [key, a] : sample.edges()) {
    auto it = counts_.find(std::span<const NodeId>(key));
    if (it == counts_.end()) counts_.emplace(key, 1);
    else ++it->second;
  }
  ++total_;
}

void MarginalTable::merge(const MarginalTable& other) {
  for (const auto& [key, c] : other.counts_) counts_[key] += c;
  total_ += other.total_;
}

std::uint64_t MarginalTable::count(std::span<const NodeId> key) const {
  auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

double MarginalTable::presence_probability(std::span<const NodeId> key) const {
  if (total_ == 0) throw std::logic_error("presence probability of an empty marginal table");
  return static_cast<double>(count(key)) / static_cast<double>(total_);
}

double entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("entropy needs p in [0, 1]");
  double s = 0.0;
  if (p > 0.0) s -= p * std::log2(p);
  if (p < 1.0) s -= (1.0 - p) * std::log2(1.0 - p);
  return s;
}

const char* to_string(Certainty c) {
  switch (c) {
    case Certainty::absent: return "certain-absent";
    case Certainty::uncertain: return "uncertain";
    case Certainty::present: return "certain-present";
  }
  return "?";
}

Certainty classify(double p, double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2]");
  if (alpha == 0.5) return p >= 0.5 ? Certainty::present : Certainty::absent;
  if (p < alpha) return Certainty::absent;
  if (p > 1.0 - alpha) return Certainty::present;
  return Certainty::uncertain;
}

UncertaintySummary classify_uncertain(const MarginalTable& table, double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2]");
  UncertaintySummary out;
  out.alpha = alpha;
  if (table.total_samples() == 0) return out;
  out.rows.reserve(table.counts().size());
  for (const auto& [key, c] : table.counts()) {
    const double p = table.presence_probability(key);
    const Certainty cls = classify(p, alpha);
    out.rows.push_back({key, p, entropy(p), cls});
    switch (cls) {
      case Certainty::absent: ++out.certain_absent; break;
      case Certainty::present: ++out.certain_present; break;
      case Certainty::uncertain:
        if (key.size() == 2) ++out.uncertain_edges;
        else if (key.size() == 3) ++out.uncertain_triangles;
        else ++out.uncertain_higher;
        break;
    }
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const MarginalRow& a, const MarginalRow& b) {
    if (a.entropy != b.entropy) return a.entropy > b.entropy;
    return a.key < b.key;
  });
  return out;
}

SizeSummary summary_stats(const Hypergraph& h) {
  SizeSummary s;
  std::uint64_t weighted = 0;
  for (std::size_t k = 0; k < h.size_counts().size(); ++k) {
    const auto e = h.size_counts()[k];
    if (e == 0) continue;
    s.histogram[k] = e;
    s.hyperedges += e;
    weighted += k * e;
    if (k > 2) s.higher_order += e;
  }
  if (s.hyperedges > 0) s.mean_size = static_cast<double>(weighted) / static_cast<double>(s.hyperedges);
  return s;
}

double compression(double sigma_baseline, double sigma_best) {
  const double diff = sigma_baseline - sigma_best;
  const double tol = 1e-9 * std::max({1.0, std::abs(sigma_baseline), std::abs(sigma_best)});
  if (diff < -tol) throw std::logic_error("best description length exceeds the baseline");
  return std::max(diff, 0.0);
}

std::string format_marginals_csv(const UncertaintySummary& summary, const NodeLabels& labels) {
  std::ostringstream out;
  out.precision(10);
  out << "size,nodes,probability,entropy,classification\n";
  for (const auto& row : summary.rows) {
    out << row.key.size() << ',';
    for (std::size_t i = 0; i < row.key.size(); ++i) {
      if (i) out << ';';
      out << labels.name(row.key[i]);
    }
    out << ',' << row.probability << ',' << row.entropy << ',' << to_string(row.certainty) << '\n';
  }
  return out.str();
}

}  // namespace hyperrecon
