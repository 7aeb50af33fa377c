#include "snaptrace/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "snaptrace/error.hpp"

namespace snaptrace::behavior {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

using Matrix = std::vector<std::vector<std::size_t>>;

// Nearest medoid per point; ties go to the medoid with the lower index, and a
// medoid always belongs to itself.
std::vector<std::size_t> assign(const Matrix& d, const std::vector<std::size_t>& medoids) {
  const std::size_t n = d.size();
  std::vector<std::size_t> owner(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::size_t best = medoids.front();
    for (auto m : medoids) {
      if (m == p) {
        best = m;
        break;
      }
      if (d[p][m] < d[p][best] || (d[p][m] == d[p][best] && m < best)) best = m;
    }
    owner[p] = best;
  }
  return owner;
}

std::uint64_t total_cost(const Matrix& d, const std::vector<std::size_t>& medoids) {
  auto owner = assign(d, medoids);
  std::uint64_t cost = 0;
  for (std::size_t p = 0; p < d.size(); ++p) cost += d[p][owner[p]];
  return cost;
}

std::vector<std::size_t> initial_medoids(std::size_t n, std::size_t k, std::uint64_t seed) {
  // Partial Fisher-Yates with a plain modulo draw, so the choice depends only
  // on the engine's output sequence and not on a library's distribution.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    auto j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::optional<double> silhouette(const Matrix& d, const std::vector<std::size_t>& owner,
                                 const std::vector<std::size_t>& medoids) {
  const std::size_t n = d.size();
  if (medoids.size() <= 1 || medoids.size() >= n) return std::nullopt;
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    std::map<std::size_t, std::pair<double, std::size_t>> by_cluster;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p) continue;
      auto& slot = by_cluster[owner[q]];
      slot.first += static_cast<double>(d[p][q]);
      ++slot.second;
    }
    auto own = by_cluster.find(owner[p]);
    if (own == by_cluster.end()) continue;  // singleton cluster scores 0
    const double a = own->second.first / static_cast<double>(own->second.second);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [c, acc] : by_cluster) {
      if (c != owner[p]) b = std::min(b, acc.first / static_cast<double>(acc.second));
    }
    const double denom = std::max(a, b);
    sum += denom > 0 ? (b - a) / denom : 0.0;
  }
  return sum / static_cast<double>(n);
}

}  // namespace

Clustering cluster_sessions(const std::map<std::string, std::string>& label_strings, std::size_t k,
                            std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  const std::size_t n = label_strings.size();
  if (k > n) {
    throw Error(Errc::KTooLarge, "k=" + std::to_string(k) + " exceeds session count " + std::to_string(n));
  }
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  for (const auto& [id, s] : label_strings) {
    ids.push_back(id);
    labels.push_back(s);
  }
  Matrix d(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = levenshtein(labels[i], labels[j]);
  }

  auto medoids = initial_medoids(n, k, seed);
  auto cost = total_cost(d, medoids);
  for (;;) {
    std::uint64_t best_cost = cost;
    std::vector<std::size_t> best;
    for (std::size_t slot = 0; slot < k; ++slot) {
      for (std::size_t o = 0; o < n; ++o) {
        if (std::find(medoids.begin(), medoids.end(), o) != medoids.end()) continue;
        auto trial = medoids;
        trial[slot] = o;
        std::sort(trial.begin(), trial.end());
        auto c = total_cost(d, trial);
        if (c < best_cost) {
          best_cost = c;
          best = std::move(trial);
        }
      }
    }
    if (best.empty()) break;
    medoids = std::move(best);
    cost = best_cost;
  }

  auto owner = assign(d, medoids);
  Clustering out;
  out.cost = cost;
  for (std::size_t c = 0; c < k; ++c) {
    SessionCluster cl;
    cl.cluster_id = c;
    cl.medoid_session_id = ids[medoids[c]];
    double sum = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      if (owner[p] != medoids[c]) continue;
      cl.member_session_ids.push_back(ids[p]);
      sum += static_cast<double>(d[p][medoids[c]]);
    }
    if (cl.member_session_ids.size() > 1) {
      cl.intra_mean_distance = sum / static_cast<double>(cl.member_session_ids.size() - 1);
    }
    out.clusters.push_back(std::move(cl));
  }
  out.silhouette = silhouette(d, owner, medoids);
  return out;
}

Clustering cluster_sessions(const std::map<std::string, BehaviorSequence>& sequences, std::size_t k,
                            std::uint64_t seed) {
  std::map<std::string, std::string> strings;
  for (const auto& [id, seq] : sequences) strings.emplace(id, seq.label_string());
  return cluster_sessions(strings, k, seed);
}

}  // namespace snaptrace::behavior
