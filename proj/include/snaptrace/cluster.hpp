#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snaptrace/model.hpp"

namespace snaptrace::behavior {

std::size_t levenshtein(std::string_view a, std::string_view b);

struct SessionCluster {
  std::size_t cluster_id = 0;
  std::string medoid_session_id;
  std::vector<std::string> member_session_ids;  // sorted
  /// Mean distance from the non-medoid members to the medoid (0 for singletons).
  double intra_mean_distance = 0.0;

  bool operator==(const SessionCluster&) const = default;
};

struct Clustering {
  std::vector<SessionCluster> clusters;
  /// Total distance of every session to its medoid.
  std::uint64_t cost = 0;
  /// Mean silhouette; absent when k is 1 or equals the session count.
  std::optional<double> silhouette;
};

/// k-medoids (PAM) over Levenshtein distance between label strings. Initial
/// medoids come from a seeded shuffle; the swap phase runs to convergence.
/// Throws Error(KTooLarge) when k exceeds the session count and
/// std::invalid_argument when k is 0.
Clustering cluster_sessions(const std::map<std::string, std::string>& label_strings, std::size_t k,
                            std::uint64_t seed);

Clustering cluster_sessions(const std::map<std::string, BehaviorSequence>& sequences, std::size_t k,
                            std::uint64_t seed);

inline constexpr std::size_t kDefaultClusterCount = 3;

}  // namespace snaptrace::behavior
