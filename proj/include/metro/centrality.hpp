#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "metro/network.hpp"

namespace metro {

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Shortest-path multiplicities. Counts beyond 2^64 - 1 raise CountOverflow.
using PathCount = std::uint64_t;

struct PathCounts {
  std::vector<std::uint32_t> dist;  // hops, kUnreachable when not reachable
  std::vector<PathCount> sigma;     // number of shortest paths from the source
};

PathCounts shortest_path_counts(const Network& net, StationId source);

struct BetweennessReport {
  std::vector<double> values;
};

/// Exact betweenness over unordered pairs {k, m} with n outside the pair,
/// unnormalised. Sources are processed in parallel blocks and reduced in
/// ascending source order, so the result does not depend on thread count.
BetweennessReport betweenness_all(const Network& net);

/// Same, but every pair with `excluded` as an endpoint is left out of the
/// sum. Used to compare against a network where that station is closed.
BetweennessReport betweenness_excluding_endpoint(const Network& net, StationId excluded);

struct WienerIndex {
  std::uint64_t distance_sum = 0;  // over unordered reachable pairs
  std::uint64_t unreachable_pairs = 0;
  std::uint64_t reachable_pairs = 0;
};

WienerIndex wiener_index(const Network& net);

struct Vitality {
  bool disconnects = false;
  // Wiener(net) - Wiener(net - v) over reachable pairs. Always filled in,
  // but only meaningful for ranking when !disconnects.
  std::int64_t delta = 0;
  std::uint64_t pairs_lost = 0;
};

struct VitalityReport {
  std::vector<Vitality> values;
};

VitalityReport closeness_vitality_all(const Network& net);

/// Vertex order for a descending report: value desc, StationId asc.
std::vector<std::uint32_t> rank_descending(const std::vector<double>& values);

/// Disconnecting vertices first (pairs_lost desc), then finite values desc,
/// ties by ascending StationId.
std::vector<std::uint32_t> rank_vitality(const VitalityReport& report);

}  // namespace metro
