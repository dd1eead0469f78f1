#include "metro/centrality.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "metro/error.hpp"
#include "parallel.hpp"

namespace metro {

namespace {

constexpr std::uint32_t kNoExclusion = kUnreachable;

struct Bfs {
  std::vector<std::uint32_t> dist;
  std::vector<PathCount> sigma;
  std::vector<std::uint32_t> order;  // vertices in nondecreasing distance

  explicit Bfs(std::size_t n) : dist(n), sigma(n), order() { order.reserve(n); }

  void run(const Network& net, std::uint32_t source, bool count_paths) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    if (count_paths) std::fill(sigma.begin(), sigma.end(), 0);
    order.clear();
    dist[source] = 0;
    if (count_paths) sigma[source] = 1;
    order.push_back(source);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const std::uint32_t v = order[head];
      const std::uint32_t next = dist[v] + 1;
      for (std::uint32_t w : net.neighbors(v)) {
        if (dist[w] == kUnreachable) {
          dist[w] = next;
          order.push_back(w);
        }
        if (count_paths && dist[w] == next &&
            __builtin_add_overflow(sigma[w], sigma[v], &sigma[w])) {
          throw Error(ErrorKind::CountOverflow,
                      "shortest-path count overflow at station '" + net.meta(w).name + "'");
        }
      }
    }
  }
};

// Dependency of `source` on every vertex (Brandes accumulation). Targets equal
// to `excluded` carry no weight of their own.
void accumulate_dependency(const Network& net, const Bfs& bfs, std::uint32_t excluded,
                           std::vector<double>& delta) {
  std::fill(delta.begin(), delta.end(), 0.0);
  for (auto it = bfs.order.rbegin(); it != bfs.order.rend(); ++it) {
    const std::uint32_t w = *it;
    const double weight = (w == excluded ? 0.0 : 1.0) + delta[w];
    const double sigma_w = static_cast<double>(bfs.sigma[w]);
    for (std::uint32_t v : net.neighbors(w)) {
      if (bfs.dist[v] + 1 == bfs.dist[w])
        delta[v] += static_cast<double>(bfs.sigma[v]) / sigma_w * weight;
    }
  }
  delta[bfs.order.front()] = 0.0;
}

BetweennessReport betweenness_impl(const Network& net, std::uint32_t excluded) {
  const std::size_t n = net.size();
  BetweennessReport report{std::vector<double>(n, 0.0)};
  if (n == 0) return report;

  // Sources are handled in blocks: dependencies of one block are computed
  // in parallel, then folded into the total in ascending source order.
  constexpr std::size_t kBlock = 64;
  std::vector<std::vector<double>> block_delta(std::min(kBlock, n), std::vector<double>(n));
  for (std::size_t start = 0; start < n; start += kBlock) {
    const std::size_t count = std::min(kBlock, n - start);
    detail::parallel_for(count, [&](std::size_t j) {
      const auto s = static_cast<std::uint32_t>(start + j);
      auto& delta = block_delta[j];
      if (s == excluded) {
        std::fill(delta.begin(), delta.end(), 0.0);
        return;
      }
      thread_local Bfs bfs(0);
      if (bfs.dist.size() != n) bfs = Bfs(n);
      bfs.run(net, s, true);
      accumulate_dependency(net, bfs, excluded, delta);
    });
    for (std::size_t j = 0; j < count; ++j)
      for (std::size_t v = 0; v < n; ++v) report.values[v] += block_delta[j][v];
  }
  // Each unordered pair was counted once from either end.
  for (double& b : report.values) b *= 0.5;
  return report;
}

WienerIndex wiener_impl(const Network& net) {
  const std::size_t n = net.size();
  std::vector<std::uint64_t> dist_sum(n, 0);
  std::vector<std::uint64_t> reach(n, 0);
  detail::parallel_for(n, [&](std::size_t s) {
    thread_local Bfs bfs(0);
    if (bfs.dist.size() != n) bfs = Bfs(n);
    bfs.run(net, static_cast<std::uint32_t>(s), false);
    for (std::uint32_t t : bfs.order) {
      if (t > s) {
        dist_sum[s] += bfs.dist[t];
        ++reach[s];
      }
    }
  });
  WienerIndex w;
  w.distance_sum = std::accumulate(dist_sum.begin(), dist_sum.end(), std::uint64_t{0});
  w.reachable_pairs = std::accumulate(reach.begin(), reach.end(), std::uint64_t{0});
  const std::uint64_t all_pairs = static_cast<std::uint64_t>(n) * (n == 0 ? 0 : n - 1) / 2;
  w.unreachable_pairs = all_pairs - w.reachable_pairs;
  return w;
}

void check_source(const Network& net, StationId source) {
  if (source.index() >= net.size())
    throw Error(ErrorKind::OutOfRange, "station " + std::to_string(source.value) +
                                           " outside [0, " + std::to_string(net.size()) + ")");
}

}  // namespace

PathCounts shortest_path_counts(const Network& net, StationId source) {
  check_source(net, source);
  Bfs bfs(net.size());
  bfs.run(net, source.value, true);
  return {std::move(bfs.dist), std::move(bfs.sigma)};
}

BetweennessReport betweenness_all(const Network& net) {
  return betweenness_impl(net, kNoExclusion);
}

BetweennessReport betweenness_excluding_endpoint(const Network& net, StationId excluded) {
  check_source(net, excluded);
  return betweenness_impl(net, excluded.value);
}

WienerIndex wiener_index(const Network& net) { return wiener_impl(net); }

VitalityReport closeness_vitality_all(const Network& net) {
  const std::size_t n = net.size();
  const WienerIndex base = wiener_index(net);
  const Components comp = connected_components(net);
  const std::vector<std::size_t> comp_size = comp.sizes();

  VitalityReport report{std::vector<Vitality>(n)};
  detail::parallel_for(n, [&](std::size_t v) {
    const Network reduced = delete_vertex(net, StationId{static_cast<std::uint32_t>(v)});
    const WienerIndex after = wiener_index(reduced);
    const std::uint32_t comps_after = connected_components(reduced).count;
    const std::uint32_t comps_expected = comp.count - (net.degree(v) == 0 ? 1 : 0);

    // Pairs among the survivors that were reachable before the removal.
    const std::uint64_t survivors_reachable = base.reachable_pairs - (comp_size[comp.label[v]] - 1);

    Vitality& out = report.values[v];
    out.disconnects = comps_after > comps_expected;
    out.pairs_lost = survivors_reachable - after.reachable_pairs;
    out.delta = static_cast<std::int64_t>(base.distance_sum) -
                static_cast<std::int64_t>(after.distance_sum);
  });
  return report;
}

std::vector<std::uint32_t> rank_descending(const std::vector<double>& values) {
  std::vector<std::uint32_t> order(values.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] > values[b]; });
  return order;
}

std::vector<std::uint32_t> rank_vitality(const VitalityReport& report) {
  const auto& v = report.values;
  std::vector<std::uint32_t> order(v.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (v[a].disconnects != v[b].disconnects) return v[a].disconnects;
    if (v[a].disconnects) return v[a].pairs_lost > v[b].pairs_lost;
    return v[a].delta > v[b].delta;
  });
  return order;
}

}  // namespace metro
