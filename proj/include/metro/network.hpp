#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace metro {

/// Dense vertex index in [0, N) of one Network.
struct StationId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const noexcept { return value; }
  friend constexpr auto operator<=>(StationId, StationId) = default;
};

struct Coordinate {
  double lat = 0.0;
  double lon = 0.0;
  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

struct StationMeta {
  std::string name;
  std::optional<int> zone;  // fare zone 1-10
  std::optional<Coordinate> coord;
  friend bool operator==(const StationMeta&, const StationMeta&) = default;
};

/// Unordered vertex pair stored with first < second.
struct Edge {
  std::uint32_t first = 0;
  std::uint32_t second = 0;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

struct NamedEdge {
  std::string a;
  std::string b;
};

/// Immutable undirected, unweighted simple graph of stations.
///
/// Adjacency is held in CSR form with each neighbour list sorted ascending.
/// Parallel links between the same two stations collapse into one edge.
/// Graphs produced by delete_vertex() remember the StationId each vertex had
/// in the network it was derived from.
class Network {
 public:
  Network() = default;

  /// Builds from index pairs. Reversed and repeated pairs are merged;
  /// self-loops and out-of-range endpoints throw.
  Network(std::vector<StationMeta> meta, std::span<const Edge> edges);

  /// Convenience for tests and generators: anonymous stations "v0".."v{n-1}".
  static Network from_edges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const noexcept { return meta_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const std::uint32_t> neighbors(std::size_t v) const noexcept {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::uint32_t degree(std::size_t v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }
  bool has_edge(std::size_t u, std::size_t v) const noexcept;

  // Raw CSR arrays, consumed by the SIMD Laplacian kernels.
  std::span<const std::uint32_t> csr_offsets() const noexcept { return offsets_; }
  std::span<const std::uint32_t> csr_targets() const noexcept { return targets_; }

  const StationMeta& meta(std::size_t v) const { return meta_[v]; }
  std::span<const StationMeta> stations() const noexcept { return meta_; }
  std::optional<StationId> find(std::string_view name) const;

  /// StationId of vertex v in the network this one was derived from
  /// (identity for networks that were built directly).
  StationId origin(std::size_t v) const noexcept { return StationId{origin_[v]}; }
  std::span<const std::uint32_t> origins() const noexcept { return origin_; }

 private:
  friend Network delete_vertex(const Network& net, StationId v);

  std::vector<StationMeta> meta_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<std::uint32_t> targets_;
  std::vector<std::uint32_t> origin_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
};

/// Resolves station names against meta and builds the network. StationIds
/// follow the order of meta.
Network build_network(std::span<const NamedEdge> edge_list, std::vector<StationMeta> meta);

/// Row-major dense matrix, used for small-instance checks and exports.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
};

/// L = D - A without materialising it.
class LaplacianView {
 public:
  explicit LaplacianView(const Network& net) : net_(&net) {}

  std::size_t size() const noexcept { return net_->size(); }
  double operator()(std::size_t i, std::size_t j) const;

  /// out = L * x. Dispatches to the active SIMD kernel.
  void apply(std::span<const double> x, std::span<double> out) const;

  DenseMatrix dense() const;

 private:
  const Network* net_;
};

inline LaplacianView laplacian(const Network& net) { return LaplacianView(net); }

DenseMatrix adjacency_matrix(const Network& net);

struct Components {
  std::vector<std::uint32_t> label;  // per vertex
  std::uint32_t count = 0;

  /// Vertices of component c in ascending order.
  std::vector<std::uint32_t> members(std::uint32_t c) const;
  std::vector<std::size_t> sizes() const;
};

/// Labels follow the smallest StationId in each component: 0, 1, ...
Components connected_components(const Network& net);

/// Removes v and its incident edges; survivors keep their relative order.
Network delete_vertex(const Network& net, StationId v);

}  // namespace metro
