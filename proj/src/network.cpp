#include "metro/network.hpp"

#include <algorithm>

#include "metro/error.hpp"
#include "metro/simd/kernels.hpp"

namespace metro {

namespace {

std::unordered_map<std::string, std::uint32_t> index_names(const std::vector<StationMeta>& meta) {
  std::unordered_map<std::string, std::uint32_t> out;
  out.reserve(meta.size());
  for (std::uint32_t i = 0; i < meta.size(); ++i) {
    if (!out.emplace(meta[i].name, i).second)
      throw Error(ErrorKind::DuplicateStation, "duplicate station '" + meta[i].name + "'");
  }
  return out;
}

}  // namespace

Network::Network(std::vector<StationMeta> meta, std::span<const Edge> edges)
    : meta_(std::move(meta)) {
  const auto n = static_cast<std::uint32_t>(meta_.size());
  by_name_ = index_names(meta_);

  edges_.reserve(edges.size());
  for (Edge e : edges) {
    if (e.first >= n || e.second >= n)
      throw Error(ErrorKind::OutOfRange, "edge endpoint outside [0, " + std::to_string(n) + ")");
    if (e.first == e.second)
      throw Error(ErrorKind::SelfLoop, "self-loop at station '" + meta_[e.first].name + "'");
    if (e.first > e.second) std::swap(e.first, e.second);
    edges_.push_back(e);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  std::vector<std::uint32_t> deg(n, 0);
  for (const Edge& e : edges_) {
    ++deg[e.first];
    ++deg[e.second];
  }
  offsets_.assign(n + 1, 0);
  for (std::uint32_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  targets_.resize(offsets_[n]);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  // edges_ is sorted, so each adjacency list comes out sorted as well.
  for (const Edge& e : edges_) targets_[fill[e.first]++] = e.second;
  for (const Edge& e : edges_) targets_[fill[e.second]++] = e.first;
  for (std::uint32_t v = 0; v < n; ++v)
    std::sort(targets_.begin() + offsets_[v], targets_.begin() + offsets_[v + 1]);

  origin_.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) origin_[v] = v;
}

Network Network::from_edges(std::size_t n, std::span<const Edge> edges) {
  std::vector<StationMeta> meta(n);
  for (std::size_t i = 0; i < n; ++i) meta[i].name = "v" + std::to_string(i);
  return Network(std::move(meta), edges);
}

bool Network::has_edge(std::size_t u, std::size_t v) const noexcept {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(v));
}

std::optional<StationId> Network::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return StationId{it->second};
}

Network build_network(std::span<const NamedEdge> edge_list, std::vector<StationMeta> meta) {
  if (edge_list.empty()) throw Error(ErrorKind::EmptyNetwork, "edge list is empty");
  const auto names = index_names(meta);
  auto resolve = [&](const std::string& name) {
    auto it = names.find(name);
    if (it == names.end())
      throw Error(ErrorKind::UnknownStation, "edge references unknown station '" + name + "'");
    return it->second;
  };
  std::vector<Edge> edges;
  edges.reserve(edge_list.size());
  for (const NamedEdge& e : edge_list) edges.push_back({resolve(e.a), resolve(e.b)});
  return Network(std::move(meta), edges);
}

double LaplacianView::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return static_cast<double>(net_->degree(i));
  return net_->has_edge(i, j) ? -1.0 : 0.0;
}

void LaplacianView::apply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != size() || out.size() != size())
    throw Error(ErrorKind::DimensionMismatch, "Laplacian apply: vector length != N");
  simd::laplacian(net_->csr_offsets(), net_->csr_targets(), x, 1.0, out);
}

DenseMatrix LaplacianView::dense() const {
  const std::size_t n = size();
  DenseMatrix m{n, n, std::vector<double>(n * n, 0.0)};
  for (std::size_t v = 0; v < n; ++v) {
    m(v, v) = net_->degree(v);
    for (std::uint32_t u : net_->neighbors(v)) m(v, u) = -1.0;
  }
  return m;
}

DenseMatrix adjacency_matrix(const Network& net) {
  const std::size_t n = net.size();
  DenseMatrix m{n, n, std::vector<double>(n * n, 0.0)};
  for (std::size_t v = 0; v < n; ++v)
    for (std::uint32_t u : net.neighbors(v)) m(v, u) = 1.0;
  return m;
}

std::vector<std::uint32_t> Components::members(std::uint32_t c) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < label.size(); ++v)
    if (label[v] == c) out.push_back(v);
  return out;
}

std::vector<std::size_t> Components::sizes() const {
  std::vector<std::size_t> out(count, 0);
  for (auto c : label) ++out[c];
  return out;
}

Components connected_components(const Network& net) {
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  Components comp{std::vector<std::uint32_t>(net.size(), unset), 0};
  std::vector<std::uint32_t> stack;
  for (std::uint32_t root = 0; root < net.size(); ++root) {
    if (comp.label[root] != unset) continue;
    const std::uint32_t c = comp.count++;
    comp.label[root] = c;
    stack.push_back(root);
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (std::uint32_t u : net.neighbors(v)) {
        if (comp.label[u] == unset) {
          comp.label[u] = c;
          stack.push_back(u);
        }
      }
    }
  }
  return comp;
}

Network delete_vertex(const Network& net, StationId v) {
  const std::size_t n = net.size();
  if (v.index() >= n)
    throw Error(ErrorKind::OutOfRange, "delete_vertex: station " + std::to_string(v.value) +
                                           " outside [0, " + std::to_string(n) + ")");
  constexpr auto gone = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> remap(n, gone);
  std::vector<StationMeta> meta;
  meta.reserve(n - 1);
  for (std::uint32_t u = 0, next = 0; u < n; ++u) {
    if (u == v.value) continue;
    remap[u] = next++;
    meta.push_back(net.meta(u));
  }
  std::vector<Edge> edges;
  edges.reserve(net.edge_count());
  for (const Edge& e : net.edges()) {
    if (e.first == v.value || e.second == v.value) continue;
    edges.push_back({remap[e.first], remap[e.second]});
  }
  Network out(std::move(meta), edges);
  for (std::uint32_t u = 0; u < n; ++u)
    if (remap[u] != gone) out.origin_[remap[u]] = net.origin_[u];
  return out;
}

}  // namespace metro
