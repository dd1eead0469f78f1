#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metro/centrality.hpp"
#include "metro/diffusion.hpp"
#include "metro/ingest.hpp"
#include "metro/network.hpp"

namespace metro {

struct ZoneAggregate {
  std::string zone;  // "1", "2", "3", "4-10"
  std::int64_t entries = 0;
  std::int64_t exits = 0;
  std::int64_t net_outflow = 0;
};

struct ZoneTable {
  std::vector<ZoneAggregate> rows;
  ZoneAggregate total;
};

/// Per-zone sums with zones 4-10 in one bucket. `records` must be aligned
/// to StationIds (see align_flows).
ZoneTable zone_aggregates(const Network& net, std::span<const FlowRecord> records);

struct StationFlow {
  StationId station;
  std::int64_t entries = 0;
  std::int64_t exits = 0;
  std::int64_t net_outflow = 0;
};

struct TopFlows {
  std::vector<StationFlow> outflow;  // largest net outflow first
  std::vector<StationFlow> inflow;   // most negative net outflow first
};

TopFlows top_flows(std::span<const FlowRecord> aligned, std::size_t n);

struct BetweennessShift {
  StationId station;  // id in the original network
  double before = 0.0;
  double after = 0.0;
  double delta = 0.0;
};

struct ClosureImpact {
  StationId closed;
  std::int64_t delta_wiener = 0;  // Wiener(after) - Wiener(before), reachable pairs
  std::uint64_t pairs_lost = 0;
  std::vector<BetweennessShift> betweenness_shift;  // top 10 by |delta|
  // Present when flows were supplied.
  std::optional<double> max_population_shift;
  std::optional<StationId> max_population_shift_station;
};

/// Betweenness "before" leaves out pairs with the closed station as an
/// endpoint, so shifts measure rerouting among the surviving pairs only.
ClosureImpact closure_impact(const Network& net, StationId closed,
                             const FlowSignal* flow = nullptr,
                             const DiffusionParams& params = {});

enum class ExportFormat { Csv, Dot, GeoJson };

std::optional<ExportFormat> parse_export_format(std::string_view name);

struct ExportResult {
  std::string bytes;
  std::size_t omitted = 0;  // stations without coordinates (geojson only)
};

ExportResult export_signal(const Network& net, std::span<const double> signal, ExportFormat format);

/// 1234567 -> "1,234,567"
std::string with_thousands(std::int64_t value);

}  // namespace metro
