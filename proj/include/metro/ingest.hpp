#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metro/diffusion.hpp"
#include "metro/network.hpp"

namespace metro {

// CSV inputs (UTF-8, LF or CRLF, '#' comment lines skipped):
//   stations.csv  name,zone,lat,lon   (lat/lon columns optional, may be empty)
//   edges.csv     station_a,station_b,line
//   flows.csv     station,entries,exits
// Station names are trimmed and NFC-normalised, then matched exactly.

struct EdgeRecord {
  std::string station_a;
  std::string station_b;
  std::string line;
  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct FlowRecord {
  std::string station;
  std::int64_t entries = 0;
  std::int64_t exits = 0;
  friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

std::vector<StationMeta> parse_stations(std::string_view text);
std::vector<EdgeRecord> parse_edges(std::string_view text);
std::vector<FlowRecord> parse_flows(std::string_view text);

std::string serialize_stations(std::span<const StationMeta> stations);
std::string serialize_edges(std::span<const EdgeRecord> edges);
std::string serialize_flows(std::span<const FlowRecord> flows);

/// Trim + NFC.
std::string normalize_name(std::string_view name);

/// Parses a count, stripping ',' and thin/narrow no-break space separators.
std::int64_t parse_count(std::string_view text);

std::string read_file(const std::filesystem::path& path);

Network build_network(std::span<const EdgeRecord> edges, std::vector<StationMeta> meta);

/// q[i] = exits - entries. Every vertex needs exactly one record.
FlowSignal net_flow(std::span<const FlowRecord> records, const Network& net, std::string period);

/// Records reordered to StationId order; same validation as net_flow.
std::vector<FlowRecord> align_flows(std::span<const FlowRecord> records, const Network& net);

}  // namespace metro
