#include "metro/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "json.hpp"

#include "metro/error.hpp"

namespace metro {

namespace {

std::string zone_bucket(int zone) { return zone <= 3 ? std::to_string(zone) : "4-10"; }

std::string format_value(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

ZoneTable zone_aggregates(const Network& net, std::span<const FlowRecord> records) {
  if (records.size() != net.size())
    throw Error(ErrorKind::DimensionMismatch, "zone_aggregates: records not aligned to stations");
  ZoneTable table;
  for (const char* z : {"1", "2", "3", "4-10"}) table.rows.push_back({z, 0, 0, 0});
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto& zone = net.meta(v).zone;
    if (!zone)
      throw Error(ErrorKind::MissingZone, "station '" + net.meta(v).name + "' has no fare zone");
    const std::string bucket = zone_bucket(*zone);
    auto& row = *std::find_if(table.rows.begin(), table.rows.end(),
                              [&](const ZoneAggregate& r) { return r.zone == bucket; });
    row.entries += records[v].entries;
    row.exits += records[v].exits;
  }
  table.total.zone = "Total";
  for (auto& row : table.rows) {
    row.net_outflow = row.exits - row.entries;
    table.total.entries += row.entries;
    table.total.exits += row.exits;
  }
  table.total.net_outflow = table.total.exits - table.total.entries;
  return table;
}

TopFlows top_flows(std::span<const FlowRecord> aligned, std::size_t n) {
  std::vector<StationFlow> all;
  all.reserve(aligned.size());
  for (std::uint32_t v = 0; v < aligned.size(); ++v)
    all.push_back({StationId{v}, aligned[v].entries, aligned[v].exits,
                   aligned[v].exits - aligned[v].entries});

  TopFlows out;
  auto by_out = all;
  std::stable_sort(by_out.begin(), by_out.end(),
                   [](const auto& a, const auto& b) { return a.net_outflow > b.net_outflow; });
  for (const auto& s : by_out) {
    if (out.outflow.size() == n || s.net_outflow <= 0) break;
    out.outflow.push_back(s);
  }
  auto by_in = all;
  std::stable_sort(by_in.begin(), by_in.end(),
                   [](const auto& a, const auto& b) { return a.net_outflow < b.net_outflow; });
  for (const auto& s : by_in) {
    if (out.inflow.size() == n || s.net_outflow >= 0) break;
    out.inflow.push_back(s);
  }
  return out;
}

ClosureImpact closure_impact(const Network& net, StationId closed, const FlowSignal* flow,
                             const DiffusionParams& params) {
  const Network reduced = delete_vertex(net, closed);
  ClosureImpact impact;
  impact.closed = closed;

  const WienerIndex before = wiener_index(net);
  const WienerIndex after = wiener_index(reduced);
  impact.delta_wiener = static_cast<std::int64_t>(after.distance_sum) -
                        static_cast<std::int64_t>(before.distance_sum);
  const Components comp = connected_components(net);
  const std::uint64_t own_pairs = comp.sizes()[comp.label[closed.index()]] - 1;
  impact.pairs_lost = (before.reachable_pairs - own_pairs) - after.reachable_pairs;

  const auto b_before = betweenness_excluding_endpoint(net, closed).values;
  const auto b_after = betweenness_all(reduced).values;
  std::vector<BetweennessShift> shifts;
  shifts.reserve(reduced.size());
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    const StationId orig = reduced.origin(i);
    shifts.push_back({orig, b_before[orig.index()], b_after[i], b_after[i] - b_before[orig.index()]});
  }
  std::stable_sort(shifts.begin(), shifts.end(), [](const auto& a, const auto& b) {
    return std::abs(a.delta) > std::abs(b.delta);
  });
  if (shifts.size() > 10) shifts.resize(10);
  impact.betweenness_shift = std::move(shifts);

  if (flow) {
    const auto est_before = estimate_population(net, *flow, params);
    std::vector<double> q(reduced.size());
    for (std::size_t i = 0; i < reduced.size(); ++i) q[i] = flow->q[reduced.origin(i).index()];
    const auto est_after =
        estimate_population(reduced, make_flow_signal(reduced, std::move(q), flow->period), params);
    double worst = -1.0;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      const StationId orig = reduced.origin(i);
      const double shift = std::abs(est_after.phi[i] - est_before.phi[orig.index()]);
      if (shift > worst) {
        worst = shift;
        impact.max_population_shift_station = orig;
      }
    }
    impact.max_population_shift = std::max(worst, 0.0);
  }
  return impact;
}

std::optional<ExportFormat> parse_export_format(std::string_view name) {
  if (name == "csv") return ExportFormat::Csv;
  if (name == "dot") return ExportFormat::Dot;
  if (name == "geojson") return ExportFormat::GeoJson;
  return std::nullopt;
}

ExportResult export_signal(const Network& net, std::span<const double> signal, ExportFormat format) {
  if (signal.size() != net.size())
    throw Error(ErrorKind::DimensionMismatch, "export: signal length " +
                                                  std::to_string(signal.size()) + " != N = " +
                                                  std::to_string(net.size()));
  ExportResult out;
  switch (format) {
    case ExportFormat::Csv: {
      out.bytes = "name,zone,value\n";
      for (std::size_t v = 0; v < net.size(); ++v) {
        const auto& m = net.meta(v);
        out.bytes += csv_field(m.name) + ',' + (m.zone ? std::to_string(*m.zone) : "") + ',' +
                     format_value(signal[v]) + '\n';
      }
      break;
    }
    case ExportFormat::Dot: {
      out.bytes = "graph metro {\n";
      for (std::size_t v = 0; v < net.size(); ++v) {
        const auto& m = net.meta(v);
        out.bytes += "  " + std::to_string(v) + " [label=\"" + dot_escape(m.name) + "\"";
        if (m.zone) out.bytes += ", zone=" + std::to_string(*m.zone);
        out.bytes += ", value=" + format_value(signal[v]) + "];\n";
      }
      for (const Edge& e : net.edges())
        out.bytes += "  " + std::to_string(e.first) + " -- " + std::to_string(e.second) + ";\n";
      out.bytes += "}\n";
      break;
    }
    case ExportFormat::GeoJson: {
      nlohmann::json features = nlohmann::json::array();
      for (std::size_t v = 0; v < net.size(); ++v) {
        const auto& m = net.meta(v);
        if (!m.coord) {
          ++out.omitted;
          continue;
        }
        nlohmann::json props{{"name", m.name}, {"value", signal[v]}};
        if (m.zone) props["zone"] = *m.zone;
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Point"},
                                          {"coordinates", {m.coord->lon, m.coord->lat}}}},
                            {"properties", std::move(props)}});
      }
      nlohmann::json doc{{"type", "FeatureCollection"}, {"features", std::move(features)}};
      out.bytes = doc.dump(2) + "\n";
      break;
    }
  }
  return out;
}

std::string with_thousands(std::int64_t value) {
  const bool negative = value < 0;
  // Magnitude via unsigned to keep INT64_MIN well defined.
  std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(value) : static_cast<std::uint64_t>(value);
  std::string digits = std::to_string(mag);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return negative ? "-" + out : out;
}

}  // namespace metro
