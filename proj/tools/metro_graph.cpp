// metro-graph: vulnerability metrics, passenger-flow tables and diffusion
// population estimates for a transit network given as CSV files.
//
// Exit codes: 0 success, 2 input error, 3 numerical failure.

#include <fmt/core.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "metro/centrality.hpp"
#include "metro/diffusion.hpp"
#include "metro/error.hpp"
#include "metro/ingest.hpp"
#include "metro/network.hpp"
#include "metro/report.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string stations;
  std::string edges;
  std::string flows;
  std::size_t top = 10;
  bool top_given = false;
  double k = 1.0;
  std::string format = "csv";
  std::string out;
  std::string station;
  std::string signal;
  bool by_zone = false;
};

struct Inputs {
  metro::Network net;
  std::vector<metro::FlowRecord> aligned;  // empty without --flows
  std::optional<metro::FlowSignal> flow;
};

Inputs load(const Options& opt, bool need_flows) {
  Inputs in;
  auto meta = metro::parse_stations(metro::read_file(opt.stations));
  auto edges = metro::parse_edges(metro::read_file(opt.edges));
  in.net = metro::build_network(edges, std::move(meta));
  if (need_flows && opt.flows.empty())
    throw metro::Error(metro::ErrorKind::Io, "--flows is required for this command");
  if (!opt.flows.empty()) {
    const auto records = metro::parse_flows(metro::read_file(opt.flows));
    in.aligned = metro::align_flows(records, in.net);
    in.flow = metro::net_flow(in.aligned, in.net, "AM peak");
  }
  return in;
}

std::string zone_of(const metro::Network& net, std::size_t v) {
  const auto& z = net.meta(v).zone;
  return z ? std::to_string(*z) : "-";
}

void write_export(const metro::Network& net, const std::vector<double>& signal,
                  const Options& opt) {
  const auto format = metro::parse_export_format(opt.format);
  if (!format)
    throw metro::Error(metro::ErrorKind::InvalidArgument, "unknown format '" + opt.format + "'");
  const auto result = metro::export_signal(net, signal, *format);
  if (opt.out.empty() || opt.out == "-") {
    std::cout << result.bytes;
  } else {
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw metro::Error(metro::ErrorKind::Io, "cannot write '" + opt.out + "'");
    f << result.bytes;
  }
  if (result.omitted > 0)
    std::cerr << fmt::format("warning: {} station(s) without coordinates omitted\n", result.omitted);
}

std::vector<double> vitality_signal(const metro::VitalityReport& r) {
  std::vector<double> s;
  s.reserve(r.values.size());
  for (const auto& v : r.values) s.push_back(static_cast<double>(v.delta));
  return s;
}

void print_betweenness(const metro::Network& net, const std::vector<double>& values,
                       std::size_t top) {
  const auto order = metro::rank_descending(values);
  fmt::print("{:>4}  {:<32} {:>4}  {:>14}\n", "rank", "station", "zone", "betweenness");
  for (std::size_t i = 0; i < std::min(top, order.size()); ++i) {
    const auto v = order[i];
    fmt::print("{:>4}  {:<32} {:>4}  {:>14.2f}\n", i + 1, net.meta(v).name, zone_of(net, v),
               values[v]);
  }
}

int cmd_centrality(const Options& opt) {
  const auto in = load(opt, false);
  const auto report = metro::betweenness_all(in.net);
  print_betweenness(in.net, report.values, opt.top);
  if (!opt.out.empty()) write_export(in.net, report.values, opt);
  return 0;
}

int cmd_vitality(const Options& opt) {
  const auto in = load(opt, false);
  const auto report = metro::closeness_vitality_all(in.net);
  const auto order = metro::rank_vitality(report);
  fmt::print("{:>4}  {:<32} {:>4}  {:>24}\n", "rank", "station", "zone", "closeness vitality");
  for (std::size_t i = 0; i < std::min(opt.top, order.size()); ++i) {
    const auto v = order[i];
    const auto& val = report.values[v];
    const std::string text =
        val.disconnects ? fmt::format("disconnects ({} pairs)", metro::with_thousands(
                                                                   static_cast<std::int64_t>(val.pairs_lost)))
                        : metro::with_thousands(val.delta);
    fmt::print("{:>4}  {:<32} {:>4}  {:>24}\n", i + 1, in.net.meta(v).name, zone_of(in.net, v), text);
  }
  if (!opt.out.empty()) write_export(in.net, vitality_signal(report), opt);
  return 0;
}

int cmd_netflow(const Options& opt) {
  const auto in = load(opt, true);
  using metro::with_thousands;
  if (opt.by_zone) {
    const auto table = metro::zone_aggregates(in.net, in.aligned);
    fmt::print("{:<6} {:>12} {:>12} {:>12}\n", "Zone", "Entries", "Exits", "Net Outflow");
    for (const auto& r : table.rows)
      fmt::print("{:<6} {:>12} {:>12} {:>12}\n", r.zone, with_thousands(r.entries),
                 with_thousands(r.exits), with_thousands(r.net_outflow));
    const auto& t = table.total;
    fmt::print("{:<6} {:>12} {:>12} {:>12}\n", t.zone, with_thousands(t.entries),
               with_thousands(t.exits), with_thousands(t.net_outflow));
  } else {
    const std::size_t n = opt.top_given ? opt.top : 5;
    const auto top = metro::top_flows(in.aligned, n);
    auto section = [&](const char* title, const std::vector<metro::StationFlow>& rows) {
      fmt::print("{}\n{:<32} {:>10} {:>10} {:>12}\n", title, "Station", "Entries", "Exits",
                 "Net Outflow");
      for (const auto& r : rows)
        fmt::print("{:<32} {:>10} {:>10} {:>12}\n", in.net.meta(r.station.index()).name,
                   with_thousands(r.entries), with_thousands(r.exits),
                   with_thousands(r.net_outflow));
    };
    section("Largest net outflow", top.outflow);
    fmt::print("\n");
    section("Largest net inflow", top.inflow);
  }
  if (!opt.out.empty()) write_export(in.net, in.flow->q, opt);
  return 0;
}

int cmd_population(const Options& opt) {
  const auto in = load(opt, true);
  const metro::DiffusionParams params{.k = opt.k};
  const auto est = metro::estimate_population(in.net, *in.flow, params);

  std::vector<std::uint32_t> order;
  if (opt.top_given) {
    order = metro::rank_descending(est.phi);
    order.resize(std::min(opt.top, order.size()));
  } else {
    for (std::uint32_t v = 0; v < in.net.size(); ++v) order.push_back(v);
  }
  fmt::print("{:<32} {:>4}  {:>16}\n", "station", "zone", "relative pop.");
  for (auto v : order)
    fmt::print("{:<32} {:>4}  {:>16.3f}\n", in.net.meta(v).name, zone_of(in.net, v), est.phi[v]);
  fmt::print("\n");
  for (std::size_t c = 0; c < est.projected_out.size(); ++c)
    fmt::print("component {}: unmodelled net outflow {:.3f} per station (total {:.0f})\n", c,
               est.projected_out[c], in.flow->component_sums[c]);
  fmt::print("solver: relative residual {:.3e}, {} iterations, k = {}\n", est.residual,
             est.iterations, opt.k);
  if (!opt.out.empty()) write_export(in.net, est.phi, opt);
  return 0;
}

int cmd_closure(const Options& opt) {
  const auto in = load(opt, false);
  const auto id = in.net.find(metro::normalize_name(opt.station));
  if (!id)
    throw metro::Error(metro::ErrorKind::UnknownStation, "unknown station '" + opt.station + "'");
  const metro::DiffusionParams params{.k = opt.k};
  const auto impact =
      metro::closure_impact(in.net, *id, in.flow ? &*in.flow : nullptr, params);

  fmt::print("closed station:      {}\n", in.net.meta(id->index()).name);
  fmt::print("delta Wiener index:  {}\n", metro::with_thousands(impact.delta_wiener));
  fmt::print("pairs lost:          {}\n",
             metro::with_thousands(static_cast<std::int64_t>(impact.pairs_lost)));
  if (impact.max_population_shift)
    fmt::print("max population shift: {:.3f} at {}\n", *impact.max_population_shift,
               in.net.meta(impact.max_population_shift_station->index()).name);
  fmt::print("\nbetweenness shift (top {})\n{:<32} {:>12} {:>12} {:>12}\n",
             impact.betweenness_shift.size(), "station", "before", "after", "delta");
  for (const auto& s : impact.betweenness_shift)
    fmt::print("{:<32} {:>12.2f} {:>12.2f} {:>+12.2f}\n", in.net.meta(s.station.index()).name,
               s.before, s.after, s.delta);
  return 0;
}

int cmd_export(const Options& opt) {
  const bool need_flows = opt.signal == "netflow" || opt.signal == "population";
  const auto in = load(opt, need_flows);
  std::vector<double> signal;
  if (opt.signal == "betweenness") {
    signal = metro::betweenness_all(in.net).values;
  } else if (opt.signal == "vitality") {
    signal = vitality_signal(metro::closeness_vitality_all(in.net));
  } else if (opt.signal == "netflow") {
    signal = in.flow->q;
  } else {
    signal = metro::estimate_population(in.net, *in.flow, {.k = opt.k}).phi;
  }
  write_export(in.net, signal, opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transit network vulnerability and passenger-flow analysis"};
  app.name("metro-graph");
  app.require_subcommand(1);

  Options opt;
  auto common = [&](CLI::App* sub, bool flows_required) {
    sub->add_option("--stations", opt.stations, "stations.csv (name,zone,lat,lon)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--edges", opt.edges, "edges.csv (station_a,station_b,line)")
        ->required()
        ->check(CLI::ExistingFile);
    auto* flows = sub->add_option("--flows", opt.flows, "flows.csv (station,entries,exits)")
                      ->check(CLI::ExistingFile);
    if (flows_required) flows->required();
    sub->add_option("--format", opt.format, "export format")
        ->check(CLI::IsMember({"csv", "dot", "geojson"}));
    sub->add_option("--out", opt.out, "export path ('-' for stdout)");
    sub->add_option("--k", opt.k, "diffusivity (default 1)")->check(CLI::PositiveNumber);
    sub->add_option_function<std::size_t>(
        "--top", [&](const std::size_t& n) { opt.top = n, opt.top_given = true; },
        "number of rows");
  };

  auto* centrality = app.add_subcommand("centrality", "betweenness centrality ranking");
  common(centrality, false);
  auto* vitality = app.add_subcommand("vitality", "closeness vitality ranking");
  common(vitality, false);
  auto* netflow = app.add_subcommand("netflow", "net passenger outflow tables");
  common(netflow, true);
  netflow->add_flag("--by-zone", opt.by_zone, "aggregate by fare zone");
  auto* population = app.add_subcommand("population", "relative population from net outflow");
  common(population, true);
  auto* closure = app.add_subcommand("closure", "impact of closing one station");
  common(closure, false);
  closure->add_option("--station", opt.station, "station to close")->required();
  auto* exporter = app.add_subcommand("export", "export a per-station signal");
  common(exporter, false);
  exporter->add_option("--signal", opt.signal, "signal to export")
      ->required()
      ->check(CLI::IsMember({"betweenness", "vitality", "netflow", "population"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*centrality) return cmd_centrality(opt);
    if (*vitality) return cmd_vitality(opt);
    if (*netflow) return cmd_netflow(opt);
    if (*population) return cmd_population(opt);
    if (*closure) return cmd_closure(opt);
    if (*exporter) return cmd_export(opt);
  } catch (const metro::Error& e) {
    std::cerr << "error [" << metro::to_string(e.kind()) << "]: " << e.what() << "\n";
    return metro::is_numerical(e.kind()) ? kExitNumerical : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
