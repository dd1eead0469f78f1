// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Tolerances and time limits are fixed
// here; none are read from the environment.
//
// METRO_GRAPH_TFL_DIR, when set, names a directory with the full station
// set as stations.csv, edges.csv and flows.csv. The zone-table check then
// runs on it; otherwise the bundled ten-station fixture is used.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "metro/centrality.hpp"
#include "metro/diffusion.hpp"
#include "metro/error.hpp"
#include "metro/ingest.hpp"
#include "metro/report.hpp"
#include "oracles.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, double limit_s,
               const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs > limit_s) {
    out.pass = false;
    out.detail += " (time limit " + std::to_string(limit_s) + " s exceeded)";
  }
  if (!out.pass) ++failures;
  std::printf("[%s] %s %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(),
              out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// ---- criterion bodies ------------------------------------------------------

Outcome betweenness_oracle() {
  constexpr double kTol = 1e-9;
  std::size_t graphs = 0;
  double worst = 0;
  auto check = [&](const metro::Network& net) {
    const auto got = metro::betweenness_all(net).values;
    const auto want = oracle::brute_force_betweenness(oracle::adjacency_of(net));
    for (std::size_t v = 0; v < net.size(); ++v) worst = std::max(worst, std::abs(got[v] - want[v]));
    ++graphs;
  };
  for (std::size_t n = 1; n <= 6; ++n)
    oracle::for_each_connected_graph(n, [&](const metro::Network& net) { check(net); });
  const std::size_t exhaustive = graphs;
  std::mt19937_64 rng(20160101);
  std::uniform_real_distribution<double> density(0.0, 0.8);
  for (int i = 0; i < 600; ++i) check(oracle::random_connected(7, density(rng), rng));
  return {worst <= kTol, std::to_string(exhaustive) + " exhaustive graphs (n<=6) + " +
                             std::to_string(graphs - exhaustive) +
                             " random n=7; max |error| " + fmt_double(worst) + " (tol 1e-9)"};
}

Outcome vitality_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> size(2, 30);
  std::uniform_real_distribution<double> density(0.0, 0.25);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const auto net = oracle::random_connected(size(rng), density(rng), rng);
    const auto got = metro::closeness_vitality_all(net).values;
    const auto want = oracle::vitality(oracle::adjacency_of(net));
    for (std::size_t v = 0; v < net.size(); ++v) {
      if (got[v].disconnects != want[v].disconnects || got[v].delta != want[v].delta ||
          got[v].pairs_lost != static_cast<std::uint64_t>(want[v].pairs_lost))
        ++mismatches;
    }
  }
  return {mismatches == 0, "100 graphs, " + std::to_string(mismatches) + " vertex mismatches (exact)"};
}

Outcome diffusion_round_trip() {
  constexpr double kPhiTol = 1e-8;
  constexpr double kSumTol = 1e-9;
  std::mt19937_64 rng(2016);
  std::uniform_int_distribution<std::size_t> size(2, 200);
  std::uniform_real_distribution<double> degree(0.0, 6.0);
  double worst_phi = 0, worst_sum = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = i == 0 ? 200 : size(rng);
    const double p = degree(rng) / static_cast<double>(n);
    const auto net = oracle::random_connected(n, p, rng);
    const auto phi = oracle::random_vector(n, rng, 0.0, 100.0);
    const metro::DiffusionParams params{.k = 0.5 + i * 0.1};
    const auto flow = metro::forward_flux(net, phi, params);
    const auto est = metro::estimate_population(net, flow, params);
    const auto want = metro::project_zero_mean(net, phi);
    double err = 0;
    for (std::size_t v = 0; v < n; ++v) err = std::max(err, std::abs(est.raw_phi[v] - want[v]));
    worst_phi = std::max(worst_phi, err / max_abs(want));
    double s = 0, mag = 0;
    for (double x : est.raw_phi) s += x, mag += std::abs(x);
    worst_sum = std::max(worst_sum, std::abs(s) / mag);
  }
  return {worst_phi <= kPhiTol && worst_sum <= kSumTol,
          "50 graphs; max relative phi error " + fmt_double(worst_phi) +
              " (tol 1e-8), max relative component sum " + fmt_double(worst_sum) + " (tol 1e-9)"};
}

Outcome pinv_oracle() {
  constexpr double kTol = 1e-8;
  std::mt19937_64 rng(50);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  std::uniform_real_distribution<double> density(0.0, 0.3);
  double worst = 0;
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = i == 0 ? 50 : size(rng);
    // Disconnected graphs included: the solve works per component.
    const auto net = oracle::random_graph(n, density(rng), rng);
    const auto rhs = oracle::random_vector(n, rng);
    const auto got = metro::solve_laplacian(net, rhs).x;
    const Eigen::VectorXd want =
        oracle::laplacian_pinv(net) * Eigen::Map<const Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(n));
    for (std::size_t v = 0; v < n; ++v)
      worst = std::max(worst, std::abs(got[v] - want(static_cast<Eigen::Index>(v))));
  }
  return {worst <= kTol, "40 graphs (N<=50); max |x - L^+ b| " + fmt_double(worst) + " (tol 1e-8)"};
}

// ---- CLI helpers -----------------------------------------------------------

std::string run_cli(const std::string& args, int& code) {
  const std::string cmd = std::string("'") + METRO_CLI_PATH + "' " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run " + cmd);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

struct Row {
  std::string label;
  std::vector<std::int64_t> numbers;
};

std::int64_t parse_signed(const std::string& word) {
  return word.front() == '-' ? -metro::parse_count(word.substr(1)) : metro::parse_count(word);
}

// A table row is a label followed by three numeric columns.
std::vector<Row> parse_rows(const std::string& text) {
  std::vector<Row> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::vector<std::string> tok;
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.size() < 4) continue;
    Row row;
    try {
      for (std::size_t i = tok.size() - 3; i < tok.size(); ++i) row.numbers.push_back(parse_signed(tok[i]));
    } catch (const metro::Error&) {
      continue;
    }
    for (std::size_t i = 0; i + 3 < tok.size(); ++i) row.label += (i ? " " : "") + tok[i];
    rows.push_back(row);
  }
  return rows;
}

std::string dataset_args(const std::filesystem::path& dir) {
  return "--stations '" + (dir / "stations.csv").string() + "' --edges '" +
         (dir / "edges.csv").string() + "' --flows '" + (dir / "flows.csv").string() + "'";
}

const std::filesystem::path kTableFixture = std::filesystem::path(METRO_DATA_DIR) / "tfl2016_table2";

struct StationRow {
  const char* name;
  std::int64_t entries, exits, net;
};

constexpr std::array<StationRow, 5> kTopOut{{{"Bank", 17577, 69972, 52395},
                                             {"Canary Wharf", 8850, 56256, 47406},
                                             {"Oxford Circus", 3005, 44891, 41886},
                                             {"Green Park", 2370, 30620, 28250},
                                             {"Holborn", 1599, 25294, 23695}}};
// Most negative first.
constexpr std::array<StationRow, 5> kTopIn{{{"Waterloo", 61129, 22861, -38268},
                                            {"Stratford", 43473, 22360, -21113},
                                            {"Brixton", 24750, 4369, -20381},
                                            {"Canada Water", 31815, 14862, -16953},
                                            {"Finsbury Park", 20773, 8070, -12703}}};

constexpr std::array<StationRow, 5> kZoneTable{{{"1", 455704, 844123, 388419},
                                                {"2", 343145, 264732, -78413},
                                                {"3", 275965, 104414, -171551},
                                                {"4-10", 206408, 72152, -134256},
                                                {"Total", 1281222, 1285421, 4199}}};

bool row_matches(const Row& r, const StationRow& want) {
  return r.label == want.name && r.numbers.size() == 3 && r.numbers[0] == want.entries &&
         r.numbers[1] == want.exits && r.numbers[2] == want.net;
}

Outcome zone_table() {
  if (const char* env = std::getenv("METRO_GRAPH_TFL_DIR"); env && *env) {
    int code = 0;
    const auto rows = parse_rows(run_cli("netflow " + dataset_args(env) + " --by-zone", code));
    std::size_t matched = 0;
    for (const auto& want : kZoneTable)
      for (const auto& r : rows) matched += row_matches(r, want);
    return {code == 0 && matched == kZoneTable.size(),
            "full dataset at " + std::string(env) + ": " + std::to_string(matched) +
                "/5 zone rows exact"};
  }

  // Fallback: the ten bundled station rows plus the aggregation identity.
  const auto net = metro::build_network(
      metro::parse_edges(metro::read_file(kTableFixture / "edges.csv")),
      metro::parse_stations(metro::read_file(kTableFixture / "stations.csv")));
  const auto flows = metro::parse_flows(metro::read_file(kTableFixture / "flows.csv"));
  const auto q = metro::net_flow(flows, net, "AM peak").q;
  std::size_t exact = 0;
  for (const auto* table : {&kTopOut, &kTopIn})
    for (const auto& want : *table) {
      const auto id = net.find(want.name);
      exact += id && q[id->index()] == static_cast<double>(want.net);
    }

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> zone(1, 10);
  std::uniform_int_distribution<std::int64_t> count(0, 100000);
  int broken = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 300;
    std::vector<metro::StationMeta> meta;
    std::vector<metro::FlowRecord> rec;
    for (std::size_t i = 0; i < n; ++i) {
      meta.push_back({"s" + std::to_string(i), zone(rng), std::nullopt});
      rec.push_back({meta.back().name, count(rng), count(rng)});
    }
    const metro::Network random_net(meta, {});
    const auto t = metro::zone_aggregates(random_net, metro::align_flows(rec, random_net));
    metro::ZoneAggregate sum;
    for (const auto& r : t.rows) {
      broken += r.net_outflow != r.exits - r.entries;
      sum.entries += r.entries, sum.exits += r.exits, sum.net_outflow += r.net_outflow;
    }
    broken += sum.entries != t.total.entries || sum.exits != t.total.exits ||
              sum.net_outflow != t.total.net_outflow ||
              t.total.net_outflow != t.total.exits - t.total.entries;
  }
  return {exact == 10 && broken == 0,
          "dataset not available (METRO_GRAPH_TFL_DIR unset); bundled fixture " +
              std::to_string(exact) + "/10 net outflows exact, zone identity violations " +
              std::to_string(broken) + " in 500 random tables"};
}

Outcome top_stations() {
  const char* env = std::getenv("METRO_GRAPH_TFL_DIR");
  const std::filesystem::path dir = env && *env ? std::filesystem::path(env) : kTableFixture;
  int code = 0;
  const auto text = run_cli("netflow " + dataset_args(dir) + " --top 5", code);
  const auto split = text.find("Largest net inflow");
  if (code != 0 || split == std::string::npos) return {false, "CLI exit code " + std::to_string(code)};
  const auto out_rows = parse_rows(text.substr(0, split));
  const auto in_rows = parse_rows(text.substr(split));
  std::size_t ok = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    ok += i < out_rows.size() && row_matches(out_rows[i], kTopOut[i]);
    ok += i < in_rows.size() && row_matches(in_rows[i], kTopIn[i]);
  }
  const bool sizes = out_rows.size() == 5 && in_rows.size() == 5;
  return {sizes && ok == 10, dir.filename().string() + ": " + std::to_string(ok) +
                                 "/10 rows match in order (name, entries, exits, net)"};
}

Outcome betweenness_fixture() {
  const auto dir = std::filesystem::path(METRO_DATA_DIR) / "london_zones_1-3";
  const auto net = metro::build_network(
      metro::parse_edges(metro::read_file(dir / "edges.csv")),
      metro::parse_stations(metro::read_file(dir / "stations.csv")));
  const auto values = metro::betweenness_all(net).values;
  const auto order = metro::rank_descending(values);
  const std::set<std::string> named{"Green Park", "Earl's Court", "Baker Street", "Waterloo",
                                    "Westminster"};
  std::string top;
  int overlap = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& name = net.meta(order[i]).name;
    overlap += named.count(name) > 0;
    top += (i ? ", " : "") + name;
  }
  return {overlap >= 3, "top 5 {" + top + "}, overlap " + std::to_string(overlap) + " (need >= 3)"};
}

Outcome conservation() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> size(1, 120);
  std::uniform_real_distribution<double> density(0.0, 0.2);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = size(rng);
    const auto net = oracle::random_graph(n, density(rng), rng);
    const auto phi = oracle::random_vector(n, rng, -1e3, 1e3);
    const auto flow = metro::forward_flux(net, phi);
    double norm = 0;
    for (double x : phi) norm += x * x;
    norm = std::sqrt(norm);
    for (double s : flow.component_sums) worst = std::max(worst, std::abs(s) / norm);
  }
  return {worst <= 1e-12, "1000 cases (k = 1); max |component sum| / ||phi|| " + fmt_double(worst) +
                              " (tol 1e-12)"};
}

}  // namespace

int main() {
  criterion("AC1", "betweenness vs brute-force enumeration", 30, betweenness_oracle);
  criterion("AC2", "closeness vitality vs delete-and-recompute", 30, vitality_oracle);
  criterion("AC3", "diffusion round trip", 60, diffusion_round_trip);
  criterion("AC4", "Laplacian solve vs dense pseudo-inverse", 10, pinv_oracle);
  criterion("AC5", "zone table", 0, zone_table);
  criterion("AC6", "top net outflow and inflow stations", 0, top_stations);
  criterion("AC7", "fixture betweenness top 5", 0, betweenness_fixture);
  criterion("AC8", "flux conservation per component", 5, conservation);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
