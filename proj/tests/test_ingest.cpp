#include "doctest.h"

#include <random>

#include "metro/error.hpp"
#include "metro/ingest.hpp"

using namespace metro;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

Network abc() {
  const std::vector<EdgeRecord> edges{{"A", "B", "x"}, {"B", "C", "x"}};
  return build_network(edges, parse_stations("name,zone\nA,1\nB,2\nC,3\n"));
}

}  // namespace

TEST_SUITE_BEGIN("ingest");

TEST_CASE("parse_stations") {
  const auto s = parse_stations("name,zone,lat,lon\nBank,1,51.5133,-0.0886");
  REQUIRE(s.size() == 1);
  CHECK(s[0].name == "Bank");
  CHECK(s[0].zone == 1);
  REQUIRE(s[0].coord);
  CHECK(s[0].coord->lat == 51.5133);
  CHECK(s[0].coord->lon == -0.0886);

  CHECK(kind_of([] { parse_stations("name,zone,lat,lon\nBank,1,,\nBank,1,,\n"); }) ==
        ErrorKind::DuplicateStation);
  CHECK(kind_of([] { parse_stations("name,zone,lat,lon\nBank,1,51.5\n"); }) == ErrorKind::MalformedRow);
  CHECK(kind_of([] { parse_stations("name,zone\nBank,one\n"); }) == ErrorKind::MalformedRow);
  CHECK(kind_of([] { parse_stations("name,zone\nBank,11\n"); }) == ErrorKind::MalformedRow);
  CHECK(kind_of([] { parse_stations("name,zone,lat,lon\nBank,1,51.5,\n"); }) == ErrorKind::MalformedRow);
  CHECK(kind_of([] { parse_stations("station,zone\nBank,1\n"); }) == ErrorKind::MalformedRow);
}

TEST_CASE("parse_stations: trimming, comments, CRLF, empty zone") {
  const auto s = parse_stations(
      "\xEF\xBB\xBF# roster\r\nname,zone,lat,lon\r\n  Holborn ,1,,\r\n\r\n# gap\r\nRichmond,,,\r\n");
  REQUIRE(s.size() == 2);
  CHECK(s[0].name == "Holborn");
  CHECK_FALSE(s[0].coord);
  CHECK_FALSE(s[1].zone);
}

TEST_CASE("names are NFC-normalised before matching") {
  // "Café" with a combining acute accent vs the precomposed form.
  const auto s = parse_stations("name,zone\nCafe\xCC\x81,1\nB,1\n");
  CHECK(s[0].name == "Caf\xC3\xA9");
  const auto e = parse_edges("station_a,station_b,line\nCaf\xC3\xA9,B,x\n");
  const Network net = build_network(e, s);
  CHECK(net.edge_count() == 1);
  CHECK(normalize_name("  x  ") == "x");
}

TEST_CASE("parse_edges") {
  const auto e = parse_edges("station_a,station_b,line\nBank,Liverpool Street,Central");
  REQUIRE(e.size() == 1);
  CHECK(e[0].station_a == "Bank");
  CHECK(e[0].station_b == "Liverpool Street");
  CHECK(e[0].line == "Central");
  CHECK(parse_edges("station_a,station_b,line\n").empty());
  CHECK(kind_of([] { parse_edges("station_a,station_b,line\nBank,Monument\n"); }) ==
        ErrorKind::MalformedRow);
  // An empty edge list cannot make a network.
  CHECK(kind_of([] { build_network(parse_edges("station_a,station_b,line\n"), parse_stations("name,zone\nA,1\n")); }) ==
        ErrorKind::EmptyNetwork);
}

TEST_CASE("parse_count strips thousands separators") {
  CHECK(parse_count("17,577") == 17577);
  CHECK(parse_count("1\xE2\x80\x89" "281\xE2\x80\x89" "222") == 1281222);
  CHECK(parse_count("1\xE2\x80\xAF" "000") == 1000);
  CHECK(parse_count(" 42 ") == 42);
  CHECK_THROWS_AS(parse_count("-5"), Error);
  CHECK_THROWS_AS(parse_count(""), Error);
  CHECK_THROWS_AS(parse_count("12a"), Error);
}

TEST_CASE("parse_flows with quoted counts") {
  const auto f = parse_flows("station,entries,exits\nBank,\"17,577\",\"69,972\"\n");
  REQUIRE(f.size() == 1);
  CHECK(f[0] == FlowRecord{"Bank", 17577, 69972});
  CHECK(kind_of([] { parse_flows("station,entries,exits\nBank,1\n"); }) == ErrorKind::MalformedRow);
  CHECK(kind_of([] { parse_flows("station,entries,exits\nBank,1,x\n"); }) == ErrorKind::MalformedRow);
  CHECK(kind_of([] { parse_flows("station,entries,exits\nBank,\"1,2\n"); }) == ErrorKind::MalformedRow);
}

TEST_CASE("net_flow") {
  const auto stations = parse_stations("name,zone\nBank,1\nWaterloo,1\nX,2\n");
  const std::vector<EdgeRecord> edges{{"Bank", "Waterloo", "W&C"}, {"Waterloo", "X", "t"}};
  const Network net = build_network(edges, stations);
  const std::vector<FlowRecord> rec{{"Waterloo", 61129, 22861}, {"Bank", 17577, 69972}, {"X", 5, 5}};
  const auto f = net_flow(rec, net, "AM peak 2016");
  CHECK(f.q == std::vector<double>{52395, -38268, 0});
  CHECK(f.period == "AM peak 2016");
  CHECK(f.component_sums == std::vector<double>{52395 - 38268});

  CHECK(kind_of([&] {
          net_flow(std::vector<FlowRecord>{{"Bank", 1, 1}, {"Waterloo", 1, 1}}, net, "");
        }) == ErrorKind::MissingStation);
  CHECK(kind_of([&] {
          net_flow(std::vector<FlowRecord>{{"Bank", 1, 1}, {"Bank", 1, 1}, {"X", 0, 0}, {"Waterloo", 0, 0}}, net, "");
        }) == ErrorKind::DuplicateRecord);
  CHECK(kind_of([&] {
          net_flow(std::vector<FlowRecord>{{"Bank", 1, 1}, {"Nowhere", 1, 1}}, net, "");
        }) == ErrorKind::UnknownStation);
}

TEST_CASE("net_flow total equals integer exits minus entries") {
  std::mt19937_64 rng(5);
  const Network net = abc();
  std::uniform_int_distribution<std::int64_t> count(0, 5'000'000);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FlowRecord> rec{{"A", count(rng), count(rng)}, {"B", count(rng), count(rng)},
                                {"C", count(rng), count(rng)}};
    std::int64_t exits = 0, entries = 0;
    for (const auto& r : rec) exits += r.exits, entries += r.entries;
    const auto f = net_flow(rec, net, "");
    CHECK(f.component_sums[0] == static_cast<double>(exits - entries));
  }
}

TEST_CASE("serialize then parse is the identity") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> pool{"Bank", "King's Cross St. Pancras", "Elephant & Castle",
                                      "Heathrow, Terminal 5", "The \"Oval\"", "Caf\xC3\xA9"};
  std::uniform_int_distribution<int> zone(0, 10);
  std::uniform_real_distribution<double> coord(-180.0, 180.0);
  std::uniform_int_distribution<std::int64_t> count(0, 99'999'999);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<StationMeta> stations;
    std::vector<EdgeRecord> edges;
    std::vector<FlowRecord> flows;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      StationMeta m{pool[i] + std::to_string(trial), std::nullopt, std::nullopt};
      const int z = zone(rng);
      if (z > 0) m.zone = z;
      if (z % 2 == 0) m.coord = Coordinate{coord(rng), coord(rng)};
      stations.push_back(m);
      flows.push_back({m.name, count(rng), count(rng)});
      if (i > 0) edges.push_back({stations[i - 1].name, m.name, pool[(i + trial) % pool.size()]});
    }
    CHECK(parse_stations(serialize_stations(stations)) == stations);
    CHECK(parse_edges(serialize_edges(edges)) == edges);
    CHECK(parse_flows(serialize_flows(flows)) == flows);
  }
}

TEST_CASE("bundled fixtures load") {
  const std::string dir = METRO_DATA_DIR "/london_zones_1-3/";
  const auto stations = parse_stations(read_file(dir + "stations.csv"));
  CHECK(stations.size() == 188);
  CHECK(std::count_if(stations.begin(), stations.end(),
                      [](const StationMeta& m) { return m.zone.value_or(99) <= 3; }) == 175);
  CHECK_THROWS_AS(read_file(dir + "missing.csv"), Error);
}
