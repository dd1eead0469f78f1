#include "metro/ingest.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "metro/error.hpp"

namespace metro {

namespace {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line) + ": " + why);
}

std::vector<std::string> split_fields(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else if (!(was_quoted && (c == ' ' || c == '\t'))) {
      cur.push_back(c);
    }
  }
  if (quoted) malformed(line_no, "unterminated quoted field");
  fields.push_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

/// Header row plus data rows; blank and '#' lines dropped.
std::pair<std::vector<std::string>, std::vector<Row>> read_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string> header;
  std::vector<Row> rows;
  bool have_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = split_fields(line, line_no);
    if (!have_header) {
      header = std::move(fields);
      have_header = true;
    } else {
      rows.push_back({line_no, std::move(fields)});
    }
  }
  return {std::move(header), std::move(rows)};
}

void expect_header(const std::vector<std::string>& got, std::initializer_list<std::string_view> want,
                   const char* file) {
  bool ok = got.size() == want.size();
  std::size_t i = 0;
  for (auto w : want) {
    if (!ok) break;
    ok = got[i++] == w;
  }
  if (!ok) {
    std::string expected;
    for (auto w : want) expected += (expected.empty() ? "" : ",") + std::string(w);
    throw Error(ErrorKind::MalformedRow,
                std::string(file) + ": expected header '" + expected + "'");
  }
}

void expect_columns(const Row& row, std::size_t n) {
  if (row.fields.size() != n)
    malformed(row.line, "expected " + std::to_string(n) + " columns, got " +
                            std::to_string(row.fields.size()));
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    malformed(line, "not a number: '" + std::string(s) + "'");
  return v;
}

std::string quote_if_needed(const std::string& s) {
  const bool needs = s.find_first_of(",\"\r\n") != std::string::npos ||
                     (!s.empty() && (s.front() == '#' || s.front() == ' ' || s.back() == ' '));
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string normalize_name(std::string_view name) {
  const std::string_view t = trim(name);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return std::string(t);
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(t.data(), static_cast<int32_t>(t.size())));
  const icu::UnicodeString dst = nfc->normalize(src, status);
  if (U_FAILURE(status)) return std::string(t);
  std::string out;
  dst.toUTF8String(out);
  return out;
}

std::int64_t parse_count(std::string_view text) {
  std::string digits;
  const std::string_view t = trim(text);
  for (std::size_t i = 0; i < t.size(); ++i) {
    // U+2009 THIN SPACE, U+202F NARROW NO-BREAK SPACE
    if (t.compare(i, 3, "\xE2\x80\x89") == 0 || t.compare(i, 3, "\xE2\x80\xAF") == 0) {
      i += 2;
      continue;
    }
    if (t[i] == ',' || t[i] == ' ') continue;
    digits.push_back(t[i]);
  }
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || v < 0)
    throw Error(ErrorKind::MalformedRow, "not a non-negative count: '" + std::string(t) + "'");
  return v;
}

std::vector<StationMeta> parse_stations(std::string_view text) {
  auto [header, rows] = read_csv(text);
  const bool with_coords = header.size() == 4;
  if (with_coords)
    expect_header(header, {"name", "zone", "lat", "lon"}, "stations");
  else
    expect_header(header, {"name", "zone"}, "stations");

  std::vector<StationMeta> out;
  out.reserve(rows.size());
  std::unordered_set<std::string> seen;
  for (const Row& row : rows) {
    expect_columns(row, header.size());
    StationMeta m;
    m.name = normalize_name(row.fields[0]);
    if (m.name.empty()) malformed(row.line, "empty station name");
    if (!row.fields[1].empty()) {
      int zone = 0;
      const auto& z = row.fields[1];
      auto [ptr, ec] = std::from_chars(z.data(), z.data() + z.size(), zone);
      if (ec != std::errc{} || ptr != z.data() + z.size() || zone < 1 || zone > 10)
        malformed(row.line, "zone must be an integer 1-10, got '" + z + "'");
      m.zone = zone;
    }
    if (with_coords) {
      const auto& lat = row.fields[2];
      const auto& lon = row.fields[3];
      if (lat.empty() != lon.empty()) malformed(row.line, "lat and lon must both be set or empty");
      if (!lat.empty()) m.coord = Coordinate{parse_double(lat, row.line), parse_double(lon, row.line)};
    }
    if (!seen.insert(m.name).second)
      throw Error(ErrorKind::DuplicateStation,
                  "line " + std::to_string(row.line) + ": duplicate station '" + m.name + "'");
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<EdgeRecord> parse_edges(std::string_view text) {
  auto [header, rows] = read_csv(text);
  expect_header(header, {"station_a", "station_b", "line"}, "edges");
  std::vector<EdgeRecord> out;
  out.reserve(rows.size());
  for (const Row& row : rows) {
    expect_columns(row, 3);
    EdgeRecord e{normalize_name(row.fields[0]), normalize_name(row.fields[1]), row.fields[2]};
    if (e.station_a.empty() || e.station_b.empty()) malformed(row.line, "empty station name");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<FlowRecord> parse_flows(std::string_view text) {
  auto [header, rows] = read_csv(text);
  expect_header(header, {"station", "entries", "exits"}, "flows");
  std::vector<FlowRecord> out;
  out.reserve(rows.size());
  for (const Row& row : rows) {
    expect_columns(row, 3);
    FlowRecord r;
    r.station = normalize_name(row.fields[0]);
    if (r.station.empty()) malformed(row.line, "empty station name");
    try {
      r.entries = parse_count(row.fields[1]);
      r.exits = parse_count(row.fields[2]);
    } catch (const Error& e) {
      malformed(row.line, e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string serialize_stations(std::span<const StationMeta> stations) {
  std::string out = "name,zone,lat,lon\n";
  for (const auto& s : stations) {
    out += quote_if_needed(s.name) + ',';
    if (s.zone) out += std::to_string(*s.zone);
    out += ',';
    if (s.coord) out += format_double(s.coord->lat) + ',' + format_double(s.coord->lon);
    else out += ',';
    out += '\n';
  }
  return out;
}

std::string serialize_edges(std::span<const EdgeRecord> edges) {
  std::string out = "station_a,station_b,line\n";
  for (const auto& e : edges)
    out += quote_if_needed(e.station_a) + ',' + quote_if_needed(e.station_b) + ',' +
           quote_if_needed(e.line) + '\n';
  return out;
}

std::string serialize_flows(std::span<const FlowRecord> flows) {
  std::string out = "station,entries,exits\n";
  for (const auto& f : flows)
    out += quote_if_needed(f.station) + ',' + std::to_string(f.entries) + ',' +
           std::to_string(f.exits) + '\n';
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Network build_network(std::span<const EdgeRecord> edges, std::vector<StationMeta> meta) {
  std::vector<NamedEdge> named;
  named.reserve(edges.size());
  for (const auto& e : edges) named.push_back({e.station_a, e.station_b});
  return build_network(std::span<const NamedEdge>(named), std::move(meta));
}

std::vector<FlowRecord> align_flows(std::span<const FlowRecord> records, const Network& net) {
  std::vector<FlowRecord> aligned(net.size());
  std::vector<bool> seen(net.size(), false);
  for (const auto& r : records) {
    const auto id = net.find(r.station);
    if (!id)
      throw Error(ErrorKind::UnknownStation, "flow record for unknown station '" + r.station + "'");
    if (seen[id->index()])
      throw Error(ErrorKind::DuplicateRecord, "more than one flow record for '" + r.station + "'");
    seen[id->index()] = true;
    aligned[id->index()] = r;
  }
  for (std::size_t v = 0; v < net.size(); ++v)
    if (!seen[v])
      throw Error(ErrorKind::MissingStation, "no flow record for station '" + net.meta(v).name + "'");
  return aligned;
}

FlowSignal net_flow(std::span<const FlowRecord> records, const Network& net, std::string period) {
  const auto aligned = align_flows(records, net);
  std::vector<double> q(net.size());
  for (std::size_t v = 0; v < net.size(); ++v)
    q[v] = static_cast<double>(aligned[v].exits - aligned[v].entries);
  return make_flow_signal(net, std::move(q), std::move(period));
}

}  // namespace metro
