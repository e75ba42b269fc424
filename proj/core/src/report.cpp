#include "qcholder/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qcholder::report {
namespace {

using Json = nlohmann::ordered_json;

// Integral values print as integers ("16", not "16.0").
Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  if (x == std::trunc(x) && std::abs(x) < 9.0e15) return static_cast<std::int64_t>(x);
  return x;
}

Json point(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

Json row_object(const HolderRow& row) {
  Json j;
  j["K"] = number(row.K);
  j["R"] = row.R ? number(*row.R) : Json(nullptr);
  j["estimate"] = number(row.estimate);
  j["bound"] = number(row.bound);
  j["ratio"] = number(row.ratio);
  j["witness"] = {{"z", point(row.witness.z)}, {"w", point(row.witness.w)}};
  j["violated"] = row.violated;
  return j;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

double parse_number(std::string_view s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw IoError("malformed number '" + std::string(s) + "'");
  return x;
}

HolderRow to_row(const verify::HolderReport& report) {
  return {report.K,       report.R,        report.constant_estimate, report.bound,
          report.ratio(), report.witness, report.violation};
}

std::string holder_csv(std::span<const HolderRow> rows) {
  std::string out(kHolderCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_number(r.K) + ',' + (r.R ? format_number(*r.R) : std::string()) + ',' + format_number(r.estimate) +
           ',' + format_number(r.bound) + ',' + format_number(r.ratio) + ',' + format_number(r.witness.z.real()) +
           ',' + format_number(r.witness.z.imag()) + ',' + format_number(r.witness.w.real()) + ',' +
           format_number(r.witness.w.imag()) + ',' + (r.violated ? "true" : "false") + '\n';
  }
  return out;
}

std::vector<HolderRow> parse_holder_csv(std::string_view text) {
  std::vector<HolderRow> rows;
  bool header = true;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    if (nl == std::string_view::npos) throw IoError("holder csv: missing trailing newline");
    const auto line = text.substr(0, nl);
    text.remove_prefix(nl + 1);
    if (header) {
      if (line != kHolderCsvHeader) throw IoError("holder csv: unexpected header");
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 10) throw IoError("holder csv: expected 10 columns");
    HolderRow r;
    r.K = parse_number(f[0]);
    if (!f[1].empty()) r.R = parse_number(f[1]);
    r.estimate = parse_number(f[2]);
    r.bound = parse_number(f[3]);
    r.ratio = parse_number(f[4]);
    r.witness = {{parse_number(f[5]), parse_number(f[6])}, {parse_number(f[7]), parse_number(f[8])}};
    if (f[9] == "true")
      r.violated = true;
    else if (f[9] != "false")
      throw IoError("holder csv: violated must be true or false");
    rows.push_back(r);
  }
  if (header) throw IoError("holder csv: empty input");
  return rows;
}

std::string holder_json(const verify::HolderReport& report) {
  Json j;
  j["map"] = report.map_name;
  j["K"] = number(report.K);
  j["R"] = report.R ? number(*report.R) : Json(nullptr);
  j["estimate"] = number(report.constant_estimate);
  j["bound"] = number(report.bound);
  j["ratio"] = number(report.ratio());
  j["witness"] = {{"z", point(report.witness.z)}, {"w", point(report.witness.w)}};
  j["seeded_quotient"] = report.seeded_quotient ? number(*report.seeded_quotient) : Json(nullptr);
  j["tolerance"] = number(report.tolerance);
  j["violated"] = report.violation;
  j["budget"] = {{"radii", report.radii},
                 {"angles", report.angles},
                 {"top_pairs", report.top_pairs},
                 {"refine_rounds", report.refine_rounds}};
  return j.dump(2) + '\n';
}

std::string holder_rows_json(std::span<const HolderRow> rows) {
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(row_object(r));
  return arr.dump(2) + '\n';
}

std::string constants_json(const verify::ConstantsTable& t) {
  Json j;
  j["K"] = number(t.K);
  j["mori"] = number(t.mori);
  j["conjecture"] = number(t.conjecture);
  j["sharp"] = number(t.sharp);
  j["vz"] = number(t.vz);
  return j.dump() + '\n';
}

std::string constants_csv(std::span<const verify::ConstantsTable> tables) {
  std::string out = "K,mori,conjecture,sharp,vz\n";
  for (const auto& t : tables)
    out += format_number(t.K) + ',' + format_number(t.mori) + ',' + format_number(t.conjecture) + ',' +
           format_number(t.sharp) + ',' + format_number(t.vz) + '\n';
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace qcholder::report
