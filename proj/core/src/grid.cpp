#include "qcholder/grid.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace qcholder {
namespace {

constexpr const char* kFormatTag = "qcholder-grid";
constexpr const char* kOrdering = "row-major: index j*n+k holds z = (-L + j*h) + i*(-L + k*h), h = 2L/n";

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string shortest(double x) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

double parse_double(std::string_view s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw IoError("grid field: malformed number '" + std::string(s) + "'");
  return x;
}

void put_f64le(std::ostream& os, double x) {
  auto bits = std::bit_cast<std::uint64_t>(x);
  std::array<char, 8> bytes{};
  for (auto& b : bytes) {
    b = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  os.write(bytes.data(), bytes.size());
}

double get_f64le(std::istream& is) {
  std::array<unsigned char, 8> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!is) throw IoError("grid field: truncated binary payload");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[static_cast<std::size_t>(i)];
  return std::bit_cast<double>(bits);
}

}  // namespace

GridSpec::GridSpec(std::size_t n, double half_width) : n_(n), L_(half_width) {
  if (!is_power_of_two(n) || n < 64) throw ParameterError("GridSpec: n must be a power of two >= 64");
  if (!std::isfinite(half_width) || half_width < 2.0)
    throw ParameterError("GridSpec: half width L must be >= 2");
  h_ = 2.0 * L_ / static_cast<double>(n_);
}

GridField::GridField(const GridSpec& spec) : spec_(spec), values_(spec.size()) {}

GridField::GridField(const GridSpec& spec, std::vector<Complex> values)
    : spec_(spec), values_(std::move(values)) {
  if (values_.size() != spec_.size()) throw ParameterError("GridField: sample count does not match grid");
}

GridField GridField::sample(const GridSpec& spec, const std::function<Complex(Complex)>& fn) {
  GridField field(spec);
  auto values = field.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(spec.point(i));
  return field;
}

double GridField::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool GridField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](Complex v) { return is_finite(v); });
}

Complex GridField::interpolate(Complex z) const {
  const double h = spec_.spacing();
  const double L = spec_.half_width();
  const double last = static_cast<double>(spec_.n() - 1);
  const double x = (z.real() + L) / h;
  const double y = (z.imag() + L) / h;
  if (!(x >= 0.0 && x <= last && y >= 0.0 && y <= last))
    throw DomainError("GridField::interpolate: point outside the grid box");
  const auto j = std::min(static_cast<std::size_t>(x), spec_.n() - 2);
  const auto k = std::min(static_cast<std::size_t>(y), spec_.n() - 2);
  const double a = x - static_cast<double>(j);
  const double b = y - static_cast<double>(k);
  const auto& f = *this;
  return (1.0 - a) * ((1.0 - b) * f(j, k) + b * f(j, k + 1)) +
         a * ((1.0 - b) * f(j + 1, k) + b * f(j + 1, k + 1));
}

double l2_norm(std::span<const Complex> values) {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s);
}

void write_field(const GridField& field, const std::filesystem::path& path, FieldFormat format) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");

  nlohmann::ordered_json header;
  header["format"] = kFormatTag;
  header["version"] = 1;
  header["encoding"] = format == FieldFormat::binary ? "f64le" : "csv";
  header["n"] = field.spec().n();
  header["L"] = field.spec().half_width();
  header["ordering"] = kOrdering;
  os << header.dump() << '\n';

  const auto& spec = field.spec();
  const auto values = field.values();
  if (format == FieldFormat::binary) {
    for (const auto& v : values) {
      put_f64le(os, v.real());
      put_f64le(os, v.imag());
    }
  } else {
    os << "j,k,re,im\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      os << i / spec.n() << ',' << i % spec.n() << ',' << shortest(values[i].real()) << ','
         << shortest(values[i].imag()) << '\n';
    }
  }
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

GridField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(is, line)) throw IoError("grid field: missing header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("grid field: bad header: ") + e.what());
  }
  if (header.value("format", "") != kFormatTag) throw IoError("grid field: unknown format tag");

  const GridSpec spec(header.at("n").get<std::size_t>(), header.at("L").get<double>());
  GridField field(spec);
  auto values = field.values();
  const auto encoding = header.at("encoding").get<std::string>();
  if (encoding == "f64le") {
    for (auto& v : values) {
      const double re = get_f64le(is);
      const double im = get_f64le(is);
      v = {re, im};
    }
  } else if (encoding == "csv") {
    if (!std::getline(is, line) || line != "j,k,re,im") throw IoError("grid field: missing csv column header");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::getline(is, line)) throw IoError("grid field: truncated csv payload");
      std::array<std::string_view, 4> cols{};
      std::string_view rest(line);
      for (std::size_t c = 0; c < 4; ++c) {
        const auto comma = rest.find(',');
        cols[c] = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
      const auto j = static_cast<std::size_t>(parse_double(cols[0]));
      const auto k = static_cast<std::size_t>(parse_double(cols[1]));
      if (spec.index(j, k) != i) throw IoError("grid field: csv rows out of order");
      values[i] = {parse_double(cols[2]), parse_double(cols[3])};
    }
  } else {
    throw IoError("grid field: unknown encoding '" + encoding + "'");
  }
  return field;
}

}  // namespace qcholder
