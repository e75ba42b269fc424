#pragma once

// Flat CSV rows and JSON objects for verification results. Numbers use the
// shortest decimal that reads back to the same double, so a parsed file
// re-emits byte for byte.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcholder/verify.hpp"

namespace qcholder::report {

std::string format_number(double x);
double parse_number(std::string_view s);

/// One line of the Hölder CSV schema.
struct HolderRow {
  double K = 1.0;
  std::optional<double> R;
  double estimate = 0.0;
  double bound = 1.0;
  double ratio = 0.0;
  PointPair witness{};
  bool violated = false;
};

HolderRow to_row(const verify::HolderReport& report);

inline constexpr std::string_view kHolderCsvHeader =
    "K,R,estimate,bound,ratio,witness_z_re,witness_z_im,witness_w_re,witness_w_im,violated";

/// Header plus one line per row, each terminated by '\n'. An absent R is an
/// empty field.
std::string holder_csv(std::span<const HolderRow> rows);
/// Inverse of holder_csv. Throws IoError on a malformed table.
std::vector<HolderRow> parse_holder_csv(std::string_view text);

/// Full report as a JSON object with a fixed key order.
std::string holder_json(const verify::HolderReport& report);
std::string holder_rows_json(std::span<const HolderRow> rows);

/// {"K", "mori", "conjecture", "sharp", "vz"}.
std::string constants_json(const verify::ConstantsTable& table);
std::string constants_csv(std::span<const verify::ConstantsTable> tables);

/// Writes text to path, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace qcholder::report
