#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "qcholder/types.hpp"

namespace qcholder {

/// Uniform n x n grid on the box [-L, L)^2 with spacing h = 2L/n. Node (j, k)
/// sits at (-L + j h) + i (-L + k h); j indexes x, k indexes y.
class GridSpec {
 public:
  /// Throws ParameterError unless n is a power of two >= 64 and L >= 2.
  GridSpec(std::size_t n, double half_width);

  std::size_t n() const noexcept { return n_; }
  double half_width() const noexcept { return L_; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return n_ * n_; }

  std::size_t index(std::size_t j, std::size_t k) const noexcept { return j * n_ + k; }
  Complex point(std::size_t j, std::size_t k) const noexcept {
    return {-L_ + static_cast<double>(j) * h_, -L_ + static_cast<double>(k) * h_};
  }
  Complex point(std::size_t flat) const noexcept { return point(flat / n_, flat % n_); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  std::size_t n_;
  double L_;
  double h_;
};

inline GridSpec default_grid() { return GridSpec(512, 4.0); }

/// Complex samples on a GridSpec, stored row-major (flat index j * n + k).
class GridField {
 public:
  explicit GridField(const GridSpec& spec);
  GridField(const GridSpec& spec, std::vector<Complex> values);

  /// Samples fn at every node.
  static GridField sample(const GridSpec& spec, const std::function<Complex(Complex)>& fn);

  const GridSpec& spec() const noexcept { return spec_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }

  Complex operator()(std::size_t j, std::size_t k) const { return values_[spec_.index(j, k)]; }
  Complex& operator()(std::size_t j, std::size_t k) { return values_[spec_.index(j, k)]; }

  double max_abs() const;
  bool all_finite() const;

  /// Bilinear interpolation. Throws DomainError outside [-L, L - h]^2.
  Complex interpolate(Complex z) const;

 private:
  GridSpec spec_;
  std::vector<Complex> values_;
};

/// ℓ2 norm of the samples (no area weight).
double l2_norm(std::span<const Complex> values);

enum class FieldFormat { binary, csv };

/// Writes a one-line JSON header (format, n, L, ordering, encoding) followed by
/// the samples: little-endian float64 (re, im) pairs for binary, "j,k,re,im"
/// rows with shortest round-trip decimals for csv. Both formats read back
/// bit-exactly.
void write_field(const GridField& field, const std::filesystem::path& path, FieldFormat format);
GridField read_field(const std::filesystem::path& path);

}  // namespace qcholder
