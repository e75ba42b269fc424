#pragma once

// FFT realization of the planar Cauchy and Beurling transforms on a periodic
// grid.
//
// The periodic multipliers -2i/xi (Cauchy) and conj(xi)/xi (Beurling) vanish at
// frequency zero, so on their own they only see h - mean(h). The mean is
// carried by a Gaussian bump b with closed-form transforms:
//
//   C[h] = C_per[h - c b] + c C[b],   c = (integral of h) / (integral of b),
//
// with C[b](z) = m(|z|)/z, m(r) = sigma^2 (1 - exp(-r^2/sigma^2)), and
// S[b] = b conj(z)/z - m/z^2. This keeps C[h] decaying like 1/z.

#include <memory>
#include <span>
#include <vector>

#include "qcholder/grid.hpp"

namespace qcholder {

struct TransformOutput {
  GridField field;
  /// Set when the input has nonzero samples within the outer margin of the
  /// box, where wrap-around of the periodic extension is no longer small.
  bool margin_warning = false;
};

/// Owns FFT plans and multiplier tables for one GridSpec. Not safe to share
/// between threads; give each concurrent solve its own instance.
class SpectralOperators {
 public:
  explicit SpectralOperators(const GridSpec& spec);
  ~SpectralOperators();
  SpectralOperators(SpectralOperators&&) noexcept;
  SpectralOperators& operator=(SpectralOperators&&) noexcept;
  SpectralOperators(const SpectralOperators&) = delete;
  SpectralOperators& operator=(const SpectralOperators&) = delete;

  const GridSpec& spec() const noexcept;

  /// out = C[in]; in and out may alias.
  void cauchy(std::span<const Complex> in, std::span<Complex> out);
  /// out = S[in]; in and out may alias.
  void beurling(std::span<const Complex> in, std::span<Complex> out);

  /// The pure periodic multiplier conj(xi)/xi with no mean compensation.
  void beurling_periodic(std::span<const Complex> in, std::span<Complex> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Width of the outer band checked by margin_warning: L/4.
double support_margin(const GridSpec& spec);
bool touches_margin(const GridField& field);

TransformOutput cauchy_transform(const GridField& h);
TransformOutput beurling_transform(const GridField& h);

}  // namespace qcholder
