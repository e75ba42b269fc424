#include "qcholder/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace qcholder {
namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr double kBumpWidth = 0.5;

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(reinterpret_cast<Complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* raw() { return reinterpret_cast<fftw_complex*>(data); }
  Complex* data;
};

}  // namespace

struct SpectralOperators::Impl {
  explicit Impl(const GridSpec& s) : spec(s), work(s.size()) {
    const std::size_t n = spec.n();
    const int ni = static_cast<int>(n);
    {
      std::lock_guard lock(planner_mutex());
      forward = fftw_plan_dft_2d(ni, ni, work.raw(), work.raw(), FFTW_FORWARD, FFTW_ESTIMATE);
      backward = fftw_plan_dft_2d(ni, ni, work.raw(), work.raw(), FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    const double h = spec.spacing();
    const double scale = 1.0 / static_cast<double>(spec.size());
    const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(n) * h);
    auto freq = [&](std::size_t p) {
      const auto signed_p = p < n / 2 ? static_cast<double>(p) : static_cast<double>(p) - static_cast<double>(n);
      return dxi * signed_p;
    };
    cauchy_mult.resize(spec.size());
    beurling_mult.resize(spec.size());
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        const Complex xi{freq(p), freq(q)};
        const std::size_t i = spec.index(p, q);
        if (p == 0 && q == 0) continue;
        cauchy_mult[i] = Complex{0.0, -2.0} / xi * scale;
        beurling_mult[i] = std::conj(xi) / xi * scale;
      }
    }

    bump.resize(spec.size());
    bump_cauchy.resize(spec.size());
    bump_beurling.resize(spec.size());
    const double s2 = kBumpWidth * kBumpWidth;
    bump_sum = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const Complex z = spec.point(i);
      const double t = std::norm(z) / s2;
      bump[i] = std::exp(-t);
      bump_sum += bump[i];
      if (z == Complex{}) continue;
      const double m = -s2 * std::expm1(-t);
      bump_cauchy[i] = m / z;
      // b - m/|z|^2, series below t = 1e-4 to avoid cancellation.
      const double radial = t < 1e-4 ? -0.5 * t + t * t / 3.0 : std::exp(-t) + std::expm1(-t) / t;
      bump_beurling[i] = radial * (std::conj(z) / z);
    }
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  void apply(std::span<const Complex> in, std::span<Complex> out, const std::vector<Complex>& mult,
             const std::vector<Complex>* bump_image) {
    if (in.size() != spec.size() || out.size() != spec.size())
      throw ParameterError("SpectralOperators: field size does not match the grid");
    double c_re = 0.0;
    double c_im = 0.0;
    if (bump_image != nullptr) {
      for (const auto& v : in) {
        c_re += v.real();
        c_im += v.imag();
      }
    }
    const Complex c = Complex{c_re, c_im} / bump_sum;
    for (std::size_t i = 0; i < in.size(); ++i) work.data[i] = in[i] - c * bump[i];
    fftw_execute(forward);
    for (std::size_t i = 0; i < mult.size(); ++i) work.data[i] *= mult[i];
    fftw_execute(backward);
    if (bump_image != nullptr) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = work.data[i] + c * (*bump_image)[i];
    } else {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = work.data[i];
    }
  }

  GridSpec spec;
  FftwBuffer work;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<Complex> cauchy_mult;
  std::vector<Complex> beurling_mult;
  std::vector<double> bump;
  std::vector<Complex> bump_cauchy;
  std::vector<Complex> bump_beurling;
  double bump_sum = 0.0;
};

SpectralOperators::SpectralOperators(const GridSpec& spec) : impl_(std::make_unique<Impl>(spec)) {}
SpectralOperators::~SpectralOperators() = default;
SpectralOperators::SpectralOperators(SpectralOperators&&) noexcept = default;
SpectralOperators& SpectralOperators::operator=(SpectralOperators&&) noexcept = default;

const GridSpec& SpectralOperators::spec() const noexcept { return impl_->spec; }

void SpectralOperators::cauchy(std::span<const Complex> in, std::span<Complex> out) {
  impl_->apply(in, out, impl_->cauchy_mult, &impl_->bump_cauchy);
}

void SpectralOperators::beurling(std::span<const Complex> in, std::span<Complex> out) {
  impl_->apply(in, out, impl_->beurling_mult, &impl_->bump_beurling);
}

void SpectralOperators::beurling_periodic(std::span<const Complex> in, std::span<Complex> out) {
  impl_->apply(in, out, impl_->beurling_mult, nullptr);
}

double support_margin(const GridSpec& spec) { return spec.half_width() / 4.0; }

bool touches_margin(const GridField& field) {
  const auto& spec = field.spec();
  const double inner = spec.half_width() - support_margin(spec);
  const auto values = field.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == Complex{}) continue;
    const Complex z = spec.point(i);
    if (std::abs(z.real()) > inner || std::abs(z.imag()) > inner) return true;
  }
  return false;
}

TransformOutput cauchy_transform(const GridField& h) {
  SpectralOperators ops(h.spec());
  TransformOutput out{GridField(h.spec()), touches_margin(h)};
  ops.cauchy(h.values(), out.field.values());
  return out;
}

TransformOutput beurling_transform(const GridField& h) {
  SpectralOperators ops(h.spec());
  TransformOutput out{GridField(h.spec()), touches_margin(h)};
  ops.beurling(h.values(), out.field.values());
  return out;
}

}  // namespace qcholder
