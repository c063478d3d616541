#include "fftplan/numerics.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "fftplan/errors.hpp"

namespace fftplan {

namespace {

unsigned reverse_bits(unsigned v, int bits) {
  unsigned r = 0;
  for (int b = 0; b < bits; ++b) {
    r = (r << 1) | ((v >> b) & 1u);
  }
  return r;
}

void require_size(std::size_t n) {
  if (!is_transform_size(n)) {
    throw SizeError("transform size must be a power of two >= 2, got " + std::to_string(n));
  }
}

}  // namespace

int stage_count(std::size_t n) {
  require_size(n);
  return std::countr_zero(n);
}

SplitComplexBuffer::SplitComplexBuffer(std::size_t n) : re_(n, 0.0f), im_(n, 0.0f) {
  require_size(n);
}

SplitComplexBuffer::SplitComplexBuffer(std::vector<float> re, std::vector<float> im)
    : re_(std::move(re)), im_(std::move(im)) {
  if (re_.size() != im_.size()) {
    throw ShapeError("real and imaginary arrays differ in length");
  }
  require_size(re_.size());
}

int SplitComplexBuffer::stages() const noexcept { return std::countr_zero(re_.size()); }

std::complex<double> unit_root(std::uint64_t k, std::uint64_t n) {
  require_size(n);
  k %= n;
  // Reduce to an angle in [0, pi/4] and rebuild by exact quarter-turn and
  // reflection symmetries. Units: 8k/n eighth-turns.
  const std::uint64_t eighth_num = 8 * k;
  const std::uint64_t octant = eighth_num / n;
  const std::uint64_t rem = eighth_num % n;  // angle within octant = (rem / n) * pi/4

  auto angle_in_octant = [n](std::uint64_t r) {
    return std::numbers::pi / 4.0 * static_cast<double>(r) / static_cast<double>(n);
  };

  double c = 0.0;
  double s = 0.0;
  // (c, s) = (cos, sin) of the angle measured from the start of the quadrant.
  const bool odd_octant = (octant & 1u) != 0;
  if (!odd_octant) {
    if (rem == 0) {
      c = 1.0;
      s = 0.0;
    } else {
      const double a = angle_in_octant(rem);
      c = std::cos(a);
      s = std::sin(a);
    }
  } else {
    // angle = pi/4 + rem/n * pi/4 = pi/2 - (n - rem)/n * pi/4
    const std::uint64_t back = n - rem;
    if (back == n) {
      c = std::numbers::sqrt2 / 2.0;
      s = std::numbers::sqrt2 / 2.0;
    } else {
      const double a = angle_in_octant(back);
      c = std::sin(a);
      s = std::cos(a);
    }
  }
  // Rotate by the quadrant: multiply (c + i s) by i^quadrant.
  const std::uint64_t quadrant = octant / 2;
  double x = c;
  double y = s;
  switch (quadrant) {
    case 0: break;
    case 1: x = -s; y = c; break;
    case 2: x = -c; y = -s; break;
    default: x = s; y = -c; break;
  }
  // Forward convention: exp(-i theta).
  return {x + 0.0, 0.0 - y};
}

TwiddleTable::TwiddleTable(std::size_t n) : n_(n), stages_(stage_count(n)) {
  radix2_.resize(static_cast<std::size_t>(stages_));
  radix4_.resize(static_cast<std::size_t>(stages_) * 3);
  radix8_.resize(static_cast<std::size_t>(stages_) * 7);
  for (int s = 0; s < stages_; ++s) {
    const std::size_t m = n >> s;
    const std::uint64_t base = std::uint64_t{1} << s;  // W_m^j = W_n^(j * 2^s)
    append_row(radix2_[static_cast<std::size_t>(s)], m / 2, base);
    if (m >= 4) {
      for (int p = 1; p <= 3; ++p) {
        append_row(radix4_[static_cast<std::size_t>(s) * 3 + static_cast<std::size_t>(p - 1)],
                   m / 4, base * reverse_bits(static_cast<unsigned>(p), 2));
      }
    }
    if (m >= 8) {
      for (int p = 1; p <= 7; ++p) {
        append_row(radix8_[static_cast<std::size_t>(s) * 7 + static_cast<std::size_t>(p - 1)],
                   m / 8, base * reverse_bits(static_cast<unsigned>(p), 3));
      }
    }
  }
}

void TwiddleTable::append_row(Row& row, std::size_t length, std::uint64_t step) {
  row.offset = re_.size();
  row.length = length;
  row.step = step;
  for (std::size_t j = 0; j < length; ++j) {
    const auto w = unit_root(j * step, n_);
    re_.push_back(static_cast<float>(w.real()));
    im_.push_back(static_cast<float>(w.imag()));
  }
}

TwiddleView TwiddleTable::view(const Row& row) const {
  return {std::span<const float>(re_).subspan(row.offset, row.length),
          std::span<const float>(im_).subspan(row.offset, row.length)};
}

TwiddleView TwiddleTable::radix2(int s) const {
  if (s < 0 || s >= stages_) {
    throw StageOverflowError("no radix-2 twiddles for stage " + std::to_string(s));
  }
  return view(radix2_[static_cast<std::size_t>(s)]);
}

TwiddleView TwiddleTable::radix4(int s, int slot) const {
  if (s < 0 || s + 2 > stages_ || slot < 1 || slot > 3) {
    throw StageOverflowError("no radix-4 twiddles for stage " + std::to_string(s));
  }
  return view(radix4_[static_cast<std::size_t>(s) * 3 + static_cast<std::size_t>(slot - 1)]);
}

TwiddleView TwiddleTable::radix8(int s, int slot) const {
  if (s < 0 || s + 3 > stages_ || slot < 1 || slot > 7) {
    throw StageOverflowError("no radix-8 twiddles for stage " + std::to_string(s));
  }
  return view(radix8_[static_cast<std::size_t>(s) * 7 + static_cast<std::size_t>(slot - 1)]);
}

void TwiddleTable::override_root(std::uint64_t k, std::complex<float> value) {
  k %= n_;
  auto patch = [&](const Row& row) {
    for (std::size_t j = 0; j < row.length; ++j) {
      if ((j * row.step) % n_ == k) {
        re_[row.offset + j] = value.real();
        im_[row.offset + j] = value.imag();
      }
    }
  };
  for (const auto& r : radix2_) patch(r);
  for (const auto& r : radix4_) patch(r);
  for (const auto& r : radix8_) patch(r);
}

TwiddleTable make_twiddles(std::size_t n) { return TwiddleTable(n); }

SplitComplexBuffer init_signal(std::size_t n, std::uint64_t seed) {
  SplitComplexBuffer buf(n);
  std::mt19937_64 gen(seed);
  constexpr float kScale = 1.0f / 16777216.0f;  // 2^-24
  auto draw = [&] {
    const auto bits = static_cast<std::uint32_t>(gen() >> 40);
    return 2.0f * (static_cast<float>(bits) * kScale) - 1.0f;
  };
  auto re = buf.re();
  auto im = buf.im();
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = draw();
    im[i] = draw();
  }
  return buf;
}

double rel_l2_error(const SplitComplexBuffer& a, std::span<const std::complex<double>> b) {
  if (a.size() != b.size()) {
    throw ShapeError("rel_l2_error: length mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  double diff = 0.0;
  double ref = 0.0;
  const auto re = a.re();
  const auto im = a.im();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double dr = static_cast<double>(re[i]) - b[i].real();
    const double di = static_cast<double>(im[i]) - b[i].imag();
    diff += dr * dr + di * di;
    ref += std::norm(b[i]);
  }
  if (ref == 0.0) {
    return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::sqrt(diff / ref);
}

std::vector<std::complex<double>> to_complex(const SplitComplexBuffer& buf) {
  std::vector<std::complex<double>> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    out[i] = {buf.re()[i], buf.im()[i]};
  }
  return out;
}

}  // namespace fftplan
