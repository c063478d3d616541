#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fftplan {

/// True when n = 2^L for some L >= 1.
constexpr bool is_transform_size(std::size_t n) noexcept {
  return n >= 2 && (n & (n - 1)) == 0;
}

/// log2(n) for a valid transform size; throws SizeError otherwise.
int stage_count(std::size_t n);

/// Signal held as two separate contiguous arrays of real and imaginary parts.
class SplitComplexBuffer {
 public:
  /// Zero-filled buffer of n = 2^L elements.
  explicit SplitComplexBuffer(std::size_t n);
  SplitComplexBuffer(std::vector<float> re, std::vector<float> im);

  std::size_t size() const noexcept { return re_.size(); }
  int stages() const noexcept;

  std::span<float> re() noexcept { return re_; }
  std::span<float> im() noexcept { return im_; }
  std::span<const float> re() const noexcept { return re_; }
  std::span<const float> im() const noexcept { return im_; }

  std::complex<float> at(std::size_t i) const { return {re_.at(i), im_.at(i)}; }
  void set(std::size_t i, std::complex<float> v) {
    re_.at(i) = v.real();
    im_.at(i) = v.imag();
  }

  friend bool operator==(const SplitComplexBuffer&, const SplitComplexBuffer&) = default;

 private:
  std::vector<float> re_;
  std::vector<float> im_;
};

/// exp(-2*pi*i*k/n) in double precision. Quarter and eighth turns are exact.
std::complex<double> unit_root(std::uint64_t k, std::uint64_t n);

struct TwiddleView {
  std::span<const float> re;
  std::span<const float> im;

  std::size_t size() const noexcept { return re.size(); }
};

/// Precomputed forward-transform roots of unity for every pass at one size.
///
/// Each pass reads its factors at unit stride:
///  - radix2(s): W_m^j for j in [0, m/2), m = n >> s.
///  - radix4(s, p), p in 1..3: W_m^(j * rev2(p)) for j in [0, m/4). Row p
///    feeds output slot p of the radix-4 butterfly.
///  - radix8(s, p), p in 1..7: W_m^(j * rev3(p)) for j in [0, m/8).
/// Fused blocks reuse the radix2 rows of the stages they cover.
class TwiddleTable {
 public:
  explicit TwiddleTable(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  int stages() const noexcept { return stages_; }

  TwiddleView radix2(int s) const;
  TwiddleView radix4(int s, int slot) const;
  TwiddleView radix8(int s, int slot) const;

  /// Number of stored (re, im) pairs across every sub-table.
  std::size_t entry_count() const noexcept { return re_.size(); }
  std::complex<float> entry(std::size_t i) const { return {re_.at(i), im_.at(i)}; }

  /// Replace every stored copy of W_n^k. Used for fault injection in tests.
  void override_root(std::uint64_t k, std::complex<float> value);

  friend bool operator==(const TwiddleTable&, const TwiddleTable&) = default;

 private:
  struct Row {
    std::size_t offset = 0;
    std::size_t length = 0;
    std::uint64_t step = 0;  // entry j holds W_n^(j * step mod n)
    friend bool operator==(const Row&, const Row&) = default;
  };

  void append_row(Row& row, std::size_t length, std::uint64_t step);
  TwiddleView view(const Row& row) const;

  std::size_t n_ = 0;
  int stages_ = 0;
  std::vector<Row> radix2_;
  std::vector<Row> radix4_;  // 3 rows per stage
  std::vector<Row> radix8_;  // 7 rows per stage
  std::vector<float> re_;
  std::vector<float> im_;
};

TwiddleTable make_twiddles(std::size_t n);

/// Deterministic signal with both components uniform in [-1, 1).
///
/// Values come from std::mt19937_64 seeded with `seed`; each 64-bit draw keeps
/// its top 24 bits, u = bits * 2^-24, value = 2u - 1. Real and imaginary parts
/// alternate draws starting with re[0]. The mapping is exact in binary32, so
/// the stream is identical on every conforming platform.
SplitComplexBuffer init_signal(std::size_t n, std::uint64_t seed);

/// ||a - b||_2 / ||b||_2 over complex vectors, computed in double precision.
/// Returns 0 when both are zero and +inf when only b is zero.
double rel_l2_error(const SplitComplexBuffer& a, std::span<const std::complex<double>> b);

/// Widen a float buffer to complex<double>.
std::vector<std::complex<double>> to_complex(const SplitComplexBuffer& buf);

}  // namespace fftplan
