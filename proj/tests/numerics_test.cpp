#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fftplan/errors.hpp"
#include "fftplan/numerics.hpp"

using namespace fftplan;

TEST_CASE("buffer rejects sizes that are not powers of two") {
  CHECK_THROWS_AS(SplitComplexBuffer(0), SizeError);
  CHECK_THROWS_AS(SplitComplexBuffer(1), SizeError);
  CHECK_THROWS_AS(SplitComplexBuffer(6), SizeError);
  CHECK_THROWS_AS(SplitComplexBuffer({1, 2, 3, 4}, {1, 2}), ShapeError);
  SplitComplexBuffer b(16);
  CHECK(b.size() == 16);
  CHECK(b.stages() == 4);
  CHECK(b.re().size() == b.im().size());
}

TEST_CASE("make_twiddles known roots") {
  const auto t4 = make_twiddles(4);
  // radix2(0) of n=4 holds W_4^0, W_4^1
  CHECK(t4.radix2(0).re[1] == 0.0f);
  CHECK(t4.radix2(0).im[1] == -1.0f);

  const auto t8 = make_twiddles(8);
  const float h = static_cast<float>(1.0 / std::sqrt(2.0));
  CHECK(t8.radix2(0).re[1] == doctest::Approx(h).epsilon(1e-7));
  CHECK(t8.radix2(0).im[1] == doctest::Approx(-h).epsilon(1e-7));

  for (std::size_t n : {2u, 8u, 64u, 1024u}) {
    const auto t = make_twiddles(n);
    for (int s = 0; s < t.stages(); ++s) {
      CHECK(t.radix2(s).re[0] == 1.0f);
      CHECK(t.radix2(s).im[0] == 0.0f);
    }
  }
}

TEST_CASE("make_twiddles errors") {
  CHECK_THROWS_AS(make_twiddles(1), SizeError);
  CHECK_THROWS_AS(make_twiddles(12), SizeError);
}

TEST_CASE("every twiddle entry lies on the unit circle and the table is pure") {
  for (std::size_t n = 2; n <= (1u << 14); n *= 2) {
    const auto t = make_twiddles(n);
    for (std::size_t i = 0; i < t.entry_count(); ++i) {
      const auto w = t.entry(i);
      REQUIRE(std::abs(w.real() * w.real() + w.imag() * w.imag() - 1.0f) <= 1e-6f);
    }
    CHECK(t == make_twiddles(n));
  }
}

TEST_CASE("twiddle rows match the root they claim") {
  const std::size_t n = 256;
  const auto t = make_twiddles(n);
  const int rev2[] = {0, 2, 1, 3};
  const int rev3[] = {0, 4, 2, 6, 1, 5, 3, 7};
  for (int s = 0; s < t.stages(); ++s) {
    const std::size_t m = n >> s;
    auto expect = [&](double k_over_m) {
      return std::polar(1.0, -2.0 * std::numbers::pi * k_over_m);
    };
    const auto r2 = t.radix2(s);
    for (std::size_t j = 0; j < m / 2; ++j) {
      const auto w = expect(static_cast<double>(j) / static_cast<double>(m));
      CHECK(std::abs(r2.re[j] - w.real()) < 1e-6);
      CHECK(std::abs(r2.im[j] - w.imag()) < 1e-6);
    }
    if (m >= 4) {
      for (int p = 1; p <= 3; ++p) {
        const auto row = t.radix4(s, p);
        for (std::size_t j = 0; j < m / 4; ++j) {
          const auto w = expect(static_cast<double>(j * rev2[p]) / static_cast<double>(m));
          CHECK(std::abs(row.re[j] - w.real()) < 1e-6);
          CHECK(std::abs(row.im[j] - w.imag()) < 1e-6);
        }
      }
    }
    if (m >= 8) {
      for (int p = 1; p <= 7; ++p) {
        const auto row = t.radix8(s, p);
        for (std::size_t j = 0; j < m / 8; ++j) {
          const auto w = expect(static_cast<double>(j * rev3[p]) / static_cast<double>(m));
          CHECK(std::abs(row.re[j] - w.real()) < 1e-6);
          CHECK(std::abs(row.im[j] - w.imag()) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("override_root patches every copy") {
  auto t = make_twiddles(16);
  t.override_root(1, {0.5f, 0.5f});
  CHECK(t.radix2(0).re[1] == 0.5f);
  CHECK(t.radix4(0, 2).re[1] == 0.5f);
  CHECK(t.radix8(0, 4).re[1] == 0.5f);
  CHECK(t.radix2(0).re[2] != 0.5f);
  CHECK(t != make_twiddles(16));
}

TEST_CASE("init_signal is deterministic, seed-sensitive and bounded") {
  CHECK(init_signal(8, 42) == init_signal(8, 42));
  CHECK_FALSE(init_signal(8, 42) == init_signal(8, 43));
  const auto b = init_signal(1024, 7);
  for (std::size_t i = 0; i < 1024; ++i) {
    REQUIRE(b.re()[i] >= -1.0f);
    REQUIRE(b.re()[i] <= 1.0f);
    REQUIRE(b.im()[i] >= -1.0f);
    REQUIRE(b.im()[i] <= 1.0f);
  }
  CHECK_THROWS_AS(init_signal(10, 1), SizeError);
}

TEST_CASE("init_signal follows the documented draw order") {
  std::mt19937_64 gen(1);
  auto draw = [&] {
    const double bits = static_cast<double>(gen() >> 40);
    return static_cast<float>(2.0 * bits / 16777216.0 - 1.0);
  };
  const auto b = init_signal(4, 1);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(b.re()[i] == draw());
    CHECK(b.im()[i] == draw());
  }
}

TEST_CASE("rel_l2_error") {
  const auto a = init_signal(64, 3);
  auto b = to_complex(a);
  CHECK(rel_l2_error(a, b) == 0.0);

  SplitComplexBuffer doubled = a;
  for (auto& v : doubled.re()) v *= 2.0f;
  for (auto& v : doubled.im()) v *= 2.0f;
  CHECK(rel_l2_error(doubled, b) == doctest::Approx(1.0).epsilon(1e-12));

  // Impulse perturbation of magnitude ||b|| * 1e-3 on an exactly representable signal.
  SplitComplexBuffer exact(16);
  for (std::size_t i = 0; i < 16; ++i) exact.set(i, {static_cast<float>(i % 4), 1.0f});
  auto ref = to_complex(exact);
  double norm = 0.0;
  for (const auto& z : ref) norm += std::norm(z);
  norm = std::sqrt(norm);
  ref[5] -= std::complex<double>(norm * 1e-3, 0.0);
  double perturbed = 0.0;
  for (const auto& z : ref) perturbed += std::norm(z);
  CHECK(rel_l2_error(exact, ref) == doctest::Approx(norm * 1e-3 / std::sqrt(perturbed)).epsilon(1e-12));

  std::vector<std::complex<double>> zeros(16);
  CHECK(rel_l2_error(SplitComplexBuffer(16), zeros) == 0.0);
  CHECK_THROWS_AS(rel_l2_error(exact, std::vector<std::complex<double>>(8)), ShapeError);
}
