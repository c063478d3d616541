#include "fftplan/kernels.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "fftplan/errors.hpp"

namespace fftplan {

namespace {

struct ScalarLane {
  using V = float;
  static constexpr std::size_t width = 1;
  static V load(const float* p) { return *p; }
  static void store(float* p, V v) { *p = v; }
  static V splat(float x) { return x; }
  static V gather(const float* p, std::size_t) { return *p; }
  static void scatter(float* p, std::size_t, V v) { *p = v; }
};

#if defined(__GNUC__) || defined(__clang__)
typedef float f32x4 __attribute__((vector_size(16)));

struct Lane4 {
  using V = f32x4;
  static constexpr std::size_t width = 4;
  static V load(const float* p) {
    V v;
    std::memcpy(&v, p, sizeof v);
    return v;
  }
  static void store(float* p, V v) { std::memcpy(p, &v, sizeof v); }
  static V splat(float x) { return V{x, x, x, x}; }
  static V gather(const float* p, std::size_t stride) {
    return V{p[0], p[stride], p[2 * stride], p[3 * stride]};
  }
  static void scatter(float* p, std::size_t stride, V v) {
    p[0] = v[0];
    p[stride] = v[1];
    p[2 * stride] = v[2];
    p[3 * stride] = v[3];
  }
};
#else
using Lane4 = ScalarLane;
#endif

constexpr float kInvSqrt2 = 0.70710678118654752440f;

template <class Lane>
struct Cx {
  typename Lane::V re;
  typename Lane::V im;
};

template <class Lane>
Cx<Lane> load(const float* re, const float* im, std::size_t i) {
  return {Lane::load(re + i), Lane::load(im + i)};
}

template <class Lane>
void store(float* re, float* im, std::size_t i, const Cx<Lane>& v) {
  Lane::store(re + i, v.re);
  Lane::store(im + i, v.im);
}

template <class Lane>
Cx<Lane> add(const Cx<Lane>& a, const Cx<Lane>& b) {
  return {a.re + b.re, a.im + b.im};
}

template <class Lane>
Cx<Lane> sub(const Cx<Lane>& a, const Cx<Lane>& b) {
  return {a.re - b.re, a.im - b.im};
}

// a * (-j): swap components and negate the new imaginary part.
template <class Lane>
Cx<Lane> mul_neg_j(const Cx<Lane>& a) {
  return {a.im, -a.re};
}

template <class Lane>
Cx<Lane> twiddle(const Cx<Lane>& a, const TwiddleView& w, std::size_t j) {
  const auto wr = Lane::load(w.re.data() + j);
  const auto wi = Lane::load(w.im.data() + j);
  return {a.re * wr - a.im * wi, a.re * wi + a.im * wr};
}

// Runs body<Lane>(j) over [0, count), vectorized where the lane width divides.
template <class Lane, class Body>
void for_each_lane(std::size_t count, Body&& body) {
  std::size_t j = 0;
  if constexpr (Lane::width > 1) {
    const std::size_t vec_end = count - count % Lane::width;
    for (; j < vec_end; j += Lane::width) body.template operator()<Lane>(j);
  }
  for (; j < count; ++j) body.template operator()<ScalarLane>(j);
}

// One radix-2 DIF stage over a sub-transform of 2*half points.
template <class Lane>
void dif2(float* re, float* im, std::size_t half, const TwiddleView& w) {
  for_each_lane<Lane>(half, [&]<class L>(std::size_t j) {
    const auto top = load<L>(re, im, j);
    const auto bot = load<L>(re, im, j + half);
    store<L>(re, im, j, add<L>(top, bot));
    store<L>(re, im, j + half, twiddle<L>(sub<L>(top, bot), w, j));
  });
}

template <class Lane>
void dif4(float* re, float* im, std::size_t q, const std::array<TwiddleView, 3>& w) {
  for_each_lane<Lane>(q, [&]<class L>(std::size_t j) {
    const auto a = load<L>(re, im, j);
    const auto b = load<L>(re, im, j + q);
    const auto c = load<L>(re, im, j + 2 * q);
    const auto d = load<L>(re, im, j + 3 * q);
    const auto t0 = add<L>(a, c);
    const auto t1 = sub<L>(a, c);
    const auto t2 = add<L>(b, d);
    const auto t3 = mul_neg_j<L>(sub<L>(b, d));
    // Slot p holds frequency rev2(p): slots 0..3 <- 0, 2, 1, 3.
    store<L>(re, im, j, add<L>(t0, t2));
    store<L>(re, im, j + q, twiddle<L>(sub<L>(t0, t2), w[0], j));
    store<L>(re, im, j + 2 * q, twiddle<L>(add<L>(t1, t3), w[1], j));
    store<L>(re, im, j + 3 * q, twiddle<L>(sub<L>(t1, t3), w[2], j));
  });
}

template <class Lane>
void dif8(float* re, float* im, std::size_t e, const std::array<TwiddleView, 7>& w) {
  for_each_lane<Lane>(e, [&]<class L>(std::size_t j) {
    std::array<Cx<L>, 8> x;
    for (std::size_t p = 0; p < 8; ++p) x[p] = load<L>(re, im, j + p * e);

    // Stage A: pairs (p, p+4), difference rotated by W_8^p.
    const auto h = L::splat(kInvSqrt2);
    std::array<Cx<L>, 8> a;
    for (std::size_t p = 0; p < 4; ++p) {
      a[p] = add<L>(x[p], x[p + 4]);
      a[p + 4] = sub<L>(x[p], x[p + 4]);
    }
    // W_8^1 = (1 - j)/sqrt2
    a[5] = {(a[5].re + a[5].im) * h, (a[5].im - a[5].re) * h};
    a[6] = mul_neg_j<L>(a[6]);
    // W_8^3 = (-1 - j)/sqrt2
    a[7] = {(a[7].im - a[7].re) * h, -(a[7].re + a[7].im) * h};

    // Stage B within each half: pairs (0,2), (1,3), W_4^1 = -j.
    std::array<Cx<L>, 8> b;
    for (std::size_t o = 0; o < 8; o += 4) {
      b[o + 0] = add<L>(a[o + 0], a[o + 2]);
      b[o + 1] = add<L>(a[o + 1], a[o + 3]);
      b[o + 2] = sub<L>(a[o + 0], a[o + 2]);
      b[o + 3] = mul_neg_j<L>(sub<L>(a[o + 1], a[o + 3]));
    }

    // Stage C: adjacent pairs, no rotation. Output slot p holds frequency rev3(p).
    std::array<Cx<L>, 8> y;
    for (std::size_t o = 0; o < 8; o += 2) {
      y[o] = add<L>(b[o], b[o + 1]);
      y[o + 1] = sub<L>(b[o], b[o + 1]);
    }

    store<L>(re, im, j, y[0]);
    for (std::size_t p = 1; p < 8; ++p) {
      store<L>(re, im, j + p * e, twiddle<L>(y[p], w[p - 1], j));
    }
  });
}

// Lane l of the working set holds chunk c + l, so each element follows the
// same scalar sequence as the radix-2 passes.
template <int Block, class Lane>
void fused_group(float* re, float* im, const std::array<TwiddleView, std::countr_zero(unsigned{Block})>& rows) {
  constexpr int kStages = std::countr_zero(static_cast<unsigned>(Block));
  std::array<Cx<Lane>, Block> x;
  for (int k = 0; k < Block; ++k) x[k] = {Lane::gather(re + k, Block), Lane::gather(im + k, Block)};
  for (int t = 0; t < kStages; ++t) {
    const int half = (Block >> t) / 2;
    const auto& w = rows[static_cast<std::size_t>(t)];
#pragma GCC unroll 32
    for (int base = 0; base < Block; base += 2 * half) {
#pragma GCC unroll 16
      for (int j = 0; j < half; ++j) {
        const auto top = x[base + j];
        const auto bot = x[base + j + half];
        const auto d = sub<Lane>(top, bot);
        const auto wr = Lane::splat(w.re[static_cast<std::size_t>(j)]);
        const auto wi = Lane::splat(w.im[static_cast<std::size_t>(j)]);
        x[base + j] = add<Lane>(top, bot);
        x[base + j + half] = {d.re * wr - d.im * wi, d.re * wi + d.im * wr};
      }
    }
  }
  for (int k = 0; k < Block; ++k) {
    Lane::scatter(re + k, Block, x[k].re);
    Lane::scatter(im + k, Block, x[k].im);
  }
}

template <int Block, class Lane>
void fused_chunks(SplitComplexBuffer& buf, int s, const TwiddleTable& tw) {
  constexpr int kStages = std::countr_zero(static_cast<unsigned>(Block));
  std::array<TwiddleView, kStages> rows;
  for (int t = 0; t < kStages; ++t) rows[static_cast<std::size_t>(t)] = tw.radix2(s + t);

  float* re = buf.re().data();
  float* im = buf.im().data();
  const std::size_t chunks = buf.size() / Block;
  std::size_t c = 0;
  if constexpr (Lane::width > 1) {
    for (; c + Lane::width <= chunks; c += Lane::width) {
      fused_group<Block, Lane>(re + c * Block, im + c * Block, rows);
    }
  }
  for (; c < chunks; ++c) fused_group<Block, ScalarLane>(re + c * Block, im + c * Block, rows);
}

void check_table(const SplitComplexBuffer& buf, const TwiddleTable& tw) {
  if (tw.size() != buf.size()) {
    throw ShapeError("twiddle table for n = " + std::to_string(tw.size()) +
                     " used on a buffer of " + std::to_string(buf.size()));
  }
}

void check_advance(const SplitComplexBuffer& buf, const TwiddleTable& tw, int s, int stages_needed,
                   const char* what) {
  check_table(buf, tw);
  if (s < 0 || s + stages_needed > buf.stages()) {
    throw StageOverflowError(std::string(what) + " at stage " + std::to_string(s) +
                             " overflows L = " + std::to_string(buf.stages()));
  }
}

template <class Fn>
void with_lane(KernelPath path, Fn&& fn) {
  if (path == KernelPath::lanes4) {
    fn.template operator()<Lane4>();
  } else {
    fn.template operator()<ScalarLane>();
  }
}

}  // namespace

void radix2_pass(SplitComplexBuffer& buf, int s, const TwiddleTable& tw, KernelPath path) {
  check_advance(buf, tw, s, 1, "radix-2 pass");
  const std::size_t m = buf.size() >> s;
  const auto w = tw.radix2(s);
  with_lane(path, [&]<class Lane>() {
    for (std::size_t base = 0; base < buf.size(); base += m) {
      dif2<Lane>(buf.re().data() + base, buf.im().data() + base, m / 2, w);
    }
  });
}

void radix4_pass(SplitComplexBuffer& buf, int s, const TwiddleTable& tw, KernelPath path) {
  check_advance(buf, tw, s, 2, "radix-4 pass");
  const std::size_t m = buf.size() >> s;
  const std::array<TwiddleView, 3> w = {tw.radix4(s, 1), tw.radix4(s, 2), tw.radix4(s, 3)};
  with_lane(path, [&]<class Lane>() {
    for (std::size_t base = 0; base < buf.size(); base += m) {
      dif4<Lane>(buf.re().data() + base, buf.im().data() + base, m / 4, w);
    }
  });
}

void radix8_pass(SplitComplexBuffer& buf, int s, const TwiddleTable& tw, KernelPath path) {
  check_advance(buf, tw, s, 3, "radix-8 pass");
  const std::size_t m = buf.size() >> s;
  std::array<TwiddleView, 7> w;
  for (int p = 1; p <= 7; ++p) w[static_cast<std::size_t>(p - 1)] = tw.radix8(s, p);
  with_lane(path, [&]<class Lane>() {
    for (std::size_t base = 0; base < buf.size(); base += m) {
      dif8<Lane>(buf.re().data() + base, buf.im().data() + base, m / 8, w);
    }
  });
}

void fused_block_pass(SplitComplexBuffer& buf, int s, int block, const TwiddleTable& tw,
                      KernelPath path) {
  if (block != 8 && block != 16 && block != 32) {
    throw ConfigError("fused block size must be 8, 16 or 32, got " + std::to_string(block));
  }
  if (static_cast<std::size_t>(block) > buf.size()) {
    throw SizeError("fused block of " + std::to_string(block) + " exceeds transform size " +
                    std::to_string(buf.size()));
  }
  check_table(buf, tw);
  const int block_stages = std::countr_zero(static_cast<unsigned>(block));
  if (s + block_stages != buf.stages()) {
    throw PlacementError("fused-" + std::to_string(block) + " must end at stage L = " +
                         std::to_string(buf.stages()) + ", placed at stage " + std::to_string(s));
  }
  with_lane(path, [&]<class Lane>() {
    switch (block) {
      case 8: fused_chunks<8, Lane>(buf, s, tw); break;
      case 16: fused_chunks<16, Lane>(buf, s, tw); break;
      default: fused_chunks<32, Lane>(buf, s, tw); break;
    }
  });
}

void run_edge(EdgeType edge, SplitComplexBuffer& buf, int s, const TwiddleTable& tw,
              KernelPath path) {
  switch (edge) {
    case EdgeType::R2: radix2_pass(buf, s, tw, path); return;
    case EdgeType::R4: radix4_pass(buf, s, tw, path); return;
    case EdgeType::R8: radix8_pass(buf, s, tw, path); return;
    case EdgeType::F8:
    case EdgeType::F16:
    case EdgeType::F32: fused_block_pass(buf, s, block_size(edge), tw, path); return;
  }
}

std::vector<std::uint32_t> output_permutation(std::span<const int> spans, std::size_t n) {
  const int stages = stage_count(n);
  int total = 0;
  for (int sp : spans) {
    if (sp <= 0) throw ShapeError("edge spans must be positive");
    total += sp;
  }
  if (total != stages) {
    throw ShapeError("spans sum to " + std::to_string(total) + ", expected L = " +
                     std::to_string(stages));
  }
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0;
    auto v = static_cast<std::uint32_t>(i);
    for (int b = 0; b < stages; ++b) {
      r = (r << 1) | (v & 1u);
      v >>= 1;
    }
    perm[i] = r;
  }
  return perm;
}

void apply_permutation(std::span<const std::uint32_t> perm, const SplitComplexBuffer& in,
                       SplitComplexBuffer& out) {
  if (perm.size() != in.size() || out.size() != in.size()) {
    throw ShapeError("permutation and buffer sizes disagree");
  }
  const auto ir = in.re();
  const auto ii = in.im();
  auto orr = out.re();
  auto oi = out.im();
  for (std::size_t i = 0; i < perm.size(); ++i) {
    orr[perm[i]] = ir[i];
    oi[perm[i]] = ii[i];
  }
}

namespace {

std::vector<std::complex<double>> dft_roots(std::size_t n) {
  std::vector<std::complex<double>> roots(n);
  for (std::size_t j = 0; j < n; ++j) {
    roots[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) /
                                   static_cast<double>(n));
  }
  return roots;
}

std::complex<double> dft_bin(const SplitComplexBuffer& buf,
                             const std::vector<std::complex<double>>& roots, std::size_t k) {
  const std::size_t n = buf.size();
  std::complex<double> acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::complex<double> x(buf.re()[t], buf.im()[t]);
    acc += x * roots[(k * t) % n];
  }
  return acc;
}

}  // namespace

std::vector<std::complex<double>> reference_dft(const SplitComplexBuffer& buf) {
  const auto roots = dft_roots(buf.size());
  std::vector<std::complex<double>> out(buf.size());
  for (std::size_t k = 0; k < buf.size(); ++k) out[k] = dft_bin(buf, roots, k);
  return out;
}

std::vector<std::complex<double>> reference_dft_bins(const SplitComplexBuffer& buf,
                                                     std::span<const std::size_t> bins) {
  const auto roots = dft_roots(buf.size());
  std::vector<std::complex<double>> out;
  out.reserve(bins.size());
  for (std::size_t k : bins) {
    if (k >= buf.size()) throw ShapeError("bin index out of range");
    out.push_back(dft_bin(buf, roots, k));
  }
  return out;
}

}  // namespace fftplan
