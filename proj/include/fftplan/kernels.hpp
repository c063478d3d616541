#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fftplan/edge.hpp"
#include "fftplan/numerics.hpp"

namespace fftplan {

/// Scalar code is the reference. `lanes4` runs four butterflies per step
/// wherever the butterfly span allows it and falls back to scalar otherwise.
enum class KernelPath { scalar, lanes4 };

// In-place DIF passes. `s` is the number of stages already computed; a pass
// at s works on sub-transforms of m = n >> s points.

void radix2_pass(SplitComplexBuffer& buf, int s, const TwiddleTable& tw,
                 KernelPath path = KernelPath::scalar);

/// Two stages in one sweep. The inner -j rotation is a component swap.
void radix4_pass(SplitComplexBuffer& buf, int s, const TwiddleTable& tw,
                 KernelPath path = KernelPath::scalar);

/// Three stages in one sweep. W_8^1 and W_8^3 are applied as add/sub and a
/// single scale by 1/sqrt(2).
void radix8_pass(SplitComplexBuffer& buf, int s, const TwiddleTable& tw,
                 KernelPath path = KernelPath::scalar);

/// Final log2(block) stages computed chunk by chunk inside a local
/// 2*block-scalar working set. Requires s + log2(block) == L.
void fused_block_pass(SplitComplexBuffer& buf, int s, int block, const TwiddleTable& tw,
                      KernelPath path = KernelPath::scalar);

/// Dispatch one edge of the decomposition graph.
void run_edge(EdgeType edge, SplitComplexBuffer& buf, int s, const TwiddleTable& tw,
              KernelPath path = KernelPath::scalar);

/// Permutation pi with natural[pi[i]] = dif_output[i]. Every edge is a
/// product of radix-2 stages, so this is bit reversal on L bits.
std::vector<std::uint32_t> output_permutation(std::span<const int> spans, std::size_t n);

/// out[perm[i]] = in[i].
void apply_permutation(std::span<const std::uint32_t> perm, const SplitComplexBuffer& in,
                       SplitComplexBuffer& out);

/// O(n^2) forward DFT accumulated in double precision.
std::vector<std::complex<double>> reference_dft(const SplitComplexBuffer& buf);

/// Selected bins of the forward DFT; O(n * bins.size()).
std::vector<std::complex<double>> reference_dft_bins(const SplitComplexBuffer& buf,
                                                     std::span<const std::size_t> bins);

}  // namespace fftplan
