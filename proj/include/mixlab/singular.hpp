#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>

#include "mixlab/grid.hpp"

namespace mixlab {

// Hf(x_i) = h sum_{j != i} f(x_j) / (pi (x_i - x_j)). The cell spacing cancels,
// leaving sum f_j / (pi (i - j)).
SampledFunction hilbert(const SampledFunction& f);

// T_b^m f(x_i) = h sum_{j != i} (b_i - b_j)^m f_j / (pi (x_i - x_j)).
// m = 0 runs the same loop as hilbert and returns identical bits.
SampledFunction commutator(const SampledFunction& b, const SampledFunction& f, int m);

// Hf at an arbitrary point; a cell whose centre equals x is excluded.
double hilbert_at(const SampledFunction& f, double x);

struct ConvolutionKernel {
    std::function<double(double)> K;
    double size_constant = 0.0;
};
ConvolutionKernel hilbert_kernel();

using Triple = std::array<double, 3>;  // (x, y, z)
using TripleSampler = std::function<Triple(std::mt19937_64&)>;

// Draws y, z close together and x well away; most triples are admissible.
TripleSampler admissible_triple_sampler(double scale = 10.0);

struct SmoothnessFit {
    double constant = 0.0;  // max |K(x-y) - K(x-z)| |x-y|^2 / |y-z|
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  // triples with |x-y| <= 2|y-z|
};

SmoothnessFit kernel_smoothness_check(const ConvolutionKernel& k, const TripleSampler& sampler, std::size_t count,
                                      std::uint64_t seed = 1);

// int |T_b^m f|^p w / int (M^{m+1} f)^p w over the interior cells.
double coifman_ratio(const SampledFunction& b, const SampledFunction& f, int m, const SampledFunction& w, double p,
                     const Scan& scan = {}, double margin = 0.05);

}  // namespace mixlab
