#pragma once

// Reproducible random inputs for property suites. All draws come from a
// caller-owned std::mt19937_64, so a seed fixes the whole sample stream.

#include <cstddef>
#include <random>

#include "chess/herm.hpp"
#include "chess/symfunc.hpp"

namespace chess {

using Rng = std::mt19937_64;

/// Standard Gaussian vector shifted by c (1, ..., 1). c starts at 0 and, while
/// the point is outside Gamma_k, becomes 0.05 and then grows by 1.25x.
/// Small shifts keep many samples close to the cone boundary.
Spectrum sample_cone(Rng& rng, std::size_t n, std::size_t k);

/// Product of n(n-1)/2 * 2 complex Givens rotations with random angles and phases.
CMat random_unitary(Rng& rng, std::size_t n);

/// Hermitian matrix with independent standard Gaussian entries.
HermMat random_hermitian(Rng& rng, std::size_t n);

/// U diag(lambda) U^* with lambda from sample_cone and U from random_unitary.
HermMat sample_cone_matrix(Rng& rng, std::size_t n, std::size_t k);

}  // namespace chess
