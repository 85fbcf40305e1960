// Copyright 2026 The fourierqml Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Encoding weights and the integer frequency spectra they induce.
 *
 * A variable encoded by gates exp(-i beta_n x Z / 2), n = 1..N, yields a
 * Fourier series whose frequencies are all sums sum_n s_n beta_n with
 * s in {-1, 0, +1}^N.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fourierqml {

/// Positive integer weights of the encoding gates of one variable.
class EncodingSpec {
  public:
    /// Throws ArgumentError for an empty list or a weight < 1.
    explicit EncodingSpec(std::vector<std::int64_t> weights);

    [[nodiscard]] const std::vector<std::int64_t> &weights() const { return weights_; }
    [[nodiscard]] std::size_t size() const { return weights_.size(); }

    /// sum of weights (= maximum frequency). Throws CapacityError past 2^62.
    [[nodiscard]] std::int64_t weight_sum() const;

    friend bool operator==(const EncodingSpec &, const EncodingSpec &) = default;

  private:
    std::vector<std::int64_t> weights_;
};

/// Distinct frequencies (ascending) with their multiplicities in the
/// 3^N-term sum multiset.
struct FrequencySpectrum {
    std::vector<std::int64_t> support;
    std::vector<std::uint64_t> multiplicity;

    [[nodiscard]] std::size_t distinct() const { return support.size(); }
    /// Fourier degree d_F (largest frequency).
    [[nodiscard]] std::int64_t max_frequency() const { return support.back(); }
    /// True when the support is every integer in [-d_F, d_F].
    [[nodiscard]] bool contiguous() const;
    [[nodiscard]] std::uint64_t multiplicity_of(std::int64_t frequency) const;
    [[nodiscard]] bool contains(std::int64_t frequency) const;
};

/// Upper bound on distinct frequencies that spectrum() will materialize.
inline constexpr std::uint64_t kMaxSpectrumSize = std::uint64_t{1} << 26;

/// beta_n = 3^(n-1), n = 1..n_gates. Requires 1 <= n_gates <= 20.
EncodingSpec exponential_weights(int n_gates);

/// Iterates Omega(k) = {Omega(k-1) - beta_k, Omega(k-1), Omega(k-1) + beta_k}
/// from Omega(0) = {0}, tracking multiplicities.
FrequencySpectrum spectrum(const EncodingSpec &enc);

/// True when all 3^N sign sums are distinct. The sorted-weight condition
/// 2 * sum_{j<k} beta_j < beta_k is sufficient and is checked first; other
/// weight vectors are decided exactly (e.g. (2, 3) is non-degenerate).
bool is_maximally_nondegenerate(const EncodingSpec &enc);

/// Support is every integer in [-sum beta, sum beta].
bool is_dense(const EncodingSpec &enc);

/// Frequency lattice of an M-variate model: the Cartesian product of the
/// per-variable spectra.
struct FrequencyLattice {
    std::vector<FrequencySpectrum> per_variable;
    /// Number of lattice points, when it fits in 64 bits.
    std::optional<std::uint64_t> size;
    double log10_size = 0.0;
    /// Row-major lattice points (variable 1 slowest); filled only when
    /// size <= kMaxMaterializedLattice.
    std::vector<std::vector<std::int64_t>> points;
};

inline constexpr std::uint64_t kMaxMaterializedLattice = 1'000'000;

FrequencyLattice product_spectrum(std::span<const EncodingSpec> per_variable);

/// Same encoding repeated for each of `num_vars` variables.
FrequencyLattice product_spectrum(const EncodingSpec &enc, int num_vars);

/// x -> arccos(x). Feeding the result to a Fourier model turns cos(n t),
/// sin(n t) into T_n(x), U_{n-1}(x) sqrt(1 - x^2). Throws DomainError for |x| > 1.
double chebyshev_reencode(double x);

} // namespace fourierqml
