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
 * Quantum Fourier-featured linear model: f_Q(x) = <0| U^dagger Z_meas U |0>
 * for the circuit described by an AnsatzSpec.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fourierqml/ansatz.hpp"
#include "fourierqml/rng.hpp"
#include "fourierqml/spectra.hpp"
#include "fourierqml/statevector.hpp"

namespace fourierqml {

/// Flat gate program compiled from an AnsatzSpec. Trainable ops read
/// theta[index]; encoding ops rotate by weight * x[index].
class Circuit {
  public:
    enum class OpKind : std::uint8_t { TrainRZ, TrainRY, EncodeRZ, EncodeRY, Cnot };

    struct Op {
        OpKind kind;
        int qubit;
        int target; ///< CNOT target
        int index;  ///< parameter or feature index
        double weight;
    };

    /// Throws CapacityError when the spec needs more than kMaxQubits qubits.
    explicit Circuit(const AnsatzSpec &spec);

    [[nodiscard]] int num_qubits() const { return n_qubits_; }
    [[nodiscard]] int num_vars() const { return n_vars_; }
    [[nodiscard]] std::size_t num_params() const { return n_params_; }
    [[nodiscard]] int measured_qubit() const { return measured_; }
    [[nodiscard]] std::span<const Op> ops() const { return ops_; }

    /// Prepares the output state in `state`, which must have num_qubits().
    void prepare(std::span<const double> theta, std::span<const double> x,
                 StateVector &state) const;

    [[nodiscard]] double evaluate(std::span<const double> theta,
                                  std::span<const double> x) const;
    double evaluate(std::span<const double> theta, std::span<const double> x,
                    StateVector &scratch) const;

    /// Shot-noise estimate of evaluate().
    double evaluate_sampled(std::span<const double> theta, std::span<const double> x,
                            std::uint64_t shots, Rng &rng) const;

    /// Exact gradient by the two-term parameter-shift rule
    /// [f(theta_k + pi/2) - f(theta_k - pi/2)] / 2. With `shots`, each
    /// shifted term is sampled. `value`, when non-null, receives f(x).
    std::vector<double> gradient(std::span<const double> theta, std::span<const double> x,
                                 double *value = nullptr,
                                 std::optional<std::uint64_t> shots = std::nullopt,
                                 Rng *rng = nullptr) const;

    /// Counts the ops the circuit executes; Rot and YZ rotations count one
    /// gate per angle.
    [[nodiscard]] std::size_t gate_count() const { return ops_.size(); }

  private:
    void apply_op(const Op &op, std::span<const double> theta, std::span<const double> x,
                  double shift, StateVector &state) const;
    void check_inputs(std::span<const double> theta, std::span<const double> x) const;

    int n_qubits_ = 0;
    int n_vars_ = 0;
    std::size_t n_params_ = 0;
    int measured_ = 0;
    std::vector<Op> ops_;
};

double evaluate(const AnsatzSpec &spec, std::span<const double> theta,
                std::span<const double> x);

double evaluate_sampled(const AnsatzSpec &spec, std::span<const double> theta,
                        std::span<const double> x, std::uint64_t shots, Rng &rng);

std::vector<double> gradient_parameter_shift(const AnsatzSpec &spec,
                                             std::span<const double> theta,
                                             std::span<const double> x);

/// theta_k ~ U[-pi, pi) independently.
std::vector<double> random_parameters(const AnsatzSpec &spec, Rng &rng);

/// Complex Fourier coefficients c_n of f(x) = sum_n c_n exp(i n.x) on the
/// box prod_m [-d_m, d_m], stored row-major (variable 1 slowest).
struct FourierCoefficients {
    int num_vars = 0;
    std::vector<std::int64_t> degree;
    /// Per-variable supports; lattice points outside them are zero.
    std::vector<std::vector<std::int64_t>> support;
    std::vector<Complex> values;
    /// L2 norm of the DFT coefficients that fall outside the lattice.
    double residual = 0.0;
    /// max |f| over the sampling grid.
    double max_abs_sample = 0.0;

    [[nodiscard]] std::size_t extent(std::size_t m) const {
        return static_cast<std::size_t>(2 * degree[m] + 1);
    }
    [[nodiscard]] Complex at(std::span<const std::int64_t> frequency) const;
    /// Evaluates the series at x.
    [[nodiscard]] double synthesize(std::span<const double> x) const;
};

/// Total grid points a DFT may use.
inline constexpr std::uint64_t kMaxDftGrid = 10'000'000;

/// DFT of an arbitrary function sampled on the uniform grid
/// x_j = -pi + 2 pi j / G_m, restricted to the given per-variable supports.
/// `grid` defaults to 2 d_m + 1 points per variable and must be >= that.
template <class Fn>
FourierCoefficients fourier_coefficients_of(Fn &&f, const std::vector<FrequencySpectrum> &spectra,
                                            std::optional<std::vector<int>> grid = std::nullopt);

/// DFT of the circuit function. Residual is ~0 for any theta because the
/// function is band-limited to the lattice of variable_encodings(spec).
FourierCoefficients fourier_coefficients(const AnsatzSpec &spec, std::span<const double> theta,
                                         std::optional<std::vector<int>> grid = std::nullopt);

/// Real coefficient vector c with f(x) = c . phi(x), where phi is the
/// tensor product of (1, sqrt2 cos x, sqrt2 sin x, ..., sqrt2 cos dx,
/// sqrt2 sin dx). Throws UnsupportedError unless every support is contiguous.
std::vector<double> coefficient_vector(const FourierCoefficients &fc);

namespace detail {
FourierCoefficients dft_from_samples(const std::vector<double> &samples,
                                     const std::vector<int> &grid,
                                     const std::vector<FrequencySpectrum> &spectra);
std::vector<int> resolve_grid(const std::vector<FrequencySpectrum> &spectra,
                              const std::optional<std::vector<int>> &grid);
double grid_point(int j, int g);
} // namespace detail

template <class Fn>
FourierCoefficients fourier_coefficients_of(Fn &&f, const std::vector<FrequencySpectrum> &spectra,
                                            std::optional<std::vector<int>> grid) {
    const std::vector<int> g = detail::resolve_grid(spectra, grid);
    std::size_t total = 1;
    for (const int gm : g) {
        total *= static_cast<std::size_t>(gm);
    }
    std::vector<double> samples(total);
    std::vector<int> index(g.size(), 0);
    std::vector<double> x(g.size());
    for (std::size_t p = 0; p < total; ++p) {
        for (std::size_t m = 0; m < g.size(); ++m) {
            x[m] = detail::grid_point(index[m], g[m]);
        }
        samples[p] = f(std::span<const double>(x));
        for (std::size_t m = g.size(); m-- > 0;) {
            if (++index[m] < g[m]) {
                break;
            }
            index[m] = 0;
        }
    }
    return detail::dft_from_samples(samples, g, spectra);
}

} // namespace fourierqml
