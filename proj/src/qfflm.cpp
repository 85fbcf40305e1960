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

#include "fourierqml/qfflm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fourierqml/errors.hpp"

namespace fourierqml {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

using Op = Circuit::Op;
using OpKind = Circuit::OpKind;

void emit_module(const AnsatzSpec &spec, int n_qubits, std::size_t &next_param,
                 std::vector<Op> &ops) {
    for (int layer = 0; layer < spec.layers; ++layer) {
        for (int q = 1; q <= n_qubits; ++q) {
            const int base = static_cast<int>(next_param);
            if (spec.rotation == RotationKind::YZ) {
                // RZ(theta_z) RY(theta_y): RY acts first.
                ops.push_back({OpKind::TrainRY, q, 0, base + 1, 1.0});
                ops.push_back({OpKind::TrainRZ, q, 0, base, 1.0});
                next_param += 2;
            } else {
                // Rot(phi, theta, omega) = RZ(phi) RY(theta) RZ(omega).
                ops.push_back({OpKind::TrainRZ, q, 0, base + 2, 1.0});
                ops.push_back({OpKind::TrainRY, q, 0, base + 1, 1.0});
                ops.push_back({OpKind::TrainRZ, q, 0, base, 1.0});
                next_param += 3;
            }
        }
        if (spec.entangler == Entangler::Chain) {
            for (int q = 1; q < n_qubits; ++q) {
                ops.push_back({OpKind::Cnot, q, q + 1, -1, 0.0});
            }
        } else if (n_qubits == 2) {
            ops.push_back({OpKind::Cnot, 1, 2, -1, 0.0});
            ops.push_back({OpKind::Cnot, 2, 1, -1, 0.0});
        } else if (n_qubits > 2) {
            for (int q = 1; q <= n_qubits; ++q) {
                ops.push_back({OpKind::Cnot, q, q % n_qubits + 1, -1, 0.0});
            }
        }
    }
}

bool is_trainable(OpKind kind) { return kind == OpKind::TrainRZ || kind == OpKind::TrainRY; }

} // namespace

Circuit::Circuit(const AnsatzSpec &spec) {
    spec.validate();
    n_qubits_ = spec.total_qubits();
    if (n_qubits_ > kMaxQubits) {
        throw CapacityError("circuit needs " + std::to_string(n_qubits_) +
                            " qubits; the simulator cap is " + std::to_string(kMaxQubits));
    }
    n_vars_ = spec.num_vars;
    measured_ = spec.measured();

    std::size_t next_param = 0;
    emit_module(spec, n_qubits_, next_param, ops_);
    if (const auto *p = std::get_if<ParallelLayout>(&spec.layout)) {
        for (int m = 0; m < spec.num_vars; ++m) {
            const auto &weights = p->encodings[static_cast<std::size_t>(m)].weights();
            for (int n = 0; n < p->qubits_per_var; ++n) {
                ops_.push_back({OpKind::EncodeRZ, m * p->qubits_per_var + n + 1, 0, m,
                                static_cast<double>(weights[static_cast<std::size_t>(n)])});
            }
        }
        emit_module(spec, n_qubits_, next_param, ops_);
    } else {
        for (const auto &block : std::get<SerialLayout>(spec.layout).blocks) {
            const auto w = static_cast<double>(block.weight);
            for (const auto &layer : block.layers) {
                for (const auto &slot : layer.slots) {
                    if (slot.features.size() == 1) {
                        ops_.push_back({OpKind::EncodeRZ, slot.qubit, 0, slot.features[0], w});
                    } else {
                        ops_.push_back({OpKind::EncodeRZ, slot.qubit, 0, slot.features[2], w});
                        ops_.push_back({OpKind::EncodeRY, slot.qubit, 0, slot.features[1], w});
                        ops_.push_back({OpKind::EncodeRZ, slot.qubit, 0, slot.features[0], w});
                    }
                }
                emit_module(spec, n_qubits_, next_param, ops_);
            }
        }
    }
    n_params_ = next_param;
}

void Circuit::check_inputs(std::span<const double> theta, std::span<const double> x) const {
    if (theta.size() != n_params_) {
        throw ArgumentError("expected " + std::to_string(n_params_) + " parameters, got " +
                            std::to_string(theta.size()));
    }
    if (x.size() != static_cast<std::size_t>(n_vars_)) {
        throw ArgumentError("expected " + std::to_string(n_vars_) + " inputs, got " +
                            std::to_string(x.size()));
    }
    for (const double v : x) {
        if (!std::isfinite(v)) {
            throw ArgumentError("input contains a non-finite value");
        }
    }
}

void Circuit::apply_op(const Op &op, std::span<const double> theta, std::span<const double> x,
                       double shift, StateVector &state) const {
    switch (op.kind) {
    case OpKind::TrainRZ:
        state.apply_rz(op.qubit, theta[static_cast<std::size_t>(op.index)] + shift);
        break;
    case OpKind::TrainRY:
        state.apply_ry(op.qubit, theta[static_cast<std::size_t>(op.index)] + shift);
        break;
    case OpKind::EncodeRZ:
        state.apply_rz(op.qubit, op.weight * x[static_cast<std::size_t>(op.index)]);
        break;
    case OpKind::EncodeRY:
        state.apply_ry(op.qubit, op.weight * x[static_cast<std::size_t>(op.index)]);
        break;
    case OpKind::Cnot:
        state.apply_cnot(op.qubit, op.target);
        break;
    }
}

void Circuit::prepare(std::span<const double> theta, std::span<const double> x,
                      StateVector &state) const {
    check_inputs(theta, x);
    if (state.num_qubits() != n_qubits_) {
        throw ArgumentError("scratch state has the wrong qubit count");
    }
    state.reset();
    for (const auto &op : ops_) {
        apply_op(op, theta, x, 0.0, state);
    }
}

double Circuit::evaluate(std::span<const double> theta, std::span<const double> x) const {
    StateVector state(n_qubits_);
    return evaluate(theta, x, state);
}

double Circuit::evaluate(std::span<const double> theta, std::span<const double> x,
                         StateVector &scratch) const {
    prepare(theta, x, scratch);
    return scratch.expectation_z(measured_);
}

double Circuit::evaluate_sampled(std::span<const double> theta, std::span<const double> x,
                                 std::uint64_t shots, Rng &rng) const {
    StateVector state(n_qubits_);
    prepare(theta, x, state);
    return sample_expectation_z(state, measured_, shots, rng);
}

std::vector<double> Circuit::gradient(std::span<const double> theta, std::span<const double> x,
                                      double *value, std::optional<std::uint64_t> shots,
                                      Rng *rng) const {
    check_inputs(theta, x);
    if (shots && rng == nullptr) {
        throw ArgumentError("sampled gradient needs a generator");
    }
    auto measure = [&](const StateVector &s) {
        return shots ? sample_expectation_z(s, measured_, *shots, *rng)
                     : s.expectation_z(measured_);
    };

    std::vector<double> grad(n_params_, 0.0);
    // The state before op `pos` does not depend on that op's parameter, so
    // each shifted evaluation only replays the suffix.
    StateVector prefix(n_qubits_);
    StateVector shifted(n_qubits_);
    for (std::size_t pos = 0; pos < ops_.size(); ++pos) {
        const Op &op = ops_[pos];
        if (is_trainable(op.kind)) {
            double terms[2];
            for (int side = 0; side < 2; ++side) {
                shifted = prefix;
                apply_op(op, theta, x, side == 0 ? kHalfPi : -kHalfPi, shifted);
                for (std::size_t rest = pos + 1; rest < ops_.size(); ++rest) {
                    apply_op(ops_[rest], theta, x, 0.0, shifted);
                }
                terms[side] = measure(shifted);
            }
            grad[static_cast<std::size_t>(op.index)] = 0.5 * (terms[0] - terms[1]);
        }
        apply_op(op, theta, x, 0.0, prefix);
    }
    if (value != nullptr) {
        *value = measure(prefix);
    }
    return grad;
}

double evaluate(const AnsatzSpec &spec, std::span<const double> theta,
                std::span<const double> x) {
    return Circuit(spec).evaluate(theta, x);
}

double evaluate_sampled(const AnsatzSpec &spec, std::span<const double> theta,
                        std::span<const double> x, std::uint64_t shots, Rng &rng) {
    return Circuit(spec).evaluate_sampled(theta, x, shots, rng);
}

std::vector<double> gradient_parameter_shift(const AnsatzSpec &spec,
                                             std::span<const double> theta,
                                             std::span<const double> x) {
    return Circuit(spec).gradient(theta, x);
}

std::vector<double> random_parameters(const AnsatzSpec &spec, Rng &rng) {
    std::vector<double> theta(param_count(spec));
    for (auto &t : theta) {
        t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return theta;
}

Complex FourierCoefficients::at(std::span<const std::int64_t> frequency) const {
    if (frequency.size() != static_cast<std::size_t>(num_vars)) {
        throw ArgumentError("frequency has the wrong number of components");
    }
    std::size_t flat = 0;
    for (std::size_t m = 0; m < frequency.size(); ++m) {
        if (std::abs(frequency[m]) > degree[m]) {
            return {0.0, 0.0};
        }
        flat = flat * extent(m) + static_cast<std::size_t>(frequency[m] + degree[m]);
    }
    return values[flat];
}

double FourierCoefficients::synthesize(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(num_vars)) {
        throw ArgumentError("synthesize: wrong input dimension");
    }
    // Per-variable phase tables, then a walk over the box.
    std::vector<std::vector<Complex>> phase(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) {
        for (std::int64_t n = -degree[m]; n <= degree[m]; ++n) {
            phase[m].push_back(std::polar(1.0, static_cast<double>(n) * x[m]));
        }
    }
    std::vector<std::size_t> index(x.size(), 0);
    double total = 0.0;
    for (std::size_t p = 0; p < values.size(); ++p) {
        Complex term = values[p];
        for (std::size_t m = 0; m < x.size(); ++m) {
            term *= phase[m][index[m]];
        }
        total += term.real();
        for (std::size_t m = x.size(); m-- > 0;) {
            if (++index[m] < extent(m)) {
                break;
            }
            index[m] = 0;
        }
    }
    return total;
}

namespace detail {

double grid_point(int j, int g) {
    return -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) /
                                   static_cast<double>(g);
}

std::vector<int> resolve_grid(const std::vector<FrequencySpectrum> &spectra,
                              const std::optional<std::vector<int>> &grid) {
    std::vector<int> g;
    if (grid) {
        if (grid->size() != spectra.size()) {
            throw ArgumentError("grid needs one size per variable");
        }
        g = *grid;
    } else {
        for (const auto &s : spectra) {
            const std::int64_t k = 2 * s.max_frequency() + 1;
            if (k > static_cast<std::int64_t>(kMaxDftGrid)) {
                throw CapacityError("DFT grid exceeds 10^7 points");
            }
            g.push_back(static_cast<int>(k));
        }
    }
    double total = 1.0;
    for (std::size_t m = 0; m < g.size(); ++m) {
        if (g[m] < 2 * spectra[m].max_frequency() + 1) {
            throw ArgumentError("grid must have at least 2 d_F + 1 points per variable");
        }
        total *= g[m];
    }
    if (total > static_cast<double>(kMaxDftGrid)) {
        throw CapacityError("DFT grid exceeds 10^7 points");
    }
    return g;
}

FourierCoefficients dft_from_samples(const std::vector<double> &samples,
                                     const std::vector<int> &grid,
                                     const std::vector<FrequencySpectrum> &spectra) {
    const std::size_t dims = grid.size();
    std::vector<Complex> data(samples.begin(), samples.end());
    FourierCoefficients fc;
    fc.num_vars = static_cast<int>(dims);
    for (const double s : samples) {
        fc.max_abs_sample = std::max(fc.max_abs_sample, std::abs(s));
    }

    auto frequency_of = [](int k, int g) { return (2 * k <= g - 1) ? k : k - g; };

    // Full separable DFT, one axis at a time.
    std::size_t outer = 1;
    std::size_t total = data.size();
    std::vector<Complex> line;
    std::vector<Complex> out;
    for (std::size_t m = 0; m < dims; ++m) {
        const auto g = static_cast<std::size_t>(grid[m]);
        const std::size_t inner = total / (outer * g);
        std::vector<Complex> kernel(g * g);
        for (std::size_t k = 0; k < g; ++k) {
            const double n = frequency_of(static_cast<int>(k), grid[m]);
            for (std::size_t j = 0; j < g; ++j) {
                kernel[k * g + j] =
                    std::polar(1.0 / static_cast<double>(g),
                               -n * grid_point(static_cast<int>(j), grid[m]));
            }
        }
        line.resize(g);
        out.resize(g);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t i = 0; i < inner; ++i) {
                const std::size_t base = o * g * inner + i;
                for (std::size_t j = 0; j < g; ++j) {
                    line[j] = data[base + j * inner];
                }
                for (std::size_t k = 0; k < g; ++k) {
                    Complex acc{0.0, 0.0};
                    const Complex *row = &kernel[k * g];
                    for (std::size_t j = 0; j < g; ++j) {
                        acc += row[j] * line[j];
                    }
                    out[k] = acc;
                }
                for (std::size_t k = 0; k < g; ++k) {
                    data[base + k * inner] = out[k];
                }
            }
        }
        outer *= g;
    }

    std::size_t box = 1;
    for (const auto &s : spectra) {
        fc.degree.push_back(s.max_frequency());
        fc.support.push_back(s.support);
        box *= static_cast<std::size_t>(2 * s.max_frequency() + 1);
    }
    fc.values.assign(box, Complex{0.0, 0.0});

    double residual_sq = 0.0;
    std::vector<int> index(dims, 0);
    for (std::size_t p = 0; p < data.size(); ++p) {
        bool inside = true;
        std::size_t flat = 0;
        for (std::size_t m = 0; m < dims; ++m) {
            const std::int64_t n = frequency_of(index[m], grid[m]);
            if (std::abs(n) > fc.degree[m] || !spectra[m].contains(n)) {
                inside = false;
                break;
            }
            flat = flat * fc.extent(m) + static_cast<std::size_t>(n + fc.degree[m]);
        }
        if (inside) {
            fc.values[flat] = data[p];
        } else {
            residual_sq += std::norm(data[p]);
        }
        for (std::size_t m = dims; m-- > 0;) {
            if (++index[m] < grid[m]) {
                break;
            }
            index[m] = 0;
        }
    }
    fc.residual = std::sqrt(residual_sq);
    return fc;
}

} // namespace detail

FourierCoefficients fourier_coefficients(const AnsatzSpec &spec, std::span<const double> theta,
                                         std::optional<std::vector<int>> grid) {
    const Circuit circuit(spec);
    std::vector<FrequencySpectrum> spectra;
    for (const auto &enc : variable_encodings(spec)) {
        spectra.push_back(spectrum(enc));
    }
    StateVector scratch(circuit.num_qubits());
    const std::vector<double> params(theta.begin(), theta.end());
    return fourier_coefficients_of(
        [&](std::span<const double> x) { return circuit.evaluate(params, x, scratch); },
        spectra, std::move(grid));
}

std::vector<double> coefficient_vector(const FourierCoefficients &fc) {
    for (std::size_t m = 0; m < fc.support.size(); ++m) {
        if (fc.support[m].size() != fc.extent(m)) {
            throw UnsupportedError(
                "coefficient_vector needs a dense lattice; use the complex coefficients");
        }
    }
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const Complex i_unit{0.0, 1.0};
    std::vector<Complex> data = fc.values;
    // Same axis walk as the DFT: box index d + n maps to the real basis
    // (1, sqrt2 cos, sqrt2 sin, ...) for each axis in turn.
    std::size_t outer = 1;
    const std::size_t total = data.size();
    for (std::size_t m = 0; m < fc.degree.size(); ++m) {
        const std::size_t k = fc.extent(m);
        const auto d = static_cast<std::size_t>(fc.degree[m]);
        const std::size_t inner = total / (outer * k);
        std::vector<Complex> in(k);
        std::vector<Complex> out(k);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t i = 0; i < inner; ++i) {
                const std::size_t base = o * k * inner + i;
                for (std::size_t j = 0; j < k; ++j) {
                    in[j] = data[base + j * inner];
                }
                out[0] = in[d];
                for (std::size_t n = 1; n <= d; ++n) {
                    out[2 * n - 1] = (in[d + n] + in[d - n]) * inv_sqrt2;
                    out[2 * n] = i_unit * (in[d + n] - in[d - n]) * inv_sqrt2;
                }
                for (std::size_t j = 0; j < k; ++j) {
                    data[base + j * inner] = out[j];
                }
            }
        }
        outer *= k;
    }
    std::vector<double> c(total);
    for (std::size_t p = 0; p < total; ++p) {
        c[p] = data[p].real();
    }
    return c;
}

} // namespace fourierqml
