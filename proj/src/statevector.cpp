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

#include "fourierqml/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fourierqml/errors.hpp"

namespace fourierqml {

namespace {

constexpr double kUnitarityTolerance = 1e-10;

void check_register_size(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("qubit count " + std::to_string(n_qubits) +
                            " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
}

} // namespace

StateVector::StateVector(int n_qubits) {
    check_register_size(n_qubits);
    n_qubits_ = n_qubits;
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t n = amplitudes.size();
    if (n < 2 || !std::has_single_bit(n)) {
        throw ArgumentError("amplitude count must be a power of two >= 2");
    }
    const int n_qubits = std::countr_zero(n);
    check_register_size(n_qubits);
    StateVector sv;
    sv.n_qubits_ = n_qubits;
    sv.amplitudes_ = std::move(amplitudes);
    return sv;
}

void StateVector::reset() {
    std::fill(amplitudes_.begin(), amplitudes_.end(), Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 1 || qubit > n_qubits_) {
        throw IndexError("qubit " + std::to_string(qubit) + " outside [1, " +
                         std::to_string(n_qubits_) + "]");
    }
}

void StateVector::apply(const Gate &gate) {
    std::visit(
        [this](const auto &g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, gates::RZ>) {
                apply_rz(g.target, g.angle);
            } else if constexpr (std::is_same_v<T, gates::RY>) {
                apply_ry(g.target, g.angle);
            } else if constexpr (std::is_same_v<T, gates::Rot>) {
                apply_rot(g.target, g.phi, g.theta, g.omega);
            } else if constexpr (std::is_same_v<T, gates::CNOT>) {
                apply_cnot(g.control, g.target);
            } else {
                apply_dense(g.matrix, g.targets);
            }
        },
        gate);
}

void StateVector::apply_rz(int target, double angle) {
    check_qubit(target);
    const Complex lower = std::polar(1.0, -0.5 * angle);
    const Complex upper = std::conj(lower);
    const std::size_t s = stride(target);
    const std::size_t n = amplitudes_.size();
    for (std::size_t block = 0; block < n; block += 2 * s) {
        for (std::size_t j = block; j < block + s; ++j) {
            amplitudes_[j] *= lower;
            amplitudes_[j + s] *= upper;
        }
    }
}

void StateVector::apply_ry(int target, double angle) {
    const double c = std::cos(0.5 * angle);
    const double sn = std::sin(0.5 * angle);
    check_qubit(target);
    const std::size_t s = stride(target);
    const std::size_t n = amplitudes_.size();
    for (std::size_t block = 0; block < n; block += 2 * s) {
        for (std::size_t j = block; j < block + s; ++j) {
            const Complex a = amplitudes_[j];
            const Complex b = amplitudes_[j + s];
            amplitudes_[j] = c * a - sn * b;
            amplitudes_[j + s] = sn * a + c * b;
        }
    }
}

void StateVector::apply_rot(int target, double phi, double theta, double omega) {
    apply_rz(target, omega);
    apply_ry(target, theta);
    apply_rz(target, phi);
}

void StateVector::apply_single(int target, const std::array<Complex, 4> &m) {
    check_qubit(target);
    const std::size_t s = stride(target);
    const std::size_t n = amplitudes_.size();
    for (std::size_t block = 0; block < n; block += 2 * s) {
        for (std::size_t j = block; j < block + s; ++j) {
            const Complex a = amplitudes_[j];
            const Complex b = amplitudes_[j + s];
            amplitudes_[j] = m[0] * a + m[1] * b;
            amplitudes_[j + s] = m[2] * a + m[3] * b;
        }
    }
}

void StateVector::apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw IndexError("CNOT control and target coincide");
    }
    const std::size_t cbit = stride(control);
    const std::size_t tbit = stride(target);
    const std::size_t n = amplitudes_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amplitudes_[i], amplitudes_[i | tbit]);
        }
    }
}

void StateVector::apply_dense(const Eigen::MatrixXcd &matrix,
                              std::span<const int> targets) {
    const std::size_t k = targets.size();
    if (k == 0 || k > static_cast<std::size_t>(n_qubits_)) {
        throw ArgumentError("dense gate needs between 1 and n_qubits targets");
    }
    std::size_t target_mask = 0;
    std::vector<std::size_t> bits(k);
    for (std::size_t j = 0; j < k; ++j) {
        check_qubit(targets[j]);
        bits[j] = stride(targets[j]);
        if (target_mask & bits[j]) {
            throw IndexError("dense gate targets must be distinct");
        }
        target_mask |= bits[j];
    }
    const auto local_dim = static_cast<Eigen::Index>(std::size_t{1} << k);
    if (matrix.rows() != local_dim || matrix.cols() != local_dim) {
        throw ArgumentError("dense gate matrix must be 2^k x 2^k for k targets");
    }
    if (unitarity_defect(matrix) > kUnitarityTolerance) {
        throw ValidationError("dense gate matrix is not unitary");
    }

    // offsets[l] = global bit pattern for local index l (targets[0] = MSB).
    std::vector<std::size_t> offsets(static_cast<std::size_t>(local_dim), 0);
    for (std::size_t l = 0; l < offsets.size(); ++l) {
        for (std::size_t j = 0; j < k; ++j) {
            if (l & (std::size_t{1} << (k - 1 - j))) {
                offsets[l] |= bits[j];
            }
        }
    }
    Eigen::VectorXcd local(local_dim);
    const std::size_t n = amplitudes_.size();
    for (std::size_t base = 0; base < n; ++base) {
        if (base & target_mask) {
            continue;
        }
        for (Eigen::Index l = 0; l < local_dim; ++l) {
            local[l] = amplitudes_[base | offsets[static_cast<std::size_t>(l)]];
        }
        const Eigen::VectorXcd out = matrix * local;
        for (Eigen::Index l = 0; l < local_dim; ++l) {
            amplitudes_[base | offsets[static_cast<std::size_t>(l)]] = out[l];
        }
    }
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amplitudes_) {
        s += std::norm(a);
    }
    return s;
}

double StateVector::expectation_z(int qubit) const {
    check_qubit(qubit);
    const std::size_t bit = stride(qubit);
    double value = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        const double p = std::norm(amplitudes_[i]);
        value += (i & bit) ? -p : p;
    }
    return std::clamp(value, -1.0, 1.0);
}

StateVector init_state(int n_qubits) { return StateVector(n_qubits); }

StateVector apply_gate(StateVector state, const Gate &gate) {
    state.apply(gate);
    return state;
}

double expectation_z(const StateVector &state, int qubit) {
    return state.expectation_z(qubit);
}

double sample_expectation_z(const StateVector &state, int qubit,
                            std::uint64_t shots, Rng &rng) {
    if (shots == 0) {
        throw ArgumentError("shots must be >= 1");
    }
    const double p_plus = std::clamp(0.5 * (1.0 + state.expectation_z(qubit)), 0.0, 1.0);
    std::uint64_t plus = 0;
    for (std::uint64_t s = 0; s < shots; ++s) {
        if (rng.uniform() < p_plus) {
            ++plus;
        }
    }
    const auto total = static_cast<double>(shots);
    return (2.0 * static_cast<double>(plus) - total) / total;
}

namespace {

Eigen::MatrixXcd ginibre(int rows, int cols, Rng &rng) {
    Eigen::MatrixXcd g(rows, cols);
    const double scale = std::sqrt(0.5);
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = Complex{scale * re, scale * im};
        }
    }
    return g;
}

} // namespace

Eigen::MatrixXcd haar_unitary(int dim, Rng &rng) {
    if (dim < 1) {
        throw ArgumentError("haar_unitary: dim must be >= 1");
    }
    const Eigen::MatrixXcd g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd &r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        q.col(j) *= (mag > 0.0) ? d / mag : Complex{1.0, 0.0};
    }
    return q;
}

Eigen::VectorXcd haar_state(int dim, Rng &rng) {
    if (dim < 1) {
        throw ArgumentError("haar_state: dim must be >= 1");
    }
    Eigen::VectorXcd v = ginibre(dim, 1, rng).col(0);
    v /= v.norm();
    return v;
}

double unitarity_defect(const Eigen::MatrixXcd &matrix) {
    if (matrix.rows() != matrix.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    const Eigen::MatrixXcd d =
        matrix.adjoint() * matrix - Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
    return d.cwiseAbs().maxCoeff();
}

} // namespace fourierqml
