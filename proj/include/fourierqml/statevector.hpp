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
 * Exact statevector simulation of few-qubit circuits.
 *
 * Conventions: qubits are numbered from 1 and qubit 1 is the most
 * significant bit of the basis index. Rotations follow
 * R_G(theta) = exp(-i theta G / 2).
 */

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fourierqml/rng.hpp"

namespace fourierqml {

using Complex = std::complex<double>;

/// Largest register the simulator will allocate (2^24 amplitudes, 256 MB).
inline constexpr int kMaxQubits = 24;

namespace gates {
struct RZ {
    int target;
    double angle;
};
struct RY {
    int target;
    double angle;
};
/// Rot(phi, theta, omega) = RZ(phi) RY(theta) RZ(omega); RZ(omega) acts first.
struct Rot {
    int target;
    double phi;
    double theta;
    double omega;
};
struct CNOT {
    int control;
    int target;
};
/// Arbitrary unitary on `targets`; targets[0] is the most significant bit
/// of the matrix's row/column index.
struct DenseUnitary {
    Eigen::MatrixXcd matrix;
    std::vector<int> targets;
};
} // namespace gates

using Gate = std::variant<gates::RZ, gates::RY, gates::Rot, gates::CNOT,
                          gates::DenseUnitary>;

class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits. Throws CapacityError outside [1, kMaxQubits].
    explicit StateVector(int n_qubits);

    /// Wraps explicit amplitudes; the length must be a power of two >= 2.
    /// The vector is taken as-is (no normalization).
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] int num_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t size() const { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
    [[nodiscard]] Complex operator[](std::size_t i) const { return amplitudes_[i]; }

    /// Back to |0...0> without reallocating.
    void reset();

    void apply(const Gate &gate);

    void apply_rz(int target, double angle);
    void apply_ry(int target, double angle);
    void apply_rot(int target, double phi, double theta, double omega);
    void apply_cnot(int control, int target);
    void apply_dense(const Eigen::MatrixXcd &matrix, std::span<const int> targets);

    /// Row-major 2x2 matrix {m00, m01, m10, m11} on one qubit.
    void apply_single(int target, const std::array<Complex, 4> &m);

    [[nodiscard]] double norm_squared() const;
    [[nodiscard]] double expectation_z(int qubit) const;

  private:
    StateVector() = default;
    void check_qubit(int qubit) const;
    [[nodiscard]] std::size_t stride(int qubit) const {
        return std::size_t{1} << (n_qubits_ - qubit);
    }

    int n_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

StateVector init_state(int n_qubits);

/// Value-semantics wrapper around StateVector::apply.
StateVector apply_gate(StateVector state, const Gate &gate);

double expectation_z(const StateVector &state, int qubit);

/// Empirical mean of `shots` Z measurements on `qubit`, in [-1, 1].
double sample_expectation_z(const StateVector &state, int qubit,
                            std::uint64_t shots, Rng &rng);

/// Haar-distributed dim x dim unitary: QR of a complex Ginibre matrix with
/// the phases of R's diagonal folded back into Q.
Eigen::MatrixXcd haar_unitary(int dim, Rng &rng);

/// First column of the haar_unitary construction, i.e. U|0> for Haar U.
/// Consumes the same random numbers as the first column of haar_unitary.
Eigen::VectorXcd haar_state(int dim, Rng &rng);

/// max |(U^dagger U - I)_ij|.
double unitarity_defect(const Eigen::MatrixXcd &matrix);

} // namespace fourierqml
