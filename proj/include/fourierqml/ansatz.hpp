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
 * Circuit descriptions for quantum Fourier-featured models.
 *
 * Parallel layout: W2(theta2) V(x) W1(theta1) |0>, one register of N qubits
 * per variable, V encoding variable m on its register with RZ(beta_mn x_m).
 *
 * Serial layout: an initial trainable block followed by reupload blocks.
 * Every encoding layer in a block is followed by its own trainable module.
 *
 * A trainable module is `layers` repetitions of one rotation per qubit
 * followed by an entangler (CNOT chain 1->2->...->n, or ring i->i+1 mod n).
 * Parameters are ordered module, layer, qubit, then within a rotation:
 *   YZ : (theta_z, theta_y) realizing RZ(theta_z) RY(theta_y)
 *   Rot: (phi, theta, omega) realizing RZ(phi) RY(theta) RZ(omega)
 */

#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fourierqml/spectra.hpp"

namespace fourierqml {

enum class RotationKind { YZ, Rot };
enum class Entangler { Chain, Ring };

[[nodiscard]] constexpr int params_per_rotation(RotationKind kind) {
    return kind == RotationKind::YZ ? 2 : 3;
}

struct ParallelLayout {
    int qubits_per_var = 1;
    /// One entry per variable, each with exactly qubits_per_var weights.
    std::vector<EncodingSpec> encodings;
};

/// One encoding gate of a serial layout. One feature gives RZ(w x_f);
/// three features give Rot(w x_a, w x_b, w x_c).
struct EncodingSlot {
    int qubit = 1;
    std::vector<int> features;
};

struct EncodingLayer {
    std::vector<EncodingSlot> slots;
};

struct ReuploadBlock {
    std::int64_t weight = 1;
    std::vector<EncodingLayer> layers;
};

struct SerialLayout {
    int n_qubits = 1;
    std::vector<ReuploadBlock> blocks;
};

struct AnsatzSpec {
    int num_vars = 1;
    /// Layers per trainable module (0 leaves only the encoding gates).
    int layers = 1;
    RotationKind rotation = RotationKind::YZ;
    Entangler entangler = Entangler::Chain;
    std::variant<ParallelLayout, SerialLayout> layout;
    /// Measured qubit; 0 selects the last qubit.
    int measured_qubit = 0;

    [[nodiscard]] int total_qubits() const;
    [[nodiscard]] int measured() const;
    [[nodiscard]] int trainable_modules() const;
    [[nodiscard]] bool is_parallel() const {
        return std::holds_alternative<ParallelLayout>(layout);
    }

    /// Structural checks (indices, feature coverage). Does not enforce the
    /// simulator qubit cap so that large specs can still be counted.
    void validate() const;
};

/// Parallel ansatz with the same encoding on every variable.
AnsatzSpec make_parallel(int num_vars, int qubits_per_var, int layers,
                         const EncodingSpec &encoding,
                         RotationKind rotation = RotationKind::YZ,
                         Entangler entangler = Entangler::Chain);

/// Parallel ansatz with exponential weights 3^(n-1) on every variable.
AnsatzSpec make_parallel_exponential(int num_vars, int qubits_per_var, int layers,
                                     RotationKind rotation = RotationKind::YZ);

/// Six-qubit triple-reuploading circuit for 36 Coulomb features. Each block
/// encodes features 0..17 then 18..35 with six Rot gates apiece, each
/// followed by a hardware-efficient Rot module. 126 L parameters.
AnsatzSpec make_molecular_serial(int layers, const std::array<std::int64_t, 3> &weights);

/// Eight-qubit, eight-feature reuploading circuit with ring-entangled Rot
/// modules; one RZ encoding layer per block. 96 L parameters.
AnsatzSpec make_tabular_serial(int layers, const std::array<std::int64_t, 3> &weights);

/// Effective encoding weights seen by each variable, in circuit order.
std::vector<EncodingSpec> variable_encodings(const AnsatzSpec &spec);

/// Number of trainable parameters N_tp.
std::size_t param_count(const AnsatzSpec &spec);

/// "ansatz-v1" document.
nlohmann::json to_json(const AnsatzSpec &spec);
AnsatzSpec ansatz_from_json(const nlohmann::json &doc);

} // namespace fourierqml
