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

#include "fourierqml/ansatz.hpp"

#include <set>
#include <string>

#include "fourierqml/errors.hpp"
#include "fourierqml/json_util.hpp"

namespace fourierqml {

using nlohmann::json;

int AnsatzSpec::total_qubits() const {
    if (const auto *p = std::get_if<ParallelLayout>(&layout)) {
        return num_vars * p->qubits_per_var;
    }
    return std::get<SerialLayout>(layout).n_qubits;
}

int AnsatzSpec::measured() const {
    return measured_qubit == 0 ? total_qubits() : measured_qubit;
}

int AnsatzSpec::trainable_modules() const {
    if (is_parallel()) {
        return 2;
    }
    int modules = 1;
    for (const auto &block : std::get<SerialLayout>(layout).blocks) {
        modules += static_cast<int>(block.layers.size());
    }
    return modules;
}

void AnsatzSpec::validate() const {
    if (num_vars < 1) {
        throw ArgumentError("ansatz: num_vars must be >= 1");
    }
    if (layers < 0) {
        throw ArgumentError("ansatz: layers must be >= 0");
    }
    if (const auto *p = std::get_if<ParallelLayout>(&layout)) {
        if (p->qubits_per_var < 1) {
            throw ArgumentError("ansatz: qubits_per_var must be >= 1");
        }
        if (p->encodings.size() != static_cast<std::size_t>(num_vars)) {
            throw ArgumentError("ansatz: need one encoding per variable");
        }
        for (const auto &enc : p->encodings) {
            if (enc.size() != static_cast<std::size_t>(p->qubits_per_var)) {
                throw ArgumentError("ansatz: each encoding needs qubits_per_var weights");
            }
        }
    } else {
        const auto &s = std::get<SerialLayout>(layout);
        if (s.n_qubits < 1) {
            throw ArgumentError("ansatz: n_qubits must be >= 1");
        }
        if (s.blocks.empty()) {
            throw ArgumentError("ansatz: serial layout needs at least one block");
        }
        std::vector<bool> seen(static_cast<std::size_t>(num_vars), false);
        for (const auto &block : s.blocks) {
            if (block.weight < 1) {
                throw ArgumentError("ansatz: block weights must be positive integers");
            }
            for (const auto &layer : block.layers) {
                std::set<int> used;
                for (const auto &slot : layer.slots) {
                    if (slot.qubit < 1 || slot.qubit > s.n_qubits) {
                        throw IndexError("ansatz: encoding slot qubit out of range");
                    }
                    if (!used.insert(slot.qubit).second) {
                        throw ArgumentError("ansatz: two encoding slots on one qubit");
                    }
                    if (slot.features.size() != 1 && slot.features.size() != 3) {
                        throw ArgumentError("ansatz: encoding slot takes 1 or 3 features");
                    }
                    for (const int f : slot.features) {
                        if (f < 0 || f >= num_vars) {
                            throw IndexError("ansatz: feature index out of range");
                        }
                        seen[static_cast<std::size_t>(f)] = true;
                    }
                }
            }
        }
        for (std::size_t m = 0; m < seen.size(); ++m) {
            if (!seen[m]) {
                throw ArgumentError("ansatz: feature " + std::to_string(m) +
                                    " is never encoded");
            }
        }
    }
    const int n = total_qubits();
    if (measured_qubit < 0 || measured_qubit > n) {
        throw IndexError("ansatz: measured qubit out of range");
    }
}

AnsatzSpec make_parallel(int num_vars, int qubits_per_var, int layers,
                         const EncodingSpec &encoding, RotationKind rotation,
                         Entangler entangler) {
    AnsatzSpec spec;
    spec.num_vars = num_vars;
    spec.layers = layers;
    spec.rotation = rotation;
    spec.entangler = entangler;
    ParallelLayout p;
    p.qubits_per_var = qubits_per_var;
    p.encodings.assign(static_cast<std::size_t>(std::max(num_vars, 0)), encoding);
    spec.layout = std::move(p);
    spec.validate();
    return spec;
}

AnsatzSpec make_parallel_exponential(int num_vars, int qubits_per_var, int layers,
                                     RotationKind rotation) {
    return make_parallel(num_vars, qubits_per_var, layers,
                         exponential_weights(qubits_per_var), rotation);
}

AnsatzSpec make_molecular_serial(int layers, const std::array<std::int64_t, 3> &weights) {
    constexpr int kQubits = 6;
    constexpr int kFeatures = 36;
    AnsatzSpec spec;
    spec.num_vars = kFeatures;
    spec.layers = layers;
    spec.rotation = RotationKind::Rot;
    spec.entangler = Entangler::Chain;
    SerialLayout s;
    s.n_qubits = kQubits;
    for (const auto w : weights) {
        ReuploadBlock block;
        block.weight = w;
        for (int half = 0; half < 2; ++half) {
            EncodingLayer layer;
            for (int q = 0; q < kQubits; ++q) {
                const int first = half * 18 + 3 * q;
                layer.slots.push_back({q + 1, {first, first + 1, first + 2}});
            }
            block.layers.push_back(std::move(layer));
        }
        s.blocks.push_back(std::move(block));
    }
    spec.layout = std::move(s);
    spec.validate();
    return spec;
}

AnsatzSpec make_tabular_serial(int layers, const std::array<std::int64_t, 3> &weights) {
    constexpr int kQubits = 8;
    AnsatzSpec spec;
    spec.num_vars = kQubits;
    spec.layers = layers;
    spec.rotation = RotationKind::Rot;
    spec.entangler = Entangler::Ring;
    SerialLayout s;
    s.n_qubits = kQubits;
    for (const auto w : weights) {
        ReuploadBlock block;
        block.weight = w;
        EncodingLayer layer;
        for (int q = 0; q < kQubits; ++q) {
            layer.slots.push_back({q + 1, {q}});
        }
        block.layers.push_back(std::move(layer));
        s.blocks.push_back(std::move(block));
    }
    spec.layout = std::move(s);
    spec.validate();
    return spec;
}

std::vector<EncodingSpec> variable_encodings(const AnsatzSpec &spec) {
    if (const auto *p = std::get_if<ParallelLayout>(&spec.layout)) {
        return p->encodings;
    }
    std::vector<std::vector<std::int64_t>> weights(static_cast<std::size_t>(spec.num_vars));
    for (const auto &block : std::get<SerialLayout>(spec.layout).blocks) {
        for (const auto &layer : block.layers) {
            for (const auto &slot : layer.slots) {
                for (const int f : slot.features) {
                    weights[static_cast<std::size_t>(f)].push_back(block.weight);
                }
            }
        }
    }
    std::vector<EncodingSpec> out;
    out.reserve(weights.size());
    for (auto &w : weights) {
        out.emplace_back(std::move(w));
    }
    return out;
}

std::size_t param_count(const AnsatzSpec &spec) {
    return static_cast<std::size_t>(spec.trainable_modules()) *
           static_cast<std::size_t>(spec.layers) *
           static_cast<std::size_t>(spec.total_qubits()) *
           static_cast<std::size_t>(params_per_rotation(spec.rotation));
}

namespace {

constexpr const char *kVersion = "ansatz-v1";

std::string rotation_name(RotationKind k) { return k == RotationKind::YZ ? "yz" : "rot"; }
std::string entangler_name(Entangler e) { return e == Entangler::Chain ? "chain" : "ring"; }

RotationKind parse_rotation(const std::string &s) {
    if (s == "yz") {
        return RotationKind::YZ;
    }
    if (s == "rot") {
        return RotationKind::Rot;
    }
    throw ParseError("ansatz: rotation must be 'yz' or 'rot'");
}

Entangler parse_entangler(const std::string &s) {
    if (s == "chain") {
        return Entangler::Chain;
    }
    if (s == "ring") {
        return Entangler::Ring;
    }
    throw ParseError("ansatz: entangler must be 'chain' or 'ring'");
}

} // namespace

json to_json(const AnsatzSpec &spec) {
    json doc;
    doc["version"] = kVersion;
    doc["num_vars"] = spec.num_vars;
    doc["layers"] = spec.layers;
    doc["rotation"] = rotation_name(spec.rotation);
    doc["entangler"] = entangler_name(spec.entangler);
    doc["measured_qubit"] = spec.measured_qubit;
    json layout;
    if (const auto *p = std::get_if<ParallelLayout>(&spec.layout)) {
        layout["kind"] = "parallel";
        layout["qubits_per_var"] = p->qubits_per_var;
        layout["encodings"] = json::array();
        for (const auto &enc : p->encodings) {
            layout["encodings"].push_back(enc.weights());
        }
    } else {
        const auto &s = std::get<SerialLayout>(spec.layout);
        layout["kind"] = "serial";
        layout["n_qubits"] = s.n_qubits;
        layout["blocks"] = json::array();
        for (const auto &block : s.blocks) {
            json b;
            b["weight"] = block.weight;
            b["layers"] = json::array();
            for (const auto &layer : block.layers) {
                json slots = json::array();
                for (const auto &slot : layer.slots) {
                    slots.push_back({{"qubit", slot.qubit}, {"features", slot.features}});
                }
                b["layers"].push_back(std::move(slots));
            }
            layout["blocks"].push_back(std::move(b));
        }
    }
    doc["layout"] = std::move(layout);
    return doc;
}

AnsatzSpec ansatz_from_json(const json &doc) {
    using namespace jsonutil;
    constexpr std::string_view where = "ansatz";
    require_keys_within(doc,
                        {"version", "num_vars", "layers", "rotation", "entangler",
                         "measured_qubit", "layout"},
                        where);
    require_version(doc, kVersion);
    AnsatzSpec spec;
    spec.num_vars = get<int>(doc, "num_vars", where);
    spec.layers = get<int>(doc, "layers", where);
    spec.rotation = parse_rotation(get_or<std::string>(doc, "rotation", "yz", where));
    spec.entangler = parse_entangler(get_or<std::string>(doc, "entangler", "chain", where));
    spec.measured_qubit = get_or<int>(doc, "measured_qubit", 0, where);
    const json layout = get<json>(doc, "layout", where);
    const auto kind = get<std::string>(layout, "kind", "ansatz.layout");
    if (kind == "parallel") {
        require_keys_within(layout, {"kind", "qubits_per_var", "encodings"}, "ansatz.layout");
        ParallelLayout p;
        p.qubits_per_var = get<int>(layout, "qubits_per_var", "ansatz.layout");
        for (const auto &w :
             get<std::vector<std::vector<std::int64_t>>>(layout, "encodings", "ansatz.layout")) {
            p.encodings.emplace_back(w);
        }
        spec.layout = std::move(p);
    } else if (kind == "serial") {
        require_keys_within(layout, {"kind", "n_qubits", "blocks"}, "ansatz.layout");
        SerialLayout s;
        s.n_qubits = get<int>(layout, "n_qubits", "ansatz.layout");
        for (const auto &b : get<json>(layout, "blocks", "ansatz.layout")) {
            require_keys_within(b, {"weight", "layers"}, "ansatz.block");
            ReuploadBlock block;
            block.weight = get<std::int64_t>(b, "weight", "ansatz.block");
            for (const auto &l : get<json>(b, "layers", "ansatz.block")) {
                EncodingLayer layer;
                for (const auto &slot : l) {
                    require_keys_within(slot, {"qubit", "features"}, "ansatz.slot");
                    layer.slots.push_back({get<int>(slot, "qubit", "ansatz.slot"),
                                           get<std::vector<int>>(slot, "features",
                                                                 "ansatz.slot")});
                }
                block.layers.push_back(std::move(layer));
            }
            s.blocks.push_back(std::move(block));
        }
        spec.layout = std::move(s);
    } else {
        throw ParseError("ansatz.layout: kind must be 'parallel' or 'serial'");
    }
    spec.validate();
    return spec;
}

} // namespace fourierqml
