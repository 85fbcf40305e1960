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

#include <cmath>
#include <numbers>

#include <catch2/catch_amalgamated.hpp>

#include "fourierqml/errors.hpp"
#include "fourierqml/statevector.hpp"
#include "support/oracles.hpp"

using namespace fourierqml;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd as_vector(const StateVector &s) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = s[i];
    }
    return v;
}

StateVector random_state(int n, Rng &rng) {
    std::vector<Complex> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &a : amps) {
        a = {rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(norm);
    }
    return StateVector::from_amplitudes(std::move(amps));
}

} // namespace

TEST_CASE("init_state prepares |0...0>", "[statevector]") {
    const auto one = init_state(1);
    REQUIRE(one.size() == 2);
    CHECK(one[0] == Complex{1.0, 0.0});
    CHECK(one[1] == Complex{0.0, 0.0});

    const auto two = init_state(2);
    REQUIRE(two.size() == 4);
    CHECK(two[0] == Complex{1.0, 0.0});
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(two[i] == Complex{0.0, 0.0});
    }

    CHECK_THROWS_AS(init_state(25), CapacityError);
    CHECK_THROWS_AS(init_state(0), CapacityError);
    CHECK_NOTHROW(init_state(kMaxQubits));
}

TEST_CASE("Single gates on basis states", "[statevector]") {
    SECTION("RY(pi/2) on |0> gives |+>") {
        const auto s = apply_gate(init_state(1), gates::RY{1, kPi / 2});
        CHECK_THAT(s[0].real(), WithinAbs(1.0 / std::numbers::sqrt2, 1e-15));
        CHECK_THAT(s[1].real(), WithinAbs(1.0 / std::numbers::sqrt2, 1e-15));
        CHECK_THAT(expectation_z(s, 1), WithinAbs(0.0, 1e-15));
    }
    SECTION("CNOT(1,2) maps |10> to |11>") {
        auto s = apply_gate(init_state(2), gates::RY{1, kPi});
        s = apply_gate(std::move(s), gates::CNOT{1, 2});
        CHECK_THAT(std::abs(s[3]), WithinAbs(1.0, 1e-15));
        CHECK_THAT(std::abs(s[2]), WithinAbs(0.0, 1e-15));
    }
    SECTION("RZ(theta) on |0> is a phase") {
        const double theta = 0.731;
        const auto s = apply_gate(init_state(1), gates::RZ{1, theta});
        CHECK_THAT(std::abs(s[0] - std::polar(1.0, -theta / 2)), WithinAbs(0.0, 1e-15));
        CHECK(s[1] == Complex{0.0, 0.0});
    }
    SECTION("Z expectations of |0> and |1>") {
        CHECK(expectation_z(init_state(1), 1) == 1.0);
        CHECK_THAT(expectation_z(apply_gate(init_state(1), gates::RY{1, kPi}), 1),
                   WithinAbs(-1.0, 1e-15));
    }
}

TEST_CASE("Qubit indices are validated", "[statevector]") {
    auto s = init_state(3);
    CHECK_THROWS_AS(s.apply_rz(0, 0.1), IndexError);
    CHECK_THROWS_AS(s.apply_ry(4, 0.1), IndexError);
    CHECK_THROWS_AS(s.apply_cnot(2, 2), IndexError);
    CHECK_THROWS_AS(s.expectation_z(5), IndexError);
    const std::vector<int> twice{1, 1};
    CHECK_THROWS_AS(s.apply_dense(Eigen::MatrixXcd::Identity(4, 4), twice), IndexError);
}

TEST_CASE("Dense gates must be unitary", "[statevector]") {
    auto s = init_state(2);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
    m(0, 0) = 1.1;
    const std::vector<int> target{1};
    CHECK_THROWS_AS(s.apply_dense(m, target), ValidationError);
    const std::vector<int> pair{1, 2};
    CHECK_THROWS_AS(s.apply_dense(Eigen::MatrixXcd::Identity(2, 2), pair), ArgumentError);
}

TEST_CASE("Kernels agree with explicit Kronecker matrices", "[statevector][property]") {
    Rng rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(4));
        auto state = random_state(n, rng);
        const Eigen::VectorXcd before = as_vector(state);
        const int q = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const double a = rng.uniform(-kPi, kPi);
        const double b = rng.uniform(-kPi, kPi);
        const double c = rng.uniform(-kPi, kPi);
        Eigen::MatrixXcd u;
        switch (rng.below(n > 1 ? 5 : 4)) {
        case 0:
            state.apply(gates::RZ{q, a});
            u = oracle::embed(oracle::rz(a), q, n);
            break;
        case 1:
            state.apply(gates::RY{q, a});
            u = oracle::embed(oracle::ry(a), q, n);
            break;
        case 2:
            state.apply(gates::Rot{q, a, b, c});
            u = oracle::embed(oracle::rz(a) * oracle::ry(b) * oracle::rz(c), q, n);
            break;
        case 3: {
            Rng local = Rng::derive(99, static_cast<std::uint64_t>(trial));
            const auto h = haar_unitary(2, local);
            state.apply(gates::DenseUnitary{h, {q}});
            u = oracle::embed(h, q, n);
            break;
        }
        default: {
            int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            while (t == q) {
                t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            }
            state.apply(gates::CNOT{q, t});
            u = oracle::cnot(q, t, n);
            break;
        }
        }
        const Eigen::VectorXcd expected = u * before;
        const Eigen::VectorXcd got = as_vector(state);
        REQUIRE((got - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Two-qubit dense gates follow the target order", "[statevector]") {
    Rng rng(8);
    const auto h = haar_unitary(4, rng);
    auto state = random_state(3, rng);
    const Eigen::VectorXcd before = as_vector(state);
    const std::vector<int> targets{3, 1};
    state.apply_dense(h, targets);
    // Reference: permute so that qubit 3 is the leading factor, apply h on the
    // leading two qubits, then permute back.
    Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(8);
    for (int out = 0; out < 8; ++out) {
        for (int in = 0; in < 8; ++in) {
            const int q2_out = (out >> 1) & 1;
            const int q2_in = (in >> 1) & 1;
            if (q2_out != q2_in) {
                continue;
            }
            const int row = ((out & 1) << 1) | ((out >> 2) & 1);
            const int col = ((in & 1) << 1) | ((in >> 2) & 1);
            expected[out] += h(row, col) * before[in];
        }
    }
    CHECK((as_vector(state) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Rot is RZ(phi) RY(theta) RZ(omega)", "[statevector]") {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        auto a = random_state(2, rng);
        auto b = a;
        const double phi = rng.uniform(-kPi, kPi);
        const double theta = rng.uniform(-kPi, kPi);
        const double omega = rng.uniform(-kPi, kPi);
        a.apply_rot(2, phi, theta, omega);
        b.apply_rz(2, omega);
        b.apply_ry(2, theta);
        b.apply_rz(2, phi);
        CHECK((as_vector(a) - as_vector(b)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("Norm is preserved over long random gate sequences", "[statevector][property]") {
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        auto s = init_state(n);
        for (int g = 0; g < 1000; ++g) {
            const int q = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            const int t = q % n + 1;
            switch (rng.below(4)) {
            case 0:
                s.apply_rz(q, rng.uniform(-kPi, kPi));
                break;
            case 1:
                s.apply_ry(q, rng.uniform(-kPi, kPi));
                break;
            case 2:
                s.apply_rot(q, rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi),
                            rng.uniform(-kPi, kPi));
                break;
            default:
                s.apply_cnot(q, t);
                break;
            }
        }
        CHECK(std::abs(1.0 - s.norm_squared()) < 1e-10);
    }
}

TEST_CASE("Shot sampling", "[statevector]") {
    Rng rng(3);
    CHECK(sample_expectation_z(init_state(1), 1, 1000, rng) == 1.0);
    const auto one = apply_gate(init_state(1), gates::RY{1, kPi});
    CHECK(sample_expectation_z(one, 1, 1, rng) == -1.0);
    CHECK_THROWS_AS(sample_expectation_z(one, 1, 0, rng), ArgumentError);

    const auto plus = apply_gate(init_state(1), gates::RY{1, kPi / 2});
    Rng big(11);
    // Standard error is 1e-3 at 10^6 shots; 5e-3 is five of them.
    CHECK(std::abs(sample_expectation_z(plus, 1, 1'000'000, big)) < 5e-3);

    Rng r1(42);
    Rng r2(42);
    CHECK(sample_expectation_z(plus, 1, 777, r1) == sample_expectation_z(plus, 1, 777, r2));
}

TEST_CASE("Haar unitaries", "[statevector][haar]") {
    Rng rng(2024);
    const auto scalar = haar_unitary(1, rng);
    CHECK_THAT(std::abs(scalar(0, 0)), WithinAbs(1.0, 1e-14));

    for (int dim : {2, 3, 8, 16}) {
        CHECK(unitarity_defect(haar_unitary(dim, rng)) < 1e-10);
    }

    // <|U_11|^2> = 1/d, Var = (d-1)/(d^2 (d+1)).
    constexpr int kSamples = 100'000;
    constexpr double d = 4.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int s = 0; s < kSamples; ++s) {
        const double p = std::norm(haar_unitary(4, rng)(0, 0));
        sum += p;
        sum_sq += p * p;
    }
    const double mean = sum / kSamples;
    const double se = std::sqrt((sum_sq / kSamples - mean * mean) / kSamples);
    CHECK(std::abs(mean - 1.0 / d) < 3.0 * se);
    // Fourth moment <|U_11|^4> = 2 / (d (d + 1)).
    CHECK_THAT(sum_sq / kSamples, WithinAbs(2.0 / (d * (d + 1.0)), 2e-3));
}

TEST_CASE("haar_state is the first column of haar_unitary", "[statevector][haar]") {
    Rng a(17);
    Rng b(17);
    const auto u = haar_unitary(8, a);
    const auto v = haar_state(8, b);
    CHECK((u.col(0) - v).cwiseAbs().maxCoeff() < 1e-12);
}
