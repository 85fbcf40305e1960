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
 * Resource accounting, the quantum-advantage criterion, Monte-Carlo
 * barren-plateau statistics and the K = 3 bicone membership test.
 *
 * All hidden constants in the resource formulas are set to 1:
 *   resrc_C = 2 K^M + R_I + 1 + N_tp (R_II + 1)
 *   resrc_Q = ceil(N_gt / eps_f^2 + 1 + N_tp (2 N_gt / eps_df^2 + 3))
 *   advantage criterion: N_gt < eps K^(M/2)
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fourierqml/ansatz.hpp"
#include "fourierqml/cfflm.hpp"
#include "fourierqml/rng.hpp"

namespace fourierqml {

/// Single-qubit rotation angles (Rot counts 3, YZ counts 2), CNOTs and
/// encoding angles of the circuit built from `spec`.
std::uint64_t count_gates(const AnsatzSpec &spec);

/// CNOTs in one entangling layer on n qubits.
std::uint64_t cnots_per_layer(Entangler entangler, int n_qubits);

/// Throws CapacityError when the result does not fit in 64 bits.
std::uint64_t resrc_classical(std::uint64_t K, int M, std::uint64_t n_tp, std::uint64_t r_i,
                              std::uint64_t r_ii);

/// Fully parametrized CFFLM: N_tp = K^M, R_I = R_II = 0, giving 3 K^M + 1.
std::uint64_t resrc_classical_full(std::uint64_t K, int M);

std::uint64_t resrc_quantum(std::uint64_t n_gt, std::uint64_t n_tp, double eps_f,
                            double eps_df);

struct AdvantageResult {
    bool advantage = false;
    /// ln(eps K^(M/2)) - ln(N_gt); positive exactly when advantage holds.
    double log_margin = 0.0;
    double log_threshold = 0.0;
};

AdvantageResult advantage_criterion(std::uint64_t n_gt, double eps, double K, int M);

struct ResourceReport {
    std::uint64_t n_gt = 0;
    std::uint64_t n_tp = 0;
    double eps = 0.0;
    double K = 0.0;
    int M = 1;
    /// Operation counts; stored as doubles because K^M can be astronomical.
    double resrc_q = 0.0;
    double resrc_c = 0.0;
    /// resrc_q < resrc_c.
    bool advantage = false;
    /// eps at which resrc_q == resrc_c; empty when no eps in (0, 1] balances them.
    std::optional<double> crossing_eps;
    AdvantageResult criterion;
};

/// Quantum model with n_gt gates and n_tp parameters against a fully
/// parametrized CFFLM on K^M features, with eps_f = eps_df = eps.
ResourceReport resource_report(std::uint64_t n_gt, std::uint64_t n_tp, double eps, double K,
                               int M);
ResourceReport resource_report(const AnsatzSpec &spec, double eps);

nlohmann::json to_json(const ResourceReport &report);

enum class GradientCase { I, II, III };

const char *to_string(GradientCase c);

struct VarianceBound {
    double bound = 0.0;
    /// gamma_II = 1/(d+1) for a two-design inner block.
    double gamma_ii = 0.0;
    /// Average of gamma_III, -d/(d^2 - 1).
    double mean_gamma_iii = 0.0;
};

/// Upper bound on Var(dL/dtheta) for loss derivatives 2 (f - y) df with
/// |f - y| <= 2. Case I: 8d^2/((d+1)(d^2-1)), II: 8d/(d^2-1), III: 16/(d+1).
VarianceBound variance_bounds(double d, GradientCase c);

/// <(df)^2> for the differentiated gate sandwiched between two Haar blocks.
double predicted_grad_square_case_i(double d);

struct Moments {
    double mean = 0.0;
    double se_mean = 0.0;
    double variance = 0.0;
    double mean_square = 0.0;
    double se_mean_square = 0.0;
};

/// Sample moments with pairwise summation.
Moments sample_moments(const std::vector<double> &samples);

struct GradientStats {
    GradientCase which = GradientCase::I;
    /// Index of the differentiated parameter (circuit mode only).
    std::optional<std::size_t> param_index;
    /// Moments of dL/dtheta = 2 (f - y) df with y ~ U[-1, 1].
    Moments loss_grad;
    /// Moments of df.
    Moments f_grad;
    double bound = 0.0;
};

struct PlateauConfig {
    int num_vars = 1;
    int qubits_per_var = 1;
    /// Dense Haar W1, W2 when true, otherwise random angles in the layered ansatz.
    bool haar_mode = true;
    int layers = 1;
    std::size_t trials = 10'000;
    std::uint64_t seed = 0;
    /// Fixed input; empty means x = 0.
    std::vector<double> x;
    /// Gradient statistics need dense d x d unitaries in Haar mode, so they
    /// are skipped when d exceeds this.
    int max_gradient_dim = 64;
    bool gradients = true;
};

struct PlateauReport {
    int num_vars = 1;
    int qubits_per_var = 1;
    double d = 0.0;
    std::size_t trials = 0;
    bool haar_mode = true;
    Moments f;
    double predicted_f2 = 0.0;
    double z_mean = 0.0;
    double z_f2 = 0.0;
    std::vector<GradientStats> gradients;
};

PlateauReport plateau_stats(const PlateauConfig &cfg);

nlohmann::json to_json(const PlateauReport &report);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// exp(-slope): predicted 2 for Haar blocks.
    double alpha = 0.0;
};

/// Least-squares fit of log(values) against qubit counts.
DecayFit fit_decay(const std::vector<double> &qubits, const std::vector<double> &values);

/// |c1| + sqrt(2 (c2^2 + c3^2)) <= 1 + 1e-12.
bool bicone_contains(std::span<const double> c);

/// |c1| + sqrt(2 (c2^2 + c3^2)): the exact max of |c . phi(x)| for K = 3.
double bicone_gauge(std::span<const double> c);

struct MembershipResult {
    bool member = false;
    double max_abs = 0.0;
    /// Bound on how far the true max can exceed the grid max.
    double slack = 0.0;
};

/// Feature values on a tensor grid x_j = -pi + 2 pi j / G, reused across queries.
class MembershipGrid {
  public:
    /// `points_per_var` must be at least 8 d_F.
    MembershipGrid(FeatureMap fm, int points_per_var);

    [[nodiscard]] const FeatureMap &feature_map() const { return fm_; }
    [[nodiscard]] int points_per_var() const { return points_; }

    /// Member when the grid max is <= 1 + 1e-6 + slack.
    [[nodiscard]] MembershipResult check(std::span<const double> c) const;

    /// Second-order bound on max|f| - grid max|f|.
    [[nodiscard]] double slack(std::span<const double> c) const;

  private:
    FeatureMap fm_;
    int points_;
    /// grid points x feature dimension, row-major.
    std::vector<double> table_;
    /// Per component: sup |phi_i| * (sum_m |n_m| h / 2)^2 / 2.
    std::vector<double> curvature_;
};

MembershipResult numerical_membership(std::span<const double> c, const FeatureMap &fm,
                                      int points_per_var);

} // namespace fourierqml
