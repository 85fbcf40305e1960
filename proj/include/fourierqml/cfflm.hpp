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
 * Classical Fourier-featured linear models f(x) = c . phi(x).
 *
 * Per-variable feature column for degree d:
 *   (1, sqrt2 cos x, sqrt2 sin x, ..., sqrt2 cos dx, sqrt2 sin dx)
 * so index 0 is the constant, odd indices cosines, even indices sines.
 * Several variables use the row-major tensor product (variable 1 slowest),
 * the same layout as coefficient_vector() for circuits.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fourierqml/rng.hpp"

namespace fourierqml {

/// Largest feature dimension a FeatureMap will materialize.
inline constexpr std::size_t kMaxFeatureDim = 10'000'000;

struct FeatureMap {
    int num_vars = 1;
    int degree = 1;
    /// Keep only the first `truncate` components of the flattened column.
    std::optional<std::size_t> truncate;

    [[nodiscard]] std::size_t per_variable() const {
        return 2 * static_cast<std::size_t>(degree) + 1;
    }
    /// K^M, ignoring truncation.
    [[nodiscard]] std::size_t full_dimension() const;
    [[nodiscard]] std::size_t dimension() const;
    void validate() const;

    bool operator==(const FeatureMap &) const = default;
};

std::vector<double> feature_map(std::span<const double> x, const FeatureMap &fm);

/// Writes phi(x) into `out`, which must hold fm.dimension() values.
void feature_map_into(std::span<const double> x, const FeatureMap &fm, std::span<double> out);

/// Row j holds phi(inputs[j]). Rows are computed in parallel.
Eigen::MatrixXd feature_matrix(const std::vector<std::vector<double>> &inputs,
                               const FeatureMap &fm);

/// Either fully parametrized (params = c) or projected, where
/// f(x) = params . (P phi(x)) for a fixed d~ x K matrix P.
class ClassicalModel {
  public:
    static ClassicalModel full(FeatureMap fm, std::vector<double> c);
    static ClassicalModel projected(FeatureMap fm, Eigen::MatrixXd projection,
                                    std::vector<double> reduced);

    [[nodiscard]] const FeatureMap &feature_map() const { return fm_; }
    [[nodiscard]] bool is_projected() const { return projection_.has_value(); }
    [[nodiscard]] const Eigen::MatrixXd &projection() const;
    [[nodiscard]] std::size_t num_params() const { return params_.size(); }
    [[nodiscard]] std::span<const double> params() const { return params_; }
    void set_params(std::vector<double> params);

    /// The vector the model is linear in: phi(x), or P phi(x).
    [[nodiscard]] std::vector<double> model_features(std::span<const double> x) const;
    /// Effective c in the unprojected basis (P^T c~ when projected).
    [[nodiscard]] std::vector<double> effective_coefficients() const;

  private:
    ClassicalModel(FeatureMap fm, std::optional<Eigen::MatrixXd> projection,
                   std::vector<double> params);

    FeatureMap fm_;
    std::optional<Eigen::MatrixXd> projection_;
    std::vector<double> params_;
};

double evaluate_classical(const ClassicalModel &model, std::span<const double> x);

/// Gradient of (f(x) - y)^2 / 2 with respect to the model parameters.
std::vector<double> gradient_classical(const ClassicalModel &model, std::span<const double> x,
                                       double y);

struct RandomProjection {
    /// d~ x K, Gaussian entries scaled by d~^(-1/2).
    Eigen::MatrixXd matrix;
    /// One projected column per input feature vector.
    Eigen::MatrixXd projected;
    /// Suggested minimum ceil(8 ln|X| / eps^2).
    std::size_t suggested_dim = 0;
    /// Set when the requested dimension is below suggested_dim.
    std::optional<std::string> warning;
};

/// Features are given as columns of a K x |X| matrix.
RandomProjection random_projection(const Eigen::MatrixXd &features, std::size_t reduced_dim,
                                   double epsilon, Rng &rng);

/// |(|M u - M v|^2 / |u - v|^2) - 1|, or 0 when u == v.
double pair_distortion(const Eigen::MatrixXd &matrix, const Eigen::VectorXd &u,
                       const Eigen::VectorXd &v);

struct PcaProjection {
    /// K x d~ with orthonormal columns, leading eigenvectors of Sigma.
    Eigen::MatrixXd basis;
    /// All eigenvalues of Sigma, descending.
    Eigen::VectorXd eigenvalues;
    /// d~ x |X| coordinates B^T phi.
    Eigen::MatrixXd projected;
    /// tr(Sigma) - tr(Sigma B B^T); equals K - tr(Sigma B B^T) for feature-map columns.
    double reconstruction_error = 0.0;
};

/// Sigma = (1/|X|) sum phi phi^T over the columns of `features`.
Eigen::MatrixXd second_moment(const Eigen::MatrixXd &features);

PcaProjection pca_projection(const Eigen::MatrixXd &features, std::size_t reduced_dim);

/// "cfflm-v1" document.
nlohmann::json to_json(const ClassicalModel &model);
ClassicalModel classical_from_json(const nlohmann::json &doc);

} // namespace fourierqml
