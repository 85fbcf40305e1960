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

#include "fourierqml/cfflm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fourierqml/errors.hpp"
#include "fourierqml/json_util.hpp"
#include "fourierqml/parallel.hpp"

namespace fourierqml {

using nlohmann::json;

std::size_t FeatureMap::full_dimension() const {
    double total = 1.0;
    std::size_t k = 1;
    for (int m = 0; m < num_vars; ++m) {
        total *= static_cast<double>(per_variable());
        if (total > static_cast<double>(kMaxFeatureDim)) {
            throw CapacityError("feature dimension K^M exceeds 10^7");
        }
        k *= per_variable();
    }
    return k;
}

std::size_t FeatureMap::dimension() const {
    const std::size_t full = full_dimension();
    return truncate ? std::min(*truncate, full) : full;
}

void FeatureMap::validate() const {
    if (num_vars < 1) {
        throw ArgumentError("feature map needs at least one variable");
    }
    if (degree < 0) {
        throw ArgumentError("feature map degree must be >= 0");
    }
    const std::size_t full = full_dimension();
    if (truncate && (*truncate < 1 || *truncate > full)) {
        throw ArgumentError("truncated dimension must lie in [1, K^M]");
    }
}

void feature_map_into(std::span<const double> x, const FeatureMap &fm, std::span<double> out) {
    fm.validate();
    if (x.size() != static_cast<std::size_t>(fm.num_vars)) {
        throw ArgumentError("feature_map: expected " + std::to_string(fm.num_vars) +
                            " inputs, got " + std::to_string(x.size()));
    }
    const std::size_t dim = fm.dimension();
    if (out.size() != dim) {
        throw ArgumentError("feature_map: output has the wrong size");
    }
    const std::size_t k = fm.per_variable();
    std::vector<std::vector<double>> columns(x.size(), std::vector<double>(k));
    for (std::size_t m = 0; m < x.size(); ++m) {
        auto &col = columns[m];
        col[0] = 1.0;
        for (int n = 1; n <= fm.degree; ++n) {
            const double angle = static_cast<double>(n) * x[m];
            col[static_cast<std::size_t>(2 * n - 1)] = std::numbers::sqrt2 * std::cos(angle);
            col[static_cast<std::size_t>(2 * n)] = std::numbers::sqrt2 * std::sin(angle);
        }
    }
    std::vector<std::size_t> index(x.size(), 0);
    for (std::size_t p = 0; p < dim; ++p) {
        double v = 1.0;
        for (std::size_t m = 0; m < x.size(); ++m) {
            v *= columns[m][index[m]];
        }
        out[p] = v;
        for (std::size_t m = x.size(); m-- > 0;) {
            if (++index[m] < k) {
                break;
            }
            index[m] = 0;
        }
    }
}

std::vector<double> feature_map(std::span<const double> x, const FeatureMap &fm) {
    std::vector<double> out(fm.dimension());
    feature_map_into(x, fm, out);
    return out;
}

Eigen::MatrixXd feature_matrix(const std::vector<std::vector<double>> &inputs,
                               const FeatureMap &fm) {
    const std::size_t dim = fm.dimension();
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(
        static_cast<Eigen::Index>(inputs.size()), static_cast<Eigen::Index>(dim));
    parallel_for(inputs.size(), [&](std::size_t j) {
        feature_map_into(inputs[j], fm,
                         std::span<double>(rows.row(static_cast<Eigen::Index>(j)).data(), dim));
    });
    return rows;
}

ClassicalModel::ClassicalModel(FeatureMap fm, std::optional<Eigen::MatrixXd> projection,
                               std::vector<double> params)
    : fm_(std::move(fm)), projection_(std::move(projection)), params_(std::move(params)) {}

ClassicalModel ClassicalModel::full(FeatureMap fm, std::vector<double> c) {
    fm.validate();
    if (c.size() != fm.dimension()) {
        throw ArgumentError("coefficient vector has length " + std::to_string(c.size()) +
                            ", feature dimension is " + std::to_string(fm.dimension()));
    }
    ClassicalModel model(std::move(fm), std::nullopt, {});
    model.set_params(std::move(c));
    return model;
}

ClassicalModel ClassicalModel::projected(FeatureMap fm, Eigen::MatrixXd projection,
                                         std::vector<double> reduced) {
    fm.validate();
    if (static_cast<std::size_t>(projection.cols()) != fm.dimension()) {
        throw ArgumentError("projection must have K^M columns");
    }
    if (static_cast<std::size_t>(projection.rows()) != reduced.size()) {
        throw ArgumentError("projection rows must match the reduced coefficient count");
    }
    if (!projection.allFinite()) {
        throw ArgumentError("projection contains non-finite entries");
    }
    ClassicalModel model(std::move(fm), std::move(projection), {});
    model.set_params(std::move(reduced));
    return model;
}

const Eigen::MatrixXd &ClassicalModel::projection() const {
    if (!projection_) {
        throw ArgumentError("model is fully parametrized");
    }
    return *projection_;
}

void ClassicalModel::set_params(std::vector<double> params) {
    if (!params_.empty() && params.size() != params_.size()) {
        throw ArgumentError("parameter count mismatch");
    }
    for (const double v : params) {
        if (!std::isfinite(v)) {
            throw ValidationError("model coefficients must be finite");
        }
    }
    params_ = std::move(params);
}

std::vector<double> ClassicalModel::model_features(std::span<const double> x) const {
    std::vector<double> phi = fourierqml::feature_map(x, fm_);
    if (!projection_) {
        return phi;
    }
    const Eigen::VectorXd reduced =
        *projection_ * Eigen::Map<const Eigen::VectorXd>(phi.data(),
                                                         static_cast<Eigen::Index>(phi.size()));
    return {reduced.data(), reduced.data() + reduced.size()};
}

std::vector<double> ClassicalModel::effective_coefficients() const {
    if (!projection_) {
        return params_;
    }
    const Eigen::VectorXd c =
        projection_->transpose() *
        Eigen::Map<const Eigen::VectorXd>(params_.data(), static_cast<Eigen::Index>(params_.size()));
    return {c.data(), c.data() + c.size()};
}

double evaluate_classical(const ClassicalModel &model, std::span<const double> x) {
    const auto features = model.model_features(x);
    const auto c = model.params();
    double total = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        total += c[i] * features[i];
    }
    return total;
}

std::vector<double> gradient_classical(const ClassicalModel &model, std::span<const double> x,
                                       double y) {
    auto features = model.model_features(x);
    const auto c = model.params();
    double f = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        f += c[i] * features[i];
    }
    const double residual = f - y;
    for (auto &v : features) {
        v *= residual;
    }
    return features;
}

RandomProjection random_projection(const Eigen::MatrixXd &features, std::size_t reduced_dim,
                                   double epsilon, Rng &rng) {
    if (reduced_dim < 1) {
        throw ArgumentError("random_projection: reduced dimension must be >= 1");
    }
    if (!(epsilon > 0.0)) {
        throw ArgumentError("random_projection: epsilon must be positive");
    }
    RandomProjection out;
    const auto rows = static_cast<Eigen::Index>(reduced_dim);
    out.matrix.resize(rows, features.rows());
    const double scale = 1.0 / std::sqrt(static_cast<double>(reduced_dim));
    // Fill column by column so the draw order is fixed.
    for (Eigen::Index j = 0; j < out.matrix.cols(); ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            out.matrix(i, j) = scale * rng.normal();
        }
    }
    out.projected = out.matrix * features;
    const double n_points = std::max<double>(2.0, static_cast<double>(features.cols()));
    out.suggested_dim =
        static_cast<std::size_t>(std::ceil(8.0 * std::log(n_points) / (epsilon * epsilon)));
    if (reduced_dim < out.suggested_dim) {
        out.warning = "reduced dimension " + std::to_string(reduced_dim) +
                      " is below 8 ln|X| / eps^2 = " + std::to_string(out.suggested_dim) +
                      "; pairwise distances may not be preserved";
    }
    return out;
}

double pair_distortion(const Eigen::MatrixXd &matrix, const Eigen::VectorXd &u,
                       const Eigen::VectorXd &v) {
    const Eigen::VectorXd diff = u - v;
    const double original = diff.squaredNorm();
    if (original == 0.0) {
        return 0.0;
    }
    return std::abs((matrix * diff).squaredNorm() / original - 1.0);
}

Eigen::MatrixXd second_moment(const Eigen::MatrixXd &features) {
    if (features.cols() == 0) {
        throw ArgumentError("second_moment: empty feature set");
    }
    Eigen::MatrixXd sigma = features * features.transpose();
    sigma /= static_cast<double>(features.cols());
    return 0.5 * (sigma + sigma.transpose());
}

PcaProjection pca_projection(const Eigen::MatrixXd &features, std::size_t reduced_dim) {
    const auto k = static_cast<std::size_t>(features.rows());
    if (reduced_dim < 1 || reduced_dim > k) {
        throw ArgumentError("pca_projection: reduced dimension must lie in [1, K]");
    }
    const Eigen::MatrixXd sigma = second_moment(features);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
    if (solver.info() != Eigen::Success) {
        throw Error("pca_projection: eigen-decomposition failed");
    }
    // Eigen returns ascending eigenvalues; reverse to descending.
    const auto n = static_cast<Eigen::Index>(k);
    PcaProjection out;
    out.eigenvalues = solver.eigenvalues().reverse();
    const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
    out.basis = vectors.leftCols(static_cast<Eigen::Index>(reduced_dim));
    for (Eigen::Index j = 0; j < out.basis.cols(); ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double v = out.basis(i, j);
            if (std::abs(v) > 1e-12) {
                if (v < 0.0) {
                    out.basis.col(j) *= -1.0;
                }
                break;
            }
        }
    }
    out.projected = out.basis.transpose() * features;
    out.reconstruction_error =
        sigma.trace() - (sigma * out.basis * out.basis.transpose()).trace();
    return out;
}

json to_json(const ClassicalModel &model) {
    const auto &fm = model.feature_map();
    json doc;
    doc["version"] = "cfflm-v1";
    doc["ordering"] = "const,cos1,sin1,...;row-major";
    doc["M"] = fm.num_vars;
    doc["d_F"] = fm.degree;
    if (fm.truncate) {
        doc["truncate"] = *fm.truncate;
    }
    const auto p = model.params();
    doc["coefficients"] = std::vector<double>(p.begin(), p.end());
    if (model.is_projected()) {
        const auto &proj = model.projection();
        json rows = json::array();
        for (Eigen::Index i = 0; i < proj.rows(); ++i) {
            std::vector<double> row(static_cast<std::size_t>(proj.cols()));
            for (Eigen::Index j = 0; j < proj.cols(); ++j) {
                row[static_cast<std::size_t>(j)] = proj(i, j);
            }
            rows.push_back(row);
        }
        doc["projection"] = rows;
    }
    return doc;
}

ClassicalModel classical_from_json(const json &doc) {
    using namespace jsonutil;
    constexpr const char *where = "cfflm";
    require_keys_within(doc, {"version", "ordering", "M", "d_F", "truncate", "coefficients",
                              "projection"},
                        where);
    require_version(doc, "cfflm-v1");
    FeatureMap fm;
    fm.num_vars = get<int>(doc, "M", where);
    fm.degree = get<int>(doc, "d_F", where);
    if (doc.contains("truncate")) {
        fm.truncate = get<std::size_t>(doc, "truncate", where);
    }
    auto coefficients = get<std::vector<double>>(doc, "coefficients", where);
    if (!doc.contains("projection")) {
        return ClassicalModel::full(fm, std::move(coefficients));
    }
    const auto rows = get<std::vector<std::vector<double>>>(doc, "projection", where);
    fm.validate();
    Eigen::MatrixXd proj(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(fm.dimension()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != fm.dimension()) {
            throw ParseError("cfflm: projection row " + std::to_string(i) +
                             " has the wrong length");
        }
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return ClassicalModel::projected(fm, std::move(proj), std::move(coefficients));
}

} // namespace fourierqml
