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

#include "fourierqml/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fourierqml/errors.hpp"

namespace fourierqml {

namespace {

constexpr std::int64_t kMaxWeightSum = std::int64_t{1} << 62;

// Largest N for which multiplicities (<= 3^N) fit in 64 bits.
constexpr std::size_t kMaxGatesForMultiplicity = 40;

FrequencySpectrum spectrum_dense(const std::vector<std::int64_t> &weights,
                                 std::int64_t total) {
    const auto width = static_cast<std::size_t>(2 * total + 1);
    std::vector<std::uint64_t> counts(width, 0);
    std::vector<std::uint64_t> next(width, 0);
    counts[static_cast<std::size_t>(total)] = 1;
    std::int64_t reach = 0;
    for (const std::int64_t beta : weights) {
        std::fill(next.begin(), next.end(), 0);
        for (std::int64_t f = -reach; f <= reach; ++f) {
            const std::uint64_t c = counts[static_cast<std::size_t>(f + total)];
            if (c == 0) {
                continue;
            }
            next[static_cast<std::size_t>(f - beta + total)] += c;
            next[static_cast<std::size_t>(f + total)] += c;
            next[static_cast<std::size_t>(f + beta + total)] += c;
        }
        reach += beta;
        counts.swap(next);
    }
    FrequencySpectrum out;
    for (std::size_t i = 0; i < width; ++i) {
        if (counts[i] != 0) {
            out.support.push_back(static_cast<std::int64_t>(i) - total);
            out.multiplicity.push_back(counts[i]);
        }
    }
    return out;
}

FrequencySpectrum spectrum_sparse(const std::vector<std::int64_t> &weights) {
    std::map<std::int64_t, std::uint64_t> counts{{0, 1}};
    for (const std::int64_t beta : weights) {
        std::map<std::int64_t, std::uint64_t> next;
        for (const auto &[f, c] : counts) {
            next[f - beta] += c;
            next[f] += c;
            next[f + beta] += c;
        }
        if (next.size() > kMaxSpectrumSize) {
            throw CapacityError("spectrum has more than 2^26 distinct frequencies");
        }
        counts.swap(next);
    }
    FrequencySpectrum out;
    out.support.reserve(counts.size());
    out.multiplicity.reserve(counts.size());
    for (const auto &[f, c] : counts) {
        out.support.push_back(f);
        out.multiplicity.push_back(c);
    }
    return out;
}

std::vector<std::int64_t> sorted_weights(const EncodingSpec &enc) {
    std::vector<std::int64_t> w = enc.weights();
    std::sort(w.begin(), w.end());
    return w;
}

} // namespace

EncodingSpec::EncodingSpec(std::vector<std::int64_t> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw ArgumentError("encoding needs at least one weight");
    }
    for (const auto w : weights_) {
        if (w < 1) {
            throw ArgumentError("encoding weights must be positive integers, got " +
                                std::to_string(w));
        }
    }
}

std::int64_t EncodingSpec::weight_sum() const {
    std::int64_t total = 0;
    for (const auto w : weights_) {
        if (w > kMaxWeightSum - total) {
            throw CapacityError("sum of encoding weights exceeds 2^62");
        }
        total += w;
    }
    return total;
}

bool FrequencySpectrum::contiguous() const {
    const auto d = max_frequency();
    return support.size() == static_cast<std::size_t>(2 * d + 1);
}

bool FrequencySpectrum::contains(std::int64_t frequency) const {
    return std::binary_search(support.begin(), support.end(), frequency);
}

std::uint64_t FrequencySpectrum::multiplicity_of(std::int64_t frequency) const {
    const auto it = std::lower_bound(support.begin(), support.end(), frequency);
    if (it == support.end() || *it != frequency) {
        return 0;
    }
    return multiplicity[static_cast<std::size_t>(it - support.begin())];
}

EncodingSpec exponential_weights(int n_gates) {
    if (n_gates < 1 || n_gates > 20) {
        throw ArgumentError("exponential encoding needs 1 <= N <= 20, got " +
                            std::to_string(n_gates));
    }
    std::vector<std::int64_t> w(static_cast<std::size_t>(n_gates));
    std::int64_t p = 1;
    for (auto &beta : w) {
        beta = p;
        p *= 3;
    }
    return EncodingSpec(std::move(w));
}

FrequencySpectrum spectrum(const EncodingSpec &enc) {
    if (enc.size() > kMaxGatesForMultiplicity) {
        throw CapacityError("spectrum: more than 40 encoding gates");
    }
    const std::int64_t total = enc.weight_sum();
    // Distinct values are bounded by both 3^N and the width of [-S, S].
    double bound = std::pow(3.0, static_cast<double>(enc.size()));
    bound = std::min(bound, 2.0 * static_cast<double>(total) + 1.0);
    if (bound > static_cast<double>(kMaxSpectrumSize)) {
        throw CapacityError("spectrum: more than 2^26 distinct frequencies");
    }
    if (total <= static_cast<std::int64_t>(kMaxSpectrumSize)) {
        return spectrum_dense(enc.weights(), total);
    }
    return spectrum_sparse(enc.weights());
}

bool is_maximally_nondegenerate(const EncodingSpec &enc) {
    const auto w = sorted_weights(enc);
    std::int64_t prefix = 0;
    bool separated = true;
    for (const auto beta : w) {
        if (beta > kMaxWeightSum - prefix) {
            throw CapacityError("sum of encoding weights exceeds 2^62");
        }
        // 2 * prefix < beta, written to avoid overflow.
        separated = separated && prefix < beta - prefix;
        prefix += beta;
    }
    if (separated) {
        return true;
    }
    // Two sign vectors s != s' collide iff some nonzero t = s - s' in
    // {-2..2}^N has sum t_n beta_n = 0. Meet in the middle over t.
    const std::size_t half = w.size() / 2;
    const auto half_sums = [&](std::size_t lo, std::size_t hi) {
        std::vector<std::int64_t> sums{0};
        for (std::size_t n = lo; n < hi; ++n) {
            std::vector<std::int64_t> next;
            next.reserve(sums.size() * 5);
            for (const auto s : sums) {
                for (std::int64_t t = -2; t <= 2; ++t) {
                    next.push_back(s + t * w[n]);
                }
            }
            sums.swap(next);
        }
        return sums;
    };
    auto left = half_sums(0, half);
    const auto right = half_sums(half, w.size());
    std::sort(left.begin(), left.end());
    // The pair t = 0 always contributes one solution.
    std::uint64_t solutions = 0;
    for (const auto r : right) {
        const auto [lo, hi] = std::equal_range(left.begin(), left.end(), -r);
        solutions += static_cast<std::uint64_t>(hi - lo);
        if (solutions > 1) {
            return false;
        }
    }
    return true;
}

bool is_dense(const EncodingSpec &enc) {
    // The reachable set after sorting stays an interval [-S, S] exactly when
    // each new weight is at most 2S + 1.
    const auto w = sorted_weights(enc);
    std::int64_t reach = 0;
    for (const auto beta : w) {
        if (beta > 2 * reach + 1) {
            return false;
        }
        if (beta > kMaxWeightSum - reach) {
            throw CapacityError("sum of encoding weights exceeds 2^62");
        }
        reach += beta;
    }
    return true;
}

FrequencyLattice product_spectrum(std::span<const EncodingSpec> per_variable) {
    if (per_variable.empty()) {
        throw ArgumentError("product_spectrum: need at least one variable");
    }
    FrequencyLattice lattice;
    std::uint64_t size = 1;
    bool fits = true;
    for (const auto &enc : per_variable) {
        lattice.per_variable.push_back(spectrum(enc));
        const std::uint64_t k = lattice.per_variable.back().distinct();
        lattice.log10_size += std::log10(static_cast<double>(k));
        if (fits && size > std::numeric_limits<std::uint64_t>::max() / k) {
            fits = false;
        }
        if (fits) {
            size *= k;
        }
    }
    if (fits) {
        lattice.size = size;
    }
    if (fits && size <= kMaxMaterializedLattice) {
        lattice.points.reserve(size);
        std::vector<std::size_t> index(per_variable.size(), 0);
        for (std::uint64_t p = 0; p < size; ++p) {
            std::vector<std::int64_t> point(per_variable.size());
            for (std::size_t m = 0; m < index.size(); ++m) {
                point[m] = lattice.per_variable[m].support[index[m]];
            }
            lattice.points.push_back(std::move(point));
            for (std::size_t m = index.size(); m-- > 0;) {
                if (++index[m] < lattice.per_variable[m].distinct()) {
                    break;
                }
                index[m] = 0;
            }
        }
    }
    return lattice;
}

FrequencyLattice product_spectrum(const EncodingSpec &enc, int num_vars) {
    if (num_vars < 1) {
        throw ArgumentError("product_spectrum: M must be >= 1");
    }
    const std::vector<EncodingSpec> specs(static_cast<std::size_t>(num_vars), enc);
    return product_spectrum(specs);
}

double chebyshev_reencode(double x) {
    if (!(std::abs(x) <= 1.0)) {
        throw DomainError("chebyshev_reencode: |x| must be <= 1");
    }
    return std::acos(x);
}

} // namespace fourierqml
