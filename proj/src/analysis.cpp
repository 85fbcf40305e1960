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

#include "fourierqml/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "fourierqml/errors.hpp"
#include "fourierqml/parallel.hpp"
#include "fourierqml/qfflm.hpp"
#include "fourierqml/statevector.hpp"

namespace fourierqml {

using nlohmann::json;

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) {
        throw CapacityError("resource count overflows 64 bits");
    }
    return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        throw CapacityError("resource count overflows 64 bits");
    }
    return a * b;
}

std::uint64_t checked_pow(std::uint64_t base, int exponent) {
    std::uint64_t out = 1;
    for (int i = 0; i < exponent; ++i) {
        out = checked_mul(out, base);
    }
    return out;
}

double variance_of(const std::vector<double> &samples, double mean) {
    std::vector<double> dev(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double delta = samples[i] - mean;
        dev[i] = delta * delta;
    }
    return pairwise_sum(dev) / static_cast<double>(samples.size() - 1);
}

json moments_json(const Moments &m) {
    return {{"mean", m.mean},
            {"se_mean", m.se_mean},
            {"variance", m.variance},
            {"mean_square", m.mean_square},
            {"se_mean_square", m.se_mean_square}};
}

// Dense-matrix helpers for the Haar-mode plateau experiment. Qubit 1 is the
// most significant bit; the measured qubit is the last one (bit 0).
using Vec = Eigen::VectorXcd;

double z_last(const Vec &v) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        total += ((i & 1) == 0 ? 1.0 : -1.0) * std::norm(v[i]);
    }
    return total;
}

// Re <a| Z_last |b>.
double z_last_cross(const Vec &a, const Vec &b) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        total += ((i & 1) == 0 ? 1.0 : -1.0) * (std::conj(a[i]) * b[i]).real();
    }
    return total;
}

// Pauli Y on the measured qubit.
Vec apply_y_last(const Vec &v) {
    Vec out(v.size());
    const Complex i_unit{0.0, 1.0};
    for (Eigen::Index i = 0; i < v.size(); i += 2) {
        out[i] = -i_unit * v[i + 1];
        out[i + 1] = i_unit * v[i];
    }
    return out;
}

// exp(-i theta Y / 2) on the measured qubit.
Vec rotate_y_last(const Vec &v, double theta) {
    return std::cos(theta / 2.0) * v - Complex{0.0, std::sin(theta / 2.0)} * apply_y_last(v);
}

// Derivative of rotate_y_last with respect to theta.
Vec rotate_y_last_derivative(const Vec &v, double theta) {
    return Complex{0.0, -0.5} * apply_y_last(rotate_y_last(v, theta));
}

// Diagonal of V(x) for the parallel exponential encoding.
Vec encoding_diagonal(int num_vars, int qubits_per_var, std::span<const double> x) {
    const int n = num_vars * qubits_per_var;
    const Eigen::Index dim = Eigen::Index{1} << n;
    Vec diag = Vec::Ones(dim);
    for (int q = 1; q <= n; ++q) {
        const int m = (q - 1) / qubits_per_var;
        const double beta = std::pow(3.0, (q - 1) % qubits_per_var);
        const double angle = beta * x[static_cast<std::size_t>(m)];
        const Eigen::Index bit = Eigen::Index{1} << (n - q);
        const Complex up = std::polar(1.0, -angle / 2.0);
        const Complex down = std::polar(1.0, angle / 2.0);
        for (Eigen::Index i = 0; i < dim; ++i) {
            diag[i] *= (i & bit) ? down : up;
        }
    }
    return diag;
}

struct TrialSample {
    double f = 0.0;
    double df[3] = {0.0, 0.0, 0.0};
    /// dL/df = 2 (f - y) with y ~ U[-1, 1].
    double loss_factor[3] = {0.0, 0.0, 0.0};
};

TrialSample haar_trial(int dim, const Vec &v_diag, bool gradients, Rng &rng) {
    TrialSample s;
    if (!gradients) {
        // W2 is Haar and independent of V W1 |0>, so W2 V W1 |0> is itself a
        // Haar-random state.
        s.f = z_last(haar_state(dim, rng));
        return s;
    }
    const Vec w1_0 = haar_state(dim, rng);
    const Eigen::MatrixXcd w2 = haar_unitary(dim, rng);
    s.f = z_last(w2 * v_diag.cwiseProduct(w1_0));

    const Vec zero = Vec::Unit(dim, 0);
    // Case I: W1 = Ua R(theta) Ub, gate between two Haar blocks.
    // Case II: W1 = Ua R(theta), gate acting directly on |0>.
    for (int which = 0; which < 2; ++which) {
        const Vec inner = which == 0 ? haar_state(dim, rng) : zero;
        const Eigen::MatrixXcd ua = haar_unitary(dim, rng);
        const Eigen::MatrixXcd w2c = haar_unitary(dim, rng);
        const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const Vec psi = w2c * v_diag.cwiseProduct(ua * rotate_y_last(inner, theta));
        const Vec dpsi = w2c * v_diag.cwiseProduct(ua * rotate_y_last_derivative(inner, theta));
        s.df[which] = 2.0 * z_last_cross(psi, dpsi);
        s.loss_factor[which] = 2.0 * (z_last(psi) - rng.uniform(-1.0, 1.0));
    }
    // Case III: W2 = R(theta) Uc, gate applied last.
    {
        const Vec w1c = haar_state(dim, rng);
        const Eigen::MatrixXcd uc = haar_unitary(dim, rng);
        const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const Vec chi = uc * v_diag.cwiseProduct(w1c);
        const Vec psi = rotate_y_last(chi, theta);
        const Vec dpsi = rotate_y_last_derivative(chi, theta);
        s.df[2] = 2.0 * z_last_cross(psi, dpsi);
        s.loss_factor[2] = 2.0 * (z_last(psi) - rng.uniform(-1.0, 1.0));
    }
    return s;
}

} // namespace

std::uint64_t cnots_per_layer(Entangler entangler, int n_qubits) {
    if (n_qubits < 2) {
        return 0;
    }
    if (entangler == Entangler::Chain) {
        return static_cast<std::uint64_t>(n_qubits - 1);
    }
    return static_cast<std::uint64_t>(n_qubits);
}

std::uint64_t count_gates(const AnsatzSpec &spec) {
    spec.validate();
    const auto n = static_cast<std::uint64_t>(spec.total_qubits());
    const auto per_layer =
        n * static_cast<std::uint64_t>(params_per_rotation(spec.rotation)) +
        cnots_per_layer(spec.entangler, spec.total_qubits());
    std::uint64_t total = static_cast<std::uint64_t>(spec.trainable_modules()) *
                          static_cast<std::uint64_t>(spec.layers) * per_layer;
    if (const auto *p = std::get_if<ParallelLayout>(&spec.layout)) {
        total += static_cast<std::uint64_t>(spec.num_vars) *
                 static_cast<std::uint64_t>(p->qubits_per_var);
    } else {
        for (const auto &block : std::get<SerialLayout>(spec.layout).blocks) {
            for (const auto &layer : block.layers) {
                for (const auto &slot : layer.slots) {
                    total += slot.features.size();
                }
            }
        }
    }
    return total;
}

std::uint64_t resrc_classical(std::uint64_t K, int M, std::uint64_t n_tp, std::uint64_t r_i,
                              std::uint64_t r_ii) {
    if (M < 0) {
        throw ArgumentError("resrc_classical: M must be >= 0");
    }
    std::uint64_t total = checked_mul(2, checked_pow(K, M));
    total = checked_add(total, r_i);
    total = checked_add(total, 1);
    return checked_add(total, checked_mul(n_tp, checked_add(r_ii, 1)));
}

std::uint64_t resrc_classical_full(std::uint64_t K, int M) {
    return resrc_classical(K, M, checked_pow(K, M), 0, 0);
}

std::uint64_t resrc_quantum(std::uint64_t n_gt, std::uint64_t n_tp, double eps_f,
                            double eps_df) {
    if (!(eps_f > 0.0 && eps_f <= 1.0) || !(eps_df > 0.0 && eps_df <= 1.0)) {
        throw ArgumentError("resrc_quantum: precisions must lie in (0, 1]");
    }
    const long double gt = n_gt;
    const long double value =
        gt / (static_cast<long double>(eps_f) * eps_f) + 1.0L +
        static_cast<long double>(n_tp) *
            (2.0L * gt / (static_cast<long double>(eps_df) * eps_df) + 3.0L);
    if (value > static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
        throw CapacityError("resource count overflows 64 bits");
    }
    // Round up, ignoring representation noise of exact integers.
    const long double nearest = std::round(value);
    if (std::abs(value - nearest) <= 1e-9L * std::max(1.0L, nearest)) {
        return static_cast<std::uint64_t>(nearest);
    }
    return static_cast<std::uint64_t>(std::ceil(value));
}

AdvantageResult advantage_criterion(std::uint64_t n_gt, double eps, double K, int M) {
    if (!(eps > 0.0)) {
        throw ArgumentError("advantage_criterion: eps must be positive");
    }
    if (!(K >= 1.0) || M < 0) {
        throw ArgumentError("advantage_criterion: need K >= 1 and M >= 0");
    }
    if (n_gt == 0) {
        throw ArgumentError("advantage_criterion: N_gt must be positive");
    }
    AdvantageResult out;
    out.log_threshold = std::log(eps) + 0.5 * static_cast<double>(M) * std::log(K);
    out.log_margin = out.log_threshold - std::log(static_cast<double>(n_gt));
    out.advantage = out.log_margin > 0.0;
    return out;
}

ResourceReport resource_report(std::uint64_t n_gt, std::uint64_t n_tp, double eps, double K,
                               int M) {
    ResourceReport r;
    r.n_gt = n_gt;
    r.n_tp = n_tp;
    r.eps = eps;
    r.K = K;
    r.M = M;
    r.criterion = advantage_criterion(n_gt, eps, K, M);
    r.resrc_q = static_cast<double>(resrc_quantum(n_gt, n_tp, eps, eps));
    const double lattice = std::pow(K, M);
    r.resrc_c = 3.0 * lattice + 1.0;
    r.advantage = r.resrc_q < r.resrc_c;
    // resrc_q(eps) = a / eps^2 + b.
    const double a = static_cast<double>(n_gt) * (1.0 + 2.0 * static_cast<double>(n_tp));
    const double b = 1.0 + 3.0 * static_cast<double>(n_tp);
    if (r.resrc_c > b) {
        const double crossing = std::sqrt(a / (r.resrc_c - b));
        if (crossing <= 1.0) {
            r.crossing_eps = crossing;
        }
    }
    return r;
}

ResourceReport resource_report(const AnsatzSpec &spec, double eps) {
    // K is the per-variable lattice size; anisotropic lattices use the
    // geometric mean so that K^M is still the lattice size.
    std::vector<double> sizes;
    for (const auto &enc : variable_encodings(spec)) {
        sizes.push_back(static_cast<double>(spectrum(enc).distinct()));
    }
    double K = sizes.front();
    if (std::any_of(sizes.begin(), sizes.end(), [&](double k) { return k != sizes.front(); })) {
        double log_lattice = 0.0;
        for (const double k : sizes) {
            log_lattice += std::log(k);
        }
        K = std::exp(log_lattice / spec.num_vars);
    }
    return resource_report(count_gates(spec), param_count(spec), eps, K, spec.num_vars);
}

json to_json(const ResourceReport &r) {
    json doc{{"N_gt", r.n_gt},
             {"N_tp", r.n_tp},
             {"eps", r.eps},
             {"K", r.K},
             {"M", r.M},
             {"resrc_Q", r.resrc_q},
             {"resrc_C", r.resrc_c},
             {"advantage", r.advantage},
             {"criterion_advantage", r.criterion.advantage},
             {"criterion_log_margin", r.criterion.log_margin},
             {"formula_resrc_Q", "N_gt/eps^2 + 1 + N_tp*(2*N_gt/eps^2 + 3)"},
             {"formula_resrc_C", "3*K^M + 1"},
             {"formula_criterion", "N_gt < eps*K^(M/2)"}};
    doc["crossing_eps"] = r.crossing_eps ? json(*r.crossing_eps) : json(nullptr);
    return doc;
}

const char *to_string(GradientCase c) {
    switch (c) {
    case GradientCase::I:
        return "I";
    case GradientCase::II:
        return "II";
    case GradientCase::III:
        return "III";
    }
    return "?";
}

VarianceBound variance_bounds(double d, GradientCase c) {
    if (!(d >= 2.0)) {
        throw ArgumentError("variance_bounds: d must be >= 2");
    }
    VarianceBound out;
    out.gamma_ii = 1.0 / (d + 1.0);
    out.mean_gamma_iii = -d / (d * d - 1.0);
    switch (c) {
    case GradientCase::I:
        out.bound = 8.0 * d * d / ((d + 1.0) * (d * d - 1.0));
        break;
    case GradientCase::II:
        out.bound = 8.0 * d / (d * d - 1.0);
        break;
    case GradientCase::III:
        out.bound = 16.0 / (d + 1.0);
        break;
    }
    return out;
}

double predicted_grad_square_case_i(double d) {
    return d * d / (2.0 * (d + 1.0) * (d * d - 1.0));
}

Moments sample_moments(const std::vector<double> &samples) {
    if (samples.size() < 2) {
        throw ArgumentError("sample_moments: need at least two samples");
    }
    const auto n = static_cast<double>(samples.size());
    Moments m;
    m.mean = pairwise_sum(samples) / n;
    m.variance = variance_of(samples, m.mean);
    m.se_mean = std::sqrt(m.variance / n);
    std::vector<double> squares(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        squares[i] = samples[i] * samples[i];
    }
    m.mean_square = pairwise_sum(squares) / n;
    m.se_mean_square = std::sqrt(variance_of(squares, m.mean_square) / n);
    return m;
}

PlateauReport plateau_stats(const PlateauConfig &cfg) {
    if (cfg.num_vars < 1 || cfg.qubits_per_var < 1) {
        throw ArgumentError("plateau: M and N must be >= 1");
    }
    const int n = cfg.num_vars * cfg.qubits_per_var;
    if (cfg.haar_mode && n > 10) {
        throw CapacityError("plateau: Haar mode supports at most 10 qubits");
    }
    if (cfg.trials < 100) {
        throw ArgumentError("plateau: need at least 100 trials");
    }
    std::vector<double> x = cfg.x;
    if (x.empty()) {
        x.assign(static_cast<std::size_t>(cfg.num_vars), 0.0);
    }
    if (x.size() != static_cast<std::size_t>(cfg.num_vars)) {
        throw ArgumentError("plateau: x must have M entries");
    }

    PlateauReport report;
    report.num_vars = cfg.num_vars;
    report.qubits_per_var = cfg.qubits_per_var;
    report.d = std::ldexp(1.0, n);
    report.trials = cfg.trials;
    report.haar_mode = cfg.haar_mode;
    report.predicted_f2 = 1.0 / (report.d + 1.0);

    const int dim = 1 << n;
    const bool want_grad = cfg.gradients && (!cfg.haar_mode || dim <= cfg.max_gradient_dim);
    std::vector<TrialSample> samples(cfg.trials);

    std::array<std::size_t, 3> param_index{0, 0, 0};
    if (cfg.haar_mode) {
        const Vec v_diag = encoding_diagonal(cfg.num_vars, cfg.qubits_per_var, x);
        parallel_for(cfg.trials, [&](std::size_t t) {
            Rng rng = Rng::derive(cfg.seed, t);
            samples[t] = haar_trial(dim, v_diag, want_grad, rng);
        });
    } else {
        const AnsatzSpec spec =
            make_parallel_exponential(cfg.num_vars, cfg.qubits_per_var, cfg.layers);
        const Circuit circuit(spec);
        std::vector<std::size_t> trainable;
        std::size_t last_ry = 0;
        for (const auto &op : circuit.ops()) {
            if (op.kind == Circuit::OpKind::TrainRZ || op.kind == Circuit::OpKind::TrainRY) {
                trainable.push_back(static_cast<std::size_t>(op.index));
            }
            if (op.kind == Circuit::OpKind::TrainRY) {
                last_ry = static_cast<std::size_t>(op.index);
            }
        }
        if (trainable.empty()) {
            throw ArgumentError("plateau: circuit mode needs at least one layer");
        }
        // The closing RZ gates commute with the Z readout on the measured
        // qubit, so Case III uses the last RY rotation instead.
        param_index = {trainable[trainable.size() / 2], trainable.front(), last_ry};
        parallel_for(cfg.trials, [&](std::size_t t) {
            Rng rng = Rng::derive(cfg.seed, t);
            const auto theta = random_parameters(spec, rng);
            TrialSample s;
            if (want_grad) {
                const auto grad = circuit.gradient(theta, x, &s.f);
                for (int c = 0; c < 3; ++c) {
                    s.df[c] = grad[param_index[static_cast<std::size_t>(c)]];
                    s.loss_factor[c] = 2.0 * (s.f - rng.uniform(-1.0, 1.0));
                }
            } else {
                s.f = circuit.evaluate(theta, x);
            }
            samples[t] = s;
        });
    }

    std::vector<double> f(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        f[t] = samples[t].f;
    }
    report.f = sample_moments(f);
    report.z_mean = report.f.se_mean > 0.0 ? report.f.mean / report.f.se_mean : 0.0;
    report.z_f2 = report.f.se_mean_square > 0.0
                      ? (report.f.mean_square - report.predicted_f2) / report.f.se_mean_square
                      : 0.0;

    if (want_grad) {
        const GradientCase cases[3] = {GradientCase::I, GradientCase::II, GradientCase::III};
        for (int c = 0; c < 3; ++c) {
            std::vector<double> df(cfg.trials);
            std::vector<double> dl(cfg.trials);
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                df[t] = samples[t].df[c];
                dl[t] = samples[t].loss_factor[c] * samples[t].df[c];
            }
            GradientStats g;
            g.which = cases[c];
            if (!cfg.haar_mode) {
                g.param_index = param_index[static_cast<std::size_t>(c)];
            }
            g.f_grad = sample_moments(df);
            g.loss_grad = sample_moments(dl);
            g.bound = variance_bounds(report.d, cases[c]).bound;
            report.gradients.push_back(g);
        }
    }
    return report;
}

json to_json(const PlateauReport &r) {
    json doc{{"M", r.num_vars},
             {"N", r.qubits_per_var},
             {"d", r.d},
             {"trials", r.trials},
             {"haar_mode", r.haar_mode},
             {"f", moments_json(r.f)},
             {"predicted_f2", r.predicted_f2},
             {"z_mean", r.z_mean},
             {"z_f2", r.z_f2}};
    json grads = json::array();
    for (const auto &g : r.gradients) {
        json item{{"case", to_string(g.which)},
                  {"loss_grad", moments_json(g.loss_grad)},
                  {"f_grad", moments_json(g.f_grad)},
                  {"bound", g.bound}};
        if (g.param_index) {
            item["param_index"] = *g.param_index;
        }
        grads.push_back(item);
    }
    doc["gradients"] = grads;
    return doc;
}

DecayFit fit_decay(const std::vector<double> &qubits, const std::vector<double> &values) {
    if (qubits.size() != values.size() || qubits.size() < 2) {
        throw ArgumentError("fit_decay: need at least two matching points");
    }
    const auto n = static_cast<double>(qubits.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (!(values[i] > 0.0)) {
            throw DomainError("fit_decay: values must be positive");
        }
        mx += qubits[i];
        my += std::log(values[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        sxy += (qubits[i] - mx) * (std::log(values[i]) - my);
        sxx += (qubits[i] - mx) * (qubits[i] - mx);
    }
    if (sxx == 0.0) {
        throw ArgumentError("fit_decay: qubit counts must not all be equal");
    }
    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.alpha = std::exp(-fit.slope);
    return fit;
}

double bicone_gauge(std::span<const double> c) {
    if (c.size() != 3) {
        throw ArgumentError("bicone: expected 3 coefficients");
    }
    for (const double v : c) {
        if (!std::isfinite(v)) {
            throw ArgumentError("bicone: coefficients must be finite");
        }
    }
    return std::abs(c[0]) + std::sqrt(2.0 * (c[1] * c[1] + c[2] * c[2]));
}

bool bicone_contains(std::span<const double> c) { return bicone_gauge(c) <= 1.0 + 1e-12; }

MembershipGrid::MembershipGrid(FeatureMap fm, int points_per_var)
    : fm_(std::move(fm)), points_(points_per_var) {
    fm_.validate();
    if (points_ < 8 * fm_.degree || points_ < 1) {
        throw ArgumentError("membership grid needs at least 8 d_F points per variable");
    }
    const std::size_t dim = fm_.dimension();
    const double n_points = std::pow(static_cast<double>(points_), fm_.num_vars);
    if (n_points * static_cast<double>(dim) > 1e8) {
        throw CapacityError("membership grid exceeds 10^8 feature values");
    }
    const auto total = static_cast<std::size_t>(n_points);
    table_.resize(total * dim);
    std::vector<double> x(static_cast<std::size_t>(fm_.num_vars));
    std::vector<int> index(x.size(), 0);
    for (std::size_t p = 0; p < total; ++p) {
        for (std::size_t m = 0; m < x.size(); ++m) {
            x[m] = detail::grid_point(index[m], points_);
        }
        feature_map_into(x, fm_, std::span<double>(table_.data() + p * dim, dim));
        for (std::size_t m = x.size(); m-- > 0;) {
            if (++index[m] < points_) {
                break;
            }
            index[m] = 0;
        }
    }

    const double h = 2.0 * std::numbers::pi / points_;
    const std::size_t k = fm_.per_variable();
    curvature_.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t rest = i;
        double freq_sum = 0.0;
        double sup = 1.0;
        for (int m = fm_.num_vars; m-- > 0;) {
            const std::size_t component = rest % k;
            rest /= k;
            const auto freq = static_cast<double>((component + 1) / 2);
            if (freq > 0.0) {
                sup *= std::numbers::sqrt2;
            }
            freq_sum += freq;
        }
        const double reach = freq_sum * h / 2.0;
        curvature_[i] = 0.5 * sup * reach * reach;
    }
}

double MembershipGrid::slack(std::span<const double> c) const {
    if (c.size() != curvature_.size()) {
        throw ArgumentError("membership: coefficient vector has the wrong length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        total += std::abs(c[i]) * curvature_[i];
    }
    return total;
}

MembershipResult MembershipGrid::check(std::span<const double> c) const {
    MembershipResult out;
    out.slack = slack(c);
    const std::size_t dim = c.size();
    const std::size_t total = table_.size() / dim;
    double best = 0.0;
    for (std::size_t p = 0; p < total; ++p) {
        const double *row = table_.data() + p * dim;
        double f = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            f += c[i] * row[i];
        }
        best = std::max(best, std::abs(f));
    }
    out.max_abs = best;
    out.member = best <= 1.0 + 1e-6 + out.slack;
    return out;
}

MembershipResult numerical_membership(std::span<const double> c, const FeatureMap &fm,
                                      int points_per_var) {
    return MembershipGrid(fm, points_per_var).check(c);
}

} // namespace fourierqml
