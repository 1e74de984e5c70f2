#ifndef CQASUM_LABEL_MODEL_HPP
#define CQASUM_LABEL_MODEL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/error.hpp"
#include "cqasum/hashing.hpp"
#include "cqasum/labels.hpp"
#include "cqasum/rules.hpp"

namespace cqasum {

// Generative model over rule votes. True label y ~ Categorical(class_prior);
// rule j fires with probability propensity[j]; a firing rule outputs y with
// probability accuracy[j] and each of the other four labels with probability
// (1 - accuracy[j]) / 4.
struct LabelModelParams {
    std::array<double, kNumPerspectives> class_prior{};
    std::vector<double> accuracy;
    std::vector<double> propensity;
    int epochs_run = 0;
    std::vector<std::string> rule_names;
};

struct ProbabilisticLabel {
    std::array<double, kNumPerspectives> posterior{};
    int hard_label = kAbstain; // -1 or 0..4

    bool abstained() const { return hard_label == kAbstain; }
    Perspective label() const {
        if (hard_label == kAbstain) throw_internal("hard label requested from abstaining row");
        return perspective_from_index(hard_label);
    }
};

struct LabelModelConfig {
    int epochs = 500;
    std::uint64_t seed = 42;
    // Early stop when the largest parameter change falls below this; 0 runs
    // all epochs.
    double convergence_tol = 1e-6;
};

struct LabelModelTraining {
    LabelModelParams params;
    // Observed-data log-likelihood after each epoch's update.
    std::vector<double> log_likelihood;
};

inline constexpr double kAccuracyClamp = 1e-4;

namespace detail {

inline double clamp_accuracy(double a) {
    return std::clamp(a, 1.0 / kNumPerspectives + kAccuracyClamp, 1.0 - kAccuracyClamp);
}

inline double clamp_propensity(double b) { return std::clamp(b, kAccuracyClamp, 1.0); }

inline std::array<double, kNumPerspectives> row_posterior(const LabelMatrix& m, std::size_t i,
                                                          const LabelModelParams& p) {
    std::array<double, kNumPerspectives> logp{};
    for (int y = 0; y < kNumPerspectives; ++y) logp[y] = std::log(p.class_prior[y]);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const int v = m.at(i, j);
        if (v == kAbstain) continue; // non-firing factor is label-independent
        const double a = p.accuracy[j];
        for (int y = 0; y < kNumPerspectives; ++y)
            logp[y] += std::log(v == y ? a : (1.0 - a) / 4.0);
    }
    const double mx = *std::max_element(logp.begin(), logp.end());
    std::array<double, kNumPerspectives> q{};
    double z = 0.0;
    for (int y = 0; y < kNumPerspectives; ++y) {
        q[y] = std::exp(logp[y] - mx);
        z += q[y];
    }
    for (int y = 0; y < kNumPerspectives; ++y) q[y] /= z;
    return q;
}

inline double observed_log_likelihood(const LabelMatrix& m, const LabelModelParams& p) {
    double ll = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::array<double, kNumPerspectives> logp{};
        for (int y = 0; y < kNumPerspectives; ++y) logp[y] = std::log(p.class_prior[y]);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const int v = m.at(i, j);
            if (v == kAbstain) {
                const double miss = 1.0 - p.propensity[j];
                // propensity may be exactly 1; then no row abstains for j and
                // this branch is unreachable, but guard anyway.
                const double term = miss > 0 ? std::log(miss) : -745.0;
                for (int y = 0; y < kNumPerspectives; ++y) logp[y] += term;
            } else {
                const double a = p.accuracy[j];
                const double fire = std::log(p.propensity[j]);
                for (int y = 0; y < kNumPerspectives; ++y)
                    logp[y] += fire + std::log(v == y ? a : (1.0 - a) / 4.0);
            }
        }
        const double mx = *std::max_element(logp.begin(), logp.end());
        double z = 0.0;
        for (int y = 0; y < kNumPerspectives; ++y) z += std::exp(logp[y] - mx);
        ll += mx + std::log(z);
    }
    return ll;
}

} // namespace detail

// Per row: most frequent non-abstain label, -1 when all rules abstain, ties
// to the lowest label index.
inline std::vector<int> majority_vote(const LabelMatrix& m) {
    std::vector<int> out;
    out.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::array<int, kNumPerspectives> counts{};
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const int v = m.at(i, j);
            if (v != kAbstain) ++counts[v];
        }
        int best = kAbstain;
        int best_count = 0;
        for (int y = 0; y < kNumPerspectives; ++y) {
            if (counts[y] > best_count) {
                best = y;
                best_count = counts[y];
            }
        }
        out.push_back(best);
    }
    return out;
}

// EM fit. Initialization: uniform prior, accuracy 0.7 plus a +-1e-3 jitter
// seeded by (seed, rule name) to break ties, propensity at the empirical
// firing rate. The jitter is keyed to the rule name rather than the column
// index so that permuting columns cannot change the fit.
inline LabelModelTraining train_label_model(const LabelMatrix& m, const LabelModelConfig& cfg) {
    const std::size_t n = m.rows();
    const std::size_t cols = m.cols();
    if (n == 0 || cols == 0) throw_data("label matrix is empty");

    bool any_vote = false;
    for (std::int8_t c : m.cells)
        if (c != kAbstain) { any_vote = true; break; }
    if (!any_vote) throw_data("no signal: label matrix is all-abstain");

    LabelModelParams p;
    p.rule_names = m.rule_names;
    p.class_prior.fill(1.0 / kNumPerspectives);
    p.accuracy.resize(cols);
    p.propensity.resize(cols);
    std::vector<std::size_t> fire_count(cols, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (m.at(i, j) != kAbstain) ++fire_count[j];
    for (std::size_t j = 0; j < cols; ++j) {
        SplitMix64 rng(cfg.seed ^ fnv1a64(m.rule_names[j]));
        p.accuracy[j] = detail::clamp_accuracy(0.7 + (rng.next_double() * 2.0 - 1.0) * 1e-3);
        p.propensity[j] =
            detail::clamp_propensity(static_cast<double>(fire_count[j]) / static_cast<double>(n));
    }

    LabelModelTraining result;
    std::vector<std::array<double, kNumPerspectives>> q(n);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // E-step
        for (std::size_t i = 0; i < n; ++i) q[i] = detail::row_posterior(m, i, p);

        // M-step
        LabelModelParams next = p;
        std::array<double, kNumPerspectives> prior_acc{};
        for (std::size_t i = 0; i < n; ++i)
            for (int y = 0; y < kNumPerspectives; ++y) prior_acc[y] += q[i][y];
        double prior_sum = 0.0;
        for (int y = 0; y < kNumPerspectives; ++y) {
            prior_acc[y] = std::max(prior_acc[y] / static_cast<double>(n), 1e-12);
            prior_sum += prior_acc[y];
        }
        for (int y = 0; y < kNumPerspectives; ++y) next.class_prior[y] = prior_acc[y] / prior_sum;

        std::vector<double> correct_mass(cols, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                const int v = m.at(i, j);
                if (v != kAbstain) correct_mass[j] += q[i][v];
            }
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (fire_count[j] > 0)
                next.accuracy[j] = detail::clamp_accuracy(correct_mass[j] /
                                                          static_cast<double>(fire_count[j]));
            // propensity stays at the (clamped) empirical firing rate
        }

        double delta = 0.0;
        for (int y = 0; y < kNumPerspectives; ++y)
            delta = std::max(delta, std::abs(next.class_prior[y] - p.class_prior[y]));
        for (std::size_t j = 0; j < cols; ++j) {
            delta = std::max(delta, std::abs(next.accuracy[j] - p.accuracy[j]));
            delta = std::max(delta, std::abs(next.propensity[j] - p.propensity[j]));
        }
        p = std::move(next);
        p.epochs_run = epoch;
        result.log_likelihood.push_back(detail::observed_log_likelihood(m, p));
        if (cfg.convergence_tol > 0 && delta < cfg.convergence_tol) break;
    }
    result.params = std::move(p);
    return result;
}

inline std::vector<ProbabilisticLabel> label_model_predict(const LabelModelParams& params,
                                                           const LabelMatrix& m) {
    if (params.accuracy.size() != m.cols())
        throw_data("label model has " + std::to_string(params.accuracy.size()) +
                   " rules but matrix has " + std::to_string(m.cols()) + " columns");
    std::vector<ProbabilisticLabel> out;
    out.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ProbabilisticLabel pl;
        pl.posterior = detail::row_posterior(m, i, params);
        if (m.row_all_abstain(i)) {
            pl.hard_label = kAbstain;
        } else {
            int best = 0;
            for (int y = 1; y < kNumPerspectives; ++y)
                if (pl.posterior[y] > pl.posterior[best]) best = y;
            pl.hard_label = best;
        }
        out.push_back(pl);
    }
    return out;
}

inline nlohmann::ordered_json label_model_to_json(const LabelModelParams& p) {
    nlohmann::ordered_json j;
    j["class_prior"] = p.class_prior;
    j["accuracy"] = p.accuracy;
    j["propensity"] = p.propensity;
    j["epochs_run"] = p.epochs_run;
    j["rule_names"] = p.rule_names;
    return j;
}

inline LabelModelParams label_model_from_json(const nlohmann::json& j) {
    LabelModelParams p;
    const auto prior = j.at("class_prior").get<std::vector<double>>();
    if (prior.size() != kNumPerspectives) throw_data("label model class_prior must have 5 entries");
    std::copy(prior.begin(), prior.end(), p.class_prior.begin());
    p.accuracy = j.at("accuracy").get<std::vector<double>>();
    p.propensity = j.at("propensity").get<std::vector<double>>();
    p.epochs_run = j.at("epochs_run").get<int>();
    p.rule_names = j.at("rule_names").get<std::vector<std::string>>();
    if (p.accuracy.size() != p.rule_names.size() || p.propensity.size() != p.rule_names.size())
        throw_data("label model parameter arrays disagree with rule names");
    return p;
}

} // namespace cqasum

#endif // CQASUM_LABEL_MODEL_HPP
