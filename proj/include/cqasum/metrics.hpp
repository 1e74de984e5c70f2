#ifndef CQASUM_METRICS_HPP
#define CQASUM_METRICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqasum/cascade.hpp"
#include "cqasum/corpus.hpp"
#include "cqasum/embedding.hpp"
#include "cqasum/error.hpp"
#include "cqasum/labels.hpp"
#include "cqasum/summarize.hpp"
#include "cqasum/text.hpp"

namespace cqasum {

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline double f1_of(double p, double r) { return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

inline PRF make_prf(double p, double r) { return {p, r, f1_of(p, r)}; }

// ---------------------------------------------------------------------------
// Task A: classification + span matching
// ---------------------------------------------------------------------------

// Per-class F1 over the 5-way confusion matrix; macro averages the classes
// present in gold, weighted weights them by gold support.
inline std::pair<double, double> classification_f1(const std::vector<Perspective>& pred,
                                                   const std::vector<Perspective>& gold) {
    if (pred.size() != gold.size()) throw_data("classification_f1: pred/gold length mismatch");
    if (pred.empty()) throw_data("classification_f1: empty input");
    std::array<std::array<std::size_t, 5>, 5> confusion{}; // [gold][pred]
    for (std::size_t i = 0; i < pred.size(); ++i)
        ++confusion[static_cast<std::size_t>(index_of(gold[i]))]
                   [static_cast<std::size_t>(index_of(pred[i]))];
    double macro_sum = 0.0, weighted_sum = 0.0;
    std::size_t present = 0, total_support = 0;
    for (std::size_t c = 0; c < 5; ++c) {
        std::size_t support = 0, predicted = 0;
        for (std::size_t k = 0; k < 5; ++k) {
            support += confusion[c][k];
            predicted += confusion[k][c];
        }
        if (support == 0) continue;
        const std::size_t tp = confusion[c][c];
        const double p = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
        const double r = static_cast<double>(tp) / static_cast<double>(support);
        const double f1 = f1_of(p, r);
        macro_sum += f1;
        weighted_sum += f1 * static_cast<double>(support);
        ++present;
        total_support += support;
    }
    return {macro_sum / static_cast<double>(present),
            weighted_sum / static_cast<double>(total_support)};
}

namespace detail {

struct StrictCounts {
    std::size_t tp = 0;
    std::size_t n_pred = 0;
    std::size_t n_gold = 0;
};

inline StrictCounts strict_counts(const std::vector<PerspectiveSpan>& pred,
                                  const std::vector<PerspectiveSpan>& gold) {
    auto key = [](const PerspectiveSpan& s) {
        return s.answer_id + '\x1f' + std::to_string(s.start) + '\x1f' + std::to_string(s.end) +
               '\x1f' + std::to_string(index_of(s.label));
    };
    std::map<std::string, std::size_t> bag;
    for (const auto& g : gold) ++bag[key(g)];
    StrictCounts c;
    c.n_pred = pred.size();
    c.n_gold = gold.size();
    for (const auto& p : pred) {
        auto it = bag.find(key(p));
        if (it != bag.end() && it->second > 0) {
            --it->second;
            ++c.tp;
        }
    }
    return c;
}

struct ProportionalSums {
    double pred_credit = 0.0;
    double gold_credit = 0.0;
    std::size_t n_pred = 0;
    std::size_t n_gold = 0;
};

inline std::size_t overlap_chars(const PerspectiveSpan& a, const PerspectiveSpan& b) {
    if (a.answer_id != b.answer_id || a.label != b.label) return 0;
    const std::size_t lo = std::max(a.start, b.start);
    const std::size_t hi = std::min(a.end, b.end);
    return hi > lo ? hi - lo : 0;
}

inline ProportionalSums proportional_sums(const std::vector<PerspectiveSpan>& pred,
                                          const std::vector<PerspectiveSpan>& gold) {
    ProportionalSums s;
    s.n_pred = pred.size();
    s.n_gold = gold.size();
    for (const auto& p : pred) {
        std::size_t best = 0;
        for (const auto& g : gold) best = std::max(best, overlap_chars(p, g));
        s.pred_credit += static_cast<double>(best) / static_cast<double>(p.end - p.start);
    }
    for (const auto& g : gold) {
        std::size_t best = 0;
        for (const auto& p : pred) best = std::max(best, overlap_chars(g, p));
        s.gold_credit += static_cast<double>(best) / static_cast<double>(g.end - g.start);
    }
    return s;
}

inline PRF prf_from_ratio(double p_num, std::size_t p_den, double r_num, std::size_t r_den) {
    if (p_den == 0 && r_den == 0) return {1.0, 1.0, 1.0};
    if (p_den == 0 || r_den == 0) return {0.0, 0.0, 0.0};
    return make_prf(p_num / static_cast<double>(p_den), r_num / static_cast<double>(r_den));
}

} // namespace detail

// Exact-tuple matching: a predicted span scores iff a gold span with the same
// (answer_id, start, end, label) is still unmatched.
inline PRF strict_matching(const std::vector<PerspectiveSpan>& pred,
                           const std::vector<PerspectiveSpan>& gold) {
    const auto c = detail::strict_counts(pred, gold);
    return detail::prf_from_ratio(static_cast<double>(c.tp), c.n_pred,
                                  static_cast<double>(c.tp), c.n_gold);
}

// Character-overlap matching: each span earns its best same-label,
// same-answer overlap fraction; precision averages over predictions, recall
// over gold.
inline PRF proportional_matching(const std::vector<PerspectiveSpan>& pred,
                                 const std::vector<PerspectiveSpan>& gold) {
    const auto s = detail::proportional_sums(pred, gold);
    return detail::prf_from_ratio(s.pred_credit, s.n_pred, s.gold_credit, s.n_gold);
}

// ---------------------------------------------------------------------------
// Task B: summary metrics (shared tokenizer: lowercase, punctuation split)
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> ngrams(const std::vector<std::string>& tokens, std::size_t n) {
    std::vector<std::string> out;
    if (tokens.size() < n) return out;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string g = tokens[i];
        for (std::size_t k = 1; k < n; ++k) {
            g.push_back('\x1f');
            g += tokens[i + k];
        }
        out.push_back(std::move(g));
    }
    return out;
}

inline std::size_t clipped_overlap(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
    std::map<std::string, std::size_t> counts;
    for (const auto& g : b) ++counts[g];
    std::size_t overlap = 0;
    for (const auto& g : a) {
        auto it = counts.find(g);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    return overlap;
}

inline std::size_t lcs_length(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

} // namespace detail

inline PRF rouge_n(const std::string& candidate, const std::string& reference, int n) {
    if (n < 1) throw_config("rouge_n: n must be >= 1");
    const auto cand = detail::ngrams(metric_tokenize(candidate), static_cast<std::size_t>(n));
    const auto ref = detail::ngrams(metric_tokenize(reference), static_cast<std::size_t>(n));
    if (cand.empty() && ref.empty()) return {1.0, 1.0, 1.0};
    if (cand.empty() || ref.empty()) return {0.0, 0.0, 0.0};
    const auto overlap = static_cast<double>(detail::clipped_overlap(cand, ref));
    return make_prf(overlap / static_cast<double>(cand.size()),
                    overlap / static_cast<double>(ref.size()));
}

inline PRF rouge_l(const std::string& candidate, const std::string& reference) {
    const auto cand = metric_tokenize(candidate);
    const auto ref = metric_tokenize(reference);
    if (cand.empty() && ref.empty()) return {1.0, 1.0, 1.0};
    if (cand.empty() || ref.empty()) return {0.0, 0.0, 0.0};
    const auto lcs = static_cast<double>(detail::lcs_length(cand, ref));
    return make_prf(lcs / static_cast<double>(cand.size()), lcs / static_cast<double>(ref.size()));
}

// Sentence-level BLEU-4 with add-one smoothing on orders >= 2 (the smoothed
// precision is (m+1)/(t+1), so a perfect match still scores exactly 1) and
// evaluation orders capped at the candidate length.
inline double bleu(const std::string& candidate, const std::string& reference) {
    const auto cand = metric_tokenize(candidate);
    const auto ref = metric_tokenize(reference);
    if (cand.empty()) return 0.0;
    const std::size_t max_n = std::min<std::size_t>(4, cand.size());
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= max_n; ++n) {
        const auto cg = detail::ngrams(cand, n);
        const auto rg = detail::ngrams(ref, n);
        const auto m = static_cast<double>(detail::clipped_overlap(cg, rg));
        const auto t = static_cast<double>(cg.size());
        double p;
        if (n == 1) {
            if (m == 0.0) return 0.0;
            p = m / t;
        } else {
            p = (m + 1.0) / (t + 1.0);
        }
        log_sum += std::log(p);
    }
    double score = std::exp(log_sum / static_cast<double>(max_n));
    if (cand.size() < ref.size())
        score *= std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
    return score;
}

// Exact-match METEOR: leftmost-greedy unigram alignment, F_mean = 10PR/(R+9P),
// fragmentation penalty 0.5*(chunks/m)^3.
inline double meteor(const std::string& candidate, const std::string& reference) {
    const auto cand = metric_tokenize(candidate);
    const auto ref = metric_tokenize(reference);
    if (cand.empty() || ref.empty()) return 0.0;
    std::vector<bool> used(ref.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // (cand idx, ref idx)
    for (std::size_t i = 0; i < cand.size(); ++i) {
        for (std::size_t j = 0; j < ref.size(); ++j) {
            if (!used[j] && ref[j] == cand[i]) {
                used[j] = true;
                pairs.emplace_back(i, j);
                break;
            }
        }
    }
    const auto m = static_cast<double>(pairs.size());
    if (pairs.empty()) return 0.0;
    const double p = m / static_cast<double>(cand.size());
    const double r = m / static_cast<double>(ref.size());
    const double f_mean = 10.0 * p * r / (r + 9.0 * p);
    std::size_t chunks = 1;
    for (std::size_t k = 1; k < pairs.size(); ++k) {
        if (pairs[k].first != pairs[k - 1].first + 1 || pairs[k].second != pairs[k - 1].second + 1)
            ++chunks;
    }
    const double frag = static_cast<double>(chunks) / m;
    const double penalty = 0.5 * frag * frag * frag;
    return f_mean * (1.0 - penalty);
}

// Greedy-max-cosine BERTScore over token embeddings. Equal tokens short-
// circuit to similarity 1 (same string embeds to the same vector), which
// keeps self-comparison at exactly 1.0; other similarities are cosines
// clamped to [0,1]. Each distinct token is embedded once.
inline PRF bertscore(const std::string& candidate, const std::string& reference,
                     EmbeddingBackend& backend) {
    const auto cand = metric_tokenize(candidate);
    const auto ref = metric_tokenize(reference);
    if (cand.empty() && ref.empty()) return {1.0, 1.0, 1.0};
    if (cand.empty() || ref.empty()) return {0.0, 0.0, 0.0};
    std::set<std::string> distinct(cand.begin(), cand.end());
    distinct.insert(ref.begin(), ref.end());
    std::vector<std::string> order(distinct.begin(), distinct.end());
    const auto vectors = embed_batch(order, backend);
    std::map<std::string, const EmbeddingVector*> table;
    for (std::size_t i = 0; i < order.size(); ++i) table[order[i]] = &vectors[i];
    auto side = [&](const std::vector<std::string>& from, const std::vector<std::string>& to) {
        double total = 0.0;
        for (const auto& ft : from) {
            double best = 0.0;
            for (const auto& tt : to) {
                if (ft == tt) {
                    best = 1.0;
                    break;
                }
                best = std::max(best, std::clamp(cosine(*table.at(ft), *table.at(tt)), 0.0, 1.0));
            }
            total += best;
        }
        return total / static_cast<double>(from.size());
    };
    return make_prf(side(cand, ref), side(ref, cand));
}

// ---------------------------------------------------------------------------
// Run-level evaluation and report
// ---------------------------------------------------------------------------

struct TaskAReport {
    double cls_macro_f1 = 0.0;
    double cls_weighted_f1 = 0.0;
    PRF strict;
    PRF proportional;
};

struct TaskBReport {
    double rouge1 = 0.0;
    double rouge2 = 0.0;
    double rougeL = 0.0;
    double bleu = 0.0;
    double meteor = 0.0;
    double bertscore = 0.0;
    std::map<std::string, double> factuality; // external-scorer hook, pass-through
};

inline constexpr std::array<const char*, 14> kMetricNames = {
    "Cls-MF1", "Cls-WF1", "SMP", "SMR", "SMF1", "PMP", "PMR",
    "PMF1",    "R1",      "R2",  "RL",  "BS",   "MET", "BLEU"};

inline std::array<double, 14> metric_values(const TaskAReport& a, const TaskBReport& b) {
    return {a.cls_macro_f1,     a.cls_weighted_f1,   a.strict.precision,
            a.strict.recall,    a.strict.f1,         a.proportional.precision,
            a.proportional.recall, a.proportional.f1, b.rouge1,
            b.rouge2,           b.rougeL,            b.bertscore,
            b.meteor,           b.bleu};
}

struct EvaluateConfig {
    // weight per Figure-3 metric name; unset names weigh 1. avg_score is the
    // weighted arithmetic mean over the 14 scalar fields.
    std::map<std::string, double> avg_weights;
    bool include_context = true; // must match the summarize stage's grouping
    std::map<std::string, double> factuality; // merged into task_b untouched
};

inline double weighted_avg(const std::array<double, 14>& values,
                           const std::map<std::string, double>& weights) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double w = 1.0;
        if (auto it = weights.find(kMetricNames[i]); it != weights.end()) w = it->second;
        if (w < 0.0) throw_config("avg_score weights must be >= 0");
        num += w * values[i];
        den += w;
    }
    if (den == 0.0) throw_config("avg_score weights sum to zero");
    return num / den;
}

struct ThreadReport {
    std::string thread_id;
    std::size_t sentences_evaluated = 0;
    std::size_t summary_pairs = 0;
    TaskAReport task_a;
    TaskBReport task_b;
    double avg_score = 0.0;
};

struct RunReport {
    TaskAReport task_a;
    TaskBReport task_b;
    double avg_score = 0.0;
    std::size_t threads_evaluated = 0;
    std::size_t sentences_evaluated = 0;
    std::size_t summary_pairs = 0;
    std::vector<ThreadReport> per_thread;
};

namespace detail {

// Sentence-aligned label pairs for one thread: a sentence participates only
// when both gold and predicted spans cover at least one of its characters.
inline void aligned_labels(const Thread& thread, const std::vector<PerspectiveSpan>& pred_spans,
                           std::vector<Perspective>& pred_out,
                           std::vector<Perspective>& gold_out) {
    if (!thread.gold) return;
    for (const auto& answer : thread.answers) {
        for (const auto& sentence : split_answer(answer)) {
            const auto gold = dominant_label(thread.gold->spans, answer.id, sentence.start,
                                             sentence.end);
            if (!gold) continue;
            const auto pred = dominant_label(pred_spans, answer.id, sentence.start, sentence.end);
            if (!pred) continue;
            gold_out.push_back(*gold);
            pred_out.push_back(*pred);
        }
    }
}

struct TaskBSums {
    double r1 = 0, r2 = 0, rl = 0, bl = 0, met = 0, bs = 0;
    std::size_t pairs = 0;

    void add(const std::string& candidate, const std::string& gold, EmbeddingBackend& backend) {
        r1 += rouge_n(candidate, gold, 1).f1;
        r2 += rouge_n(candidate, gold, 2).f1;
        rl += rouge_l(candidate, gold).f1;
        bl += bleu(candidate, gold);
        met += meteor(candidate, gold);
        bs += bertscore(candidate, gold, backend).f1;
        ++pairs;
    }

    TaskBReport mean() const {
        TaskBReport b;
        if (!pairs) return b;
        const auto n = static_cast<double>(pairs);
        b.rouge1 = r1 / n;
        b.rouge2 = r2 / n;
        b.rougeL = rl / n;
        b.bleu = bl / n;
        b.meteor = met / n;
        b.bertscore = bs / n;
        return b;
    }
};

} // namespace detail

// Evaluate predictions and summaries against gold. Every thread referenced by
// a prediction or summary must carry gold annotation; threads with gold are
// the evaluation set. Task B scores average over (thread, label) pairs that
// have a gold summary; a missing predicted summary scores as empty text.
inline RunReport evaluate_run(const std::vector<Thread>& threads,
                              const std::vector<PredictionRecord>& predictions,
                              const std::vector<SummarySet>& summaries,
                              EmbeddingBackend& backend, const EvaluateConfig& cfg = {}) {
    std::map<std::string, const Thread*> by_id;
    for (const auto& t : threads) by_id[t.id] = &t;

    std::map<std::string, std::vector<PerspectiveSpan>> pred_spans;
    for (const auto& r : predictions) {
        auto it = by_id.find(r.thread_id);
        if (it == by_id.end())
            throw_data("prediction references unknown thread '" + r.thread_id + "'");
        if (!it->second->gold) throw_data("missing gold for predicted thread '" + r.thread_id + "'");
        PerspectiveSpan s;
        s.answer_id = r.answer_id;
        s.start = r.start;
        s.end = r.end;
        s.label = r.label;
        s.provenance = r.provenance;
        pred_spans[r.thread_id].push_back(std::move(s));
    }
    std::map<std::string, const SummarySet*> pred_summaries;
    for (const auto& s : summaries) {
        auto it = by_id.find(s.thread_id);
        if (it == by_id.end()) throw_data("summary references unknown thread '" + s.thread_id + "'");
        if (!it->second->gold)
            throw_data("missing gold for summarized thread '" + s.thread_id + "'");
        if (!pred_summaries.emplace(s.thread_id, &s).second)
            throw_data("duplicate summary set for thread '" + s.thread_id + "'");
    }

    RunReport report;
    std::vector<Perspective> all_pred, all_gold;
    detail::StrictCounts strict_total;
    detail::ProportionalSums prop_total;
    detail::TaskBSums b_total;

    for (const auto& thread : threads) {
        if (!thread.gold) continue;
        ++report.threads_evaluated;
        const auto spans_it = pred_spans.find(thread.id);
        static const std::vector<PerspectiveSpan> kNone;
        const auto& spans = spans_it != pred_spans.end() ? spans_it->second : kNone;

        ThreadReport tr;
        tr.thread_id = thread.id;

        std::vector<Perspective> tp, tg;
        detail::aligned_labels(thread, spans, tp, tg);
        tr.sentences_evaluated = tp.size();
        if (!tp.empty()) {
            const auto [mf1, wf1] = classification_f1(tp, tg);
            tr.task_a.cls_macro_f1 = mf1;
            tr.task_a.cls_weighted_f1 = wf1;
        }
        all_pred.insert(all_pred.end(), tp.begin(), tp.end());
        all_gold.insert(all_gold.end(), tg.begin(), tg.end());

        tr.task_a.strict = strict_matching(spans, thread.gold->spans);
        tr.task_a.proportional = proportional_matching(spans, thread.gold->spans);
        const auto sc = detail::strict_counts(spans, thread.gold->spans);
        strict_total.tp += sc.tp;
        strict_total.n_pred += sc.n_pred;
        strict_total.n_gold += sc.n_gold;
        const auto ps = detail::proportional_sums(spans, thread.gold->spans);
        prop_total.pred_credit += ps.pred_credit;
        prop_total.gold_credit += ps.gold_credit;
        prop_total.n_pred += ps.n_pred;
        prop_total.n_gold += ps.n_gold;

        detail::TaskBSums b_thread;
        const auto sum_it = pred_summaries.find(thread.id);
        for (const auto& [label, gold_summary] : thread.gold->summaries) {
            std::string candidate;
            if (sum_it != pred_summaries.end()) {
                auto entry = sum_it->second->summaries.find(label);
                if (entry != sum_it->second->summaries.end()) candidate = entry->second.final;
            }
            b_thread.add(candidate, gold_summary, backend);
            b_total.add(candidate, gold_summary, backend);
        }
        tr.summary_pairs = b_thread.pairs;
        tr.task_b = b_thread.mean();
        tr.avg_score = weighted_avg(metric_values(tr.task_a, tr.task_b), cfg.avg_weights);
        report.per_thread.push_back(std::move(tr));
    }

    if (report.threads_evaluated == 0) throw_data("empty evaluation set: no thread carries gold");

    report.sentences_evaluated = all_pred.size();
    if (!all_pred.empty()) {
        const auto [mf1, wf1] = classification_f1(all_pred, all_gold);
        report.task_a.cls_macro_f1 = mf1;
        report.task_a.cls_weighted_f1 = wf1;
    }
    report.task_a.strict =
        detail::prf_from_ratio(static_cast<double>(strict_total.tp), strict_total.n_pred,
                               static_cast<double>(strict_total.tp), strict_total.n_gold);
    report.task_a.proportional = detail::prf_from_ratio(prop_total.pred_credit, prop_total.n_pred,
                                                        prop_total.gold_credit, prop_total.n_gold);
    report.summary_pairs = b_total.pairs;
    report.task_b = b_total.mean();
    report.task_b.factuality = cfg.factuality;
    report.avg_score = weighted_avg(metric_values(report.task_a, report.task_b), cfg.avg_weights);
    return report;
}

inline nlohmann::ordered_json task_a_to_json(const TaskAReport& a) {
    nlohmann::ordered_json j;
    j["cls_macro_f1"] = a.cls_macro_f1;
    j["cls_weighted_f1"] = a.cls_weighted_f1;
    auto prf = [](const PRF& v) {
        nlohmann::ordered_json p;
        p["precision"] = v.precision;
        p["recall"] = v.recall;
        p["f1"] = v.f1;
        return p;
    };
    j["strict"] = prf(a.strict);
    j["proportional"] = prf(a.proportional);
    return j;
}

inline nlohmann::ordered_json task_b_to_json(const TaskBReport& b) {
    nlohmann::ordered_json j;
    j["rouge1"] = b.rouge1;
    j["rouge2"] = b.rouge2;
    j["rougeL"] = b.rougeL;
    j["bleu"] = b.bleu;
    j["meteor"] = b.meteor;
    j["bertscore"] = b.bertscore;
    if (!b.factuality.empty()) j["factuality"] = b.factuality;
    return j;
}

inline nlohmann::ordered_json metrics_object(const TaskAReport& a, const TaskBReport& b) {
    const auto values = metric_values(a, b);
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < values.size(); ++i) j[kMetricNames[i]] = values[i];
    return j;
}

inline nlohmann::ordered_json report_to_json(const RunReport& r,
                                             const std::string& config_fingerprint = {}) {
    nlohmann::ordered_json j;
    if (!config_fingerprint.empty()) j["config_fingerprint"] = config_fingerprint;
    j["metrics"] = metrics_object(r.task_a, r.task_b);
    j["avg_score"] = r.avg_score;
    j["task_a"] = task_a_to_json(r.task_a);
    j["task_b"] = task_b_to_json(r.task_b);
    j["threads_evaluated"] = r.threads_evaluated;
    j["sentences_evaluated"] = r.sentences_evaluated;
    j["summary_pairs"] = r.summary_pairs;
    nlohmann::ordered_json per_thread = nlohmann::ordered_json::array();
    for (const auto& t : r.per_thread) {
        nlohmann::ordered_json e;
        e["thread_id"] = t.thread_id;
        e["sentences_evaluated"] = t.sentences_evaluated;
        e["summary_pairs"] = t.summary_pairs;
        e["metrics"] = metrics_object(t.task_a, t.task_b);
        e["avg_score"] = t.avg_score;
        per_thread.push_back(std::move(e));
    }
    j["per_thread"] = std::move(per_thread);
    return j;
}

inline void save_report(const RunReport& r, const std::string& path,
                        const std::string& config_fingerprint = {}) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw_data("cannot write report: " + path);
    out << report_to_json(r, config_fingerprint).dump(2) << '\n';
}

// Flat CSV: one "ALL" row plus one row per thread, Figure-3 column names.
inline void save_report_csv(const RunReport& r, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw_data("cannot write report csv: " + path);
    out << "thread_id";
    for (const char* name : kMetricNames) out << ',' << name;
    out << ",avg_score\n";
    auto row = [&](const std::string& id, const TaskAReport& a, const TaskBReport& b,
                   double avg) {
        out << id;
        for (double v : metric_values(a, b)) out << ',' << nlohmann::json(v).dump();
        out << ',' << nlohmann::json(avg).dump() << '\n';
    };
    row("ALL", r.task_a, r.task_b, r.avg_score);
    for (const auto& t : r.per_thread) row(t.thread_id, t.task_a, t.task_b, t.avg_score);
}

} // namespace cqasum

#endif // CQASUM_METRICS_HPP
