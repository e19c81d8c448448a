#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pituning/errors.hpp"

namespace pituning {

/// Per-class true/false positive and false negative tallies.
struct ConfusionCounts {
    std::vector<long> tp, fp, fn;
    long n_samples{0};

    int n_classes() const { return static_cast<int>(tp.size()); }
};

inline ConfusionCounts confusion_counts(const std::vector<int>& predictions,
                                        const std::vector<int>& targets, int n_classes) {
    if (predictions.size() != targets.size())
        throw ArgumentError("confusion_counts: predictions/targets length mismatch");
    if (n_classes < 1) throw ArgumentError("confusion_counts: n_classes must be >= 1");
    ConfusionCounts c;
    c.tp.assign(static_cast<std::size_t>(n_classes), 0);
    c.fp.assign(static_cast<std::size_t>(n_classes), 0);
    c.fn.assign(static_cast<std::size_t>(n_classes), 0);
    c.n_samples = static_cast<long>(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int p = predictions[i];
        const int t = targets[i];
        if (p < 0 || p >= n_classes || t < 0 || t >= n_classes)
            throw ArgumentError("confusion_counts: label out of range");
        if (p == t) {
            ++c.tp[static_cast<std::size_t>(p)];
        } else {
            ++c.fp[static_cast<std::size_t>(p)];
            ++c.fn[static_cast<std::size_t>(t)];
        }
    }
    return c;
}

inline ConfusionCounts merge_counts(const ConfusionCounts& a, const ConfusionCounts& b) {
    if (a.n_classes() != b.n_classes())
        throw ArgumentError("merge_counts: class count mismatch");
    ConfusionCounts m = a;
    for (int i = 0; i < m.n_classes(); ++i) {
        m.tp[static_cast<std::size_t>(i)] += b.tp[static_cast<std::size_t>(i)];
        m.fp[static_cast<std::size_t>(i)] += b.fp[static_cast<std::size_t>(i)];
        m.fn[static_cast<std::size_t>(i)] += b.fn[static_cast<std::size_t>(i)];
    }
    m.n_samples += b.n_samples;
    return m;
}

// A class with zero denominator has precision/recall 0: long-tail classes are
// counted, never silently dropped.
inline double class_precision(const ConfusionCounts& c, int cls) {
    const double denom = static_cast<double>(c.tp[static_cast<std::size_t>(cls)] +
                                             c.fp[static_cast<std::size_t>(cls)]);
    return denom > 0.0 ? static_cast<double>(c.tp[static_cast<std::size_t>(cls)]) / denom : 0.0;
}

inline double class_recall(const ConfusionCounts& c, int cls) {
    const double denom = static_cast<double>(c.tp[static_cast<std::size_t>(cls)] +
                                             c.fn[static_cast<std::size_t>(cls)]);
    return denom > 0.0 ? static_cast<double>(c.tp[static_cast<std::size_t>(cls)]) / denom : 0.0;
}

/// Precision of each class weighted by its prediction count (tp_c + fp_c).
inline double weighted_precision(const ConfusionCounts& c) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < c.n_classes(); ++i) {
        const double w = static_cast<double>(c.tp[static_cast<std::size_t>(i)] +
                                             c.fp[static_cast<std::size_t>(i)]);
        num += w * class_precision(c, i);
        den += w;
    }
    if (den <= 0.0) throw NumericalError("weighted_precision: no predictions");
    return num / den;
}

/// Recall of each class weighted by its support (tp_c + fn_c).
inline double weighted_recall(const ConfusionCounts& c) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < c.n_classes(); ++i) {
        const double w = static_cast<double>(c.tp[static_cast<std::size_t>(i)] +
                                             c.fn[static_cast<std::size_t>(i)]);
        num += w * class_recall(c, i);
        den += w;
    }
    if (den <= 0.0) throw NumericalError("weighted_recall: no samples");
    return num / den;
}

inline double macro_precision(const ConfusionCounts& c) {
    double sum = 0.0;
    for (int i = 0; i < c.n_classes(); ++i) sum += class_precision(c, i);
    return sum / c.n_classes();
}

inline double macro_recall(const ConfusionCounts& c) {
    double sum = 0.0;
    for (int i = 0; i < c.n_classes(); ++i) sum += class_recall(c, i);
    return sum / c.n_classes();
}

/// Mean NDCG@k with binary relevance: each sample contributes
/// 1/log2(rank+1) when its true intent sits within the top k, else 0.
inline double ndcg_at_k(const std::vector<std::vector<int>>& ranked_predictions,
                        const std::vector<int>& targets, int k) {
    if (ranked_predictions.size() != targets.size())
        throw ArgumentError("ndcg_at_k: rankings/targets length mismatch");
    if (k < 1) throw ArgumentError("ndcg_at_k: k must be >= 1");
    if (ranked_predictions.empty()) throw ArgumentError("ndcg_at_k: no samples");
    double total = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto& rank = ranked_predictions[i];
        const int kk = std::min<int>(k, static_cast<int>(rank.size()));
        for (int pos = 0; pos < kk; ++pos) {
            if (rank[static_cast<std::size_t>(pos)] == targets[i]) {
                total += 1.0 / std::log2(static_cast<double>(pos) + 2.0);
                break;
            }
        }
    }
    return total / static_cast<double>(targets.size());
}

/// The five headline metrics of an evaluation run.
struct MetricsReport {
    double prec_w{0.0};
    double rec_w{0.0};
    double prec_m{0.0};
    double rec_m{0.0};
    std::map<int, double> ndcg;  // k -> value
    long n_samples{0};

    std::string to_kv_text() const {
        std::ostringstream os;
        os.precision(6);
        os << std::fixed;
        os << "n_samples: " << n_samples << '\n';
        os << "prec_w: " << prec_w << '\n';
        os << "rec_w: " << rec_w << '\n';
        os << "prec_m: " << prec_m << '\n';
        os << "rec_m: " << rec_m << '\n';
        for (const auto& [k, v] : ndcg) os << "ndcg@" << k << ": " << v << '\n';
        return os.str();
    }

    /// One row in Table layout: name Prec_w Rec_w Prec_m Rec_m N@k...
    std::string to_table_row(const std::string& name) const {
        std::ostringstream os;
        os.precision(4);
        os << std::fixed << name;
        os << '\t' << prec_w << '\t' << rec_w << '\t' << prec_m << '\t' << rec_m;
        for (const auto& [k, v] : ndcg) os << '\t' << v;
        return os.str();
    }

    static std::string table_header(const std::vector<int>& ks) {
        std::ostringstream os;
        os << "model\tPrec_w\tRec_w\tPrec_m\tRec_m";
        for (int k : ks) os << "\tN@" << k;
        return os.str();
    }
};

inline MetricsReport compute_metrics_report(const std::vector<int>& predictions,
                                            const std::vector<std::vector<int>>& rankings,
                                            const std::vector<int>& targets, int n_classes,
                                            const std::vector<int>& ks = {3, 5}) {
    ConfusionCounts c = confusion_counts(predictions, targets, n_classes);
    MetricsReport r;
    r.n_samples = c.n_samples;
    r.prec_w = weighted_precision(c);
    r.rec_w = weighted_recall(c);
    r.prec_m = macro_precision(c);
    r.rec_m = macro_recall(c);
    for (int k : ks) r.ndcg[k] = ndcg_at_k(rankings, targets, std::min(k, n_classes));
    return r;
}

inline MetricsReport parse_metrics_report(std::istream& in) {
    MetricsReport r;
    std::string line;
    while (std::getline(in, line)) {
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = line.substr(0, colon);
        const std::string val = line.substr(colon + 1);
        if (key == "n_samples") r.n_samples = std::stol(val);
        else if (key == "prec_w") r.prec_w = std::stod(val);
        else if (key == "rec_w") r.rec_w = std::stod(val);
        else if (key == "prec_m") r.prec_m = std::stod(val);
        else if (key == "rec_m") r.rec_m = std::stod(val);
        else if (key.rfind("ndcg@", 0) == 0) r.ndcg[std::stoi(key.substr(5))] = std::stod(val);
    }
    return r;
}

}  // namespace pituning
