#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pituning/errors.hpp"
#include "pituning/linalg.hpp"
#include "pituning/schema.hpp"

namespace pituning {

/// Probability vector over the N_I intents plus the number of observations
/// behind it. Sums to one whenever support_count > 0 or smoothing was used.
struct IntentDistribution {
    Vec probs;
    long support_count{0};

    int size() const { return static_cast<int>(probs.size()); }
};

/// Empirical intent distribution with optional additive (Laplace) smoothing:
/// probs[i] = (count_i + smoothing) / (total + smoothing * N_I).
inline IntentDistribution compute_intent_distribution(const std::vector<int>& labels,
                                                      int n_intents, double smoothing = 0.0) {
    if (n_intents < 1) throw ArgumentError("compute_intent_distribution: n_intents must be >= 1");
    if (smoothing < 0.0) throw ArgumentError("compute_intent_distribution: smoothing must be >= 0");
    std::vector<long> counts(static_cast<std::size_t>(n_intents), 0);
    for (int y : labels) {
        if (y < 0 || y >= n_intents)
            throw ArgumentError("compute_intent_distribution: label out of range");
        ++counts[static_cast<std::size_t>(y)];
    }
    const long total = static_cast<long>(labels.size());
    if (total == 0 && smoothing == 0.0)
        throw NumericalError("compute_intent_distribution: no observations and no smoothing");
    IntentDistribution d;
    d.support_count = total;
    d.probs.resize(n_intents);
    const double denom = static_cast<double>(total) + smoothing * n_intents;
    for (int i = 0; i < n_intents; ++i)
        d.probs[i] = (static_cast<double>(counts[static_cast<std::size_t>(i)]) + smoothing) / denom;
    return d;
}

inline IntentDistribution compute_intent_distribution(const std::vector<EventRecord>& records,
                                                      int n_intents, double smoothing = 0.0) {
    std::vector<int> labels;
    labels.reserve(records.size());
    for (const auto& r : records) labels.push_back(r.intent_id);
    return compute_intent_distribution(labels, n_intents, smoothing);
}

/// Sidecar vector file: '# <comment>' header lines, then one probability per line.
inline void save_distribution(const std::string& path, const IntentDistribution& d,
                              const std::string& comment = "") {
    std::ofstream out(path);
    if (!out.is_open()) throw IoError("cannot write distribution file: " + path);
    if (!comment.empty()) out << "# " << comment << '\n';
    out << "# support_count " << d.support_count << '\n';
    out.precision(17);
    for (int i = 0; i < d.size(); ++i) out << d.probs[i] << '\n';
}

inline IntentDistribution load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw IoError("cannot open distribution file: " + path);
    IntentDistribution d;
    std::vector<double> vals;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line);
            std::string hash, key;
            hs >> hash >> key;
            if (key == "support_count") hs >> d.support_count;
            continue;
        }
        try {
            vals.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw ParseError("invalid probability value", line_no);
        }
    }
    if (vals.empty()) throw ParseError("distribution file holds no values");
    d.probs = Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    return d;
}

}  // namespace pituning
