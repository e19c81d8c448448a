#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "pituning/distribution.hpp"
#include "pituning/rng.hpp"
#include "pituning/schema.hpp"

namespace pituning {

/// Recipe for a synthetic long-tailed event-sequence population.
///
/// Each user belongs to a latent cluster with its own intent simplex. Intents
/// are drawn i.i.d. from that simplex; the event of a record signals the
/// *next* record's intent through `rule_table` (a planted event-to-intent
/// transition rule): with probability 1 - noise_rate the event is drawn from
/// the rule preimage of the upcoming intent, otherwise uniformly at random.
struct SyntheticSpec {
    DatasetSchema schema;
    int n_clusters{1};
    std::vector<double> cluster_weights;  // simplex over clusters
    Mat cluster_intent_probs;             // n_clusters x N_I, each row a simplex
    std::vector<int> rule_table;          // event_id -> intent_id, total over [0, N_E)
    double noise_rate{0.0};
    int events_per_user{0};
    std::uint64_t seed{0};

    void validate() const {
        schema.validate();
        if (n_clusters < 1) throw ArgumentError("synthetic: n_clusters must be >= 1");
        auto check_simplex = [](const double* p, int n, const char* what) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                if (p[i] < 0.0) throw ArgumentError(std::string("synthetic: negative weight in ") + what);
                sum += p[i];
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw ArgumentError(std::string("synthetic: ") + what + " does not sum to 1");
        };
        if (static_cast<int>(cluster_weights.size()) != n_clusters)
            throw ArgumentError("synthetic: cluster_weights length mismatch");
        check_simplex(cluster_weights.data(), n_clusters, "cluster_weights");
        if (cluster_intent_probs.rows() != n_clusters ||
            cluster_intent_probs.cols() != schema.n_intents)
            throw ArgumentError("synthetic: cluster_intent_probs shape mismatch");
        for (int c = 0; c < n_clusters; ++c) {
            Vec row = cluster_intent_probs.row(c);
            check_simplex(row.data(), schema.n_intents, "cluster intent simplex");
        }
        if (static_cast<int>(rule_table.size()) != schema.n_events)
            throw ArgumentError("synthetic: rule_table must cover every event id");
        std::vector<int> preimage_count(static_cast<std::size_t>(schema.n_intents), 0);
        for (int t : rule_table) {
            if (t < 0 || t >= schema.n_intents)
                throw ArgumentError("synthetic: rule_table intent out of range");
            ++preimage_count[static_cast<std::size_t>(t)];
        }
        for (int i = 0; i < schema.n_intents; ++i)
            if (preimage_count[static_cast<std::size_t>(i)] == 0)
                throw ArgumentError("synthetic: intent " + std::to_string(i) +
                                    " has no event in rule_table");
        if (noise_rate < 0.0 || noise_rate > 1.0)
            throw ArgumentError("synthetic: noise_rate must lie in [0,1]");
        if (events_per_user < 0)
            throw ArgumentError("synthetic: events_per_user must be >= 0");
    }

    /// Chance that the planted transition identifies the next intent: the rule
    /// fires with probability 1 - noise_rate, and a noise event still matches
    /// by luck roughly 1/N_I of the time.
    double bayes_accuracy_estimate() const {
        return (1.0 - noise_rate) + noise_rate / schema.n_intents;
    }
};

/// Balanced default rule: event e maps to intent e mod N_I.
inline std::vector<int> default_rule_table(int n_events, int n_intents) {
    std::vector<int> table(static_cast<std::size_t>(n_events));
    for (int e = 0; e < n_events; ++e) table[static_cast<std::size_t>(e)] = e % n_intents;
    return table;
}

/// Cluster simplices with a planted long tail: cluster 0 spreads its mass over
/// the first `n_head` intents; each later cluster concentrates `tail_mass` on
/// one dedicated tail intent and spreads the rest over the head.
inline Mat make_longtail_clusters(int n_clusters, int n_intents, double tail_mass = 0.6) {
    if (n_clusters < 1 || n_intents < 1) throw ArgumentError("make_longtail_clusters: bad sizes");
    if (n_clusters - 1 >= n_intents)
        throw ArgumentError("make_longtail_clusters: not enough intents for the tail clusters");
    const int n_head = n_intents - (n_clusters - 1);
    Mat probs = Mat::Zero(n_clusters, n_intents);
    // head cluster: geometric-ish decay over head intents
    double acc = 0.0;
    for (int i = 0; i < n_head; ++i) {
        probs(0, i) = std::pow(0.7, i);
        acc += probs(0, i);
    }
    probs.row(0) /= acc;
    for (int c = 1; c < n_clusters; ++c) {
        const int tail_intent = n_head + (c - 1);
        probs(c, tail_intent) = tail_mass;
        for (int i = 0; i < n_head; ++i) probs(c, i) = probs(0, i) * (1.0 - tail_mass);
    }
    return probs;
}

struct SyntheticPopulation {
    Dataset dataset;
    std::vector<int> user_cluster;  // ground truth cluster per user
    SyntheticSpec spec;
};

namespace detail {

/// Concentrated per-user habit distribution over n categories: normalized
/// Gamma(0.35) draws put most mass on a handful of favorites.
inline std::vector<double> draw_habit_distribution(Rng& rng, int n) {
    std::gamma_distribution<double> gamma(0.35, 1.0);
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& v : w) {
        v = gamma(rng) + 1e-12;
        total += v;
    }
    for (auto& v : w) v /= total;
    return w;
}

}  // namespace detail

/// Generate the full population. Deterministic given spec.seed; every user has
/// an independent stream, so per-user output does not depend on other users.
inline SyntheticPopulation generate_synthetic_population(const SyntheticSpec& spec) {
    spec.validate();
    const DatasetSchema& s = spec.schema;

    std::vector<std::vector<int>> preimage(static_cast<std::size_t>(s.n_intents));
    for (int e = 0; e < s.n_events; ++e)
        preimage[static_cast<std::size_t>(spec.rule_table[static_cast<std::size_t>(e)])].push_back(e);

    SyntheticPopulation pop;
    pop.spec = spec;
    pop.dataset.schema = s;
    pop.dataset.users.resize(static_cast<std::size_t>(s.n_users));
    pop.user_cluster.resize(static_cast<std::size_t>(s.n_users));

    for (int u = 0; u < s.n_users; ++u) {
        Rng rng = make_rng(spec.seed, static_cast<std::uint64_t>(u));
        const int cluster = draw_categorical(rng, spec.cluster_weights);
        pop.user_cluster[static_cast<std::size_t>(u)] = cluster;

        std::vector<double> simplex(static_cast<std::size_t>(s.n_intents));
        for (int i = 0; i < s.n_intents; ++i)
            simplex[static_cast<std::size_t>(i)] = spec.cluster_intent_probs(cluster, i);

        auto loc_habit = detail::draw_habit_distribution(rng, s.n_locations);
        auto slot_habit = detail::draw_habit_distribution(rng, s.n_timeslots);
        auto wday_habit = detail::draw_habit_distribution(rng, 7);

        const int n = spec.events_per_user;
        // one extra draw: the last event still signals an upcoming intent
        std::vector<int> intents(static_cast<std::size_t>(n) + 1);
        for (auto& y : intents) y = draw_categorical(rng, simplex);

        auto& records = pop.dataset.users[static_cast<std::size_t>(u)];
        records.reserve(static_cast<std::size_t>(n));
        std::int64_t ts = 0;
        for (int r = 0; r < n; ++r) {
            EventRecord rec;
            rec.user_id = u;
            rec.intent_id = intents[static_cast<std::size_t>(r)];
            const int upcoming = intents[static_cast<std::size_t>(r) + 1];
            if (draw_uniform(rng) < spec.noise_rate) {
                rec.event_id = draw_index(rng, s.n_events);
            } else {
                const auto& pre = preimage[static_cast<std::size_t>(upcoming)];
                rec.event_id = pre[static_cast<std::size_t>(draw_index(rng, static_cast<int>(pre.size())))];
            }
            rec.location_id = draw_categorical(rng, loc_habit);
            rec.timeslot_id = draw_categorical(rng, slot_habit);
            rec.weekday_id = draw_categorical(rng, wday_habit);
            ts += 1 + draw_index(rng, 6);
            rec.timestamp = ts;
            records.push_back(rec);
        }
    }
    return pop;
}

/// Sidecar key-value text file with the generator's ground truth.
inline void save_population_metadata(const std::string& path, const SyntheticPopulation& pop) {
    std::ofstream out(path);
    if (!out.is_open()) throw IoError("cannot write metadata file: " + path);
    const SyntheticSpec& spec = pop.spec;
    out << "seed = " << spec.seed << '\n';
    out << "n_clusters = " << spec.n_clusters << '\n';
    out << "noise_rate = " << spec.noise_rate << '\n';
    out << "events_per_user = " << spec.events_per_user << '\n';
    out << "bayes_accuracy_estimate = " << spec.bayes_accuracy_estimate() << '\n';
    out << "rule_table =";
    for (int t : spec.rule_table) out << ' ' << t;
    out << '\n';
    out << "cluster_weights =";
    for (double w : spec.cluster_weights) out << ' ' << w;
    out << '\n';
    for (int c = 0; c < spec.n_clusters; ++c) {
        out << "cluster_" << c << "_intent_probs =";
        for (int i = 0; i < spec.schema.n_intents; ++i) out << ' ' << spec.cluster_intent_probs(c, i);
        out << '\n';
    }
    out << "user_cluster =";
    for (int c : pop.user_cluster) out << ' ' << c;
    out << '\n';
}

}  // namespace pituning
