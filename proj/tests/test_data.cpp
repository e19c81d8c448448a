#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "pituning/distribution.hpp"
#include "pituning/kmeans.hpp"
#include "pituning/schema.hpp"
#include "pituning/synthetic.hpp"
#include "pituning/windowing.hpp"

using namespace pituning;

namespace {

DatasetSchema small_schema() {
    DatasetSchema s;
    s.n_users = 10;
    s.n_locations = 5;
    s.n_timeslots = 48;
    s.n_events = 16;
    s.n_intents = 6;
    return s;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content) : path(name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::vector<EventRecord> make_records(int n, int user = 0) {
    std::vector<EventRecord> recs;
    for (int i = 0; i < n; ++i) {
        EventRecord r;
        r.user_id = user;
        r.location_id = i % 5;
        r.timeslot_id = i % 48;
        r.weekday_id = i % 7;
        r.event_id = i % 16;
        r.intent_id = i % 6;
        r.timestamp = 10 * i;
        recs.push_back(r);
    }
    return recs;
}

}  // namespace

TEST_CASE("schema validation") {
    DatasetSchema s = small_schema();
    REQUIRE_NOTHROW(s.validate());
    s.n_intents = 20;  // exceeds n_events
    REQUIRE_THROWS_AS(s.validate(), SchemaError);
    s = small_schema();
    s.n_users = 0;
    REQUIRE_THROWS_AS(s.validate(), SchemaError);
}

TEST_CASE("load_dataset on empty file") {
    TempFile f("tmp_empty.txt", "");
    Dataset ds = load_dataset(f.path, small_schema());
    CHECK(ds.record_count() == 0);
    CHECK(ds.active_user_count() == 0);
}

TEST_CASE("load_dataset maps fields directly") {
    TempFile f("tmp_one.txt",
               "#schema 10,5,48,16,6\n"
               "7,3,47,2,12,5,1000\n");
    Dataset ds = load_dataset(f.path, small_schema());
    REQUIRE(ds.record_count() == 1);
    const EventRecord& r = ds.users[7][0];
    CHECK(r.user_id == 7);
    CHECK(r.location_id == 3);
    CHECK(r.timeslot_id == 47);
    CHECK(r.weekday_id == 2);
    CHECK(r.event_id == 12);
    CHECK(r.intent_id == 5);
    CHECK(r.timestamp == 1000);
}

TEST_CASE("load_dataset rejects out-of-range ids") {
    TempFile f("tmp_bad_weekday.txt",
               "#schema 10,5,48,16,6\n"
               "7,3,47,9,12,5,1000\n");
    REQUIRE_THROWS_AS(load_dataset(f.path, small_schema()), SchemaError);
}

TEST_CASE("load_dataset reports malformed lines with their number") {
    TempFile f("tmp_malformed.txt",
               "#schema 10,5,48,16,6\n"
               "7,3,47,2,12,5,1000\n"
               "7,3,47,2,twelve,5,1001\n");
    try {
        load_dataset(f.path, small_schema());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("load_dataset requires the schema header") {
    TempFile f("tmp_headerless.txt", "7,3,47,2,12,5,1000\n");
    REQUIRE_THROWS_AS(load_dataset(f.path, small_schema()), ParseError);
}

TEST_CASE("load_dataset sorts by timestamp with stable ties") {
    TempFile f("tmp_sort.txt",
               "#schema 10,5,48,16,6\n"
               "1,0,0,0,3,0,50\n"
               "1,0,0,0,1,1,10\n"
               "1,1,0,0,2,2,50\n");
    Dataset ds = load_dataset(f.path, small_schema());
    const auto& u = ds.users[1];
    REQUIRE(u.size() == 3);
    CHECK(u[0].event_id == 1);
    CHECK(u[1].event_id == 3);  // ts 50, first in file order
    CHECK(u[2].event_id == 2);
}

TEST_CASE("dataset save/load round trip") {
    DatasetSchema s = small_schema();
    Dataset ds;
    ds.schema = s;
    ds.users.resize(10);
    ds.users[2] = make_records(7, 2);
    ds.users[9] = make_records(3, 9);
    save_dataset("tmp_roundtrip.txt", ds);
    Dataset back = load_dataset("tmp_roundtrip.txt", s);
    std::remove("tmp_roundtrip.txt");
    REQUIRE(back.record_count() == ds.record_count());
    for (std::size_t u = 0; u < ds.users.size(); ++u) {
        REQUIRE(back.users[u].size() == ds.users[u].size());
        for (std::size_t i = 0; i < ds.users[u].size(); ++i) {
            CHECK(back.users[u][i].event_id == ds.users[u][i].event_id);
            CHECK(back.users[u][i].timestamp == ds.users[u][i].timestamp);
        }
    }
}

TEST_CASE("window_sequences boundary cases") {
    DatasetSchema s = small_schema();
    CHECK(window_sequences(make_records(1), 3, s).empty());
    CHECK(window_sequences({}, 3, s).empty());
}

TEST_CASE("window_sequences n=5 I=3 hand enumeration") {
    DatasetSchema s = small_schema();
    auto recs = make_records(5);
    auto windows = window_sequences(recs, 3, s);
    REQUIRE(windows.size() == 4);
    // window j: history = records j-3..j-1 left-padded, target = intent of record j
    CHECK(windows[0].pad_count == 2);
    CHECK(windows[0].history[2].event == recs[0].event_id);
    CHECK(windows[0].target_intent == recs[1].intent_id);
    CHECK(windows[1].pad_count == 1);
    CHECK(windows[1].history[1].event == recs[0].event_id);
    CHECK(windows[1].history[2].event == recs[1].event_id);
    CHECK(windows[3].pad_count == 0);
    CHECK(windows[3].history[0].event == recs[1].event_id);
    CHECK(windows[3].history[2].event == recs[3].event_id);
    CHECK(windows[3].target_intent == recs[4].intent_id);
    // PAD slots carry the reserved ids
    CHECK(windows[0].history[0].event == s.pad_event());
    CHECK(windows[0].history[0].location == s.pad_location());
    CHECK(windows[0].history[0].weekday == s.pad_weekday());
    CHECK(windows[0].history[0].timeslot == s.pad_timeslot());
}

TEST_CASE("window_sequences n=31 I=30") {
    DatasetSchema s = small_schema();
    auto windows = window_sequences(make_records(31), 30, s);
    REQUIRE(windows.size() == 30);
    CHECK(windows.back().pad_count == 0);
    CHECK(windows.front().pad_count == 29);
}

TEST_CASE("window count and PAD prefix invariants hold for random n") {
    DatasetSchema s = small_schema();
    Rng rng = make_rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + draw_index(rng, 40);
        const int I = 1 + draw_index(rng, 12);
        auto windows = window_sequences(make_records(n), I, s);
        CHECK(windows.size() == static_cast<std::size_t>(n - 1));
        for (const auto& w : windows) {
            REQUIRE(w.length() == I);
            REQUIRE(w.pad_count >= 0);
            REQUIRE(w.pad_count < I);  // at least one real slot
            for (int j = 0; j < I; ++j) {
                const bool is_pad = w.history[static_cast<std::size_t>(j)].event == s.pad_event();
                CHECK(is_pad == (j < w.pad_count));
            }
        }
    }
}

TEST_CASE("compute_intent_distribution examples") {
    auto one_hot = compute_intent_distribution(std::vector<int>{2, 2, 2}, 4, 0.0);
    CHECK(one_hot.probs[2] == 1.0);
    CHECK(one_hot.probs[0] == 0.0);
    CHECK(one_hot.support_count == 3);

    auto counts = compute_intent_distribution(std::vector<int>{0, 0, 1, 2}, 4, 0.0);
    CHECK(counts.probs[0] == Catch::Approx(0.5));
    CHECK(counts.probs[1] == Catch::Approx(0.25));
    CHECK(counts.probs[2] == Catch::Approx(0.25));
    CHECK(counts.probs[3] == 0.0);

    auto smoothed = compute_intent_distribution(std::vector<int>{}, 2, 1.0);
    CHECK(smoothed.probs[0] == Catch::Approx(0.5));
    CHECK(smoothed.probs[1] == Catch::Approx(0.5));
    CHECK(smoothed.support_count == 0);

    REQUIRE_THROWS_AS(compute_intent_distribution(std::vector<int>{}, 2, 0.0), NumericalError);
}

TEST_CASE("intent distributions sum to one under fuzzing") {
    Rng rng = make_rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n_intents = 1 + draw_index(rng, 12);
        const int n = draw_index(rng, 60);
        std::vector<int> labels;
        for (int i = 0; i < n; ++i) labels.push_back(draw_index(rng, n_intents));
        const double smoothing = (n == 0) ? 0.5 : draw_uniform(rng) * 2.0;
        auto d = compute_intent_distribution(labels, n_intents, smoothing);
        CHECK(d.probs.sum() == Catch::Approx(1.0).margin(1e-9));
        CHECK(d.probs.minCoeff() >= 0.0);
    }
}

TEST_CASE("kmeans k=1 returns the coordinate-wise mean") {
    Rng rng = make_rng(3);
    std::vector<IntentDistribution> dists;
    for (int i = 0; i < 17; ++i) {
        std::vector<int> labels;
        for (int j = 0; j < 20; ++j) labels.push_back(draw_index(rng, 5));
        dists.push_back(compute_intent_distribution(labels, 5, 1.0));
    }
    auto res = cluster_user_preferences(dists, 1, 99);
    Vec mean = Vec::Zero(5);
    for (const auto& d : dists) mean += d.probs;
    mean /= static_cast<double>(dists.size());
    for (int i = 0; i < 5; ++i)
        CHECK(res.centroids(0, i) == Catch::Approx(mean[i]).margin(1e-9));
    for (int a : res.assignment) CHECK(a == 0);
}

TEST_CASE("kmeans separates one-hot groups exactly") {
    std::vector<IntentDistribution> dists;
    for (int i = 0; i < 6; ++i) {
        IntentDistribution d;
        d.probs = Vec::Zero(3);
        d.probs[i < 3 ? 0 : 1] = 1.0;
        d.support_count = 1;
        dists.push_back(d);
    }
    auto res = cluster_user_preferences(dists, 2, 5);
    // brute-force oracle: the two-group split has inertia 0, any other is worse
    CHECK(res.inertia == Catch::Approx(0.0).margin(1e-12));
    CHECK(res.assignment[0] == res.assignment[1]);
    CHECK(res.assignment[1] == res.assignment[2]);
    CHECK(res.assignment[3] == res.assignment[4]);
    CHECK(res.assignment[4] == res.assignment[5]);
    CHECK(res.assignment[0] != res.assignment[3]);
}

TEST_CASE("kmeans with k equal to the number of users") {
    std::vector<IntentDistribution> dists;
    for (int i = 0; i < 4; ++i) {
        IntentDistribution d;
        d.probs = Vec::Zero(4);
        d.probs[i] = 1.0;
        dists.push_back(d);
    }
    auto res = cluster_user_preferences(dists, 4, 1);
    CHECK(res.inertia == Catch::Approx(0.0).margin(1e-12));
    REQUIRE_THROWS_AS(cluster_user_preferences(dists, 5, 1), ArgumentError);
}

namespace {

SyntheticSpec demo_spec() {
    SyntheticSpec spec;
    spec.schema = small_schema();
    spec.schema.n_users = 20;
    spec.n_clusters = 2;
    spec.cluster_weights = {0.7, 0.3};
    spec.cluster_intent_probs = make_longtail_clusters(2, 6, 0.6);
    spec.rule_table = default_rule_table(16, 6);
    spec.noise_rate = 0.2;
    spec.events_per_user = 40;
    spec.seed = 77;
    return spec;
}

}  // namespace

TEST_CASE("synthetic generator is deterministic") {
    auto a = generate_synthetic_population(demo_spec());
    auto b = generate_synthetic_population(demo_spec());
    REQUIRE(a.dataset.record_count() == b.dataset.record_count());
    CHECK(a.user_cluster == b.user_cluster);
    for (std::size_t u = 0; u < a.dataset.users.size(); ++u) {
        for (std::size_t i = 0; i < a.dataset.users[u].size(); ++i) {
            const auto& ra = a.dataset.users[u][i];
            const auto& rb = b.dataset.users[u][i];
            CHECK(ra.event_id == rb.event_id);
            CHECK(ra.intent_id == rb.intent_id);
            CHECK(ra.location_id == rb.location_id);
            CHECK(ra.timeslot_id == rb.timeslot_id);
            CHECK(ra.weekday_id == rb.weekday_id);
            CHECK(ra.timestamp == rb.timestamp);
        }
    }
}

TEST_CASE("synthetic generator with zero events per user") {
    auto spec = demo_spec();
    spec.events_per_user = 0;
    auto pop = generate_synthetic_population(spec);
    CHECK(pop.dataset.users.size() == 20);
    CHECK(pop.dataset.record_count() == 0);
    CHECK(pop.user_cluster.size() == 20);
}

TEST_CASE("noise-free generator follows the transition rule exactly") {
    SyntheticSpec spec = demo_spec();
    spec.schema.n_users = 200;
    spec.schema.n_events = 20;
    spec.schema.n_intents = 6;
    spec.rule_table = default_rule_table(20, 6);
    spec.cluster_intent_probs = make_longtail_clusters(2, 6, 0.6);
    spec.noise_rate = 0.0;
    spec.events_per_user = 500;
    auto pop = generate_synthetic_population(spec);
    // exhaustive scan: the event of record r signals the intent of record r+1
    long matches = 0, pairs = 0;
    for (const auto& user : pop.dataset.users) {
        for (std::size_t r = 0; r + 1 < user.size(); ++r) {
            ++pairs;
            matches += spec.rule_table[static_cast<std::size_t>(user[r].event_id)] ==
                       user[r + 1].intent_id;
        }
    }
    REQUIRE(pairs > 0);
    CHECK(matches == pairs);
}

TEST_CASE("synthetic generator validates its spec") {
    auto spec = demo_spec();
    spec.cluster_weights = {0.5, 0.4};  // not a simplex
    REQUIRE_THROWS_AS(generate_synthetic_population(spec), ArgumentError);

    spec = demo_spec();
    spec.noise_rate = 1.5;
    REQUIRE_THROWS_AS(generate_synthetic_population(spec), ArgumentError);

    spec = demo_spec();
    spec.rule_table.pop_back();
    REQUIRE_THROWS_AS(generate_synthetic_population(spec), ArgumentError);
}

TEST_CASE("generated records respect the schema and timestamp ordering") {
    auto pop = generate_synthetic_population(demo_spec());
    for (const auto& user : pop.dataset.users) {
        std::int64_t prev = -1;
        for (const auto& r : user) {
            REQUIRE_NOTHROW(validate_record(r, pop.dataset.schema));
            REQUIRE(r.timestamp > prev);
            prev = r.timestamp;
        }
    }
}

TEST_CASE("user intent distributions reflect their cluster simplex") {
    auto spec = demo_spec();
    spec.events_per_user = 400;
    auto pop = generate_synthetic_population(spec);
    for (std::size_t u = 0; u < 5; ++u) {
        auto d = compute_intent_distribution(pop.dataset.users[u], 6, 0.0);
        Vec expected = spec.cluster_intent_probs.row(pop.user_cluster[u]);
        for (int i = 0; i < 6; ++i) CHECK(d.probs[i] == Catch::Approx(expected[i]).margin(0.08));
    }
}

TEST_CASE("metadata sidecar is written") {
    auto pop = generate_synthetic_population(demo_spec());
    save_population_metadata("tmp_meta.txt", pop);
    std::ifstream in("tmp_meta.txt");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::remove("tmp_meta.txt");
    CHECK(content.find("rule_table =") != std::string::npos);
    CHECK(content.find("user_cluster =") != std::string::npos);
    CHECK(content.find("bayes_accuracy_estimate") != std::string::npos);
}

TEST_CASE("distribution sidecar round trip") {
    IntentDistribution d;
    d.probs = Vec::LinSpaced(6, 0.05, 0.3);
    d.probs /= d.probs.sum();
    d.support_count = 42;
    save_distribution("tmp_dist.txt", d, "test vector");
    auto back = load_distribution("tmp_dist.txt");
    std::remove("tmp_dist.txt");
    REQUIRE(back.size() == 6);
    CHECK(back.support_count == 42);
    for (int i = 0; i < 6; ++i) CHECK(back.probs[i] == Catch::Approx(d.probs[i]).epsilon(1e-12));
}
