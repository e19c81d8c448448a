#pragma once

#include <vector>

#include "pituning/schema.hpp"

namespace pituning {

/// Fixed-length model input: the I most recent events before the target,
/// left-padded with reserved PAD ids when fewer are available.
struct SequenceWindow {
    struct Slot {
        int location{0};
        int weekday{0};
        int timeslot{0};
        int event{0};
    };

    std::vector<Slot> history;  // length I; slots [0, pad_count) hold PAD ids
    int pad_count{0};
    int target_intent{0};

    int length() const { return static_cast<int>(history.size()); }
    int real_count() const { return length() - pad_count; }
};

inline SequenceWindow::Slot pad_slot(const DatasetSchema& s) {
    return {s.pad_location(), s.pad_weekday(), s.pad_timeslot(), s.pad_event()};
}

/// One window per record index j >= 1: history = records j-I..j-1, target =
/// intent of record j. A user with n records yields max(0, n-1) windows.
inline std::vector<SequenceWindow> window_sequences(const std::vector<EventRecord>& user_records,
                                                    int history_len,
                                                    const DatasetSchema& schema) {
    if (history_len < 1) throw ArgumentError("window_sequences: history length must be >= 1");
    std::vector<SequenceWindow> out;
    const int n = static_cast<int>(user_records.size());
    if (n <= 1) return out;
    out.reserve(static_cast<std::size_t>(n - 1));
    for (int j = 1; j < n; ++j) {
        SequenceWindow w;
        w.pad_count = std::max(0, history_len - j);
        w.history.assign(static_cast<std::size_t>(history_len), pad_slot(schema));
        for (int k = w.pad_count; k < history_len; ++k) {
            const EventRecord& r = user_records[static_cast<std::size_t>(j - history_len + k)];
            w.history[static_cast<std::size_t>(k)] = {r.location_id, r.weekday_id,
                                                      r.timeslot_id, r.event_id};
        }
        w.target_intent = user_records[static_cast<std::size_t>(j)].intent_id;
        out.push_back(std::move(w));
    }
    return out;
}

/// Windows for every user of a dataset, keyed by user id.
inline std::vector<std::vector<SequenceWindow>> window_dataset(const Dataset& ds,
                                                               int history_len) {
    std::vector<std::vector<SequenceWindow>> out(ds.users.size());
    for (std::size_t u = 0; u < ds.users.size(); ++u)
        out[u] = window_sequences(ds.users[u], history_len, ds.schema);
    return out;
}

}  // namespace pituning
