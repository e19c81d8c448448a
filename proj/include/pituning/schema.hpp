#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pituning/errors.hpp"

namespace pituning {

/// Cardinalities of the categorical id spaces of a dataset.
struct DatasetSchema {
    int n_users{0};
    int n_locations{0};
    int n_timeslots{0};  // slots per day
    int n_events{0};
    int n_intents{0};

    void validate() const {
        if (n_users <= 0 || n_locations <= 0 || n_timeslots <= 0 || n_events <= 0 ||
            n_intents <= 0)
            throw SchemaError("schema sizes must be positive");
        if (n_intents > n_events)
            throw SchemaError("schema requires n_intents <= n_events");
    }

    bool operator==(const DatasetSchema&) const = default;

    // Reserved ids. Each embedding table carries one PAD row; the event table
    // additionally carries a MASK row used by the reconstruction objective.
    int pad_location() const { return n_locations; }
    int pad_weekday() const { return 7; }
    int pad_timeslot() const { return n_timeslots; }
    int pad_event() const { return n_events; }
    int mask_event() const { return n_events + 1; }
};

/// One behavioral log entry.
struct EventRecord {
    int user_id{0};
    int location_id{0};
    int timeslot_id{0};
    int weekday_id{0};
    int event_id{0};
    int intent_id{0};
    std::int64_t timestamp{0};
};

inline void validate_record(const EventRecord& r, const DatasetSchema& s, int line_no = 0) {
    auto fail = [&](const std::string& what) {
        std::string msg = "schema violation: " + what;
        if (line_no > 0) msg += " (line " + std::to_string(line_no) + ")";
        throw SchemaError(msg);
    };
    if (r.user_id < 0 || r.user_id >= s.n_users) fail("user_id out of range");
    if (r.location_id < 0 || r.location_id >= s.n_locations) fail("location_id out of range");
    if (r.timeslot_id < 0 || r.timeslot_id >= s.n_timeslots) fail("timeslot_id out of range");
    if (r.weekday_id < 0 || r.weekday_id >= 7) fail("weekday_id out of range");
    if (r.event_id < 0 || r.event_id >= s.n_events) fail("event_id out of range");
    if (r.intent_id < 0 || r.intent_id >= s.n_intents) fail("intent_id out of range");
}

/// Records grouped by user, each user's list ordered by (timestamp, file order).
struct Dataset {
    DatasetSchema schema;
    std::vector<std::vector<EventRecord>> users;  // indexed by user_id

    std::size_t record_count() const {
        std::size_t n = 0;
        for (const auto& u : users) n += u.size();
        return n;
    }
    std::size_t active_user_count() const {
        std::size_t n = 0;
        for (const auto& u : users) n += !u.empty();
        return n;
    }
};

namespace detail {

inline std::int64_t parse_int_field(std::string_view tok, int line_no) {
    std::int64_t v{};
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError("invalid integer field '" + std::string(tok) + "'", line_no);
    return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    for (auto& t : out) {
        while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
        while (!t.empty() && (t.back() == ' ' || t.back() == '\r' || t.back() == '\t'))
            t.remove_suffix(1);
    }
    return out;
}

}  // namespace detail

/// Parse the `#schema N_U,N_L,N_T,N_E,N_I` header line.
inline DatasetSchema parse_schema_header(std::string_view line, int line_no = 1) {
    constexpr std::string_view kPrefix = "#schema";
    if (line.substr(0, kPrefix.size()) != kPrefix)
        throw ParseError("missing '#schema' header", line_no);
    auto fields = detail::split_csv(line.substr(kPrefix.size()));
    if (fields.size() != 5)
        throw ParseError("schema header must carry 5 comma-separated sizes", line_no);
    DatasetSchema s;
    s.n_users = static_cast<int>(detail::parse_int_field(fields[0], line_no));
    s.n_locations = static_cast<int>(detail::parse_int_field(fields[1], line_no));
    s.n_timeslots = static_cast<int>(detail::parse_int_field(fields[2], line_no));
    s.n_events = static_cast<int>(detail::parse_int_field(fields[3], line_no));
    s.n_intents = static_cast<int>(detail::parse_int_field(fields[4], line_no));
    s.validate();
    return s;
}

/// Read the schema header of a dataset file without loading the records.
inline DatasetSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw IoError("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file, expected '#schema' header", 1);
    return parse_schema_header(line, 1);
}

/// Load a dataset file: one `user,location,timeslot,weekday,event,intent,timestamp`
/// record per line under a required `#schema` header. Records are grouped by user
/// and stably sorted by timestamp, so file order breaks ties.
inline Dataset load_dataset(const std::string& path, const DatasetSchema& schema) {
    schema.validate();
    std::ifstream in(path);
    if (!in.is_open()) throw IoError("cannot open dataset file: " + path);

    Dataset ds;
    ds.schema = schema;
    ds.users.resize(static_cast<std::size_t>(schema.n_users));

    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!saw_header && line.rfind("#schema", 0) == 0) {
                DatasetSchema header = parse_schema_header(line, line_no);
                if (!(header == schema))
                    throw SchemaError("dataset header disagrees with the requested schema");
                saw_header = true;
            }
            continue;
        }
        auto fields = detail::split_csv(line);
        if (fields.size() != 7)
            throw ParseError("expected 7 comma-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        EventRecord r;
        r.user_id = static_cast<int>(detail::parse_int_field(fields[0], line_no));
        r.location_id = static_cast<int>(detail::parse_int_field(fields[1], line_no));
        r.timeslot_id = static_cast<int>(detail::parse_int_field(fields[2], line_no));
        r.weekday_id = static_cast<int>(detail::parse_int_field(fields[3], line_no));
        r.event_id = static_cast<int>(detail::parse_int_field(fields[4], line_no));
        r.intent_id = static_cast<int>(detail::parse_int_field(fields[5], line_no));
        r.timestamp = detail::parse_int_field(fields[6], line_no);
        validate_record(r, schema, line_no);
        ds.users[static_cast<std::size_t>(r.user_id)].push_back(r);
    }
    if (ds.record_count() > 0 && !saw_header)
        throw ParseError("dataset file lacks the required '#schema' header", 1);
    for (auto& u : ds.users)
        std::stable_sort(u.begin(), u.end(),
                         [](const EventRecord& a, const EventRecord& b) {
                             return a.timestamp < b.timestamp;
                         });
    return ds;
}

inline void save_dataset(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out.is_open()) throw IoError("cannot write dataset file: " + path);
    const DatasetSchema& s = ds.schema;
    out << "#schema " << s.n_users << ',' << s.n_locations << ',' << s.n_timeslots << ','
        << s.n_events << ',' << s.n_intents << '\n';
    for (const auto& user : ds.users)
        for (const auto& r : user)
            out << r.user_id << ',' << r.location_id << ',' << r.timeslot_id << ','
                << r.weekday_id << ',' << r.event_id << ',' << r.intent_id << ','
                << r.timestamp << '\n';
    if (!out) throw IoError("failed while writing dataset file: " + path);
}

}  // namespace pituning
