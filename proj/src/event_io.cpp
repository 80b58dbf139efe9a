#include "evcorr/event_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <json.hpp>

namespace evcorr {

EventIoError::EventIoError(std::string code, const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      code_(std::move(code)),
      line_(line) {}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

// RFC 4180-ish: quoted fields may contain commas and doubled quotes, but not newlines.
std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false, was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = was_quoted = true;
        } else if (c == ',') {
            cells.push_back(was_quoted ? cell : trim(cell));
            cell.clear();
            was_quoted = false;
        } else {
            cell += c;
        }
    }
    if (quoted) throw EventIoError("MALFORMED_ROW", "unterminated quote", line_no);
    cells.push_back(was_quoted ? cell : trim(cell));
    return cells;
}

std::string quote_csv(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct RawFields {
    std::string timestamp, activity;
    std::optional<std::string> lifecycle, resource, case_id;
};

LabeledEvent make_event(const RawFields& f, std::size_t line_no) {
    LabeledEvent e;
    try {
        e.event.timestamp = parse_timestamp(f.timestamp);
    } catch (const std::invalid_argument& ex) {
        throw EventIoError("BAD_TIMESTAMP", ex.what(), line_no);
    }
    if (f.activity.empty()) throw EventIoError("MALFORMED_ROW", "empty activity", line_no);
    e.event.activity = f.activity;
    if (f.lifecycle && !f.lifecycle->empty()) {
        auto lc = parse_lifecycle(*f.lifecycle);
        if (!lc) throw EventIoError("BAD_LIFECYCLE", "unknown lifecycle '" + *f.lifecycle + "'", line_no);
        e.event.lifecycle = lc;
    }
    if (f.resource && !f.resource->empty()) e.event.resource = f.resource;
    if (f.case_id) e.case_id = *f.case_id;
    return e;
}

void read_csv(std::istream& in, EventRead& out) {
    std::string line;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t> columns;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto cells = split_csv(line, line_no);
        if (columns.empty()) {
            for (std::size_t i = 0; i < cells.size(); ++i) columns[lower(cells[i])] = i;
            for (const char* required : {"timestamp", "activity"})
                if (!columns.count(required))
                    throw EventIoError("MISSING_COLUMN", std::string("header lacks '") + required + "'", line_no);
            out.has_case_ids = columns.count("case_id") != 0;
            continue;
        }
        if (cells.size() != columns.size())
            throw EventIoError("MALFORMED_ROW",
                               "expected " + std::to_string(columns.size()) + " fields, got " +
                                   std::to_string(cells.size()),
                               line_no);
        RawFields f;
        f.timestamp = cells[columns["timestamp"]];
        f.activity = cells[columns["activity"]];
        if (auto it = columns.find("lifecycle"); it != columns.end()) f.lifecycle = cells[it->second];
        if (auto it = columns.find("resource"); it != columns.end()) f.resource = cells[it->second];
        if (auto it = columns.find("case_id"); it != columns.end()) f.case_id = cells[it->second];
        out.events.push_back(make_event(f, line_no));
    }
}

std::optional<std::string> json_string(const nlohmann::json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number()) return it->dump();
    throw EventIoError("MALFORMED_ROW", std::string("field '") + key + "' must be a string", line_no);
}

void read_jsonl(std::istream& in, EventRead& out) {
    std::string line;
    std::size_t line_no = 0;
    bool any_case = false, all_case = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw EventIoError("MALFORMED_ROW", e.what(), line_no);
        }
        if (!obj.is_object()) throw EventIoError("MALFORMED_ROW", "expected a JSON object", line_no);
        RawFields f;
        auto ts = json_string(obj, "timestamp", line_no);
        auto act = json_string(obj, "activity", line_no);
        if (!ts || !act) throw EventIoError("MALFORMED_ROW", "timestamp and activity are required", line_no);
        f.timestamp = *ts;
        f.activity = *act;
        f.lifecycle = json_string(obj, "lifecycle", line_no);
        f.resource = json_string(obj, "resource", line_no);
        f.case_id = json_string(obj, "case_id", line_no);
        any_case |= f.case_id.has_value();
        all_case &= f.case_id.has_value();
        out.events.push_back(make_event(f, line_no));
    }
    out.has_case_ids = any_case && all_case;
}

}  // namespace

EventFormat format_for_path(const std::string& path) {
    auto p = lower(path);
    return ends_with(p, ".jsonl") || ends_with(p, ".ndjson") || ends_with(p, ".json") ? EventFormat::jsonl
                                                                                       : EventFormat::csv;
}

std::optional<EventFormat> parse_event_format(std::string_view name) {
    auto n = lower(name);
    if (n == "csv") return EventFormat::csv;
    if (n == "jsonl" || n == "ndjson") return EventFormat::jsonl;
    return std::nullopt;
}

EventRead read_labeled_events(std::istream& in, EventFormat format) {
    EventRead out;
    if (format == EventFormat::csv)
        read_csv(in, out);
    else
        read_jsonl(in, out);

    auto by_time = [](const LabeledEvent& a, const LabeledEvent& b) { return a.event.timestamp < b.event.timestamp; };
    if (!std::is_sorted(out.events.begin(), out.events.end(), by_time)) {
        std::stable_sort(out.events.begin(), out.events.end(), by_time);
        out.warnings.push_back("input was not in timestamp order; sorted");
    }
    return out;
}

EventRead read_labeled_events_file(const std::string& path, std::optional<EventFormat> format) {
    std::ifstream in(path);
    if (!in) throw EventIoError("NOT_FOUND", "cannot open '" + path + "'");
    return read_labeled_events(in, format.value_or(format_for_path(path)));
}

std::vector<UncorrelatedEvent> read_events(std::istream& in, EventFormat format, std::vector<std::string>* warnings) {
    auto read = read_labeled_events(in, format);
    if (warnings) warnings->insert(warnings->end(), read.warnings.begin(), read.warnings.end());
    std::vector<UncorrelatedEvent> out;
    out.reserve(read.events.size());
    for (auto& e : read.events) out.push_back(std::move(e.event));
    return out;
}

std::vector<EventKey> keys_for(const std::vector<UncorrelatedEvent>& events) {
    std::map<std::pair<Timestamp, std::string>, std::uint32_t> seen;
    std::vector<EventKey> keys;
    keys.reserve(events.size());
    for (const auto& e : events) {
        auto& n = seen[{e.timestamp, e.activity}];
        keys.push_back(EventKey{e.timestamp, e.activity, n++});
    }
    return keys;
}

void GroundTruth::add(EventKey key, std::string case_id) { truth_[std::move(key)] = std::move(case_id); }

const std::string& GroundTruth::case_of(const EventKey& key) const {
    auto it = truth_.find(key);
    if (it == truth_.end())
        throw std::out_of_range("no ground truth for " + format_timestamp(key.timestamp) + " " + key.activity + " #" +
                                std::to_string(key.ordinal));
    return it->second;
}

std::vector<LabeledEvent> GroundTruth::relabel(const std::vector<UncorrelatedEvent>& events) const {
    auto keys = keys_for(events);
    std::vector<LabeledEvent> out;
    out.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) out.push_back(LabeledEvent{events[i], case_of(keys[i])});
    return out;
}

StrippedLog strip_case_ids(const std::vector<LabeledEvent>& labeled) {
    StrippedLog out;
    out.events.reserve(labeled.size());
    for (const auto& e : labeled) out.events.push_back(e.event);
    auto keys = keys_for(out.events);
    for (std::size_t i = 0; i < labeled.size(); ++i) out.truth.add(keys[i], labeled[i].case_id);
    return out;
}

void write_correlated_csv(std::ostream& out, const std::vector<CorrelatedInstance>& instances) {
    out << "case_id,timestamp,activity,trust,lifecycle,resource\n";
    char trust[32];
    for (const auto& inst : instances) {
        if (inst.case_id) out << inst.case_id->value;
        out << ',' << format_timestamp(inst.timestamp) << ',' << quote_csv(inst.activity) << ',';
        if (inst.trust) {
            std::snprintf(trust, sizeof trust, "%.2f", *inst.trust);
            out << trust;
        }
        out << ',';
        if (inst.lifecycle) out << to_string(*inst.lifecycle);
        out << ',';
        if (inst.resource) out << quote_csv(*inst.resource);
        out << '\n';
    }
}

void write_labeled_csv(std::ostream& out, const std::vector<LabeledEvent>& events) {
    out << "case_id,timestamp,activity,lifecycle,resource\n";
    for (const auto& e : events) {
        out << quote_csv(e.case_id) << ',' << format_timestamp(e.event.timestamp) << ','
            << quote_csv(e.event.activity) << ',';
        if (e.event.lifecycle) out << to_string(*e.event.lifecycle);
        out << ',';
        if (e.event.resource) out << quote_csv(*e.event.resource);
        out << '\n';
    }
}

}  // namespace evcorr
