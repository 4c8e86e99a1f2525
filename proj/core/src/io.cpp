#include "evg/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "evg/error.hpp"
#include "evg/format.hpp"

namespace evg {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_field_number(const std::string& text, std::size_t line, const char* what) {
    try {
        return parse_number(text);
    } catch (const std::invalid_argument&) {
        throw ParseError(line, std::string("bad ") + what + " '" + text + "'");
    }
}

std::string json_label(const nlohmann::json& v, std::size_t line) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ParseError(line, "node labels must be strings or integers");
}

} // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? cur : trim(cur));
            cur.clear();
            was_quoted = false;
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(was_quoted ? cur : trim(cur));
    return fields;
}

std::string csv_field(const std::string& value) {
    const bool needs_quotes = value.find_first_of(",\"\n") != std::string::npos ||
                              (!value.empty() && (std::isspace(static_cast<unsigned char>(value.front())) ||
                                                  std::isspace(static_cast<unsigned char>(value.back()))));
    if (!needs_quotes) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<RawRecord> read_csv_records(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t> columns;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto header = split_csv_line(line);
        for (std::size_t i = 0; i < header.size(); ++i) columns[header[i]] = i;
        break;
    }
    if (columns.empty()) throw ParseError(line_no, "missing CSV header");
    for (const char* required : {"source", "target", "time"})
        if (!columns.count(required))
            throw ParseError(line_no, std::string("CSV header lacks required column '") + required + "'");
    const std::size_t src = columns["source"], dst = columns["target"], tim = columns["time"];
    const std::optional<std::size_t> dur =
        columns.count("duration") ? std::optional<std::size_t>(columns["duration"]) : std::nullopt;

    std::vector<RawRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        auto field = [&](std::size_t i) -> std::string { return i < fields.size() ? fields[i] : std::string(); };
        RawRecord r;
        r.line = line_no;
        if (std::string s = field(src); !s.empty()) r.sources.push_back(s);
        if (std::string t = field(dst); !t.empty()) r.targets.push_back(t);
        if (std::string t = field(tim); !t.empty()) r.time = parse_field_number(t, line_no, "time");
        if (dur) {
            if (std::string d = field(*dur); !d.empty()) r.duration = parse_field_number(d, line_no, "duration");
        }
        if (r.sources.empty()) throw ParseError(line_no, "missing source");
        if (!r.time) throw ParseError(line_no, "missing time");
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<RawRecord> read_jsonl_records(std::istream& in) {
    std::vector<RawRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");
        RawRecord r;
        r.line = line_no;
        if (!obj.contains("source") || !obj["source"].is_array() || obj["source"].empty())
            throw ParseError(line_no, "missing source");
        for (const auto& v : obj["source"]) r.sources.push_back(json_label(v, line_no));
        if (obj.contains("target")) {
            if (!obj["target"].is_array()) throw ParseError(line_no, "target must be an array");
            for (const auto& v : obj["target"]) r.targets.push_back(json_label(v, line_no));
        }
        if (!obj.contains("t") || !obj["t"].is_number()) throw ParseError(line_no, "missing time");
        r.time = obj["t"].get<double>();
        if (obj.contains("d")) {
            if (!obj["d"].is_number()) throw ParseError(line_no, "duration must be a number");
            r.duration = obj["d"].get<double>();
        }
        records.push_back(std::move(r));
    }
    return records;
}

EventSequence read_events(const std::filesystem::path& path, bool directed, OverlapPolicy policy,
                          std::optional<InputFormat> format) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    if (!format) {
        auto ext = path.extension().string();
        format = (ext == ".jsonl" || ext == ".json") ? InputFormat::jsonl : InputFormat::csv;
    }
    auto records = *format == InputFormat::jsonl ? read_jsonl_records(in) : read_csv_records(in);
    return ingest(records, directed, policy);
}

void write_events_csv(std::ostream& out, const EventSequence& seq) {
    if (!seq.is_dyadic()) throw UnsupportedInput("CSV output needs dyadic events; use JSON-lines");
    const bool durations = std::any_of(seq.events().begin(), seq.events().end(),
                                       [](const HyperEvent& e) { return e.duration != 0.0; });
    out << "source,target,time" << (durations ? ",duration" : "") << '\n';
    for (const auto& e : seq.events()) {
        const NodeId a = e.sources[0];
        const NodeId b = seq.directed() ? e.targets[0] : e.sources[1];
        out << csv_field(seq.label(a)) << ',' << csv_field(seq.label(b)) << ',' << format_number(e.time);
        if (durations) out << ',' << format_number(e.duration);
        out << '\n';
    }
}

void write_events_jsonl(std::ostream& out, const EventSequence& seq) {
    for (const auto& e : seq.events()) {
        nlohmann::json obj;
        obj["source"] = nlohmann::json::array();
        for (NodeId v : e.sources) obj["source"].push_back(seq.label(v));
        obj["target"] = nlohmann::json::array();
        for (NodeId v : e.targets) obj["target"].push_back(seq.label(v));
        obj["t"] = e.time;
        if (e.duration != 0.0) obj["d"] = e.duration;
        out << obj.dump() << '\n';
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("cannot move output into place at '" + path.string() + "': " + ec.message());
    }
}

} // namespace evg
