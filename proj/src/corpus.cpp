#include "relwords/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "relwords/error.hpp"
#include "relwords/io.hpp"

namespace relwords {

namespace {

using json = nlohmann::json;

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

int parse_int(std::string_view s, std::string_view whole) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
        throw Error("invalid timestamp \"" + std::string(whole) + "\"");
    }
    return v;
}

json to_json(const Document& d) {
    json j;
    j["id"] = d.id;
    j["text"] = d.text;
    if (d.timestamp) j["date"] = format_timestamp(*d.timestamp);
    if (d.group) j["group"] = *d.group;
    return j;
}

}  // namespace

Timestamp parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    const std::string_view whole = s;
    auto bad = [&] { return Error("invalid timestamp \"" + std::string(whole) + "\""); };
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') throw bad();

    const year_month_day ymd{year{parse_int(s.substr(0, 4), whole)},
                             month{static_cast<unsigned>(parse_int(s.substr(5, 2), whole))},
                             day{static_cast<unsigned>(parse_int(s.substr(8, 2), whole))}};
    if (!ymd.ok()) throw bad();
    sys_seconds t{sys_days{ymd}};
    s.remove_prefix(10);
    if (s.empty()) return t;
    if (s[0] != 'T' && s[0] != ' ') throw bad();
    s.remove_prefix(1);

    if (s.size() < 5 || s[2] != ':') throw bad();
    const int hh = parse_int(s.substr(0, 2), whole);
    const int mm = parse_int(s.substr(3, 2), whole);
    int ss = 0;
    s.remove_prefix(5);
    if (!s.empty() && s[0] == ':') {
        if (s.size() < 3) throw bad();
        ss = parse_int(s.substr(1, 2), whole);
        s.remove_prefix(3);
        if (!s.empty() && s[0] == '.') {  // fractional seconds are dropped
            s.remove_prefix(1);
            while (!s.empty() && std::isdigit(static_cast<unsigned char>(s[0]))) s.remove_prefix(1);
        }
    }
    if (hh > 23 || mm > 59 || ss > 60) throw bad();
    t += hours{hh} + minutes{mm} + seconds{ss};

    if (s.empty() || s == "Z") return t;
    if (s[0] != '+' && s[0] != '-') throw bad();
    const int sign = s[0] == '+' ? 1 : -1;
    s.remove_prefix(1);
    int off_h = 0;
    int off_m = 0;
    if (s.size() == 4) {
        off_h = parse_int(s.substr(0, 2), whole);
        off_m = parse_int(s.substr(2, 2), whole);
    } else if (s.size() == 5 && s[2] == ':') {
        off_h = parse_int(s.substr(0, 2), whole);
        off_m = parse_int(s.substr(3, 2), whole);
    } else if (s.size() == 2) {
        off_h = parse_int(s, whole);
    } else {
        throw bad();
    }
    return t - sign * (hours{off_h} + minutes{off_m});
}

std::string format_date(Timestamp t) {
    using namespace std::chrono;
    const year_month_day ymd{floor<days>(t)};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_start = floor<days>(t);
    const auto tod = t - day_start;
    if (tod == seconds{0}) return format_date(t);
    const hh_mm_ss<seconds> hms{tod};
    char buf[16];
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
    return format_date(t) + buf;
}

void validate(const Corpus& corpus) {
    if (corpus.empty()) throw Error("empty corpus");
    std::unordered_set<std::string_view> seen;
    for (const auto& d : corpus.docs) {
        if (!seen.insert(d.id).second) throw Error("duplicate id \"" + d.id + "\"");
        if (is_blank(d.text)) throw Error("document \"" + d.id + "\" has empty text");
    }
}

Corpus load_jsonl(const std::filesystem::path& path, const JsonlFields& fields) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file " + path.string());

    Corpus corpus;
    corpus.provenance = "jsonl:" + path.string();
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_blank(line)) continue;
        auto fail = [&](const std::string& what) {
            return Error(path.string() + ": line " + std::to_string(line_no) + ": " + what);
        };

        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw fail(std::string("malformed JSON (") + e.what() + ")");
        }
        if (!j.is_object()) throw fail("expected a JSON object");

        Document d;
        const auto id = j.find(fields.id);
        if (id == j.end()) throw fail("missing field \"" + fields.id + "\"");
        if (id->is_string()) {
            d.id = id->get<std::string>();
        } else if (id->is_number_integer()) {
            d.id = std::to_string(id->get<long long>());
        } else {
            throw fail("field \"" + fields.id + "\" must be a string or integer");
        }

        const auto text = j.find(fields.text);
        if (text == j.end()) throw fail("missing field \"" + fields.text + "\"");
        if (!text->is_string()) throw fail("field \"" + fields.text + "\" must be a string");
        d.text = text->get<std::string>();
        if (is_blank(d.text)) throw fail("empty text for id \"" + d.id + "\"");

        if (const auto date = j.find(fields.date); date != j.end() && !date->is_null()) {
            if (!date->is_string()) throw fail("field \"" + fields.date + "\" must be a string");
            try {
                d.timestamp = parse_timestamp(date->get<std::string>());
            } catch (const Error& e) {
                throw fail(e.what());
            }
        }
        if (const auto group = j.find(fields.group); group != j.end() && !group->is_null()) {
            if (!group->is_string()) throw fail("field \"" + fields.group + "\" must be a string");
            d.group = group->get<std::string>();
        }

        if (!ids.insert(d.id).second) throw fail("duplicate id \"" + d.id + "\"");
        corpus.docs.push_back(std::move(d));
    }
    if (corpus.empty()) throw Error("empty corpus");
    return corpus;
}

Corpus load_dir(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Error("not a directory: " + dir.string());

    std::vector<std::string> rel_paths;
    for (fs::recursive_directory_iterator it(dir, ec), end; it != end; it.increment(ec)) {
        if (ec) throw Error("cannot read directory " + dir.string() + ": " + ec.message());
        if (it->is_regular_file()) rel_paths.push_back(fs::relative(it->path(), dir).generic_string());
    }
    if (ec) throw Error("cannot read directory " + dir.string() + ": " + ec.message());
    std::sort(rel_paths.begin(), rel_paths.end());

    Corpus corpus;
    corpus.provenance = "dir:" + dir.string();
    for (const auto& rel : rel_paths) {
        const fs::path p = dir / rel;
        std::ifstream in(p, std::ios::binary);
        if (!in) throw Error("cannot read file " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad()) throw Error("cannot read file " + p.string());
        Document d;
        d.id = rel;
        d.text = ss.str();
        if (is_blank(d.text)) throw Error("file " + p.string() + " has empty text");
        corpus.docs.push_back(std::move(d));
    }
    if (corpus.empty()) throw Error("empty corpus");
    return corpus;
}

void save_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
    std::string out;
    for (const auto& d : corpus.docs) {
        out += to_json(d).dump();
        out += '\n';
    }
    write_file_atomic(path, out);
}

Corpus split_by_period(const Corpus& corpus, Timestamp boundary) {
    std::vector<std::string> missing;
    for (const auto& d : corpus.docs) {
        if (!d.timestamp) missing.push_back(d.id);
    }
    if (!missing.empty()) {
        std::string ids;
        for (const auto& id : missing) ids += (ids.empty() ? "" : ", ") + id;
        throw Error("documents without timestamp: " + ids);
    }
    Corpus out = corpus;
    for (auto& d : out.docs) {
        d.group = std::string(*d.timestamp >= boundary ? kGroupAfter : kGroupBefore);
    }
    return out;
}

std::string corpus_hash(const Corpus& corpus) {
    std::string canonical;
    for (const auto& d : corpus.docs) {
        canonical += to_json(d).dump();
        canonical += '\n';
    }
    return sha256_hex(canonical);
}

}  // namespace relwords
