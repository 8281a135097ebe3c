#include "relwords/archive.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <optional>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "relwords/error.hpp"
#include "relwords/io.hpp"

namespace relwords {

namespace {

using json = nlohmann::json;

struct MonthFetch {
    std::vector<Document> docs;
    bool from_cache = false;
    std::size_t skipped_empty = 0;
};

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
        s.replace(pos, from.size(), to);
    }
}

// Splits "scheme://host[:port]/path?query" into the client base and the request target.
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error("invalid URL \"" + url + "\"");
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string http_get(const std::string& url, const RetryPolicy& retry) {
    const auto [base, target] = split_url(url);
    httplib::Client client(base);
    client.set_follow_location(true);
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(std::chrono::seconds(60));

    auto backoff = retry.initial_backoff;
    std::string last_error;
    for (int attempt = 1; attempt <= std::max(1, retry.max_attempts); ++attempt) {
        auto res = client.Get(target);
        if (res) {
            if (res->status == 200) return res->body;
            if (res->status == 401 || res->status == 403) {
                throw Error("authentication failed (HTTP " + std::to_string(res->status) + "): " + res->body);
            }
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
            const bool transient = res->status == 429 || res->status >= 500;
            if (!transient) throw Error("archive request failed: " + last_error);
        } else {
            last_error = httplib::to_string(res.error());
        }
        if (attempt < retry.max_attempts) {
            std::this_thread::sleep_for(backoff);
            backoff = std::min(backoff * 2, retry.max_backoff);
        }
    }
    throw Error("archive request failed after " + std::to_string(retry.max_attempts) +
                " attempts: " + last_error);
}

MonthFetch fetch_month(const ArchiveRequest& req, YearMonth ym) {
    MonthFetch out;
    const auto cache_file = archive_cache_path(req.cache_dir, req.url_template, ym);
    const auto source = format_year_month(ym);
    std::error_code ec;
    if (std::filesystem::is_regular_file(cache_file, ec)) {
        out.docs = parse_archive_response(read_file(cache_file), source, &out.skipped_empty);
        out.from_cache = true;
        return out;
    }
    const auto body = http_get(expand_url_template(req.url_template, ym, req.api_key), req.retry);
    // Validate before caching so a bad payload is never replayed offline.
    out.docs = parse_archive_response(body, source, &out.skipped_empty);
    write_file_atomic(cache_file, body);
    return out;
}

const json& require(const json& obj, const char* field, const std::string& where) {
    const auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) {
        throw Error("archive schema mismatch: missing field \"" + where + field + "\"");
    }
    return *it;
}

}  // namespace

YearMonth parse_year_month(std::string_view s) {
    int y = 0;
    unsigned m = 0;
    char tail = 0;
    const std::string str(s);
    if (s.size() != 7 || std::sscanf(str.c_str(), "%4d-%2u%c", &y, &m, &tail) != 2 || m < 1 || m > 12) {
        throw Error("invalid month \"" + str + "\" (expected YYYY-MM)");
    }
    return {y, m};
}

std::string format_year_month(YearMonth ym) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", ym.year, ym.month);
    return buf;
}

std::vector<YearMonth> month_range(YearMonth first, YearMonth last) {
    if (last < first) throw Error("month range is empty: " + format_year_month(first) + " > " +
                                  format_year_month(last));
    std::vector<YearMonth> out;
    for (YearMonth ym = first; ym <= last;) {
        out.push_back(ym);
        if (++ym.month > 12) {
            ym.month = 1;
            ++ym.year;
        }
    }
    return out;
}

std::string expand_url_template(std::string_view url_template, YearMonth ym, std::string_view key) {
    std::string url(url_template);
    replace_all(url, "{year}", std::to_string(ym.year));
    replace_all(url, "{month}", std::to_string(ym.month));
    replace_all(url, "{key}", key);
    return url;
}

std::filesystem::path archive_cache_path(const std::filesystem::path& cache_dir,
                                         std::string_view url_template, YearMonth ym) {
    return cache_dir / sha256_hex(url_template).substr(0, 16) / (format_year_month(ym) + ".json");
}

std::vector<Document> parse_archive_response(std::string_view body, std::string_view source,
                                             std::size_t* skipped_empty) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw Error("archive response for " + std::string(source) + " is not JSON: " + e.what());
    }
    if (!j.is_object()) throw Error("archive schema mismatch: missing field \"response\"");
    const auto& docs = require(require(j, "response", ""), "docs", "response.");
    if (!docs.is_array()) throw Error("archive schema mismatch: \"response.docs\" is not an array");

    std::vector<Document> out;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const std::string where = "response.docs[" + std::to_string(i) + "].";
        const auto& a = docs[i];
        Document d;
        try {
            d.id = require(a, "_id", where).get<std::string>();
            d.text = require(a, "snippet", where).get<std::string>();
            d.timestamp = parse_timestamp(require(a, "pub_date", where).get<std::string>());
        } catch (const json::type_error&) {
            throw Error("archive schema mismatch: non-string field in \"" + where.substr(0, where.size() - 1) + "\"");
        }
        if (d.text.find_first_not_of(" \t\r\n") == std::string::npos) {
            ++skipped;
            continue;
        }
        out.push_back(std::move(d));
    }
    if (skipped_empty) *skipped_empty = skipped;
    return out;
}

ArchiveResult fetch_archive(const ArchiveRequest& request) {
    const auto months = month_range(request.first, request.last);
    std::vector<std::future<MonthFetch>> pending;
    pending.reserve(months.size());
    for (const auto ym : months) {
        pending.push_back(std::async(std::launch::async, fetch_month, std::cref(request), ym));
    }

    ArchiveResult result;
    result.corpus.provenance = "archive:" + request.url_template + " " + format_year_month(request.first) +
                               ".." + format_year_month(request.last);
    std::optional<Error> first_error;
    for (auto& f : pending) {
        try {
            auto month = f.get();
            (month.from_cache ? result.cache_hits : result.network_requests) += 1;
            result.skipped_empty += month.skipped_empty;
            for (auto& d : month.docs) result.corpus.docs.push_back(std::move(d));
        } catch (const Error& e) {
            if (!first_error) first_error = e;
        }
    }
    if (first_error) throw *first_error;

    std::stable_sort(result.corpus.docs.begin(), result.corpus.docs.end(),
                     [](const Document& a, const Document& b) { return *a.timestamp < *b.timestamp; });
    validate(result.corpus);
    return result;
}

}  // namespace relwords
