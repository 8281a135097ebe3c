#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "relwords/corpus.hpp"

namespace relwords {

struct YearMonth {
    int year = 0;
    unsigned month = 0;

    auto operator<=>(const YearMonth&) const = default;
};

// "YYYY-MM".
YearMonth parse_year_month(std::string_view s);
std::string format_year_month(YearMonth ym);

// Inclusive month range, first <= last.
std::vector<YearMonth> month_range(YearMonth first, YearMonth last);

struct RetryPolicy {
    int max_attempts = 4;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::milliseconds max_backoff{8000};
};

struct ArchiveRequest {
    // e.g. "https://api.nytimes.com/svc/archive/v1/{year}/{month}.json?api-key={key}".
    // {month} expands without zero padding.
    std::string url_template;
    YearMonth first;
    YearMonth last;
    std::string api_key;
    std::filesystem::path cache_dir = ".relwords-cache";
    RetryPolicy retry;
};

struct ArchiveResult {
    Corpus corpus;
    std::size_t network_requests = 0;
    std::size_t cache_hits = 0;
    std::size_t skipped_empty = 0;
};

std::string expand_url_template(std::string_view url_template, YearMonth ym, std::string_view key);

// Cache file for one month: <cache_dir>/<hash of url_template>/<YYYY-MM>.json.
// The API key is not part of the key.
std::filesystem::path archive_cache_path(const std::filesystem::path& cache_dir,
                                         std::string_view url_template, YearMonth ym);

// Parses one month of archive JSON ({"response": {"docs": [...]}}, each doc with
// "_id", "snippet", "pub_date"). Articles with an empty snippet are dropped and
// counted in `skipped_empty`.
std::vector<Document> parse_archive_response(std::string_view body, std::string_view source,
                                             std::size_t* skipped_empty = nullptr);

// Documents from every month in the range, sorted by timestamp (stable).
// Raw responses are cached; cached months cause no network traffic.
ArchiveResult fetch_archive(const ArchiveRequest& request);

}  // namespace relwords
