#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relwords {

using Timestamp = std::chrono::sys_seconds;

struct Document {
    std::string id;
    std::string text;
    std::optional<Timestamp> timestamp;
    std::optional<std::string> group;

    bool operator==(const Document&) const = default;
};

// Ordered document collection. The position of a document in `docs` is its
// index everywhere downstream (rows of the feature matrix, labels, ...).
struct Corpus {
    std::vector<Document> docs;
    std::string provenance;

    std::size_t size() const { return docs.size(); }
    bool empty() const { return docs.empty(); }
};

// Field names used when reading JSON-lines corpora.
struct JsonlFields {
    std::string id = "id";
    std::string text = "text";
    std::string date = "date";
    std::string group = "group";
};

inline constexpr std::string_view kGroupBefore = "before";
inline constexpr std::string_view kGroupAfter = "after";

// Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM[:SS]" with an optional trailing "Z"
// or numeric offset ("+0000", "-05:00"). Offsets are folded into UTC.
Timestamp parse_timestamp(std::string_view s);

// Date-only form when the time of day is midnight, "YYYY-MM-DDTHH:MM:SSZ" otherwise.
std::string format_timestamp(Timestamp t);
std::string format_date(Timestamp t);

Corpus load_jsonl(const std::filesystem::path& path, const JsonlFields& fields = {});
Corpus load_dir(const std::filesystem::path& dir);

// Writes the canonical {id, text, date?, group?} form; temp file + rename.
void save_jsonl(const Corpus& corpus, const std::filesystem::path& path);

// Documents with timestamp >= boundary go to "after", the rest to "before".
Corpus split_by_period(const Corpus& corpus, Timestamp boundary);

// Throws naming the first duplicate id / an empty text.
void validate(const Corpus& corpus);

// SHA-256 of the canonical serialization, hex encoded.
std::string corpus_hash(const Corpus& corpus);

}  // namespace relwords
