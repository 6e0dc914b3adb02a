#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace litiscope {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 `YYYY-MM-DD` date. Returns nullopt on any malformed or invalid date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

/// Financial data of a patent's assignee taken from annual filings. Each field may be
/// individually missing.
struct SecData {
    std::optional<double> revenue;
    std::optional<double> eps;
    std::optional<double> share_price;
    std::optional<int> report_year;

    bool any_value() const noexcept { return revenue || eps || share_price; }
    bool operator==(const SecData&) const = default;
};

struct PatentRecord {
    std::string id;
    Date issue_date{};
    std::string claims_text;
    std::int64_t n_inventors = 0;
    std::int64_t n_claims = 0;
    std::int64_t n_claim_words = 0;
    std::int64_t n_foreign_refs = 0;
    std::vector<std::string> backward_refs;
    std::string assignee_id;
    std::optional<SecData> sec;
    std::optional<Date> first_litigation_date;

    /// True when the record carries at least one financial value.
    bool has_sec() const noexcept { return sec && sec->any_value(); }
    bool litigated() const noexcept { return first_litigation_date.has_value(); }

    bool operator==(const PatentRecord&) const = default;
};

struct Corpus {
    std::vector<PatentRecord> records;
    std::string keyword_tag;

    std::size_t size() const noexcept { return records.size(); }
    bool operator==(const Corpus&) const = default;
};

enum class DataOption { NoSec, SecDrop, SecImpute };

std::string_view to_string(DataOption option);
std::optional<DataOption> parse_data_option(std::string_view text);

struct LitigationLabel {
    bool litigated = false;
    std::optional<double> years_to_litigation;
};

inline constexpr std::string_view kCorpusHeader = "#litiscope-corpus v1";
inline constexpr double kDaysPerYear = 365.25;

/// Checks the record invariants; throws DataError describing the first violation.
void validate_record(const PatentRecord& record);

/// Reads a corpus file. Errors name the offending line number.
Corpus load_corpus(const std::string& path, const std::string& tag);
Corpus read_corpus(std::istream& in, const std::string& tag);
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::string& path, const Corpus& corpus);

/// Per-field fallback values for SecImpute. Unset fields use the corpus median.
struct ImputeDefaults {
    std::optional<double> revenue;
    std::optional<double> eps;
    std::optional<double> share_price;
    std::optional<int> report_year;

    bool operator==(const ImputeDefaults&) const = default;
};

/// Defaults with every unset field filled by the corpus median. Throws DataError when a
/// numeric field has no observed value at all.
ImputeDefaults resolve_impute_defaults(const Corpus& corpus, const ImputeDefaults& defaults = {});

Corpus apply_data_option(const Corpus& corpus, DataOption option,
                         const ImputeDefaults& defaults = {});

LitigationLabel litigation_label(const PatentRecord& record);

/// Fraction of litigated records; 0 for an empty corpus.
double litigation_rate(const Corpus& corpus);

struct SynthConfig {
    std::size_t n = 5000;
    double litigation_rate = 0.02;
    double signal_strength = 1.0;
    std::uint64_t seed = 7;
    /// Fraction of records that carry SEC data.
    double sec_fraction = 0.3;
    /// Litigation rate among SEC-carrying records; defaults to litigation_rate.
    std::optional<double> sec_litigation_rate;
    std::string keyword_tag = "synthetic";
};

/// Generates a desk-scale corpus with exactly round(n * litigation_rate) litigated records.
/// Litigated records get shifted distributions on references to litigated patents, claim
/// vocabulary, counts and SEC values, in proportion to signal_strength.
Corpus generate_synthetic(const SynthConfig& config);

} // namespace litiscope
