#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jumplab {

/// Thrown on malformed price input; the message names the offending row.
class IngestError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Daily close series, sorted by date ascending.
struct PriceSeries {
    std::vector<std::string> dates;
    std::vector<double> closes;

    std::size_t size() const { return closes.size(); }
};

/// Column naming for ingest; defaults match the bundled fixture.
struct IngestOptions {
    std::string date_column = "date";
    std::string close_column = "close";
};

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // Trim surrounding whitespace; the corpus is unquoted.
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

}  // namespace detail

/// Reads a close-price CSV: one header row, then date/close rows. Lines whose
/// first non-blank character is '#' are skipped (tool output embeds its
/// configuration that way). Rows are sorted by date; duplicate dates and
/// non-positive or non-numeric closes are rejected with the row named.
inline PriceSeries ingest_csv(std::istream& in, const IngestOptions& opts = {}) {
    std::string line;
    std::size_t line_no = 0;
    auto next_data_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos || line[b] == '#') continue;
            return true;
        }
        return false;
    };

    if (!next_data_line()) throw IngestError("ingest: input has no header row");
    const auto header = detail::split_csv_row(line);
    std::size_t date_idx = header.size(), close_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == opts.date_column) date_idx = i;
        if (header[i] == opts.close_column) close_idx = i;
    }
    if (date_idx == header.size())
        throw IngestError("ingest: header lacks date column '" + opts.date_column + "'");
    if (close_idx == header.size())
        throw IngestError("ingest: header lacks close column '" + opts.close_column + "'");

    std::vector<std::pair<std::string, double>> rows;
    while (next_data_line()) {
        const auto fields = detail::split_csv_row(line);
        if (fields.size() <= std::max(date_idx, close_idx))
            throw IngestError("ingest: row " + std::to_string(line_no) +
                              " has too few fields");
        double close = 0.0;
        try {
            std::size_t used = 0;
            close = std::stod(fields[close_idx], &used);
            if (used != fields[close_idx].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw IngestError("ingest: row " + std::to_string(line_no) +
                              " has non-numeric close '" + fields[close_idx] + "'");
        }
        if (!(close > 0.0))
            throw IngestError("ingest: row " + std::to_string(line_no) +
                              " has non-positive close " + fields[close_idx]);
        rows.emplace_back(fields[date_idx], close);
    }
    if (rows.empty()) throw IngestError("ingest: no data rows");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            throw IngestError("ingest: duplicate date " + rows[i].first);

    PriceSeries out;
    out.dates.reserve(rows.size());
    out.closes.reserve(rows.size());
    for (auto& [d, c] : rows) {
        out.dates.push_back(std::move(d));
        out.closes.push_back(c);
    }
    return out;
}

inline PriceSeries ingest_csv_file(const std::string& path,
                                   const IngestOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) throw IngestError("ingest: cannot open '" + path + "'");
    return ingest_csv(in, opts);
}

/// Location/extremes of the day-over-day changes, in absolute and percent
/// terms.
struct SummaryStats {
    double mean_change = 0.0;
    double median_change = 0.0;
    double max_change = 0.0;
    double min_change = 0.0;
    double mean_pct_change = 0.0;
    double median_pct_change = 0.0;
    double max_pct_change = 0.0;
    double min_pct_change = 0.0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

inline SummaryStats summary_stats(const PriceSeries& series) {
    if (series.size() < 2)
        throw std::invalid_argument("summary_stats: need at least two closes");
    std::vector<double> change, pct;
    change.reserve(series.size() - 1);
    pct.reserve(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double d = series.closes[i] - series.closes[i - 1];
        change.push_back(d);
        pct.push_back(100.0 * d / series.closes[i - 1]);
    }
    auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    SummaryStats s;
    s.mean_change = mean(change);
    s.median_change = detail::median_of(change);
    s.max_change = *std::max_element(change.begin(), change.end());
    s.min_change = *std::min_element(change.begin(), change.end());
    s.mean_pct_change = mean(pct);
    s.median_pct_change = detail::median_of(pct);
    s.max_pct_change = *std::max_element(pct.begin(), pct.end());
    s.min_pct_change = *std::min_element(pct.begin(), pct.end());
    return s;
}

}  // namespace jumplab
