#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "polyclust/errors.hpp"
#include "polyclust/features.hpp"
#include "polyclust/series.hpp"
#include "polyclust/simulate.hpp"

namespace polyclust {

/// Doubles in CSV output use %.17g: enough digits to round-trip exactly, so
/// reruns can be compared byte for byte.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    std::string iso() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }
};

/// Accepts ISO YYYY-MM-DD or DD-MM-YYYY (auto-detected by where the 4-digit
/// year sits). Throws ParseError on anything else.
inline Date parse_date(const std::string& raw) {
    const std::string s = trim(raw);
    int a = 0, b = 0, c = 0;
    char sep1 = 0, sep2 = 0;
    std::istringstream in(s);
    if (!(in >> a >> sep1 >> b >> sep2 >> c) || sep1 != '-' || sep2 != '-' || !in.eof()) {
        throw ParseError("unparseable date '" + s + "'");
    }
    Date d;
    if (s.size() >= 5 && s[4] == '-') {
        d = {a, b, c};  // YYYY-MM-DD
    } else if (s.size() >= 3 && s[2] == '-') {
        d = {c, b, a};  // DD-MM-YYYY
    } else {
        throw ParseError("unparseable date '" + s + "'");
    }
    if (d.year < 1000 || d.year > 9999 || d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
        throw ParseError("date out of range '" + s + "'");
    }
    return d;
}

inline double parse_double_strict(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t.empty()) throw ParseError(what + " is empty");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') {
        throw ParseError("cannot parse " + what + " from '" + t + "'");
    }
    return v;
}

namespace detail {

inline int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    // forgiving fallback: case-insensitive match
    auto lower = [](std::string s) {
        for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return s;
    };
    const std::string want = lower(name);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (lower(header[i]) == want) return static_cast<int>(i);
    }
    return -1;
}

} // namespace detail

/// Reads one per-stock CSV (columns Date, Symbol, VWAP; extras ignored),
/// sorts by date, keeps the trailing window, and scales by the first value.
/// Returns an empty optional-like flag via the bool: false means skipped.
inline bool ingest_stock_file(const std::filesystem::path& file, int window_days, TimeSeries& out,
                              std::ostream& warnings = std::cerr) {
    std::ifstream in(file);
    if (!in) throw SchemaError("cannot open '" + file.string() + "'");
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("file '" + file.string() + "' is empty");
    }
    const std::vector<std::string> header = split_csv_line(line);
    const int date_col = detail::find_column(header, "Date");
    const int symbol_col = detail::find_column(header, "Symbol");
    const int vwap_col = detail::find_column(header, "VWAP");
    if (date_col < 0 || vwap_col < 0) {
        throw SchemaError("file '" + file.string() + "' lacks a Date or VWAP column");
    }

    struct Row {
        Date date;
        double vwap;
    };
    std::vector<Row> rows;
    std::string symbol;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        const std::size_t need = static_cast<std::size_t>(std::max(date_col, vwap_col)) + 1;
        if (cells.size() < need) {
            throw ParseError("file '" + file.string() + "' row " + std::to_string(line_no) +
                             ": too few columns");
        }
        Row r;
        try {
            r.date = parse_date(cells[static_cast<std::size_t>(date_col)]);
            r.vwap = parse_double_strict(cells[static_cast<std::size_t>(vwap_col)], "VWAP");
        } catch (const ParseError& e) {
            throw ParseError("file '" + file.string() + "' row " + std::to_string(line_no) +
                             ": " + e.what());
        }
        if (!(r.vwap > 0.0)) {
            throw ParseError("file '" + file.string() + "' row " + std::to_string(line_no) +
                             ": VWAP must be positive");
        }
        if (symbol.empty() && symbol_col >= 0 &&
            cells.size() > static_cast<std::size_t>(symbol_col)) {
            symbol = cells[static_cast<std::size_t>(symbol_col)];
        }
        rows.push_back(r);
    }
    if (symbol.empty()) symbol = file.stem().string();

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].date == rows[i - 1].date) {
            throw DuplicateDate("file '" + file.string() + "': duplicate date " +
                                rows[i].date.iso());
        }
    }
    if (rows.size() < 8) {
        warnings << "warning: skipping '" << file.string() << "': only " << rows.size()
                 << " usable rows\n";
        return false;
    }
    if (rows.size() < static_cast<std::size_t>(window_days)) {
        warnings << "warning: '" << file.string() << "' has " << rows.size() << " rows, fewer than "
                 << window_days << "; using all of them\n";
    }
    const std::size_t keep = std::min(rows.size(), static_cast<std::size_t>(window_days));
    TimeSeries raw;
    raw.label = symbol;
    raw.values.reserve(keep);
    for (std::size_t i = rows.size() - keep; i < rows.size(); ++i) {
        raw.values.push_back(rows[i].vwap);
    }
    out = scale_to_initial(raw);
    return true;
}

/// Loads every *.csv in a directory (sorted by filename, so enumeration
/// order cannot leak into results), keyed by symbol.
inline std::map<std::string, TimeSeries> ingest(const std::string& input_dir,
                                                int window_days = 1000,
                                                std::ostream& warnings = std::cerr) {
    namespace fs = std::filesystem;
    if (window_days < 8) throw SchemaError("window_days must be at least 8");
    if (!fs::is_directory(input_dir)) {
        throw SchemaError("input directory '" + input_dir + "' does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::map<std::string, TimeSeries> out;
    for (const auto& f : files) {
        TimeSeries s;
        if (ingest_stock_file(f, window_days, s, warnings)) {
            if (out.count(s.label) > 0) {
                throw SchemaError("duplicate symbol '" + s.label + "' in '" + f.string() + "'");
            }
            out[s.label] = std::move(s);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenario replication CSVs: long format, one row per observation.

inline void write_scenario_csv(const std::string& path, const std::vector<LabeledSeries>& items) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << "series_id,label,t,value\n";
    for (const auto& it : items) {
        for (std::size_t t = 0; t < it.series.values.size(); ++t) {
            out << it.series.label << ',' << it.group << ',' << (t + 1) << ','
                << fmt_double(it.series.values[t]) << '\n';
        }
    }
}

inline std::vector<LabeledSeries> read_scenario_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path + "' is empty");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "series_id" || header[1] != "label" ||
        header[2] != "t" || header[3] != "value") {
        throw SchemaError("'" + path + "' is not a scenario CSV (series_id,label,t,value)");
    }
    std::vector<LabeledSeries> items;
    std::map<std::string, std::size_t> index;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() < 4) {
            throw ParseError("'" + path + "' row " + std::to_string(line_no) + ": too few columns");
        }
        const std::string& id = cells[0];
        auto it = index.find(id);
        if (it == index.end()) {
            it = index.emplace(id, items.size()).first;
            items.push_back(LabeledSeries{});
            items.back().series.label = id;
            items.back().group = cells[1];
        }
        items[it->second].series.values.push_back(parse_double_strict(cells[3], "value"));
    }
    return items;
}

// ---------------------------------------------------------------------------
// Feature matrix CSVs: label column followed by named feature columns.

inline void write_feature_csv(const std::string& path, const FeatureMatrix& m) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << "label";
    for (const auto& name : m.column_names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        out << m.row_labels[i];
        for (double v : m.rows[i]) out << ',' << fmt_double(v);
        out << '\n';
    }
}

inline FeatureMatrix read_feature_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + path + "' is empty");
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "label") {
        throw SchemaError("'" + path + "' is not a feature CSV (label,<features...>)");
    }
    FeatureMatrix m;
    m.column_names.assign(header.begin() + 1, header.end());
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw ParseError("'" + path + "' row " + std::to_string(line_no) +
                             ": expected " + std::to_string(header.size()) + " columns");
        }
        m.row_labels.push_back(cells[0]);
        std::vector<double> row;
        row.reserve(m.column_names.size());
        for (std::size_t j = 1; j < cells.size(); ++j) {
            row.push_back(parse_double_strict(cells[j], "feature '" + header[j] + "'"));
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

} // namespace polyclust
