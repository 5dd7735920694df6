#ifndef HJORTIC_SERIES_HPP
#define HJORTIC_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjortic/stats.hpp"

namespace hjortic {

/// One annual series on a gapless year grid; gaps are masked entries.
struct Series {
    std::string name;
    int start_year = 0;
    std::vector<double> values;
    std::vector<char> missing;  // 1 = masked

    Series() = default;
    Series(std::string nm, int start, std::vector<double> vals)
        : name(std::move(nm)), start_year(start), values(std::move(vals)),
          missing(values.size(), 0) {}
    Series(std::string nm, int start, std::vector<double> vals, std::vector<char> mask)
        : name(std::move(nm)), start_year(start), values(std::move(vals)),
          missing(std::move(mask)) {
        if (values.size() != missing.size())
            throw std::invalid_argument("Series: values/mask length mismatch");
    }

    int size() const { return static_cast<int>(values.size()); }
    int end_year() const { return start_year + size() - 1; }
    bool has_year(int y) const { return y >= start_year && y <= end_year(); }
    bool observed_at(int y) const { return has_year(y) && !missing[y - start_year]; }
    double at(int y) const { return values[y - start_year]; }

    int n_observed() const {
        int n = 0;
        for (char m : missing) n += (m == 0);
        return n;
    }
};

/// Shift a series back by k years: entry at year y becomes the value at y-k.
/// The first k entries are masked; masked inputs stay masked.
inline Series lag(const Series& s, int k) {
    if (k < 0) throw std::invalid_argument("lag: k must be >= 0");
    if (k >= s.size()) throw std::invalid_argument("lag: k >= series length");
    Series out = s;
    out.name = s.name + (k > 0 ? "_lag" + std::to_string(k) : "");
    for (int i = s.size() - 1; i >= k; --i) {
        out.values[i] = s.values[i - k];
        out.missing[i] = s.missing[i - k];
    }
    for (int i = 0; i < k; ++i) {
        out.values[i] = std::numeric_limits<double>::quiet_NaN();
        out.missing[i] = 1;
    }
    return out;
}

/// Center and scale the unmasked entries to sample mean 0, sample sd 1.
inline Series standardize(const Series& s) {
    std::vector<double> obs;
    for (int i = 0; i < s.size(); ++i)
        if (!s.missing[i]) obs.push_back(s.values[i]);
    if (obs.size() < 2) throw std::invalid_argument("standardize: need >= 2 observed values");
    const double m = mean(obs);
    const double sd = sample_sd(obs);
    if (sd <= 0.0) throw std::invalid_argument("standardize: constant series");
    Series out = s;
    for (int i = 0; i < s.size(); ++i)
        if (!s.missing[i]) out.values[i] = (s.values[i] - m) / sd;
    return out;
}

/// Pearson correlation over jointly unmasked years (pairwise-complete).
inline double correlate(const Series& a, const Series& b) {
    std::vector<double> xa, xb;
    const int lo = std::max(a.start_year, b.start_year);
    const int hi = std::min(a.end_year(), b.end_year());
    for (int y = lo; y <= hi; ++y) {
        if (a.observed_at(y) && b.observed_at(y)) {
            xa.push_back(a.at(y));
            xb.push_back(b.at(y));
        }
    }
    if (xa.size() < 3) throw std::invalid_argument("correlate: fewer than 3 complete pairs");
    return pearson(xa, xb);
}

/// Named annual series aligned to a common span.
class Frame {
  public:
    Frame() = default;

    void add(Series s) {
        if (series_.count(s.name)) throw std::invalid_argument("Frame: duplicate series " + s.name);
        order_.push_back(s.name);
        series_.emplace(s.name, std::move(s));
        align();
    }

    bool has(const std::string& name) const { return series_.count(name) != 0; }

    const Series& get(const std::string& name) const {
        auto it = series_.find(name);
        if (it == series_.end()) throw std::invalid_argument("Frame: no series named " + name);
        return it->second;
    }

    const std::vector<std::string>& names() const { return order_; }
    int start_year() const { return start_year_; }
    int end_year() const { return start_year_ + length_ - 1; }
    int length() const { return length_; }

    bool row_complete(int year) const {
        for (const auto& nm : order_)
            if (!get(nm).observed_at(year)) return false;
        return true;
    }

    /// Frame restricted to years <= last_year (entries beyond are dropped).
    Frame truncated(int last_year) const {
        Frame out;
        for (const auto& nm : order_) {
            const Series& s = get(nm);
            if (last_year < s.start_year)
                throw std::invalid_argument("truncated: empty result for " + nm);
            const int n = std::min(s.size(), last_year - s.start_year + 1);
            Series t(s.name, s.start_year,
                     std::vector<double>(s.values.begin(), s.values.begin() + n),
                     std::vector<char>(s.missing.begin(), s.missing.begin() + n));
            out.add(std::move(t));
        }
        return out;
    }

  private:
    void align() {
        if (series_.empty()) return;
        int lo = std::numeric_limits<int>::max();
        int hi = std::numeric_limits<int>::min();
        for (const auto& [nm, s] : series_) {
            lo = std::min(lo, s.start_year);
            hi = std::max(hi, s.end_year());
        }
        for (auto& [nm, s] : series_) {
            if (s.start_year == lo && s.end_year() == hi) continue;
            std::vector<double> vals(hi - lo + 1, std::numeric_limits<double>::quiet_NaN());
            std::vector<char> mask(hi - lo + 1, 1);
            for (int i = 0; i < s.size(); ++i) {
                vals[s.start_year - lo + i] = s.values[i];
                mask[s.start_year - lo + i] = s.missing[i];
            }
            s.start_year = lo;
            s.values = std::move(vals);
            s.missing = std::move(mask);
        }
        start_year_ = lo;
        length_ = hi - lo + 1;
    }

    std::map<std::string, Series> series_;
    std::vector<std::string> order_;
    int start_year_ = 0;
    int length_ = 0;
};

namespace detail {

inline bool is_missing_cell(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string format_sig12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace detail

/// Read a header-first CSV into a Frame, one Series per requested column.
/// Blank/NA/NaN cells become masked; missing years are padded as masked rows.
inline Frame load_csv(const std::string& path, const std::string& year_column,
                      const std::vector<std::string>& value_columns) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file " + path);
    const auto header = detail::split_csv_line(line);

    auto col_index = [&](const std::string& nm) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == nm) return static_cast<int>(i);
        throw std::runtime_error("load_csv: no column named " + nm + " in " + path);
    };
    const int yc = col_index(year_column);
    std::vector<int> vc;
    for (const auto& nm : value_columns) vc.push_back(col_index(nm));

    std::vector<int> years;
    std::vector<std::vector<double>> vals(value_columns.size());
    std::vector<std::vector<char>> mask(value_columns.size());
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (static_cast<int>(cells.size()) <= yc)
            throw std::runtime_error("load_csv: short row " + std::to_string(row));
        int year;
        try {
            std::size_t pos;
            year = std::stoi(cells[yc], &pos);
            if (pos != cells[yc].size()) throw std::invalid_argument("trailing");
        } catch (...) {
            throw std::runtime_error("load_csv: bad year at row " + std::to_string(row));
        }
        if (!years.empty() && year <= years.back()) {
            if (year == years.back())
                throw std::runtime_error("load_csv: duplicate year " + std::to_string(year));
            throw std::runtime_error("load_csv: years not increasing at row " + std::to_string(row));
        }
        // pad gaps in the year grid with masked rows
        if (!years.empty()) {
            for (int y = years.back() + 1; y < year; ++y) {
                years.push_back(y);
                for (std::size_t j = 0; j < vc.size(); ++j) {
                    vals[j].push_back(std::numeric_limits<double>::quiet_NaN());
                    mask[j].push_back(1);
                }
            }
        }
        years.push_back(year);
        for (std::size_t j = 0; j < vc.size(); ++j) {
            const std::string cell =
                static_cast<int>(cells.size()) > vc[j] ? cells[vc[j]] : std::string();
            if (detail::is_missing_cell(cell)) {
                vals[j].push_back(std::numeric_limits<double>::quiet_NaN());
                mask[j].push_back(1);
            } else {
                try {
                    std::size_t pos;
                    vals[j].push_back(std::stod(cell, &pos));
                    if (pos != cell.size()) throw std::invalid_argument("trailing");
                    mask[j].push_back(0);
                } catch (...) {
                    throw std::runtime_error("load_csv: unparseable cell at row " +
                                             std::to_string(row) + ", column " + value_columns[j]);
                }
            }
        }
    }
    if (years.empty()) throw std::runtime_error("load_csv: no data rows in " + path);

    Frame f;
    for (std::size_t j = 0; j < value_columns.size(); ++j)
        f.add(Series(value_columns[j], years.front(), std::move(vals[j]), std::move(mask[j])));
    return f;
}

/// Write a Frame back out with 12 significant digits; masked cells are NA.
inline void write_csv(const Frame& f, const std::string& path,
                      const std::string& year_column = "year") {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << year_column;
    for (const auto& nm : f.names()) out << ',' << nm;
    out << '\n';
    for (int y = f.start_year(); y <= f.end_year(); ++y) {
        out << y;
        for (const auto& nm : f.names()) {
            const Series& s = f.get(nm);
            out << ',';
            if (s.observed_at(y)) out << detail::format_sig12(s.at(y));
            else out << "NA";
        }
        out << '\n';
    }
}

}  // namespace hjortic

#endif  // HJORTIC_SERIES_HPP
