#include "villagenet/data_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "villagenet/rng.hpp"

namespace villagenet {

namespace {

// Splits one CSV line on the delimiter. Quoting is not interpreted: the
// benchmark datasets are purely numeric, and a stray quote will surface as
// a parse error naming the exact cell.
std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == delimiter) {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

std::string trimmed(const std::string& s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

double parse_number(const std::string& field, std::size_t row, std::size_t col) {
    const std::string text = trimmed(field);
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error("csv parse error at row " + std::to_string(row + 1) +
                                 ", column " + std::to_string(col + 1) + ": '" + text +
                                 "' is not a number");
    if (!std::isfinite(value))
        throw std::runtime_error("csv parse error at row " + std::to_string(row + 1) +
                                 ", column " + std::to_string(col + 1) + ": non-finite value");
    return value;
}

bool is_plain_nonnegative_integer(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

DataMatrix load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw std::runtime_error("empty file: " + path);

    std::size_t first_data_row = 0;
    std::vector<std::string> header;
    if (options.has_header) {
        header = split_line(lines[0], options.delimiter);
        for (auto& name : header) name = trimmed(name);
        first_data_row = 1;
        if (lines.size() == 1) throw std::runtime_error("no data rows in " + path);
    }

    const std::size_t n_fields = split_line(lines[first_data_row], options.delimiter).size();

    // Resolve the label column: numeric index, or (with a header) a name.
    std::optional<std::size_t> label_index;
    if (options.label_column) {
        const std::string& wanted = *options.label_column;
        if (is_plain_nonnegative_integer(wanted)) {
            label_index = std::stoul(wanted);
        } else {
            for (std::size_t c = 0; c < header.size(); ++c)
                if (header[c] == wanted) label_index = c;
            if (!label_index)
                throw std::runtime_error("label column '" + wanted + "' not found in header of " + path);
        }
        if (*label_index >= n_fields)
            throw std::runtime_error("label column index " + std::to_string(*label_index) +
                                     " out of range for " + std::to_string(n_fields) +
                                     "-column file " + path);
    }

    DataMatrix data;
    data.n_rows = lines.size() - first_data_row;
    data.n_cols = n_fields - (label_index ? 1 : 0);
    if (data.n_cols == 0) throw std::runtime_error("no feature columns left in " + path);
    data.values.reserve(data.n_rows * data.n_cols);

    if (!header.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (!label_index || c != *label_index) data.feature_names.push_back(header[c]);
    }

    std::vector<std::string> raw_labels;
    for (std::size_t r = 0; r < data.n_rows; ++r) {
        const auto fields = split_line(lines[first_data_row + r], options.delimiter);
        if (fields.size() != n_fields)
            throw std::runtime_error("ragged row " + std::to_string(r + 1) + " in " + path + ": expected " +
                                     std::to_string(n_fields) + " fields, got " + std::to_string(fields.size()));
        for (std::size_t c = 0; c < n_fields; ++c) {
            if (label_index && c == *label_index) {
                raw_labels.push_back(trimmed(fields[c]));
            } else {
                data.values.push_back(parse_number(fields[c], r, c));
            }
        }
    }

    if (label_index) {
        bool all_integer = true;
        for (const auto& s : raw_labels)
            if (!is_plain_nonnegative_integer(s)) { all_integer = false; break; }
        data.labels.reserve(raw_labels.size());
        if (all_integer) {
            for (const auto& s : raw_labels) data.labels.push_back(std::stoi(s));
        } else {
            std::unordered_map<std::string, int> ids;
            for (const auto& s : raw_labels) {
                auto [it, inserted] = ids.try_emplace(s, static_cast<int>(ids.size()));
                data.labels.push_back(it->second);
            }
        }
    }
    return data;
}

void save_csv(const DataMatrix& data, const std::string& path,
              const std::string& label_name, char delimiter) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);

    if (!data.feature_names.empty() || data.has_labels()) {
        for (std::size_t c = 0; c < data.n_cols; ++c) {
            if (c) out << delimiter;
            out << (c < data.feature_names.size() ? data.feature_names[c] : "f" + std::to_string(c));
        }
        if (data.has_labels()) out << delimiter << label_name;
        out << '\n';
    }

    char buffer[64];
    for (std::size_t r = 0; r < data.n_rows; ++r) {
        for (std::size_t c = 0; c < data.n_cols; ++c) {
            if (c) out << delimiter;
            std::snprintf(buffer, sizeof(buffer), "%.17g", data.at(r, c));
            out << buffer;
        }
        if (data.has_labels()) out << delimiter << data.labels[r];
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failure on " + path);
}

DataMatrix make_two_moons(std::size_t n, double noise, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("make_two_moons: need n >= 2");
    if (noise < 0) throw std::invalid_argument("make_two_moons: noise must be >= 0");

    const std::size_t n_upper = n - n / 2;
    const std::size_t n_lower = n / 2;
    const double pi = 3.14159265358979323846264338327950288;

    DataMatrix data;
    data.n_rows = n;
    data.n_cols = 2;
    data.values.resize(n * 2);
    data.labels.resize(n);
    data.feature_names = {"x", "y"};

    Rng rng(seed);
    auto arc_angle = [pi](std::size_t i, std::size_t count) {
        return count == 1 ? 0.0 : pi * static_cast<double>(i) / static_cast<double>(count - 1);
    };
    for (std::size_t i = 0; i < n_upper; ++i) {
        const double t = arc_angle(i, n_upper);
        data.at(i, 0) = std::cos(t) + noise * rng.normal();
        data.at(i, 1) = std::sin(t) + noise * rng.normal();
        data.labels[i] = 0;
    }
    for (std::size_t i = 0; i < n_lower; ++i) {
        const double t = arc_angle(i, n_lower);
        const std::size_t row = n_upper + i;
        data.at(row, 0) = 1.0 - std::cos(t) + noise * rng.normal();
        data.at(row, 1) = 0.5 - std::sin(t) + noise * rng.normal();
        data.labels[row] = 1;
    }
    return data;
}

DataMatrix standardize(const DataMatrix& data) {
    if (data.n_rows < 2) throw std::invalid_argument("standardize: need at least 2 rows");

    DataMatrix out = data;
    const double n = static_cast<double>(data.n_rows);
    for (std::size_t c = 0; c < data.n_cols; ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < data.n_rows; ++r) mean += data.at(r, c);
        mean /= n;
        double variance = 0.0;  // population variance, to match the usual scaler convention
        for (std::size_t r = 0; r < data.n_rows; ++r) {
            const double dev = data.at(r, c) - mean;
            variance += dev * dev;
        }
        variance /= n;
        if (variance <= 0.0) {
            for (std::size_t r = 0; r < data.n_rows; ++r) out.at(r, c) = 0.0;
        } else {
            const double scale = 1.0 / std::sqrt(variance);
            for (std::size_t r = 0; r < data.n_rows; ++r) out.at(r, c) = (data.at(r, c) - mean) * scale;
        }
    }
    return out;
}

}  // namespace villagenet
