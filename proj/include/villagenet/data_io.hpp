#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace villagenet {

// Dense row-major numeric dataset with optional ground-truth labels.
struct DataMatrix {
    std::vector<double> values;  // n_rows * n_cols, row-major
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<int> labels;     // empty when absent; else length n_rows
    std::vector<std::string> feature_names;  // empty when no header

    bool has_labels() const { return !labels.empty(); }
    double at(std::size_t row, std::size_t col) const { return values[row * n_cols + col]; }
    double& at(std::size_t row, std::size_t col) { return values[row * n_cols + col]; }
};

struct CsvOptions {
    // Column holding ground-truth labels: a 0-based index or, when the file
    // has a header, a column name. Unset means "no labels".
    std::optional<std::string> label_column;
    bool has_header = false;
    char delimiter = ',';
};

// Loads a CSV file into a DataMatrix. Label values that are all base-10
// non-negative integers are kept verbatim; any other label alphabet is
// densely re-indexed to 0.. in order of first appearance.
// Throws std::runtime_error naming the offending row/column on I/O failure,
// parse failure, ragged rows, non-finite values, or an empty file.
DataMatrix load_csv(const std::string& path, const CsvOptions& options = {});

// Writes values (and labels when present, as the last column named by
// label_name) back to CSV with enough digits to round-trip doubles.
void save_csv(const DataMatrix& data, const std::string& path,
              const std::string& label_name = "label", char delimiter = ',');

// Two interleaved half-circles: upper arc centered at (0,0), lower arc
// centered at (1, 0.5) and reflected, both radius 1, each coordinate
// perturbed by Gaussian noise of the given standard deviation.
// Labels are the arc index {0,1}; counts differ by at most one.
DataMatrix make_two_moons(std::size_t n, double noise, std::uint64_t seed);

// Per-column zero-mean unit-variance transform; zero-variance columns
// become all zeros. Labels and shape are preserved. Requires n_rows >= 2.
DataMatrix standardize(const DataMatrix& data);

}  // namespace villagenet
