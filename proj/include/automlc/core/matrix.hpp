#ifndef AUTOMLC_CORE_MATRIX_HPP
#define AUTOMLC_CORE_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace automlc {

struct ShapeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double* row(std::size_t r) { return data.data() + r * cols; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }

    Matrix select_rows(const std::vector<int>& idx) const {
        Matrix out(idx.size(), cols);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = at(static_cast<std::size_t>(idx[i]), j);
        return out;
    }

    Matrix select_cols(const std::vector<int>& idx) const {
        Matrix out(rows, idx.size());
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) out.at(i, j) = at(i, static_cast<std::size_t>(idx[j]));
        return out;
    }

    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

/// Dense row-major matrix with entries restricted to {0,1}.
struct BinaryMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> data;

    BinaryMatrix() = default;
    BinaryMatrix(std::size_t r, std::size_t c, std::uint8_t fill = 0) : rows(r), cols(c), data(r * c, fill) {}

    std::uint8_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::uint8_t* row(std::size_t r) { return data.data() + r * cols; }
    const std::uint8_t* row(std::size_t r) const { return data.data() + r * cols; }

    std::vector<std::uint8_t> row_vec(std::size_t r) const {
        return std::vector<std::uint8_t>(row(r), row(r) + cols);
    }

    BinaryMatrix select_rows(const std::vector<int>& idx) const {
        BinaryMatrix out(idx.size(), cols);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = at(static_cast<std::size_t>(idx[i]), j);
        return out;
    }

    BinaryMatrix select_cols(const std::vector<int>& idx) const {
        BinaryMatrix out(rows, idx.size());
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) out.at(i, j) = at(i, static_cast<std::size_t>(idx[j]));
        return out;
    }

    bool operator==(const BinaryMatrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

/// Marker for missing raw feature values.
inline bool is_missing(double v) { return std::isnan(v); }
double missing_value();

}  // namespace automlc

#endif
