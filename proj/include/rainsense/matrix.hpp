//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_MATRIX_HPP
#define RAINSENSE_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace rainsense {

// Row-major dense matrix of doubles. The small kernel set below is all the
// network needs; outputs are caller-allocated so the training loop stays
// free of allocations.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    void resize(std::size_t rows, std::size_t cols) {
        rows_ = rows;
        cols_ = cols;
        data_.assign(rows * cols, 0.0);
    }

    void fill(double value);

    bool operator==(const DenseMatrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// out = a * b
void matmul(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
// out = a^T * b
void matmul_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);
// out = a * b^T
void matmul_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out);

// m[i, :] += bias
void add_row_bias(DenseMatrix& m, std::span<const double> bias);

// out = relu(m); mask keeps m's sign pattern for the backward pass.
void relu(const DenseMatrix& m, DenseMatrix& out);
// m *= (gate > 0), elementwise.
void relu_backward_inplace(DenseMatrix& m, const DenseMatrix& gate);

// out[j] = sum_i m(i, j)
void column_sums(const DenseMatrix& m, std::span<double> out);
// out[j] = mean_i m(i, j)
void column_means(const DenseMatrix& m, std::span<double> out);

// Throws when any entry is NaN or infinite; `what` names the tensor.
void check_finite(const DenseMatrix& m, const char* what);

} // namespace rainsense

#endif // RAINSENSE_MATRIX_HPP
