//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rainsense {

void DenseMatrix::fill(double value) {
    std::fill(data_.begin(), data_.end(), value);
}

void matmul(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions differ");
    }
    const std::size_t m = a.rows();
    const std::size_t k = a.cols();
    const std::size_t n = b.cols();
    if (out.rows() != m || out.cols() != n) {
        out.resize(m, n);
    } else {
        out.fill(0.0);
    }
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double av = ap[i * k + p];
            const double* brow = bp + p * n;
            double* crow = cp + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += av * brow[j];
            }
        }
    }
}

void matmul_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("matmul_tn: inner dimensions differ");
    }
    const std::size_t m = a.cols();
    const std::size_t k = a.rows();
    const std::size_t n = b.cols();
    if (out.rows() != m || out.cols() != n) {
        out.resize(m, n);
    } else {
        out.fill(0.0);
    }
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = out.data();
    for (std::size_t p = 0; p < k; ++p) {
        const double* arow = ap + p * m;
        const double* brow = bp + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double av = arow[i];
            double* crow = cp + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += av * brow[j];
            }
        }
    }
}

void matmul_nt(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("matmul_nt: inner dimensions differ");
    }
    const std::size_t m = a.rows();
    const std::size_t k = a.cols();
    const std::size_t n = b.rows();
    if (out.rows() != m || out.cols() != n) {
        out.resize(m, n);
    } else {
        out.fill(0.0);
    }
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = ap + i * k;
        double* crow = cp + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = bp + j * k;
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) {
                acc += arow[p] * brow[p];
            }
            crow[j] = acc;
        }
    }
}

void add_row_bias(DenseMatrix& m, std::span<const double> bias) {
    if (bias.size() != m.cols()) {
        throw std::invalid_argument("add_row_bias: bias length differs from column count");
    }
    double* p = m.data();
    for (std::size_t i = 0; i < m.rows(); ++i, p += m.cols()) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            p[j] += bias[j];
        }
    }
}

void relu(const DenseMatrix& m, DenseMatrix& out) {
    if (out.rows() != m.rows() || out.cols() != m.cols()) {
        out.resize(m.rows(), m.cols());
    }
    const double* src = m.data();
    double* dst = out.data();
    for (std::size_t i = 0; i < m.size(); ++i) {
        dst[i] = src[i] > 0.0 ? src[i] : 0.0;
    }
}

void relu_backward_inplace(DenseMatrix& m, const DenseMatrix& gate) {
    if (gate.rows() != m.rows() || gate.cols() != m.cols()) {
        throw std::invalid_argument("relu_backward_inplace: shape mismatch");
    }
    double* p = m.data();
    const double* g = gate.data();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (g[i] <= 0.0) {
            p[i] = 0.0;
        }
    }
}

void column_sums(const DenseMatrix& m, std::span<double> out) {
    if (out.size() != m.cols()) {
        throw std::invalid_argument("column_sums: output length differs from column count");
    }
    std::fill(out.begin(), out.end(), 0.0);
    const double* p = m.data();
    for (std::size_t i = 0; i < m.rows(); ++i, p += m.cols()) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[j] += p[j];
        }
    }
}

void column_means(const DenseMatrix& m, std::span<double> out) {
    column_sums(m, out);
    const double inv = 1.0 / static_cast<double>(m.rows());
    for (auto& v : out) {
        v *= inv;
    }
}

void check_finite(const DenseMatrix& m, const char* what) {
    const double* p = m.data();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!std::isfinite(p[i])) {
            throw std::runtime_error(std::string("non-finite value in ") + what);
        }
    }
}

} // namespace rainsense
