#pragma once

#include <vector>

namespace levx {

struct NnlsResult {
    std::vector<double> x;
    double residual_norm = 0.0;
    bool rank_deficient = false;
};

// min ||A x - b||_2 subject to x >= 0 (Lawson-Hanson active set on the normal
// equations; A is row-major m x n, suited to tall-skinny problems).
NnlsResult nnls(const std::vector<double>& a, std::size_t rows, std::size_t cols,
                const std::vector<double>& b);

}  // namespace levx
