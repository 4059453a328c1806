#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gnf/polyvec.hpp"

namespace gnf {

template <class K>
LinearPart<K> linear_part_from_matrix_impl(unsigned n, std::vector<K> row_major,
                                           std::optional<std::vector<CEig>> eigenvalues) {
    if (n == 0) throw ShapeError("LinearPart: dimension must be >= 1");
    if (row_major.size() != std::size_t(n) * n) throw ShapeError("LinearPart: matrix size mismatch");

    LinearPart<K> L;
    L.n_ = n;
    L.a_ = std::move(row_major);

    L.diagonal_ = true;
    for (unsigned i = 0; i < n && L.diagonal_; ++i)
        for (unsigned j = 0; j < n; ++j)
            if (i != j && !k_is_zero(L.a_[i * n + j])) {
                L.diagonal_ = false;
                break;
            }

    if (eigenvalues) {
        if (eigenvalues->size() != n) throw ShapeError("LinearPart: eigenvalue count mismatch");
        L.eig_ = std::move(*eigenvalues);
    } else if (L.diagonal_) {
        for (unsigned i = 0; i < n; ++i) L.eig_.emplace_back(k_to_bigfloat(L.a_[i * n + i]));
    } else {
        // Numeric eigenvalues are only used for flags and reports; the
        // homological machinery works from the matrix itself.
        Eigen::MatrixXd m(n, n);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j)
                m(i, j) = static_cast<double>(k_to_bigfloat(L.a_[i * n + j]));
        Eigen::EigenSolver<Eigen::MatrixXd> es(m);
        for (unsigned i = 0; i < n; ++i)
            L.eig_.emplace_back(BigFloat(es.eigenvalues()(i).real()), BigFloat(es.eigenvalues()(i).imag()));
    }
    L.update_hyperbolic();
    return L;
}

template <class K>
LinearPart<K> LinearPart<K>::from_matrix(unsigned n, std::vector<K> row_major,
                                         std::optional<std::vector<CEig>> eigenvalues) {
    return linear_part_from_matrix_impl<K>(n, std::move(row_major), std::move(eigenvalues));
}

}  // namespace gnf
