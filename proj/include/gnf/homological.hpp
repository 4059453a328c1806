#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <boost/multiprecision/eigen.hpp>

#include <optional>
#include <string>
#include <vector>

#include "gnf/polyvec.hpp"

// Matrix realization of the homological operator d0 = [L,.] per degree, its
// adjoint with respect to the Fischer product, the small-divisor scale a_k,
// and minimal-norm solves with normal-form projection.
//
// Degree convention: the operator at homological degree k acts on fields of
// coefficient degree k+1; a_k is the smallest nonzero singular value there.

namespace gnf::homological {

template <class K>
using Mat = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
template <class K>
using Vec = Eigen::Matrix<K, Eigen::Dynamic, 1>;
using MatF = Mat<BigFloat>;
using VecF = Vec<BigFloat>;

enum class SolveMode { linearize, normal_form };

template <class K>
struct DegreeOperator {
    unsigned n = 0;
    unsigned k = 0;                                      // homological degree
    std::vector<std::pair<unsigned, MultiIndex>> basis;  // (component, Q), |Q| = k+1
    std::vector<K> weights;                              // Fischer weights Q!/|Q|!
    bool diagonal = false;
    std::vector<K> diag;      // diagonal path: entries (Q,lambda)-lambda_i
    Mat<K> matrix;            // general path: d0 in the monomial basis
    LinearPart<K> L;

    std::vector<BigFloat> singular_values;  // descending
    std::optional<BigFloat> a_k;            // min nonzero singular value
    double sv_rel_tol = 1e-12;              // "nonzero" threshold, relative to max sv

    // W-orthogonal basis of ker(d0^t) in monomial coordinates (normal-form
    // directions). Orthonormal in float mode; unnormalized in exact mode.
    std::vector<Vec<K>> kernel_adjoint;

    std::size_t dimension() const { return basis.size(); }

    /// Matrix of d0 in the Fischer-orthonormal basis (float view).
    MatF onb_matrix() const {
        const auto m = static_cast<Eigen::Index>(basis.size());
        MatF M(m, m);
        std::vector<BigFloat> sw;
        sw.reserve(basis.size());
        for (const auto& w : weights) sw.push_back(BigFloat(sqrt(k_to_bigfloat(w))));
        if (diagonal) {
            M.setZero();
            for (Eigen::Index t = 0; t < m; ++t) M(t, t) = k_to_bigfloat(diag[t]);
        } else {
            for (Eigen::Index s = 0; s < m; ++s)
                for (Eigen::Index t = 0; t < m; ++t)
                    M(s, t) = k_to_bigfloat(matrix(s, t)) * sw[s] / sw[t];
        }
        return M;
    }

    HomogeneousVF<K> vector_to_field(const Vec<K>& v) const {
        HomogeneousVF<K> f(n, k + 1);
        for (std::size_t t = 0; t < basis.size(); ++t)
            if (!k_is_zero(v(static_cast<Eigen::Index>(t))))
                f.add_term(basis[t].first, basis[t].second, v(static_cast<Eigen::Index>(t)));
        return f;
    }

    Vec<K> field_to_vector(const HomogeneousVF<K>& f) const {
        Vec<K> v(static_cast<Eigen::Index>(basis.size()));
        for (std::size_t t = 0; t < basis.size(); ++t)
            v(static_cast<Eigen::Index>(t)) = f.component(basis[t].first).coefficient(basis[t].second);
        return v;
    }
};

namespace detail {

/// <u,v> with the Fischer weights (monomial coordinates).
template <class K>
K weighted_dot(const std::vector<K>& w, const Vec<K>& a, const Vec<K>& b) {
    K acc(0);
    for (Eigen::Index t = 0; t < a.size(); ++t) acc += w[static_cast<std::size_t>(t)] * a(t) * b(t);
    return acc;
}

template <class K>
BigFloat weighted_norm(const std::vector<K>& w, const Vec<K>& a) {
    return BigFloat(sqrt(k_to_bigfloat(weighted_dot(w, a, a))));
}

}  // namespace detail

/// Build the operator d0 = [L,.] at homological degree k (coefficient degree
/// k+1): its matrix, singular values, a_k, and the normal-form directions.
template <class K>
DegreeOperator<K> build_degree_operator(const LinearPart<K>& L, unsigned k, double sv_rel_tol = 1e-12) {
    if (k < 1) throw DomainError("build_degree_operator: k must be >= 1");
    const unsigned n = L.dim();
    DegreeOperator<K> op;
    op.n = n;
    op.k = k;
    op.L = L;
    op.sv_rel_tol = sv_rel_tol;

    for_each_multiindex(n, k + 1, [&](const MultiIndex& q) {
        for (unsigned i = 0; i < n; ++i) op.basis.emplace_back(i, q);
    });
    // component-major canonical order
    std::sort(op.basis.begin(), op.basis.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return GrlexLess{}(a.second, b.second);
    });
    for (const auto& [i, q] : op.basis) op.weights.push_back(k_from_rat<K>(q.fischer_weight()));

    const auto m = static_cast<Eigen::Index>(op.basis.size());
    op.diagonal = L.is_diagonal();

    if (op.diagonal) {
        auto lam = L.diagonal_entries();
        op.diag.reserve(op.basis.size());
        for (const auto& [i, q] : op.basis) {
            K v(0);
            for (unsigned j = 0; j < n; ++j) v += K(static_cast<long>(q[j])) * lam[j];
            v -= lam[i];
            op.diag.push_back(v);
        }
    } else {
        std::map<std::pair<unsigned, MultiIndex>, Eigen::Index,
                 decltype([](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first < b.first;
                     return GrlexLess{}(a.second, b.second);
                 })>
            index;
        for (std::size_t t = 0; t < op.basis.size(); ++t)
            index.emplace(op.basis[t], static_cast<Eigen::Index>(t));
        op.matrix = Mat<K>(m, m);
        op.matrix.setZero();
        for (std::size_t t = 0; t < op.basis.size(); ++t) {
            const auto& [i, q] = op.basis[t];
            // [L, x^Q d_i] = sum_{j,c} q_j a_{jc} x^{Q-e_j+e_c} d_i - sum_s a_{si} x^Q d_s
            for (unsigned j = 0; j < n; ++j) {
                if (q[j] == 0) continue;
                for (unsigned c = 0; c < n; ++c) {
                    if (k_is_zero(L.at(j, c))) continue;
                    MultiIndex qq = q.minus(j).plus(c);
                    op.matrix(index.at({i, qq}), static_cast<Eigen::Index>(t)) +=
                        K(static_cast<long>(q[j])) * L.at(j, c);
                }
            }
            for (unsigned s = 0; s < n; ++s) {
                if (k_is_zero(L.at(s, i))) continue;
                op.matrix(index.at({s, q}), static_cast<Eigen::Index>(t)) -= L.at(s, i);
            }
        }
    }

    // Singular values and kernel of the adjoint.
    if (op.diagonal) {
        // The monomial basis diagonalizes d0 and the Fischer weights commute
        // with it, so singular values are just |entries|.
        for (const auto& v : op.diag) op.singular_values.push_back(BigFloat(abs(k_to_bigfloat(v))));
        std::sort(op.singular_values.begin(), op.singular_values.end(),
                  [](const BigFloat& a, const BigFloat& b) { return a > b; });
        BigFloat maxsv = op.singular_values.empty() ? BigFloat(0) : op.singular_values.front();
        BigFloat zero_cut = maxsv * BigFloat(sv_rel_tol);
        for (std::size_t t = 0; t < op.diag.size(); ++t) {
            bool zero = is_exact_field_v<K> ? k_is_zero(op.diag[t])
                                            : (abs(k_to_bigfloat(op.diag[t])) <= zero_cut);
            if (zero) {
                Vec<K> e(m);
                e.setZero();
                e(static_cast<Eigen::Index>(t)) = K(1);
                op.kernel_adjoint.push_back(std::move(e));
            }
        }
    } else if constexpr (is_exact_field_v<K>) {
        // Exact kernel of A* = W^{-1} A^t W; singular values reported from the
        // float view of the orthonormal-basis matrix.
        Mat<K> astar(m, m);
        for (Eigen::Index s = 0; s < m; ++s)
            for (Eigen::Index t = 0; t < m; ++t)
                astar(s, t) = op.matrix(t, s) * op.weights[static_cast<std::size_t>(t)] /
                              op.weights[static_cast<std::size_t>(s)];
        Eigen::FullPivLU<Mat<K>> lu;
        lu.setThreshold(K(0));
        lu.compute(astar);
        Mat<K> ker = lu.kernel().eval();
        if (lu.dimensionOfKernel() > 0) {
            // W-orthogonalize (Gram-Schmidt without normalization: exact)
            std::vector<Vec<K>> basis;
            for (Eigen::Index c = 0; c < ker.cols(); ++c) {
                Vec<K> v = ker.col(c);
                for (const auto& u : basis) {
                    K coef = detail::weighted_dot(op.weights, v, u) / detail::weighted_dot(op.weights, u, u);
                    v -= coef * u;
                }
                bool nonzero = false;
                for (Eigen::Index t = 0; t < m; ++t)
                    if (!k_is_zero(v(t))) nonzero = true;
                if (nonzero) basis.push_back(std::move(v));
            }
            op.kernel_adjoint = std::move(basis);
        }
        MatF onb = op.onb_matrix();
        Eigen::JacobiSVD<MatF> svd(onb);
        for (Eigen::Index t = 0; t < svd.singularValues().size(); ++t)
            op.singular_values.push_back(svd.singularValues()(t));
    } else {
        MatF onb = op.onb_matrix();
        Eigen::JacobiSVD<MatF> svd(onb, Eigen::ComputeFullU);
        for (Eigen::Index t = 0; t < svd.singularValues().size(); ++t)
            op.singular_values.push_back(svd.singularValues()(t));
        BigFloat maxsv = op.singular_values.empty() ? BigFloat(0) : op.singular_values.front();
        BigFloat zero_cut = maxsv * BigFloat(sv_rel_tol);
        for (Eigen::Index c = 0; c < svd.matrixU().cols(); ++c) {
            if (c < svd.singularValues().size() && svd.singularValues()(c) > zero_cut) continue;
            // ONB coords back to monomial coefficients: coeff_t = u_t / sqrt(w_t)
            Vec<K> v(m);
            for (Eigen::Index t = 0; t < m; ++t)
                v(t) = svd.matrixU()(t, c) / BigFloat(sqrt(k_to_bigfloat(op.weights[static_cast<std::size_t>(t)])));
            op.kernel_adjoint.push_back(std::move(v));
        }
    }

    // a_k = min singular value above the zero cut
    BigFloat maxsv = op.singular_values.empty() ? BigFloat(0) : op.singular_values.front();
    if (maxsv > 0) {
        BigFloat zero_cut = maxsv * BigFloat(sv_rel_tol);
        for (auto it = op.singular_values.rbegin(); it != op.singular_values.rend(); ++it) {
            if (*it > zero_cut) {
                op.a_k = *it;
                break;
            }
        }
    }
    return op;
}

/// a_k for k = 1..kmax; absent entries where d0 has no nonzero singular value.
template <class K>
std::vector<std::optional<BigFloat>> a_sequence(const LinearPart<K>& L, unsigned kmax,
                                                double sv_rel_tol = 1e-12) {
    if (kmax < 1) throw DomainError("a_sequence: kmax must be >= 1");
    std::vector<std::optional<BigFloat>> out;
    for (unsigned k = 1; k <= kmax; ++k) out.push_back(build_degree_operator(L, k, sv_rel_tol).a_k);
    return out;
}

template <class K>
struct CohomSolution {
    HomogeneousVF<K> transform;    // U_k, minimal Fischer norm, orthogonal to ker d0
    HomogeneousVF<K> normal_part;  // N_k, projection of rhs onto ker d0^t
    BigFloat residual;             // |d0 U_k + N_k - rhs|
};

namespace detail {

template <class K>
std::string describe_resonant(const HomogeneousVF<K>& nf) {
    std::string s;
    for (unsigned i = 0; i < nf.dim(); ++i)
        for (const auto& [q, c] : nf.component(i).terms()) {
            if (!s.empty()) s += ", ";
            s += q.str() + "*d/dx" + std::to_string(i + 1);
        }
    return s.empty() ? "(none)" : s;
}

}  // namespace detail

/// Solve d0 U = rhs - N with N the kernel projection. In linearize mode a
/// projection above tol*|rhs| aborts with the resonant part.
template <class K>
CohomSolution<K> solve_cohomological(const DegreeOperator<K>& op, const HomogeneousVF<K>& rhs,
                                     SolveMode mode, double tol = 0.0) {
    if (rhs.dim() != op.n || rhs.degree() != op.k + 1)
        throw ShapeError("solve_cohomological: rhs degree must be k+1");
    const auto m = static_cast<Eigen::Index>(op.basis.size());
    Vec<K> r = op.field_to_vector(rhs);

    Vec<K> ncoords(m);
    ncoords.setZero();
    Vec<K> ucoords(m);
    ucoords.setZero();

    if (op.diagonal) {
        BigFloat maxsv = op.singular_values.empty() ? BigFloat(0) : op.singular_values.front();
        BigFloat zero_cut = maxsv * BigFloat(op.sv_rel_tol);
        for (Eigen::Index t = 0; t < m; ++t) {
            const K& d = op.diag[static_cast<std::size_t>(t)];
            bool zero = is_exact_field_v<K> ? k_is_zero(d) : (abs(k_to_bigfloat(d)) <= zero_cut);
            if (zero) ncoords(t) = r(t);
            else ucoords(t) = r(t) / d;
        }
    } else if constexpr (is_exact_field_v<K>) {
        for (const auto& v : op.kernel_adjoint) {
            K coef = detail::weighted_dot(op.weights, r, v) / detail::weighted_dot(op.weights, v, v);
            ncoords += coef * v;
        }
        Vec<K> b = r - ncoords;
        // minimal-norm solve: U = A* z with (A A*) z = b, exact
        Mat<K> astar(m, m);
        for (Eigen::Index s = 0; s < m; ++s)
            for (Eigen::Index t = 0; t < m; ++t)
                astar(s, t) = op.matrix(t, s) * op.weights[static_cast<std::size_t>(t)] /
                              op.weights[static_cast<std::size_t>(s)];
        Mat<K> box = op.matrix * astar;
        Eigen::FullPivLU<Mat<K>> lu;
        lu.setThreshold(K(0));
        lu.compute(box);
        Vec<K> z = lu.solve(b);
        ucoords = astar * z;
        Vec<K> check = op.matrix * ucoords - b;
        for (Eigen::Index t = 0; t < m; ++t)
            if (!k_is_zero(check(t)))
                throw DomainError("solve_cohomological: inconsistent system (exact mode)");
    } else {
        MatF onb = op.onb_matrix();
        Eigen::JacobiSVD<MatF> svd(onb, Eigen::ComputeFullU | Eigen::ComputeFullV);
        std::vector<BigFloat> sw;
        for (const auto& w : op.weights) sw.push_back(BigFloat(sqrt(k_to_bigfloat(w))));
        VecF beta(m);
        for (Eigen::Index t = 0; t < m; ++t) beta(t) = k_to_bigfloat(r(t)) * sw[static_cast<std::size_t>(t)];
        BigFloat maxsv = svd.singularValues().size() ? svd.singularValues()(0) : BigFloat(0);
        BigFloat zero_cut = maxsv * BigFloat(op.sv_rel_tol);
        VecF nb(m), ub(m);
        nb.setZero();
        ub.setZero();
        for (Eigen::Index c = 0; c < m; ++c) {
            BigFloat sv = c < svd.singularValues().size() ? svd.singularValues()(c) : BigFloat(0);
            BigFloat proj = svd.matrixU().col(c).dot(beta);
            if (sv > zero_cut) ub += svd.matrixV().col(c) * (proj / sv);
            else nb += svd.matrixU().col(c) * proj;
        }
        for (Eigen::Index t = 0; t < m; ++t) {
            ncoords(t) = nb(t) / sw[static_cast<std::size_t>(t)];
            ucoords(t) = ub(t) / sw[static_cast<std::size_t>(t)];
        }
    }

    CohomSolution<K> sol;
    sol.normal_part = op.vector_to_field(ncoords);
    sol.transform = op.vector_to_field(ucoords);

    BigFloat nnorm = fischer_norm(sol.normal_part);
    BigFloat rnorm = fischer_norm(rhs);
    if (mode == SolveMode::linearize && nnorm > BigFloat(tol) * rnorm && !sol.normal_part.is_zero()) {
        throw NotLinearizableError(op.k + 1, detail::describe_resonant(sol.normal_part),
                                   "not formally linearizable: resonant projection at coefficient degree " +
                                       std::to_string(op.k + 1) + " on " +
                                       detail::describe_resonant(sol.normal_part));
    }

    // residual |d0 U + N - rhs|
    HomogeneousVF<K> lu_f = lie_bracket(linear_as_field(op.L), sol.transform);
    sol.residual = fischer_norm(HomogeneousVF<K>(lu_f + sol.normal_part - rhs));
    return sol;
}

}  // namespace gnf::homological
