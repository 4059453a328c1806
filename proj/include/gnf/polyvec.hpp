#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gnf/errors.hpp"
#include "gnf/multiindex.hpp"
#include "gnf/scalar.hpp"

// Sparse arithmetic for polynomials and polynomial vector fields over R^n,
// the Fischer inner product, Lie brackets and truncated composition.
//
// Conventions fixed for the whole library:
//  * every container is keyed (component-major, then grlex) so iteration and
//    reductions are deterministic;
//  * "degree" of a HomogeneousVF always means the polynomial degree of its
//    coefficient functions (the linear part has degree 1);
//  * zero coefficients are never stored.

namespace gnf {

constexpr unsigned kNoTruncation = std::numeric_limits<unsigned>::max();

// ---------------------------------------------------------------------------
// SparsePoly: scalar polynomial / truncated power series in n variables.
// ---------------------------------------------------------------------------

template <class K>
class SparsePoly {
  public:
    using TermMap = std::map<MultiIndex, K, GrlexLess>;

    SparsePoly() = default;
    explicit SparsePoly(unsigned n) : n_(n) {
        if (n == 0) throw ShapeError("SparsePoly: dimension must be >= 1");
    }

    unsigned dim() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const MultiIndex& q, const K& c) {
        if (q.dim() != n_) throw ShapeError("SparsePoly::add: dimension mismatch");
        if (k_is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(q, c);
        if (!inserted) {
            it->second += c;
            if (k_is_zero(it->second)) terms_.erase(it);
        }
    }

    K coefficient(const MultiIndex& q) const {
        auto it = terms_.find(q);
        return it == terms_.end() ? K(0) : it->second;
    }

    unsigned max_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }
    unsigned min_degree() const { return terms_.empty() ? 0 : terms_.begin()->first.degree(); }

    SparsePoly& operator+=(const SparsePoly& o) {
        check_dim(o);
        for (const auto& [q, c] : o.terms_) add(q, c);
        return *this;
    }
    SparsePoly& operator-=(const SparsePoly& o) {
        check_dim(o);
        for (const auto& [q, c] : o.terms_) add(q, K(-c));
        return *this;
    }
    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }

    SparsePoly scaled(const K& s) const {
        SparsePoly r(n_);
        if (k_is_zero(s)) return r;
        for (const auto& [q, c] : terms_) r.terms_.emplace(q, K(c * s));
        return r;
    }

    /// Product, discarding all terms of degree > maxdeg.
    SparsePoly mul(const SparsePoly& o, unsigned maxdeg = kNoTruncation) const {
        check_dim(o);
        SparsePoly r(n_);
        for (const auto& [qa, ca] : terms_) {
            if (qa.degree() > maxdeg) break;  // grlex order: degrees ascend
            for (const auto& [qb, cb] : o.terms_) {
                if (qa.degree() + qb.degree() > maxdeg) break;
                r.add(qa.plus(qb), K(ca * cb));
            }
        }
        return r;
    }

    /// d/dx_j
    SparsePoly derivative(unsigned j) const {
        SparsePoly r(n_);
        for (const auto& [q, c] : terms_) {
            if (q[j] == 0) continue;
            r.add(q.minus(j), K(c * static_cast<long>(q[j])));
        }
        return r;
    }

    SparsePoly homogeneous_part(unsigned d) const {
        SparsePoly r(n_);
        for (const auto& [q, c] : terms_) {
            if (q.degree() == d) r.terms_.emplace(q, c);
            else if (q.degree() > d) break;
        }
        return r;
    }

    SparsePoly truncated(unsigned maxdeg) const {
        SparsePoly r(n_);
        for (const auto& [q, c] : terms_) {
            if (q.degree() > maxdeg) break;
            r.terms_.emplace(q, c);
        }
        return r;
    }

    K eval(const std::vector<K>& x) const {
        if (x.size() != n_) throw ShapeError("SparsePoly::eval: dimension mismatch");
        K acc(0);
        for (const auto& [q, c] : terms_) {
            K m(c);
            for (unsigned i = 0; i < n_; ++i)
                for (uint32_t p = 0; p < q[i]; ++p) m *= x[i];
            acc += m;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [q, c] : terms_) {
            if (!first) os << " + ";
            os << "(" << k_to_string(c) << ")*" << q.str();
            first = false;
        }
        return os.str();
    }

  private:
    void check_dim(const SparsePoly& o) const {
        if (o.n_ != n_) throw ShapeError("SparsePoly: dimension mismatch");
    }

    unsigned n_ = 0;
    TermMap terms_;
};

// ---------------------------------------------------------------------------
// LinearPart: the linear vector field L = sum_i (sum_j a_ij x_j) d/dx_i.
// ---------------------------------------------------------------------------

template <class K>
class LinearPart {
  public:
    LinearPart() = default;

    static LinearPart diagonal(std::vector<K> lambda) {
        LinearPart L;
        L.n_ = static_cast<unsigned>(lambda.size());
        if (L.n_ == 0) throw ShapeError("LinearPart: dimension must be >= 1");
        L.a_.assign(static_cast<std::size_t>(L.n_) * L.n_, K(0));
        for (unsigned i = 0; i < L.n_; ++i) {
            L.a_[i * L.n_ + i] = lambda[i];
            L.eig_.emplace_back(k_to_bigfloat(lambda[i]));
        }
        L.diagonal_ = true;
        L.update_hyperbolic();
        return L;
    }

    /// General matrix; eigenvalues computed numerically unless supplied.
    static LinearPart from_matrix(unsigned n, std::vector<K> row_major,
                                  std::optional<std::vector<CEig>> eigenvalues = std::nullopt);

    unsigned dim() const { return n_; }
    const K& at(unsigned i, unsigned j) const { return a_[i * n_ + j]; }
    const std::vector<K>& matrix() const { return a_; }
    const std::vector<CEig>& eigenvalues() const { return eig_; }
    bool is_diagonal() const { return diagonal_; }
    bool is_hyperbolic() const { return hyperbolic_; }
    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](const K& v) { return k_is_zero(v); });
    }

    /// Diagonal entries (valid only when is_diagonal()).
    std::vector<K> diagonal_entries() const {
        std::vector<K> d;
        for (unsigned i = 0; i < n_; ++i) d.push_back(at(i, i));
        return d;
    }

  private:
    void update_hyperbolic() {
        hyperbolic_ = !eig_.empty();
        for (const auto& ev : eig_)
            if (abs(ev.re) <= BigFloat(1e-12)) hyperbolic_ = false;
    }

    unsigned n_ = 0;
    std::vector<K> a_;
    std::vector<CEig> eig_;
    bool diagonal_ = false;
    bool hyperbolic_ = false;

    template <class K2>
    friend LinearPart<K2> linear_part_from_matrix_impl(unsigned, std::vector<K2>,
                                                       std::optional<std::vector<CEig>>);
};

// ---------------------------------------------------------------------------
// HomogeneousVF: element of H_d, all components homogeneous of degree d.
// ---------------------------------------------------------------------------

template <class K>
class HomogeneousVF {
  public:
    HomogeneousVF() = default;
    HomogeneousVF(unsigned n, unsigned degree) : n_(n), deg_(degree), comp_(n, SparsePoly<K>(n)) {
        if (n == 0) throw ShapeError("HomogeneousVF: dimension must be >= 1");
        if (degree == 0) throw ShapeError("HomogeneousVF: coefficient degree must be >= 1");
    }

    unsigned dim() const { return n_; }
    unsigned degree() const { return deg_; }

    void add_term(unsigned i, const MultiIndex& q, const K& c) {
        if (i >= n_) throw ShapeError("HomogeneousVF::add_term: component out of range");
        if (q.degree() != deg_) throw ShapeError("HomogeneousVF::add_term: |Q| != degree");
        comp_[i].add(q, c);
    }

    const SparsePoly<K>& component(unsigned i) const { return comp_.at(i); }

    bool is_zero() const {
        return std::all_of(comp_.begin(), comp_.end(), [](const auto& p) { return p.is_zero(); });
    }

    HomogeneousVF& operator+=(const HomogeneousVF& o) {
        check_shape(o);
        for (unsigned i = 0; i < n_; ++i) comp_[i] += o.comp_[i];
        return *this;
    }
    HomogeneousVF& operator-=(const HomogeneousVF& o) {
        check_shape(o);
        for (unsigned i = 0; i < n_; ++i) comp_[i] -= o.comp_[i];
        return *this;
    }
    friend HomogeneousVF operator+(HomogeneousVF a, const HomogeneousVF& b) { return a += b; }
    friend HomogeneousVF operator-(HomogeneousVF a, const HomogeneousVF& b) { return a -= b; }

    HomogeneousVF scaled(const K& s) const {
        HomogeneousVF r(n_, deg_);
        for (unsigned i = 0; i < n_; ++i) r.comp_[i] = comp_[i].scaled(s);
        return r;
    }

    std::string str() const {
        std::ostringstream os;
        for (unsigned i = 0; i < n_; ++i) {
            if (comp_[i].is_zero()) continue;
            os << "[" << comp_[i].str() << "] d/dx" << (i + 1) << " ";
        }
        auto s = os.str();
        return s.empty() ? "0" : s;
    }

  private:
    void check_shape(const HomogeneousVF& o) const {
        if (o.n_ != n_ || o.deg_ != deg_) throw ShapeError("HomogeneousVF: shape mismatch");
    }

    unsigned n_ = 0;
    unsigned deg_ = 0;
    std::vector<SparsePoly<K>> comp_;
};

/// Identity field sum_i x_i d/dx_i (coefficient degree 1).
template <class K>
HomogeneousVF<K> identity_vf(unsigned n) {
    HomogeneousVF<K> id(n, 1);
    for (unsigned i = 0; i < n; ++i) id.add_term(i, MultiIndex::unit(n, i), K(1));
    return id;
}

/// The linear part as a degree-1 homogeneous field.
template <class K>
HomogeneousVF<K> linear_as_field(const LinearPart<K>& L) {
    HomogeneousVF<K> f(L.dim(), 1);
    for (unsigned i = 0; i < L.dim(); ++i)
        for (unsigned j = 0; j < L.dim(); ++j)
            if (!k_is_zero(L.at(i, j))) f.add_term(i, MultiIndex::unit(L.dim(), j), L.at(i, j));
    return f;
}

// ---------------------------------------------------------------------------
// Fischer inner product: <x^Q, x^P> = delta_{QP} Q!/|Q|!, summed over
// components for vector fields.
// ---------------------------------------------------------------------------

template <class K>
K fischer_inner(const HomogeneousVF<K>& f, const HomogeneousVF<K>& g) {
    if (f.dim() != g.dim() || f.degree() != g.degree())
        throw ShapeError("fischer_inner: dimension or degree mismatch");
    K acc(0);
    for (unsigned i = 0; i < f.dim(); ++i) {
        const auto& a = f.component(i).terms();
        const auto& b = g.component(i).terms();
        auto ia = a.begin();
        auto ib = b.begin();
        GrlexLess less;
        while (ia != a.end() && ib != b.end()) {
            if (less(ia->first, ib->first)) ++ia;
            else if (less(ib->first, ia->first)) ++ib;
            else {
                acc += ia->second * ib->second * k_from_rat<K>(ia->first.fischer_weight());
                ++ia;
                ++ib;
            }
        }
    }
    return acc;
}

template <class K>
K fischer_norm_sq(const HomogeneousVF<K>& f) {
    return fischer_inner(f, f);
}

template <class K>
BigFloat fischer_norm(const HomogeneousVF<K>& f) {
    return BigFloat(sqrt(k_to_bigfloat(fischer_norm_sq(f))));
}

// ---------------------------------------------------------------------------
// GradedVectorField: L + sum of homogeneous parts at coefficient degrees
// 2..Nmax.
// ---------------------------------------------------------------------------

template <class K>
class GradedVectorField {
  public:
    GradedVectorField() = default;
    GradedVectorField(LinearPart<K> L, unsigned nmax) : n_(L.dim()), linear_(std::move(L)), nmax_(nmax) {}

    /// Purely nonlinear field (zero linear part), e.g. a transformation U.
    static GradedVectorField nonlinear(unsigned n, unsigned nmax) {
        return GradedVectorField(LinearPart<K>::from_matrix(n, std::vector<K>(std::size_t(n) * n, K(0))), nmax);
    }

    unsigned dim() const { return n_; }
    unsigned truncation_order() const { return nmax_; }
    const LinearPart<K>& linear() const { return linear_; }
    const std::map<unsigned, HomogeneousVF<K>>& parts() const { return parts_; }

    bool has_part(unsigned d) const {
        auto it = parts_.find(d);
        return it != parts_.end() && !it->second.is_zero();
    }

    /// Homogeneous part at coefficient degree d (zero field if absent).
    HomogeneousVF<K> part(unsigned d) const {
        auto it = parts_.find(d);
        if (it != parts_.end()) return it->second;
        return HomogeneousVF<K>(n_, d);
    }

    void set_part(HomogeneousVF<K> p) {
        if (p.dim() != n_) throw ShapeError("GradedVectorField::set_part: dimension mismatch");
        if (p.degree() < 2 || p.degree() > nmax_)
            throw ShapeError("GradedVectorField::set_part: degree outside 2..Nmax");
        if (p.is_zero()) parts_.erase(p.degree());
        else parts_.insert_or_assign(p.degree(), std::move(p));
    }

    /// Component i as a full (inhomogeneous) polynomial including the linear part.
    SparsePoly<K> component_series(unsigned i) const {
        SparsePoly<K> s(n_);
        for (unsigned j = 0; j < n_; ++j)
            if (!k_is_zero(linear_.at(i, j))) s.add(MultiIndex::unit(n_, j), linear_.at(i, j));
        for (const auto& [d, p] : parts_) s += p.component(i);
        return s;
    }

  private:
    unsigned n_ = 0;
    LinearPart<K> linear_;
    unsigned nmax_ = 0;
    std::map<unsigned, HomogeneousVF<K>> parts_;
};

// ---------------------------------------------------------------------------
// Lie bracket [X,Y] = DY.X - DX.Y, componentwise
// [X,Y]_j = sum_i X_i dY_j/dx_i - Y_i dX_j/dx_i.
// ---------------------------------------------------------------------------

template <class K>
HomogeneousVF<K> lie_bracket(const HomogeneousVF<K>& x, const HomogeneousVF<K>& y) {
    if (x.dim() != y.dim()) throw ShapeError("lie_bracket: dimension mismatch");
    const unsigned n = x.dim();
    const unsigned deg = x.degree() + y.degree() - 1;
    HomogeneousVF<K> r(n, deg);
    for (unsigned j = 0; j < n; ++j) {
        SparsePoly<K> acc(n);
        for (unsigned i = 0; i < n; ++i) {
            acc += x.component(i).mul(y.component(j).derivative(i));
            acc -= y.component(i).mul(x.component(j).derivative(i));
        }
        for (const auto& [q, c] : acc.terms()) r.add_term(j, q, c);
    }
    return r;
}

template <class K>
GradedVectorField<K> lie_bracket(const GradedVectorField<K>& x, const GradedVectorField<K>& y) {
    if (x.dim() != y.dim()) throw ShapeError("lie_bracket: dimension mismatch");
    const unsigned n = x.dim();
    const unsigned nmax = std::min(x.truncation_order(), y.truncation_order());

    // collect degree-1 (linear) and higher parts of both sides
    auto parts_of = [](const GradedVectorField<K>& g) {
        std::vector<HomogeneousVF<K>> v;
        auto lin = linear_as_field(g.linear());
        if (!lin.is_zero()) v.push_back(std::move(lin));
        for (const auto& [d, p] : g.parts()) v.push_back(p);
        return v;
    };

    std::map<unsigned, HomogeneousVF<K>> acc;
    for (const auto& xp : parts_of(x)) {
        for (const auto& yp : parts_of(y)) {
            unsigned deg = xp.degree() + yp.degree() - 1;
            if (deg > nmax) continue;
            auto br = lie_bracket(xp, yp);
            auto it = acc.find(deg);
            if (it == acc.end()) acc.emplace(deg, std::move(br));
            else it->second += br;
        }
    }

    // degree-1 output becomes the linear part of the result
    std::vector<K> lin_matrix(std::size_t(n) * n, K(0));
    if (auto it = acc.find(1); it != acc.end()) {
        for (unsigned i = 0; i < n; ++i)
            for (const auto& [q, c] : it->second.component(i).terms())
                for (unsigned j = 0; j < n; ++j)
                    if (q[j] == 1) lin_matrix[i * n + j] = c;
        acc.erase(it);
    }
    GradedVectorField<K> r(LinearPart<K>::from_matrix(n, std::move(lin_matrix)), nmax);
    for (auto& [d, p] : acc)
        if (d >= 2 && !p.is_zero()) r.set_part(std::move(p));
    return r;
}

// ---------------------------------------------------------------------------
// Composition R o (Id + U), truncated by total coefficient degree.
// ---------------------------------------------------------------------------

/// Substitute W into P: P(W_1(x),...,W_n(x)), dropping degrees > maxdeg.
template <class K>
SparsePoly<K> compose_poly(const SparsePoly<K>& p, const std::vector<SparsePoly<K>>& w, unsigned maxdeg) {
    const unsigned n = p.dim();
    if (w.size() != n) throw ShapeError("compose_poly: substitution arity mismatch");
    // memoized truncated powers of each W_i
    std::vector<std::vector<SparsePoly<K>>> pw(n);
    auto power = [&](unsigned i, uint32_t e) -> const SparsePoly<K>& {
        auto& v = pw[i];
        if (v.empty()) {
            SparsePoly<K> one(n);
            one.add(MultiIndex::zero(n), K(1));
            v.push_back(std::move(one));
        }
        while (v.size() <= e) v.push_back(v.back().mul(w[i], maxdeg));
        return v[e];
    };
    SparsePoly<K> r(n);
    for (const auto& [q, c] : p.terms()) {
        SparsePoly<K> m(n);
        m.add(MultiIndex::zero(n), c);
        for (unsigned i = 0; i < n && !m.is_zero(); ++i)
            if (q[i]) m = m.mul(power(i, q[i]), maxdeg);
        r += m;
    }
    return r;
}

/// Substitution map x -> x + U(x) as one scalar series per component.
template <class K>
std::vector<SparsePoly<K>> id_plus_series(const GradedVectorField<K>& u) {
    const unsigned n = u.dim();
    std::vector<SparsePoly<K>> w;
    w.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
        SparsePoly<K> s(n);
        s.add(MultiIndex::unit(n, i), K(1));
        for (const auto& [d, p] : u.parts()) s += p.component(i);
        w.push_back(std::move(s));
    }
    return w;
}

/// All homogeneous parts of R o (Id + U) with coefficient degree <= maxdeg.
/// Only the nonlinear parts of R enter (R is a perturbation, not a full field).
template <class K>
std::map<unsigned, HomogeneousVF<K>> compose_with_id_plus(const GradedVectorField<K>& r,
                                                          const GradedVectorField<K>& u,
                                                          unsigned maxdeg) {
    if (r.dim() != u.dim()) throw ShapeError("compose: dimension mismatch");
    const unsigned n = r.dim();
    auto w = id_plus_series(u);
    std::map<unsigned, HomogeneousVF<K>> out;
    for (unsigned i = 0; i < n; ++i) {
        SparsePoly<K> full(n);
        for (const auto& [d, p] : r.parts()) full += p.component(i);
        SparsePoly<K> comp = compose_poly(full, w, maxdeg);
        for (const auto& [q, c] : comp.terms()) {
            unsigned d = q.degree();
            auto it = out.find(d);
            if (it == out.end()) it = out.emplace(d, HomogeneousVF<K>(n, d)).first;
            it->second.add_term(i, q, c);
        }
    }
    return out;
}

/// The coefficient-degree-(delta+1) homogeneous part of R o (Id + U).
template <class K>
HomogeneousVF<K> compose_truncated(const GradedVectorField<K>& r, const GradedVectorField<K>& u,
                                   unsigned delta) {
    if (delta < 1) throw DomainError("compose_truncated: delta must be >= 1");
    if (r.truncation_order() < delta + 1)
        throw TruncationError("compose_truncated: R not defined to degree " + std::to_string(delta + 1));
    if (u.truncation_order() < delta)
        throw TruncationError("compose_truncated: U not defined to degree " + std::to_string(delta));
    auto parts = compose_with_id_plus(r, u, delta + 1);
    auto it = parts.find(delta + 1);
    if (it == parts.end()) return HomogeneousVF<K>(r.dim(), delta + 1);
    return it->second;
}

// ---------------------------------------------------------------------------
// Symmetric multilinear evaluation via polarization: R~_mu is the unique
// symmetric (mu+1)-linear map with R~_mu(x,...,x) = R_mu(x);
//   R~(v_1,...,v_m) = (1/m!) sum_{S != {}} (-1)^{m-|S|} R(sum_{i in S} v_i)
// evaluated on vector-field arguments by substitution.
// ---------------------------------------------------------------------------

template <class K>
HomogeneousVF<K> multilinear_eval(const HomogeneousVF<K>& r_mu, const std::vector<HomogeneousVF<K>>& args) {
    const unsigned n = r_mu.dim();
    const unsigned m = r_mu.degree();  // mu + 1
    if (args.size() != m) throw ShapeError("multilinear_eval: expected degree-many arguments");
    if (m > 30) throw DomainError("multilinear_eval: arity too large for the polarization sum");
    unsigned out_deg = 0;
    for (const auto& a : args) {
        if (a.dim() != n) throw ShapeError("multilinear_eval: dimension mismatch");
        out_deg += a.degree();
    }

    HomogeneousVF<K> out(n, out_deg);
    K inv_mfact = K(1) / k_from_int<K>(factorial(static_cast<unsigned long>(m)));
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<SparsePoly<K>> w(n, SparsePoly<K>(n));
        unsigned bits = 0;
        for (unsigned b = 0; b < m; ++b) {
            if (!(mask & (1u << b))) continue;
            ++bits;
            for (unsigned i = 0; i < n; ++i) w[i] += args[b].component(i);
        }
        K sign = ((m - bits) % 2 == 0) ? K(1) : K(-1);
        for (unsigned i = 0; i < n; ++i) {
            auto sub = compose_poly(r_mu.component(i), w, kNoTruncation);
            auto part = sub.homogeneous_part(out_deg);
            for (const auto& [q, c] : part.terms())
                out.add_term(i, q, K(c * sign * inv_mfact));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Truncated scalar power series utilities.
// ---------------------------------------------------------------------------

/// Multiplicative inverse of s with s(0) != 0, so that s * result == 1 up to
/// total degree nmax.
template <class K>
SparsePoly<K> series_reciprocal(const SparsePoly<K>& s, unsigned nmax) {
    const unsigned n = s.dim();
    K c0 = s.coefficient(MultiIndex::zero(n));
    if (k_is_zero(c0)) throw NotAUnitError("series_reciprocal: zero constant term");
    K inv0 = K(1) / c0;

    // r_d = -(1/c0) * sum_{1<=e<=d} s_e * r_{d-e}
    std::vector<SparsePoly<K>> rparts;
    SparsePoly<K> r0(n);
    r0.add(MultiIndex::zero(n), inv0);
    rparts.push_back(r0);
    std::vector<SparsePoly<K>> sparts;
    for (unsigned d = 0; d <= nmax; ++d) sparts.push_back(s.homogeneous_part(d));

    SparsePoly<K> result = r0;
    for (unsigned d = 1; d <= nmax; ++d) {
        SparsePoly<K> acc(n);
        for (unsigned e = 1; e <= d; ++e) {
            if (sparts[e].is_zero() || rparts[d - e].is_zero()) continue;
            acc += sparts[e].mul(rparts[d - e], d);
        }
        SparsePoly<K> rd = acc.scaled(K(-inv0));
        result += rd;
        rparts.push_back(std::move(rd));
    }
    return result;
}

}  // namespace gnf

// LinearPart::from_matrix needs an eigen solve for the general case; the
// implementation lives in linearpart_impl.hpp to keep Eigen out of this header
// for clients that only need polynomials.
#include "gnf/linearpart_impl.hpp"
