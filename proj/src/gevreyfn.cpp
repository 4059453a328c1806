#include "gnf/gevreyfn.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace gnf::gevrey {

double Jet1D::derivative(unsigned j) const {
    if (j >= c.size()) return 0.0;
    double f = 1.0;
    for (unsigned i = 2; i <= j; ++i) f *= i;
    return c[j] * f;
}

Jet1D jet_const(double v, double x0, unsigned order) {
    Jet1D j;
    j.x0 = x0;
    j.c.assign(order + 1, 0.0);
    j.c[0] = v;
    return j;
}

Jet1D jet_var(double x0, unsigned order) {
    Jet1D j = jet_const(x0, x0, order);
    if (order >= 1) j.c[1] = 1.0;
    return j;
}

static void check_same(const Jet1D& a, const Jet1D& b) {
    if (a.c.size() != b.c.size() || a.x0 != b.x0) throw ShapeError("jet arithmetic: incompatible jets");
}

Jet1D jet_add(const Jet1D& a, const Jet1D& b) {
    check_same(a, b);
    Jet1D r = a;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

Jet1D jet_sub(const Jet1D& a, const Jet1D& b) {
    check_same(a, b);
    Jet1D r = a;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
}

Jet1D jet_neg(const Jet1D& a) {
    Jet1D r = a;
    for (auto& v : r.c) v = -v;
    return r;
}

Jet1D jet_mul(const Jet1D& a, const Jet1D& b) {
    check_same(a, b);
    Jet1D r = jet_const(0.0, a.x0, a.order());
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; i + j < a.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Jet1D jet_div(const Jet1D& a, const Jet1D& b) {
    check_same(a, b);
    if (b.c.empty() || b.c[0] == 0.0) throw DomainError("jet division: singular point of the expression");
    Jet1D q = jet_const(0.0, a.x0, a.order());
    for (std::size_t k = 0; k < a.c.size(); ++k) {
        double acc = a.c[k];
        for (std::size_t j = 1; j <= k; ++j) acc -= b.c[j] * q.c[k - j];
        q.c[k] = acc / b.c[0];
    }
    return q;
}

Jet1D jet_exp(const Jet1D& a) {
    Jet1D e = jet_const(0.0, a.x0, a.order());
    e.c[0] = std::exp(a.c[0]);
    for (std::size_t k = 1; k < a.c.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a.c[j] * e.c[k - j];
        e.c[k] = acc / static_cast<double>(k);
    }
    return e;
}

Jet1D jet_ipow(const Jet1D& a, long e) {
    if (e < 0) {
        Jet1D one = jet_const(1.0, a.x0, a.order());
        return jet_ipow(jet_div(one, a), -e);
    }
    Jet1D r = jet_const(1.0, a.x0, a.order());
    Jet1D base = a;
    unsigned long ue = static_cast<unsigned long>(e);
    while (ue) {
        if (ue & 1) r = jet_mul(r, base);
        base = jet_mul(base, base);
        ue >>= 1;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Expression tree + parser.
// ---------------------------------------------------------------------------

struct ExprNode {
    enum class Kind { num, var, add, sub, mul, div, neg, exp, ipow } kind;
    double value = 0.0;  // num
    long ipow = 1;       // ipow exponent
    Expr a, b;
};

static Expr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char ch) {
        skip();
        if (pos < s.size() && s[pos] == ch) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParamError("expression parse error at position " + std::to_string(pos) + ": " + msg);
    }

    Expr parse() {
        Expr e = expr();
        skip();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (eat('+')) lhs = make({ExprNode::Kind::add, 0, 1, lhs, term()});
            else if (eat('-')) lhs = make({ExprNode::Kind::sub, 0, 1, lhs, term()});
            else return lhs;
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            if (eat('*')) lhs = make({ExprNode::Kind::mul, 0, 1, lhs, factor()});
            else if (eat('/')) lhs = make({ExprNode::Kind::div, 0, 1, lhs, factor()});
            else return lhs;
        }
    }

    Expr factor() {
        Expr b = base();
        skip();
        if (eat('^')) {
            skip();
            bool neg = eat('-');
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected integer exponent");
            long e = std::stol(s.substr(start, pos - start));
            return make({ExprNode::Kind::ipow, 0, neg ? -e : e, b, nullptr});
        }
        return b;
    }

    Expr base() {
        skip();
        if (eat('-')) return make({ExprNode::Kind::neg, 0, 1, factor(), nullptr});
        if (eat('(')) {
            Expr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' || s[pos] == 'e' ||
                    s[pos] == 'E' || ((s[pos] == '+' || s[pos] == '-') && (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
                ++pos;
            return make({ExprNode::Kind::num, std::stod(s.substr(start, pos - start)), 1, nullptr, nullptr});
        }
        if (s.compare(pos, 4, "exp(") == 0) {
            pos += 4;
            Expr e = expr();
            if (!eat(')')) fail("expected ')'");
            return make({ExprNode::Kind::exp, 0, 1, e, nullptr});
        }
        if (pos < s.size() && s[pos] == 'x') {
            ++pos;
            return make({ExprNode::Kind::var, 0, 1, nullptr, nullptr});
        }
        fail("expected number, 'x', 'exp(', '(' or '-'");
    }
};

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).parse(); }

double eval(const Expr& e, double x) {
    switch (e->kind) {
        case ExprNode::Kind::num: return e->value;
        case ExprNode::Kind::var: return x;
        case ExprNode::Kind::add: return eval(e->a, x) + eval(e->b, x);
        case ExprNode::Kind::sub: return eval(e->a, x) - eval(e->b, x);
        case ExprNode::Kind::mul: return eval(e->a, x) * eval(e->b, x);
        case ExprNode::Kind::div: {
            double d = eval(e->b, x);
            if (d == 0.0) throw DomainError("expression evaluation: division by zero");
            return eval(e->a, x) / d;
        }
        case ExprNode::Kind::neg: return -eval(e->a, x);
        case ExprNode::Kind::exp: return std::exp(eval(e->a, x));
        case ExprNode::Kind::ipow: {
            double b = eval(e->a, x);
            if (e->ipow < 0 && b == 0.0) throw DomainError("expression evaluation: x^negative at zero");
            return std::pow(b, static_cast<double>(e->ipow));
        }
    }
    throw DomainError("expression evaluation: bad node");
}

Jet1D jet_evaluate(const Expr& e, double x0, unsigned order) {
    switch (e->kind) {
        case ExprNode::Kind::num: return jet_const(e->value, x0, order);
        case ExprNode::Kind::var: return jet_var(x0, order);
        case ExprNode::Kind::add: return jet_add(jet_evaluate(e->a, x0, order), jet_evaluate(e->b, x0, order));
        case ExprNode::Kind::sub: return jet_sub(jet_evaluate(e->a, x0, order), jet_evaluate(e->b, x0, order));
        case ExprNode::Kind::mul: return jet_mul(jet_evaluate(e->a, x0, order), jet_evaluate(e->b, x0, order));
        case ExprNode::Kind::div: return jet_div(jet_evaluate(e->a, x0, order), jet_evaluate(e->b, x0, order));
        case ExprNode::Kind::neg: return jet_neg(jet_evaluate(e->a, x0, order));
        case ExprNode::Kind::exp: return jet_exp(jet_evaluate(e->a, x0, order));
        case ExprNode::Kind::ipow: return jet_ipow(jet_evaluate(e->a, x0, order), e->ipow);
    }
    throw DomainError("jet evaluation: bad node");
}

// ---------------------------------------------------------------------------

NormTable truncated_gevrey_norm(const Expr& f, const std::vector<double>& pts, double alpha, double L,
                                unsigned jmax) {
    if (alpha < 1.0 || L <= 0.0) throw ParamError("truncated_gevrey_norm: need alpha >= 1, L > 0");
    if (pts.empty()) throw ParamError("truncated_gevrey_norm: empty point set");

    std::vector<Jet1D> jets;
    jets.reserve(pts.size());
    for (double x : pts) jets.push_back(jet_evaluate(f, x, jmax));

    NormTable out;
    std::vector<double> terms;
    double acc = 0.0;
    double lfact = 0.0;  // ln j!
    for (unsigned j = 0; j <= jmax; ++j) {
        if (j > 1) lfact += std::log(static_cast<double>(j));
        double maxd = 0.0;
        for (const auto& jet : jets) maxd = std::max(maxd, std::abs(jet.derivative(j)));
        double term = std::exp(alpha * (j * std::log(L) - lfact)) * maxd;
        terms.push_back(term);
        acc += term;
        out.partial.push_back(acc);
    }

    // ratio test over the last 5 increments
    unsigned count = 0;
    double log_ratio_sum = 0.0;
    for (std::size_t j = terms.size(); j-- > 1 && count < 5;) {
        if (terms[j] == 0.0 || terms[j - 1] == 0.0) break;  // terminating series
        log_ratio_sum += std::log(terms[j] / terms[j - 1]);
        ++count;
    }
    if (count == 5) {
        out.last_ratio = std::exp(log_ratio_sum / count);
        out.diverging = out.last_ratio >= 1.0;
    }
    return out;
}

bool derivative_lemma_check(const Expr& f, const std::vector<double>& pts, double alpha, double L,
                            double lambda, unsigned j, unsigned jmax, double tighten) {
    if (!(lambda > 0.0) || !(lambda < L)) throw ParamError("derivative_lemma_check: need 0 < lambda < L");
    std::vector<Jet1D> jets;
    for (double x : pts) jets.push_back(jet_evaluate(f, x, jmax + j));

    double factor = tighten * std::exp(alpha * (std::lgamma(j + 1.0) - j * std::log(lambda)));
    double lhs = 0.0, rhs = 0.0, lfact = 0.0;
    for (unsigned i = 0; i <= jmax; ++i) {
        if (i > 1) lfact += std::log(static_cast<double>(i));
        double max_ij = 0.0, max_i = 0.0;
        for (const auto& jet : jets) {
            max_ij = std::max(max_ij, std::abs(jet.derivative(i + j)));
            max_i = std::max(max_i, std::abs(jet.derivative(i)));
        }
        lhs += std::exp(alpha * (i * std::log(L - lambda) - lfact)) * max_ij;
        rhs += std::exp(alpha * (i * std::log(L) - lfact)) * max_i;
        if (lhs > factor * rhs * (1 + 1e-12)) return false;
    }
    return true;
}

double flat_constant_check(double alpha, double L, double lambda) {
    if (!(alpha > 1.0)) throw ParamError("flat_constant_check: need alpha > 1");
    double cap = std::pow(L, alpha / (alpha - 1.0));
    if (!(lambda > 0.0) || !(lambda < cap))
        throw ParamError("flat_constant_check: need 0 < lambda < L^{alpha/(alpha-1)}");
    return std::pow(1.0 - lambda / cap, -(alpha - 1.0));
}

}  // namespace gnf::gevrey
