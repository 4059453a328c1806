#pragma once

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gnf/polyvec.hpp"

// JSON serialization of truncated vector fields:
//
// {
//   "n": 2,
//   "linear": [["1", "0"], ["0", "-2"]],
//   "terms": [{"component": 1, "exponents": [3, 1], "coeff": "1"}],
//   "scalar_field": "rational",            // or "float"
//   "precision_bits": 256,
//   "eigenvalues": [["1", "0"], ["-2", "0"]]   // optional, [re, im] pairs
// }
//
// Coefficients are strings ("p/q" or decimal) so no precision is lost in
// transit; components are 1-based; terms carry only the nonlinear part.

namespace gnf::cli {

struct FieldTerm {
    unsigned component = 1;  // 1-based
    std::vector<uint32_t> exponents;
    std::string coeff;
};

struct FieldSpec {
    unsigned n = 0;
    std::vector<std::vector<std::string>> linear;
    std::vector<FieldTerm> terms;
    std::string scalar_field = "rational";
    unsigned precision_bits = kDefaultPrecisionBits;
    std::optional<std::vector<std::array<std::string, 2>>> eigenvalues;

    unsigned max_term_degree() const {
        unsigned d = 2;
        for (const auto& t : terms) {
            unsigned s = 0;
            for (auto e : t.exponents) s += e;
            d = std::max(d, s);
        }
        return d;
    }
};

inline FieldSpec parse_fieldspec(const nlohmann::json& j) {
    FieldSpec spec;
    try {
        spec.n = j.at("n").get<unsigned>();
        if (spec.n == 0) throw ParamError("FieldSpec: n must be >= 1");
        const auto& lin = j.at("linear");
        if (lin.size() != spec.n) throw ParamError("FieldSpec: 'linear' must have n rows");
        for (const auto& row : lin) {
            if (row.size() != spec.n) throw ParamError("FieldSpec: 'linear' must have n columns");
            std::vector<std::string> r;
            for (const auto& v : row) r.push_back(v.get<std::string>());
            spec.linear.push_back(std::move(r));
        }
        if (j.contains("terms")) {
            for (const auto& t : j.at("terms")) {
                FieldTerm term;
                term.component = t.at("component").get<unsigned>();
                if (term.component < 1 || term.component > spec.n)
                    throw ParamError("FieldSpec: term component out of range (1-based)");
                for (const auto& e : t.at("exponents")) term.exponents.push_back(e.get<uint32_t>());
                if (term.exponents.size() != spec.n)
                    throw ParamError("FieldSpec: term exponent count must equal n");
                unsigned deg = 0;
                for (auto e : term.exponents) deg += e;
                if (deg < 2) throw ParamError("FieldSpec: terms must have |exponents| >= 2");
                term.coeff = t.at("coeff").get<std::string>();
                spec.terms.push_back(std::move(term));
            }
        }
        if (j.contains("scalar_field")) spec.scalar_field = j.at("scalar_field").get<std::string>();
        if (spec.scalar_field != "rational" && spec.scalar_field != "float")
            throw ParamError("FieldSpec: scalar_field must be 'rational' or 'float'");
        if (j.contains("precision_bits")) spec.precision_bits = j.at("precision_bits").get<unsigned>();
        if (j.contains("eigenvalues")) {
            std::vector<std::array<std::string, 2>> eig;
            for (const auto& e : j.at("eigenvalues"))
                eig.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
            if (eig.size() != spec.n) throw ParamError("FieldSpec: eigenvalue count must equal n");
            spec.eigenvalues = std::move(eig);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParamError(std::string("FieldSpec: malformed JSON: ") + e.what());
    }
    return spec;
}

inline nlohmann::json fieldspec_to_json(const FieldSpec& spec) {
    nlohmann::json j;
    j["n"] = spec.n;
    j["linear"] = spec.linear;
    auto terms = nlohmann::json::array();
    for (const auto& t : spec.terms) {
        nlohmann::json tj;
        tj["component"] = t.component;
        tj["exponents"] = t.exponents;
        tj["coeff"] = t.coeff;
        terms.push_back(tj);
    }
    j["terms"] = terms;
    j["scalar_field"] = spec.scalar_field;
    j["precision_bits"] = spec.precision_bits;
    if (spec.eigenvalues) j["eigenvalues"] = *spec.eigenvalues;
    return j;
}

template <class K>
GradedVectorField<K> to_graded(const FieldSpec& spec, unsigned nmax) {
    std::vector<K> a;
    for (const auto& row : spec.linear)
        for (const auto& v : row) a.push_back(k_from_string<K>(v));
    std::optional<std::vector<CEig>> eig;
    if (spec.eigenvalues) {
        eig.emplace();
        for (const auto& [re, im] : *spec.eigenvalues)
            eig->emplace_back(k_to_bigfloat(k_from_string<BigFloat>(re)),
                              k_to_bigfloat(k_from_string<BigFloat>(im)));
    }
    auto L = LinearPart<K>::from_matrix(spec.n, std::move(a), std::move(eig));
    GradedVectorField<K> x(std::move(L), nmax);
    for (const auto& t : spec.terms) {
        MultiIndex q(t.exponents);
        if (q.degree() > nmax) continue;  // beyond the requested truncation
        auto part = x.part(q.degree());
        part.add_term(t.component - 1, q, k_from_string<K>(t.coeff));
        x.set_part(std::move(part));
    }
    return x;
}

/// Canonical FieldSpec of a graded field (terms in component-major grlex order).
template <class K>
FieldSpec from_graded(const GradedVectorField<K>& x, const std::string& scalar_field,
                      unsigned precision_bits) {
    FieldSpec spec;
    spec.n = x.dim();
    spec.scalar_field = scalar_field;
    spec.precision_bits = precision_bits;
    for (unsigned i = 0; i < x.dim(); ++i) {
        std::vector<std::string> row;
        for (unsigned j = 0; j < x.dim(); ++j) row.push_back(k_to_string(x.linear().at(i, j)));
        spec.linear.push_back(std::move(row));
    }
    for (const auto& [d, p] : x.parts())
        for (unsigned i = 0; i < x.dim(); ++i)
            for (const auto& [q, c] : p.component(i).terms())
                spec.terms.push_back({i + 1, q.exponents(), k_to_string(c)});
    return spec;
}

}  // namespace gnf::cli
