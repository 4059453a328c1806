#pragma once

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "gnf/flatsolver.hpp"
#include "gnf/liouville.hpp"
#include "gnf/normalform.hpp"
#include "gnf/smalldivisors.hpp"

// Report builders shared by the CLI and the tests. All numeric payloads are
// strings (round-trippable, precision preserved) and every container is
// emitted in a fixed order, so identical inputs give byte-identical JSON.

namespace gnf::reports {

using nlohmann::json;

inline std::string fixed(double v, int digits = 12) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

inline json bf_list(const std::vector<BigFloat>& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(bf_to_string(x));
    return a;
}

template <class K>
json normalization_report(const nf::NormalizationResult<K>& r, const nf::MajorantReport* majorant) {
    json j;
    j["u_norms"] = bf_list(r.u_norms);
    j["n_norms"] = bf_list(r.n_norms);
    j["solve_residuals"] = bf_list(r.solve_residuals);
    j["conjugacy_residuals"] = bf_list(r.conjugacy_residuals);
    j["conjugacy_ok"] = r.conjugacy_ok;
    if (r.gevrey_fit) {
        j["gevrey_fit"] = {{"beta_hat", fixed(r.gevrey_fit->beta_hat)},
                           {"c_hat", fixed(r.gevrey_fit->c_hat)},
                           {"r2", fixed(r.gevrey_fit->r2)}};
    }
    json uterms = json::array();
    for (const auto& [d, p] : r.transform.parts())
        for (unsigned i = 0; i < p.dim(); ++i)
            for (const auto& [q, c] : p.component(i).terms())
                uterms.push_back({{"component", i + 1}, {"exponents", q.exponents()}, {"coeff", k_to_string(c)}});
    j["transform_terms"] = uterms;
    json nterms = json::array();
    for (const auto& [d, p] : r.normal_form.parts())
        for (unsigned i = 0; i < p.dim(); ++i)
            for (const auto& [q, c] : p.component(i).terms())
                nterms.push_back({{"component", i + 1}, {"exponents", q.exponents()}, {"coeff", k_to_string(c)}});
    j["normal_form_terms"] = nterms;
    if (majorant) {
        j["majorant"] = {{"composition_constant", bf_to_string(majorant->composition_constant)},
                         {"eta", bf_list(majorant->eta)},
                         {"sigma", bf_list(majorant->sigma)},
                         {"ok", majorant->ok},
                         {"all_ok", majorant->all_ok}};
    }
    return j;
}

template <class K>
void normalization_csv(std::ostream& os, const nf::NormalizationResult<K>& r,
                       const nf::MajorantReport* majorant) {
    os << "delta,u_norm,n_norm,eta,sigma,residual\n";
    for (std::size_t i = 0; i < r.u_norms.size(); ++i) {
        os << (i + 1) << "," << bf_to_string(r.u_norms[i]) << "," << bf_to_string(r.n_norms[i]) << ",";
        if (majorant) os << bf_to_string(majorant->eta[i + 1]) << "," << bf_to_string(majorant->sigma[i + 1]);
        else os << ",";
        os << "," << bf_to_string(r.conjugacy_residuals[i]) << "\n";
    }
}

struct SmallDivisorBundle {
    std::vector<CEig> lambda;
    unsigned kmax = 0;
    smalldiv::OmegaResult omega;
    std::vector<BigFloat> brjuno;
    smalldiv::CarlettiMarmiResult cm;
    std::vector<std::optional<BigFloat>> a_seq;
    std::optional<smalldiv::SiegelFit> siegel;
    std::vector<BigFloat> eta;
    std::vector<BigFloat> sigma;
    std::optional<smalldiv::GevreyBoundFit> beta_fit;  // eta_k <= C^k (k!)^beta
    double alpha = 0.0, beta = 0.0;
};

inline json smalldiv_report(const SmallDivisorBundle& b) {
    json j;
    json lam = json::array();
    for (const auto& ev : b.lambda) lam.push_back({bf_to_string(ev.re), bf_to_string(ev.im)});
    j["lambda"] = lam;
    j["kmax"] = b.kmax;
    j["omega"] = bf_list(b.omega.omega);
    j["omega_capped"] = b.omega.capped;
    j["omega_qcap"] = b.omega.qcap;
    if (b.omega.capped) {
        j["omega_cap_note"] = "capped at |Q| <= " + std::to_string(b.omega.qcap) + " from k = " +
                              std::to_string(b.omega.capped_from_k);
    }
    j["brjuno_partials"] = bf_list(b.brjuno);
    j["cm_sequence"] = bf_list(b.cm.values);
    j["cm_holds_at_horizon"] = b.cm.holds_at_horizon;
    j["cm_horizon"] = b.cm.horizon;
    j["alpha"] = fixed(b.alpha);
    j["beta"] = fixed(b.beta);
    json a = json::array();
    for (const auto& v : b.a_seq) a.push_back(v ? json(bf_to_string(*v)) : json(nullptr));
    j["a_seq"] = a;
    if (b.siegel) {
        j["siegel_fit"] = {{"c", fixed(b.siegel->c)},
                           {"tau", fixed(b.siegel->tau)},
                           {"residual", fixed(b.siegel->residual)},
                           {"records", b.siegel->n_records}};
    }
    j["eta"] = bf_list(b.eta);
    j["sigma"] = bf_list(b.sigma);
    if (b.beta_fit) {
        j["eta_beta_fit"] = {{"beta_hat", fixed(b.beta_fit->beta_hat)},
                             {"c_hat", fixed(b.beta_fit->c_hat)}};
    }
    return j;
}

inline void smalldiv_csv(std::ostream& os, const SmallDivisorBundle& b) {
    os << "k,omega,brjuno_partial,cm,a,eta,sigma\n";
    std::size_t rows = std::max({b.omega.omega.size(), b.a_seq.size(),
                                 b.eta.empty() ? std::size_t(0) : b.eta.size() - 1});
    for (std::size_t i = 0; i < rows; ++i) {
        os << (i + 1) << ",";
        os << (i < b.omega.omega.size() ? bf_to_string(b.omega.omega[i]) : "") << ",";
        os << (i < b.brjuno.size() ? bf_to_string(b.brjuno[i]) : "") << ",";
        os << (i < b.cm.values.size() ? bf_to_string(b.cm.values[i]) : "") << ",";
        os << (i < b.a_seq.size() && b.a_seq[i] ? bf_to_string(*b.a_seq[i]) : "") << ",";
        os << (i + 1 < b.eta.size() ? bf_to_string(b.eta[i + 1]) : "") << ",";
        os << (i + 1 < b.sigma.size() ? bf_to_string(b.sigma[i + 1]) : "") << "\n";
    }
}

inline json liouville_report(const liouville::LiouvilleData& data, const liouville::DivergenceReport& rep,
                             double alpha) {
    json j;
    j["gap"] = fixed(data.gap);
    j["alpha"] = fixed(alpha);
    j["n_terms"] = data.n_terms;
    j["precision_bits"] = data.precision_bits;
    j["zeta"] = bf_to_string(data.zeta);
    j["c_lower"] = fixed(static_cast<double>(BigFloat(data.c)), 15);
    j["partial"] = data.partial;
    if (data.partial) j["horizon_note"] = data.horizon_note;
    json scales = json::array();
    for (const auto& s : data.scales) {
        scales.push_back({{"n", s.n},
                          {"p", s.p.str()},
                          {"q", s.q.str()},
                          {"upper_ok", s.upper_ok},
                          {"lower_ok", s.lower_ok},
                          {"c_n", fixed(static_cast<double>(BigFloat(s.c_n)), 15)}});
    }
    j["band_scales"] = scales;
    json checks = json::array();
    for (const auto& s : rep.scales) {
        json c = {{"n", s.n},
                  {"p", s.p},
                  {"q", s.q},
                  {"in_horizon", s.in_horizon},
                  {"collision", s.collision},
                  {"closed_coeff", s.closed_coeff},
                  {"gevrey_inequality_ok", s.gevrey_ineq_ok}};
        if (s.in_horizon) {
            c["degree"] = s.degree;
            c["engine_coeff"] = s.engine_coeff;
            if (!s.collision) {
                c["rel_err"] = fixed(s.rel_err, 6);
                c["matched"] = s.matched;
            }
        }
        checks.push_back(c);
    }
    j["scale_checks"] = checks;
    j["linearizable"] = rep.linearizable;
    j["engine_nmax"] = rep.nmax;
    j["engine_precision_bits"] = rep.precision_bits;
    j["engine_u_norms"] = bf_list(rep.engine_u_norms);
    json logn = json::array();
    for (double v : rep.log_norms) logn.push_back(fixed(v));
    j["log_norms"] = logn;
    j["fit"] = {{"beta_hat", fixed(rep.fit.beta_hat)},
                {"c_hat", fixed(rep.fit.c_hat)},
                {"r2", fixed(rep.fit.r2)}};
    json betas = json::array();
    for (double v : rep.fit_beta_by_horizon) betas.push_back(fixed(v));
    j["fit_beta_by_horizon"] = betas;
    return j;
}

inline void liouville_csv(std::ostream& os, const liouville::LiouvilleData& data,
                          const liouville::DivergenceReport& rep) {
    os << "n,p,q,degree,log_norm,log_qfact\n";
    for (unsigned n = 0; n < data.n_terms; ++n) {
        BigFloat lnfact = lgamma(BigFloat(BigFloat(data.q[n]) + 1));
        os << n << "," << data.p[n].str() << "," << data.q[n].str() << ","
           << Int(data.p[n] + data.q[n] + 1).str() << "," << fixed(rep.log_norms[n]) << ","
           << fixed(static_cast<double>(lnfact)) << "\n";
    }
}

inline json gevreynorm_report(const gevrey::NormTable& t, double alpha, double width) {
    json j;
    j["alpha"] = fixed(alpha);
    j["width"] = fixed(width);
    json partial = json::array();
    for (double v : t.partial) partial.push_back(fixed(v, 15));
    j["partial_sums"] = partial;
    j["diverging"] = t.diverging;
    j["last_ratio"] = fixed(t.last_ratio, 6);
    return j;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file: " + path);
    os << text;
}

}  // namespace gnf::reports
