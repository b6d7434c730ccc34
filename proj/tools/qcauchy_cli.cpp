// qcauchy: batch driver for the restricted Cauchy sum verifications.
//
// Subcommands:
//   verify-identity        exact coefficientwise check of the restricted
//                          q-Whittaker / skew Schur Cauchy identity
//   compare-distributions  tabulates the four probabilistic quantities that
//                          the identity equates
//   fredholm               equality of the two Fredholm determinants
//   eval                   raw evaluation of polynomials / kernels
//
// stdout (or --out FILE) carries machine-readable output; stderr carries
// diagnostics. Exit codes: 0 pass, 1 check failed, 2 invalid configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iomanip>
#include <sstream>

#include "qcauchy/fredholm.hpp"
#include "qcauchy/measures.hpp"
#include "qcauchy/parallel.hpp"
#include "qcauchy/qpochhammer.hpp"
#include "qcauchy/symfunc.hpp"

using json = nlohmann::ordered_json;
using namespace qcauchy;

namespace {

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("cannot parse number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
    return out;
}

std::vector<mpq_class> parse_rationals(const std::string& s) {
    std::vector<mpq_class> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(parse_rational(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
    return out;
}

std::vector<int> parse_parts(const std::string& s) {
    std::vector<int> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

// Atomic write: temp file in the same directory, then rename.
void write_output(const std::string& path, const std::string& payload) {
    if (path.empty() || path == "-") {
        std::cout << payload;
        return;
    }
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        os << payload;
    }
    std::filesystem::rename(tmp, target);
}

json rationals_json(const std::vector<mpq_class>& xs) {
    json arr = json::array();
    for (const auto& x : xs) arr.push_back(rational_to_string(x));
    return arr;
}

struct CommonOpts {
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out", c.out, "output file (default: stdout)");
    cmd->add_option("--format", c.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

// ---- verify-identity ----------------------------------------------------

int cmd_verify_identity(const std::string& a_str, const std::string& b_str,
                        int n_max, int order, const CommonOpts& c) {
    auto a = parse_rationals(a_str);
    auto b = parse_rationals(b_str);
    json rep;
    rep["command"] = "verify-identity";
    rep["a"] = rationals_json(a);
    rep["b"] = rationals_json(b);
    rep["order"] = order;
    bool all_equal = true;
    json rows = json::array();
    std::ostringstream csv;
    csv << "n,coeff,lhs,rhs,equal\n";
    for (int n = 0; n <= n_max; ++n) {
        auto r = verify_theorem1(n, a, b, order);
        all_equal = all_equal && r.equal;
        json row;
        row["n"] = n;
        row["equal"] = r.equal;
        row["lhs_coeffs"] = rationals_json(r.lhs_coeffs);
        row["rhs_coeffs"] = rationals_json(r.rhs_coeffs);
        if (r.first_mismatch) row["first_mismatch"] = *r.first_mismatch;
        else row["first_mismatch"] = nullptr;
        rows.push_back(row);
        for (int i = 0; i <= order; ++i)
            csv << n << ',' << i << ',' << rational_to_string(r.lhs_coeffs[static_cast<std::size_t>(i)])
                << ',' << rational_to_string(r.rhs_coeffs[static_cast<std::size_t>(i)]) << ','
                << (r.lhs_coeffs[static_cast<std::size_t>(i)] == r.rhs_coeffs[static_cast<std::size_t>(i)] ? 1 : 0)
                << '\n';
    }
    rep["results"] = rows;
    rep["all_equal"] = all_equal;
    write_output(c.out, c.format == "json" ? rep.dump(2) + "\n" : csv.str());
    if (!all_equal) std::cerr << "verify-identity: coefficient mismatch\n";
    return all_equal ? 0 : 1;
}

// ---- compare-distributions ----------------------------------------------

int cmd_compare_distributions(ParamSet p, long n_min, long n_max,
                              TruncationPolicy tr, double tol, const CommonOpts& c) {
    p.require_measure_valid();
    json rep;
    rep["command"] = "compare-distributions";
    rep["a"] = p.a;
    rep["b"] = p.b;
    rep["q"] = p.q;
    rep["t"] = p.t;
    rep["weight_cutoff"] = tr.weight_cutoff;
    rep["tol"] = tol;
    double max_gap = 0.0;
    long bad_n = 0;
    json rows = json::array();
    std::ostringstream csv;
    csv << std::setprecision(17);
    csv << "n,p_mu1_plus_chi,p_lambda1,qlaplace,p_lambda1_plus_S,gap_a,gap_b\n";
    for (long n = n_min; n <= n_max; ++n) {
        // P(mu1 + chi <= n) by convolution of the brute-forced mu1 cdf
        double p_mu_chi = 0.0;
        for (long j = 0; j <= n; ++j) p_mu_chi += chi_pmf(j, p.q) * mu1_cdf(n - j, p, tr).value;
        auto p_lam = lambda1_cdf(n, p, tr);
        ParamSet pn = p;
        pn.k = static_cast<int>(n);
        auto ql = qlaplace_lhs(pn, tr);
        auto p_shift = lambda1_shift_cdf(n, pn, tr);
        double gap_a = std::abs(p_mu_chi - p_lam.value);
        double gap_b = std::abs(ql.value - p_shift.value);
        if (std::max(gap_a, gap_b) > max_gap) {
            max_gap = std::max(gap_a, gap_b);
            bad_n = n;
        }
        json row;
        row["n"] = n;
        row["p_mu1_plus_chi"] = p_mu_chi;
        row["p_lambda1"] = p_lam.value;
        row["qlaplace"] = ql.value;
        row["p_lambda1_plus_S"] = p_shift.value;
        row["gap_a"] = gap_a;
        row["gap_b"] = gap_b;
        row["residuals"] = {p_lam.residual, ql.residual, p_shift.residual};
        rows.push_back(row);
        csv << n << ',' << p_mu_chi << ',' << p_lam.value << ',' << ql.value << ','
            << p_shift.value << ',' << gap_a << ',' << gap_b << '\n';
    }
    rep["rows"] = rows;
    rep["max_gap"] = max_gap;
    bool pass = max_gap < tol;
    rep["pass"] = pass;
    write_output(c.out, c.format == "json" ? rep.dump(2) + "\n" : csv.str());
    if (!pass)
        std::cerr << "compare-distributions: gap " << max_gap << " at n = " << bad_n
                  << " exceeds tol " << tol << "\n";
    return pass ? 0 : 1;
}

// ---- fredholm -------------------------------------------------------------

int cmd_fredholm(ParamSet p, Window w, int nodes, long ell_max, double tol,
                 const CommonOpts& c) {
    auto rep = verify_theorem31(p, w, nodes, ell_max, tol);
    json j;
    j["command"] = "fredholm";
    j["params"] = {{"a", p.a}, {"b", p.b}, {"q", p.q}, {"t", p.t}, {"k", p.k}};
    j["eps"] = rep.eps;
    j["window"] = {w.lo, w.hi};
    j["quad_nodes"] = nodes;
    j["hypotheses"] = {{"prop22", rep.section2_ok}, {"section3", rep.section3_ok}};
    j["F_window_K"] = rep.F_window_K;
    j["F_window_K_drift"] = rep.F_window_K_drift;
    j["F_rank"] = rep.F_rank;
    j["F_ell_window"] = rep.F_ell_window;
    j["F_K_inf"] = rep.F_K_inf;
    j["F_L"] = rep.F_L;
    j["F_L_drift"] = rep.F_L_drift;
    j["gaps"] = {{"K_vs_L", rep.gap_K_vs_L},
                 {"rank_spread", rep.gap_rank_spread},
                 {"rank_vs_window", rep.gap_rank_vs_window}};
    j["pass"] = rep.pass;
    std::ostringstream csv;
    csv << std::setprecision(17);
    csv << "quantity,value\n";
    csv << "F_window_K," << rep.F_window_K << "\n";
    for (std::size_t i = 0; i < rep.F_rank.size(); ++i)
        csv << "F_rank_" << i << ',' << rep.F_rank[i] << "\n";
    for (std::size_t i = 0; i < rep.F_ell_window.size(); ++i)
        csv << "F_ell_window_" << i << ',' << rep.F_ell_window[i] << "\n";
    csv << "F_K_inf," << rep.F_K_inf << "\n";
    csv << "F_L," << rep.F_L << "\n";
    csv << "gap_K_vs_L," << rep.gap_K_vs_L << "\n";
    csv << "pass," << (rep.pass ? 1 : 0) << "\n";
    write_output(c.out, c.format == "json" ? j.dump(2) + "\n" : csv.str());
    if (!rep.pass)
        std::cerr << "fredholm: |det(1-fK) - det(1+fL)| = " << rep.gap_K_vs_L
                  << " exceeds tol " << tol << "\n";
    return rep.pass ? 0 : 1;
}

// ---- eval -----------------------------------------------------------------

int cmd_eval(const std::string& what, const std::string& vars_str,
             const std::string& lambda_str, const std::string& rho_str,
             const std::string& q_str, double q_num, std::complex<double> x,
             long m1, long m2, long n, ParamSet p, const CommonOpts& c) {
    json j;
    j["command"] = "eval";
    j["what"] = what;
    if (what == "hk" || what == "skew-schur" || what == "qwhittaker-P" ||
        what == "qwhittaker-Q") {
        auto vars = parse_rationals(vars_str);
        mpq_class qx = q_str.empty() ? mpq_class(0) : parse_rational(q_str);
        Partition lam{parse_parts(lambda_str)};
        Partition rho{parse_parts(rho_str)};
        mpq_class val;
        if (what == "hk") val = complete_homogeneous(n, vars);
        else if (what == "skew-schur") val = skew_schur(lam, rho, vars);
        else if (what == "qwhittaker-P") val = qwhittaker_P(lam, vars, qx);
        else val = qwhittaker_Q(lam, vars, qx);
        j["value"] = rational_to_string(val);
    } else if (what == "qpoch-inf") {
        j["value"] = {qpoch_inf(x, q_num).real(), qpoch_inf(x, q_num).imag()};
    } else if (what == "qpoch-n") {
        j["value"] = {qpoch_n(x, q_num, n).real(), qpoch_n(x, q_num, n).imag()};
    } else if (what == "theta") {
        j["value"] = {theta(x, q_num).real(), theta(x, q_num).imag()};
    } else if (what == "chi-pmf") {
        j["value"] = chi_pmf(n, q_num);
    } else if (what == "shift-pmf") {
        j["value"] = shift_pmf(n, p);
    } else if (what == "fermi") {
        j["value"] = fermi_f(m1, p);
    } else if (what == "kernel-K") {
        auto v = kernel_K(m1, m2, p, ContourSpec::default_C(p, 256));
        j["value"] = {v.real(), v.imag()};
    } else if (what == "kernel-L") {
        auto [lc, ld] = ContourSpec::default_L_pair(p, 256);
        auto v = kernel_L(m1, m2, p, lc, ld);
        j["value"] = {v.real(), v.imag()};
    } else {
        throw std::invalid_argument("eval: unknown --what '" + what + "'");
    }
    write_output(c.out, j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"restricted Cauchy sum verification suite"};
    app.require_subcommand(1);

    // verify-identity
    auto* vi = app.add_subcommand("verify-identity",
                                  "exact check of the restricted Cauchy identity");
    std::string vi_a = "1/3,1/5", vi_b = "1/4,1/7";
    int vi_nmax = 3, vi_order = 8;
    CommonOpts vi_c;
    vi->add_option("--a", vi_a, "rational a-variables, comma separated p/q");
    vi->add_option("--b", vi_b, "rational b-variables");
    vi->add_option("--n-max,-n", vi_nmax, "check n = 0..n_max");
    vi->add_option("--order", vi_order, "series truncation order");
    add_common(vi, vi_c);

    // compare-distributions
    auto* cd = app.add_subcommand("compare-distributions",
                                  "tabulate the four distribution quantities");
    std::string cd_a = "0.30,0.28", cd_b = "0.25,0.20";
    double cd_q = 0.15, cd_t = 1.0, cd_tol = 1e-6;
    long cd_nmin = -2, cd_nmax = 4;
    long cd_cutoff = 16;
    CommonOpts cd_c;
    cd->add_option("--a", cd_a, "a-variables");
    cd->add_option("--b", cd_b, "b-variables");
    cd->add_option("--q", cd_q, "q in (0,1)");
    cd->add_option("--t", cd_t, "shift parameter t > 0");
    cd->add_option("--n-min", cd_nmin, "lowest threshold");
    cd->add_option("--n-max,-n", cd_nmax, "highest threshold");
    cd->add_option("--cutoff", cd_cutoff, "partition weight cutoff");
    cd->add_option("--tol", cd_tol, "maximum allowed gap");
    add_common(cd, cd_c);

    // fredholm
    auto* fr = app.add_subcommand("fredholm",
                                  "equality of the two Fredholm determinants");
    std::string fr_a = "0.30,0.28", fr_b = "0.25,0.20", fr_window;
    double fr_q = 0.15, fr_t = 1.0, fr_tol = 1e-6;
    int fr_k = 1, fr_nodes = 256;
    long fr_ellmax = 3;
    CommonOpts fr_c;
    fr->add_option("--a", fr_a, "a-variables, distinct descending");
    fr->add_option("--b", fr_b, "b-variables");
    fr->add_option("--q", fr_q, "q in (0,1)");
    fr->add_option("--t", fr_t, "shift parameter t > 0");
    fr->add_option("--k,-k", fr_k, "threshold k >= 0");
    fr->add_option("--window", fr_window, "window as lo:hi (default: auto)");
    fr->add_option("--quad-nodes", fr_nodes, "trapezoid nodes per contour");
    fr->add_option("--ell-max", fr_ellmax, "finite-rank table depth");
    fr->add_option("--tol", fr_tol, "determinant gap tolerance");
    add_common(fr, fr_c);

    // eval
    auto* ev = app.add_subcommand("eval", "raw polynomial/kernel evaluation");
    std::string ev_what = "hk", ev_vars = "1/3,1/5", ev_lambda, ev_rho, ev_qexact;
    std::string ev_a = "0.30,0.28", ev_b = "0.25,0.20";
    double ev_q = 0.15, ev_t = 1.0, ev_xre = 0.5, ev_xim = 0.0;
    long ev_n = 0, ev_m1 = 0, ev_m2 = 0;
    int ev_k = 1;
    CommonOpts ev_c;
    ev->add_option("--what", ev_what,
                   "hk | skew-schur | qwhittaker-P | qwhittaker-Q | qpoch-inf | "
                   "qpoch-n | theta | chi-pmf | shift-pmf | fermi | kernel-K | kernel-L");
    ev->add_option("--vars", ev_vars, "rational variables for polynomial evals");
    ev->add_option("--lambda", ev_lambda, "partition, e.g. 3,1");
    ev->add_option("--rho", ev_rho, "inner partition");
    ev->add_option("--q-exact", ev_qexact, "rational q for polynomial evals");
    ev->add_option("--q", ev_q, "numeric q");
    ev->add_option("--t", ev_t, "t parameter");
    ev->add_option("--k", ev_k, "threshold k");
    ev->add_option("--a", ev_a, "a-variables for kernels");
    ev->add_option("--b", ev_b, "b-variables for kernels");
    ev->add_option("--x-re", ev_xre, "real part of x");
    ev->add_option("--x-im", ev_xim, "imag part of x");
    ev->add_option("--n", ev_n, "integer argument (h_k order, Pochhammer n, pmf index)");
    ev->add_option("--m1", ev_m1, "kernel row index");
    ev->add_option("--m2", ev_m2, "kernel column index");
    add_common(ev, ev_c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 2;
    }

    try {
        if (vi->parsed())
            return cmd_verify_identity(vi_a, vi_b, vi_nmax, vi_order, vi_c);
        if (cd->parsed()) {
            ParamSet p;
            p.a = parse_doubles(cd_a);
            p.b = parse_doubles(cd_b);
            p.q = cd_q;
            p.t = cd_t;
            TruncationPolicy tr;
            tr.weight_cutoff = cd_cutoff;
            return cmd_compare_distributions(p, cd_nmin, cd_nmax, tr, cd_tol, cd_c);
        }
        if (fr->parsed()) {
            ParamSet p;
            p.a = parse_doubles(fr_a);
            p.b = parse_doubles(fr_b);
            p.q = fr_q;
            p.t = fr_t;
            p.k = fr_k;
            Window w = default_window(p, 1e-8);
            if (!fr_window.empty()) {
                auto colon = fr_window.find(':');
                if (colon == std::string::npos)
                    throw std::invalid_argument("--window expects lo:hi");
                w.lo = std::stol(fr_window.substr(0, colon));
                w.hi = std::stol(fr_window.substr(colon + 1));
            }
            return cmd_fredholm(p, w, fr_nodes, fr_ellmax, fr_tol, fr_c);
        }
        if (ev->parsed()) {
            ParamSet p;
            p.a = parse_doubles(ev_a);
            p.b = parse_doubles(ev_b);
            p.q = ev_q;
            p.t = ev_t;
            p.k = ev_k;
            return cmd_eval(ev_what, ev_vars, ev_lambda, ev_rho, ev_qexact, ev_q,
                            {ev_xre, ev_xim}, ev_m1, ev_m2, ev_n, p, ev_c);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
