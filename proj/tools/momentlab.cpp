// moment-lab command-line interface.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "momentlab/arith.hpp"
#include "momentlab/gauss.hpp"
#include "momentlab/harness.hpp"
#include "momentlab/lfunc.hpp"
#include "momentlab/predictor.hpp"
#include "momentlab/special.hpp"

using namespace momentlab;
using nlohmann::json;

namespace {

json breakdown_json(const MainTermBreakdown& b) {
    json j;
    j["X"] = b.X;
    j["l"] = b.l;
    j["alpha_re"] = b.alpha.real();
    j["alpha_im"] = b.alpha.imag();
    j["weight"] = b.weight_name;
    j["term1_re"] = b.term1.real();
    j["term1_im"] = b.term1.imag();
    j["term2_re"] = b.term2.real();
    j["term2_im"] = b.term2.imag();
    json comp;
    for (auto& [k, v] : b.component_values) {
        comp[k] = {{"re", v.real()}, {"im", v.imag()}};
    }
    j["component_values"] = comp;
    return j;
}

int check(bool ok, const std::string& what, int& failures) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << what << '\n';
    if (!ok) ++failures;
    return ok ? 0 : 1;
}

int suite_gauss() {
    int failures = 0;
    // normalized brute-force tau vs the prime-power table
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= 45; n += 2) {
        FactoredInt fn = factor(n);
        for (std::int64_t q = 1; q <= 24; ++q) {
            Complex tau = tau_bruteforce(n, {CharacterSpec::JacobiN, 0}, q).value;
            int eps = kronecker(-1, static_cast<std::int64_t>(n));
            Complex norm = (Complex(1, -1) / 2.0 + static_cast<double>(eps) * Complex(1, 1) / 2.0) * tau;
            worst = std::max(worst, std::abs(norm - gauss_G(fn, static_cast<std::uint64_t>(q)).value));
        }
    }
    check(worst <= 1e-8, "gauss: G table matches normalized brute-force tau (worst " +
                             std::to_string(worst) + ")", failures);
    // period-4 invariance in q
    bool p4 = true;
    for (std::uint64_t n = 1; n <= 45; n += 2) {
        FactoredInt fn = factor(n);
        for (std::uint64_t q = 1; q <= 16; ++q)
            if (std::abs(gauss_G(fn, 4 * q).value - gauss_G(fn, q).value) > 1e-10) p4 = false;
    }
    check(p4, "gauss: G(chi_n, 4q) = G(chi_n, q)", failures);
    // multiplicativity in n for coprime parts
    bool mult = true;
    for (std::uint64_t n1 : {3ull, 5ull, 7ull, 9ull})
        for (std::uint64_t n2 : {11ull, 13ull, 25ull})
            for (std::uint64_t q : {1ull, 2ull, 6ull}) {
                Complex lhs = gauss_G(factor(n1 * n2), q).value;
                Complex rhs = gauss_G(factor(n1), q).value * gauss_G(factor(n2), q).value;
                if (std::abs(lhs - rhs) > 1e-9) mult = false;
            }
    check(mult, "gauss: multiplicativity G(chi_{n1 n2}) = G(chi_{n1}) G(chi_{n2})", failures);
    return failures;
}

int suite_fe() {
    int failures = 0;
    double worst = 0.0;
    for (std::uint64_t d : {1ull, 3ull, 17ull, 105ull, 221ull}) {
        QuadraticFamilyIndex q = QuadraticFamilyIndex::make(d);
        for (Complex s : {Complex(0.5, 0.0), Complex(0.75, 1.0), Complex(0.3, -1.5)}) {
            Complex a = completed_lambda(q, s);
            Complex b = completed_lambda(q, 1.0 - s);
            worst = std::max(worst, std::abs(a - b) / std::max(1e-30, std::abs(a)));
        }
    }
    check(worst <= 1e-8, "fe: Lambda(s) = Lambda(1-s) (worst rel " + std::to_string(worst) + ")",
          failures);
    // two independent evaluation methods agree
    double worst2 = 0.0;
    for (std::uint64_t d : {5ull, 13ull, 33ull}) {
        QuadraticFamilyIndex q = QuadraticFamilyIndex::make(d);
        Complex s(0.5, 0.3);
        worst2 = std::max(worst2, std::abs(l_value(q, s).value - l_value_direct(q, s).value));
    }
    check(worst2 <= 1e-9, "fe: dual-method L-value agreement (worst " + std::to_string(worst2) + ")",
          failures);
    return failures;
}

int suite_identities() {
    int failures = 0;
    // gamma_alpha * gamma_{-alpha} = 1
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
        Complex a(0.05 + 0.03 * i, 0.1 * i - 0.3);
        worst = std::max(worst, std::abs(gamma_alpha(a) * gamma_alpha(-a) - 1.0));
    }
    check(worst <= 1e-10, "identities: gamma_alpha gamma_{-alpha} = 1", failures);
    // resummation residuals (light version of the acceptance run)
    ResumResult r = resum_identity_check(TwistIndex::make(1), ComplexShift::all_moduli_strip(0.1),
                                         200000, 100000);
    check(r.residual_s1 <= 1e-4 && r.residual_s2 <= 1e-4,
          "identities: resummation residuals (s1 " + std::to_string(r.residual_s1) + ", s2 " +
              std::to_string(r.residual_s2) + ")",
          failures);
    // dual residue routes
    double w1 = 0.0, w2 = 0.0;
    for (Complex a : {Complex(0.1, 0.0), Complex(0.05, 0.2)}) {
        TwistIndex l = TwistIndex::make(15);
        w1 = std::max(w1, std::abs(residue_at_s1(l, a) - residue_at_s1_via_omit(l, a)));
        w2 = std::max(w2, std::abs(residue_at_shifted(l, a) - residue_at_shifted_via_gamma(l, a)));
    }
    check(w1 <= 1e-10 && w2 <= 1e-10, "identities: dual residue routes agree", failures);
    return failures;
}

void apply_overrides(ExperimentConfig& cfg, const std::vector<double>& X,
                     const std::vector<std::uint64_t>& l, const std::string& family,
                     double are, double aim, bool alpha_set, const std::string& weight,
                     const std::string& cache_dir, int threads, const std::string& out) {
    if (!X.empty()) cfg.X_values = X;
    if (!l.empty()) cfg.l_values = l;
    if (!family.empty()) cfg.family = (family == "all") ? Family::AllModuli : Family::Primitive;
    if (alpha_set) cfg.alpha = Complex(are, aim);
    if (!weight.empty()) cfg.weight = weight;
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    if (threads > 0) cfg.threads = threads;
    if (!out.empty()) cfg.out_prefix = out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"moment-lab: twisted first moments of quadratic Dirichlet L-functions"};
    app.require_subcommand(1);

    // shared option storage
    std::string config_path, out_path, cache_dir, family_str, weight_str, suite = "all";
    std::vector<double> X_list;
    std::vector<std::uint64_t> l_list;
    double X = 100.0, alpha_re = 0.0, alpha_im = 0.0, s_re = 0.5, s_im = 0.0;
    std::uint64_t l_one = 1, d_val = 1, Y = 5, truncation_D = 50, nmax = 15, qmax = 16;
    int threads = 0;
    bool alpha_re_set = false, alpha_im_set = false;

    auto* cmd_moment = app.add_subcommand("moment", "run the experiment grid");
    cmd_moment->add_option("--config", config_path);
    cmd_moment->add_option("--X", X_list);
    cmd_moment->add_option("--l", l_list);
    cmd_moment->add_option("--family", family_str)->check(CLI::IsMember({"primitive", "all"}));
    cmd_moment->add_option("--alpha-re", alpha_re)->each([&](const std::string&) { alpha_re_set = true; });
    cmd_moment->add_option("--alpha-im", alpha_im)->each([&](const std::string&) { alpha_im_set = true; });
    cmd_moment->add_option("--weight", weight_str);
    cmd_moment->add_option("--cache-dir", cache_dir);
    cmd_moment->add_option("--threads", threads);
    cmd_moment->add_option("--out", out_path);

    auto* cmd_predict = app.add_subcommand("predict", "print the main-term breakdown as JSON");
    cmd_predict->add_option("--X", X)->required();
    cmd_predict->add_option("--l", l_one);
    cmd_predict->add_option("--alpha-re", alpha_re);
    cmd_predict->add_option("--alpha-im", alpha_im);
    std::string pfamily = "primitive";
    cmd_predict->add_option("--family", pfamily)->check(CLI::IsMember({"all", "primitive", "central"}));
    cmd_predict->add_option("--weight", weight_str);

    auto* cmd_decomp = app.add_subcommand("decompose", "M1/M2 decomposition vs the direct moment");
    cmd_decomp->add_option("--X", X)->required();
    cmd_decomp->add_option("--l", l_one);
    cmd_decomp->add_option("--alpha-re", alpha_re);
    cmd_decomp->add_option("--alpha-im", alpha_im);
    cmd_decomp->add_option("--Y", Y);
    cmd_decomp->add_option("--cache-dir", cache_dir);

    auto* cmd_fit = app.add_subcommand("fit", "fit the error exponent from a moment CSV");
    std::string fit_in;
    cmd_fit->add_option("--in", fit_in)->required();

    auto* cmd_verify = app.add_subcommand("verify", "run the property suites");
    cmd_verify->add_option("--suite", suite)->check(CLI::IsMember({"gauss", "fe", "identities", "all"}));

    auto* cmd_gauss = app.add_subcommand("gauss", "print a G/tau table as CSV");
    cmd_gauss->add_option("--nmax", nmax);
    cmd_gauss->add_option("--qmax", qmax);

    auto* cmd_lvalue = app.add_subcommand("lvalue", "print one L-value record as JSON");
    cmd_lvalue->add_option("--d", d_val)->required();
    cmd_lvalue->add_option("--s-re", s_re);
    cmd_lvalue->add_option("--s-im", s_im);
    cmd_lvalue->add_option("--cache-dir", cache_dir);

    auto* cmd_self = app.add_subcommand("selftest", "quick smoke checks");

    auto* cmd_mellin = app.add_subcommand("mellin", "Mellin-inversion residual for a truncated series");
    cmd_mellin->add_option("--X", X);
    cmd_mellin->add_option("--l", l_one);
    cmd_mellin->add_option("--alpha-re", alpha_re);
    cmd_mellin->add_option("--alpha-im", alpha_im);
    cmd_mellin->add_option("--D", truncation_D);
    cmd_mellin->add_option("--cache-dir", cache_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_moment->parsed()) {
            ExperimentConfig cfg;
            if (!config_path.empty()) cfg = parse_config_file(config_path);
            apply_overrides(cfg, X_list, l_list, family_str, alpha_re, alpha_im,
                            alpha_re_set || alpha_im_set, weight_str, cache_dir, threads, out_path);
            if (cfg.X_values.empty()) {
                std::cerr << "warning: no X values configured; nothing to do\n";
                return 0;
            }
            ExperimentResult res = run_experiment(cfg);
            std::cout << "wrote " << res.csv_path << " and " << res.json_path << '\n';
            for (auto& [lv, fit] : res.fits)
                std::cout << "l=" << lv << "  delta_hat=" << fit.delta_hat
                          << "  r2=" << fit.r_squared << '\n';
            for (auto& r : res.reports)
                if (r.error) std::cerr << "cell (X=" << r.X << ", l=" << r.l << ") failed: "
                                       << *r.error << '\n';
            return 0;
        }
        if (cmd_predict->parsed()) {
            TwistIndex l = TwistIndex::make(l_one);
            SmoothWeight w = weight_by_name(weight_str.empty() ? "bump" : weight_str);
            json j;
            if (pfamily == "central") {
                CentralPrediction c = predict_central(X, l, w);
                j = {{"X", X}, {"l", l_one}, {"value", c.value}, {"q0", c.q0}, {"q1", c.q1}};
            } else {
                Complex a(alpha_re, alpha_im);
                MainTermBreakdown b = (pfamily == "all")
                                          ? predict_all_moduli(X, l, ComplexShift::all_moduli_strip(a), w)
                                          : predict_primitive(X, l, ComplexShift::primitive_strip(a), w);
                j = breakdown_json(b);
            }
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (cmd_decomp->parsed()) {
            TwistIndex l = TwistIndex::make(l_one);
            SmoothWeight w = weight_by_name("bump");
            LValueCache cache(cache_dir.empty() ? default_cache_dir() : cache_dir);
            Complex a(alpha_re, alpha_im);
            M1M2 mm = decompose_m1_m2(X, l, a, Y, w, cache);
            MomentReport rep = empirical_moment(Family::Primitive, X, l, a, w, cache);
            Complex sum = mm.M1 + mm.M2;
            json j = {
                {"M1_re", mm.M1.real()}, {"M1_im", mm.M1.imag()},
                {"M2_re", mm.M2.real()}, {"M2_im", mm.M2.imag()},
                {"direct_re", rep.empirical.real()}, {"direct_im", rep.empirical.imag()},
                {"relative_residual",
                 std::abs(sum - rep.empirical) / std::max(1e-30, std::abs(rep.empirical))},
            };
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (cmd_fit->parsed()) {
            std::ifstream in(fit_in);
            if (!in) throw std::runtime_error("cannot open " + fit_in);
            std::string line;
            std::getline(in, line); // header
            std::map<std::uint64_t, std::vector<MomentReport>> by_l;
            while (std::getline(in, line)) {
                std::stringstream ss(line);
                std::string tok;
                std::vector<std::string> cols;
                while (std::getline(ss, tok, ',')) cols.push_back(tok);
                if (cols.size() < 18 || !cols[17].empty()) continue;
                MomentReport r;
                r.X = std::stod(cols[1]);
                r.l = std::stoull(cols[2]);
                r.deviation = Complex(std::stod(cols[11]), std::stod(cols[12]));
                by_l[r.l].push_back(r);
            }
            for (auto& [lv, reps] : by_l) {
                if (reps.size() < 3) continue;
                ExponentFit fit = fit_error_exponent(reps);
                std::cout << "l=" << lv << "  delta_hat=" << fit.delta_hat
                          << "  intercept=" << fit.intercept << "  r2=" << fit.r_squared << '\n';
            }
            return 0;
        }
        if (cmd_verify->parsed()) {
            int failures = 0;
            if (suite == "gauss" || suite == "all") failures += suite_gauss();
            if (suite == "fe" || suite == "all") failures += suite_fe();
            if (suite == "identities" || suite == "all") failures += suite_identities();
            std::cout << (failures == 0 ? "all suites passed" : "FAILURES: " + std::to_string(failures))
                      << '\n';
            return failures == 0 ? 0 : 1;
        }
        if (cmd_gauss->parsed()) {
            std::cout << "n,q,G_re,G_im,exact,tau_re,tau_im\n";
            for (std::uint64_t n = 1; n <= nmax; n += 2) {
                FactoredInt fn = factor(n);
                if (!fn.is_squarefree()) continue;
                for (std::uint64_t q = 1; q <= qmax; ++q) {
                    GaussSumValue g = gauss_G(fn, q);
                    Complex tau = tau_from_G(fn, q);
                    std::cout << n << ',' << q << ',' << g.value.real() << ',' << g.value.imag()
                              << ',' << (g.exact_form ? g.exact_form->to_string() : "") << ','
                              << tau.real() << ',' << tau.imag() << '\n';
                }
            }
            return 0;
        }
        if (cmd_lvalue->parsed()) {
            QuadraticFamilyIndex d = QuadraticFamilyIndex::make(d_val);
            LValueCache cache(cache_dir.empty() ? default_cache_dir() : cache_dir);
            LValueRecord rec = cache.get_or_compute(d, Complex(s_re, s_im));
            json j = {
                {"d", rec.d},
                {"s_re", rec.s.real()},
                {"s_im", rec.s.imag()},
                {"value_re", rec.value.real()},
                {"value_im", rec.value.imag()},
                {"abs_error", rec.abs_error},
                {"method", rec.method == LMethod::SmoothedAfe ? "smoothed_afe" : "direct_series"},
            };
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (cmd_self->parsed()) {
            int failures = 0;
            check(moebius(factor(30)) == -1, "selftest: moebius(30) = -1", failures);
            check(kronecker(40, 3) == 1 && kronecker(40, 7) == -1,
                  "selftest: kronecker spot values", failures);
            check(std::abs(zeta(Complex(2, 0)).real() - 1.6449340668482264) < 1e-12,
                  "selftest: zeta(2)", failures);
            QuadraticFamilyIndex d5 = QuadraticFamilyIndex::make(5);
            double lv = l_value(d5, Complex(0.5, 0.0)).value.real();
            check(std::abs(lv - l_value_direct(d5, Complex(0.5, 0.0)).value.real()) < 1e-9,
                  "selftest: L(1/2, chi^(40)) dual methods", failures);
            std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << '\n';
            return failures == 0 ? 0 : 1;
        }
        if (cmd_mellin->parsed()) {
            TwistIndex l = TwistIndex::make(l_one);
            SmoothWeight w = weight_by_name("bump");
            LValueCache cache(cache_dir.empty() ? default_cache_dir() : cache_dir);
            double res = mellin_inversion_check(X, l, Complex(alpha_re, alpha_im), truncation_D, w, cache);
            std::cout << "residual = " << res << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
