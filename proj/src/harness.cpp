#include "momentlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace momentlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Complex cpow(double base, Complex e) { return std::exp(e * std::log(base)); }

// d = d0 e^2 with d0 square-free; L(s, chi^(8d)) for the (possibly imprimitive)
// chi^(8d) equals the primitive core with the Euler factors at p | e removed.
struct ImprimitiveSplit {
    QuadraticFamilyIndex d0;
    std::vector<std::uint64_t> e_primes;
};

ImprimitiveSplit split_modulus(std::uint64_t d) {
    FactoredInt f = factor(d);
    FactoredInt core;
    core.value = 1;
    std::vector<std::uint64_t> e_primes;
    for (auto& [p, e] : f.factors) {
        if (e % 2 == 1) {
            core.value *= p;
            core.factors.emplace_back(p, 1);
        }
        if (e >= 2) e_primes.push_back(p);
    }
    return {QuadraticFamilyIndex{core}, std::move(e_primes)};
}

Complex reduced_l_value(std::uint64_t d, Complex s, LValueCache& cache) {
    ImprimitiveSplit sp = split_modulus(d);
    LValueRecord rec = cache.get_or_compute(sp.d0, s);
    if (rec.abs_error > 1e-9)
        throw std::runtime_error("L-value error bound " + std::to_string(rec.abs_error) +
                                 " exceeds 1e-9 for d0=" + std::to_string(rec.d));
    Complex v = rec.value;
    std::int64_t m8d0 = static_cast<std::int64_t>(8 * sp.d0.d.value);
    for (std::uint64_t p : sp.e_primes) {
        int chi = kronecker(m8d0, static_cast<std::int64_t>(p));
        v *= 1.0 - static_cast<double>(chi) * cpow(static_cast<double>(p), -s);
    }
    return v;
}

// Deterministic block-parallel reduction: fixed-size blocks are computed by a
// thread pool and combined serially in block order, so results are independent
// of the thread count.
template <typename BlockFn>
Complex parallel_block_sum(std::uint64_t lo, std::uint64_t hi, std::uint64_t block,
                           int threads, BlockFn fn) {
    if (hi < lo) return 0.0;
    std::uint64_t nblocks = (hi - lo) / block + 1;
    std::vector<Complex> partial(nblocks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::uint64_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            std::uint64_t a = lo + b * block;
            std::uint64_t z = std::min(hi, a + block - 1);
            partial[b] = fn(a, z);
        }
    };
    int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    ComplexNeumaierSum total;
    for (auto& p : partial) total.add(p);
    return total.total();
}

} // namespace

MomentReport empirical_moment(Family family, double X, const TwistIndex& l, Complex alpha,
                              const SmoothWeight& w, LValueCache& cache, int threads) {
    if (std::abs(alpha.imag()) > 5.0)
        throw std::invalid_argument("empirical_moment: |Im alpha| > 5 is untested territory");
    auto t_start = std::chrono::steady_clock::now();
    Complex s = 0.5 + alpha;
    std::int64_t lv = static_cast<std::int64_t>(l.l.value);

    std::uint64_t d_lo = static_cast<std::uint64_t>(std::ceil(w.t0 * X));
    std::uint64_t d_hi = static_cast<std::uint64_t>(std::floor(w.t1 * X));
    if (d_lo < 1) d_lo = 1;

    std::atomic<std::uint64_t> d_count{0};
    Complex empirical = 0.0;
    if (d_hi >= d_lo) {
        empirical = parallel_block_sum(d_lo, d_hi, 1024, threads, [&](std::uint64_t a, std::uint64_t b) {
            ComplexNeumaierSum acc;
            for (std::uint64_t d = a | 1; d <= b; d += 2) {
                double wt = w(static_cast<double>(d) / X);
                if (wt == 0.0) continue;
                if (family == Family::Primitive) {
                    FactoredInt f = factor(d);
                    if (!f.is_squarefree()) continue;
                }
                Complex lval = reduced_l_value(d, s, cache);
                int chi = kronecker(static_cast<std::int64_t>(8 * d), lv);
                acc.add(lval * static_cast<double>(chi) * wt);
                d_count.fetch_add(1);
            }
            return acc.total();
        });
    }

    MomentReport rep;
    rep.family = family;
    rep.X = X;
    rep.l = l.l.value;
    rep.alpha = alpha;
    rep.empirical = empirical;
    rep.d_count = d_count.load();
    rep.weight = w.name;
    rep.code_version = kCodeVersion;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

namespace {

// Square-free divisors (with mu) of a factored integer.
std::vector<std::pair<std::uint64_t, int>> squarefree_divisors(const FactoredInt& n) {
    std::vector<std::pair<std::uint64_t, int>> divs{{1, 1}};
    for (auto& [p, e] : n.factors) {
        (void)e;
        std::size_t base = divs.size();
        for (std::size_t i = 0; i < base; ++i) divs.emplace_back(divs[i].first * p, -divs[i].second);
    }
    return divs;
}

} // namespace

M1M2 decompose_m1_m2(double X, const TwistIndex& l, Complex alpha, std::uint64_t Y,
                     const SmoothWeight& w, LValueCache& cache) {
    Complex s = 0.5 + alpha;
    std::uint64_t amax = static_cast<std::uint64_t>(std::floor(std::sqrt(w.t1 * X)));

    ComplexNeumaierSum m1;
    for (std::uint64_t a = 1; a <= std::min(Y, amax); a += 2) {
        if (std::gcd(a, l.l.value) != 1) continue;
        FactoredInt fa = factor(a);
        if (moebius(fa) == 0) continue;
        double mua = moebius(fa);
        double a2 = static_cast<double>(a) * static_cast<double>(a);
        for (auto& [r, mur] : squarefree_divisors(fa)) {
            Complex coef = mua * static_cast<double>(mur) * cpow(static_cast<double>(r), -s);
            std::int64_t rl = static_cast<std::int64_t>(r * l.l.value);
            // inner sum over all odd d with d a^2 in the support
            std::uint64_t d_lo = static_cast<std::uint64_t>(std::ceil(w.t0 * X / a2));
            std::uint64_t d_hi = static_cast<std::uint64_t>(std::floor(w.t1 * X / a2));
            ComplexNeumaierSum inner;
            for (std::uint64_t d = std::max<std::uint64_t>(d_lo, 1) | 1; d <= d_hi; d += 2) {
                double wt = w(static_cast<double>(d) * a2 / X);
                if (wt == 0.0) continue;
                Complex lval = reduced_l_value(d, s, cache);
                int chi = kronecker(static_cast<std::int64_t>(8 * d), rl);
                inner.add(lval * static_cast<double>(chi) * wt);
            }
            m1.add(coef * inner.total());
        }
    }

    ComplexNeumaierSum m2;
    for (std::uint64_t c = 1; c <= amax; c += 2) {
        if (std::gcd(c, l.l.value) != 1) continue;
        FactoredInt fc = factor(c);
        auto divs = squarefree_divisors(fc);
        long long coef_a = 0;
        for (auto& [a, mua] : divs)
            if (a > Y) coef_a += mua;
        if (coef_a == 0) continue;
        double c2 = static_cast<double>(c) * static_cast<double>(c);
        for (auto& [r, mur] : divs) {
            Complex coef = static_cast<double>(coef_a) * static_cast<double>(mur) *
                           cpow(static_cast<double>(r), -s);
            std::int64_t rl = static_cast<std::int64_t>(r * l.l.value);
            std::uint64_t d_lo = static_cast<std::uint64_t>(std::ceil(w.t0 * X / c2));
            std::uint64_t d_hi = static_cast<std::uint64_t>(std::floor(w.t1 * X / c2));
            ComplexNeumaierSum inner;
            for (std::uint64_t d = std::max<std::uint64_t>(d_lo, 1) | 1; d <= d_hi; d += 2) {
                double wt = w(static_cast<double>(d) * c2 / X);
                if (wt == 0.0) continue;
                FactoredInt fd = factor(d);
                if (!fd.is_squarefree()) continue;
                Complex lval = reduced_l_value(d, s, cache);
                int chi = kronecker(static_cast<std::int64_t>(8 * d), rl);
                inner.add(lval * static_cast<double>(chi) * wt);
            }
            m2.add(coef * inner.total());
        }
    }
    return {m1.total(), m2.total()};
}

double mellin_inversion_check(double X, const TwistIndex& l, Complex alpha,
                              std::uint64_t truncation_D, const SmoothWeight& w,
                              LValueCache& cache) {
    Complex sw = 0.5 + alpha;
    std::int64_t lv = static_cast<std::int64_t>(l.l.value);
    std::vector<std::pair<std::uint64_t, Complex>> coeffs; // (d, L*chi)
    ComplexNeumaierSum direct;
    for (std::uint64_t d = 1; d <= truncation_D; d += 2) {
        Complex v = reduced_l_value(d, sw, cache) *
                    static_cast<double>(kronecker(static_cast<std::int64_t>(8 * d), lv));
        coeffs.emplace_back(d, v);
        direct.add(v * w(static_cast<double>(d) / X));
    }

    auto A_D = [&](Complex s) {
        Complex sum = 0.0;
        for (auto& [d, v] : coeffs) sum += v * cpow(static_cast<double>(d), -s);
        return sum;
    };

    // Pick T from the superalgebraic decay of what on the Re s = 2 line.
    double scale = 0.0;
    for (auto& [d, v] : coeffs) scale += std::abs(v) * std::pow(static_cast<double>(d), -2.0);
    scale *= X * X;
    double T = 10.0;
    while (T < 2000.0) {
        double tail = std::abs(mellin(w, Complex(2.0, T)).value) * scale * T;
        if (tail < 1e-11) break;
        T *= 1.5;
    }

    Complex integral = integrate_gk(
        [&](double t) {
            Complex s(2.0, t);
            return A_D(s) * cpow(X, s) * mellin(w, s).value / kTwoPi;
        },
        -T, T, 1e-10 * std::max(1.0, scale));
    return std::abs(integral - direct.total());
}

ExponentFit fit_error_exponent(const std::vector<MomentReport>& reports) {
    if (reports.size() < 3) throw std::invalid_argument("fit_error_exponent: need >= 3 reports");
    ExponentFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto& r : reports) {
        double lx = std::log(r.X);
        double ly = std::log(std::abs(r.deviation));
        fit.points.emplace_back(r.X, std::abs(r.deviation));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
    }
    double n = static_cast<double>(reports.size());
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-12) throw std::invalid_argument("fit_error_exponent: degenerate X values");
    fit.delta_hat = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.delta_hat * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (auto& r : reports) {
        double lx = std::log(r.X), ly = std::log(std::abs(r.deviation));
        double pred = fit.intercept + fit.delta_hat * lx;
        ss_res += (ly - pred) * (ly - pred);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

// ---------------------------------------------------------------------------
// Experiment orchestration.

namespace {

std::pair<Complex, Complex> predicted_terms(Family family, double X, const TwistIndex& l,
                                            Complex alpha, const SmoothWeight& w) {
    if (alpha == 0.0) {
        if (family == Family::Primitive) {
            CentralPrediction c = predict_central(X, l, w);
            return {c.value, 0.0};
        }
        // all-moduli central limit by the same symmetric +-eps cancellation
        const double eps = 1e-4;
        auto at = [&](double e) {
            MainTermBreakdown b =
                predict_all_moduli(X, l, ComplexShift::all_moduli_strip(Complex(e, 0.0)), w);
            return b.term1 + b.term2;
        };
        return {0.5 * (at(eps) + at(-eps)), 0.0};
    }
    if (family == Family::Primitive) {
        MainTermBreakdown b = predict_primitive(X, l, ComplexShift::primitive_strip(alpha), w);
        return {b.term1, b.term2};
    }
    MainTermBreakdown b = predict_all_moduli(
        X, l, ComplexShift{alpha, ShiftStrip::AllModuliStrip}, w);
    return {b.term1, b.term2};
}

std::string family_name(Family f) { return f == Family::Primitive ? "primitive" : "all_moduli"; }

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

std::string report_csv_header() {
    return "family,X,l,alpha_re,alpha_im,empirical_re,empirical_im,term1_re,term1_im,"
           "term2_re,term2_im,deviation_re,deviation_im,d_count,wall_time,weight,code_version,error";
}

std::string report_csv_row(const MomentReport& r) {
    std::ostringstream os;
    os << family_name(r.family) << ',' << fmt_double(r.X) << ',' << r.l << ','
       << fmt_double(r.alpha.real()) << ',' << fmt_double(r.alpha.imag()) << ','
       << fmt_double(r.empirical.real()) << ',' << fmt_double(r.empirical.imag()) << ','
       << fmt_double(r.predicted_term1.real()) << ',' << fmt_double(r.predicted_term1.imag()) << ','
       << fmt_double(r.predicted_term2.real()) << ',' << fmt_double(r.predicted_term2.imag()) << ','
       << fmt_double(r.deviation.real()) << ',' << fmt_double(r.deviation.imag()) << ','
       << r.d_count << ',' << fmt_double(r.wall_time) << ',' << r.weight << ','
       << r.code_version << ',' << (r.error ? *r.error : "");
    return os.str();
}

std::string archive_json(const ExperimentResult& res, const ExperimentConfig& config) {
    nlohmann::json root;
    root["code_version"] = kCodeVersion;
    root["config"] = {
        {"family", family_name(config.family)},
        {"X_values", config.X_values},
        {"l_values", config.l_values},
        {"alpha_re", config.alpha.real()},
        {"alpha_im", config.alpha.imag()},
        {"weight", config.weight},
    };
    nlohmann::json reports = nlohmann::json::array();
    for (auto& r : res.reports) {
        nlohmann::json j = {
            {"family", family_name(r.family)},
            {"X", r.X},
            {"l", r.l},
            {"alpha_re", r.alpha.real()},
            {"alpha_im", r.alpha.imag()},
            {"empirical_re", r.empirical.real()},
            {"empirical_im", r.empirical.imag()},
            {"term1_re", r.predicted_term1.real()},
            {"term1_im", r.predicted_term1.imag()},
            {"term2_re", r.predicted_term2.real()},
            {"term2_im", r.predicted_term2.imag()},
            {"deviation_re", r.deviation.real()},
            {"deviation_im", r.deviation.imag()},
            {"d_count", r.d_count},
            {"weight", r.weight},
        };
        // wall_time deliberately omitted: the archive must be bit-identical
        // across reruns with identical configs.
        if (r.error) j["error"] = *r.error;
        reports.push_back(j);
    }
    root["reports"] = reports;
    nlohmann::json fits = nlohmann::json::array();
    for (auto& [lval, fit] : res.fits) {
        fits.push_back({
            {"l", lval},
            {"delta_hat", fit.delta_hat},
            {"intercept", fit.intercept},
            {"r_squared", fit.r_squared},
        });
    }
    root["fits"] = fits;
    return root.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult res;
    if (config.X_values.empty())
        std::cerr << "warning: empty X list; nothing to do\n";
    std::string cache_dir = config.cache_dir.empty() ? default_cache_dir() : config.cache_dir;
    LValueCache cache(cache_dir);
    SmoothWeight w = weight_by_name(config.weight);

    for (std::uint64_t lval : config.l_values) {
        TwistIndex l = TwistIndex::make(lval);
        std::vector<MomentReport> per_l;
        for (double X : config.X_values) {
            MomentReport rep;
            try {
                rep = empirical_moment(config.family, X, l, config.alpha, w, cache, config.threads);
                auto [t1, t2] = predicted_terms(config.family, X, l, config.alpha, w);
                rep.predicted_term1 = t1;
                rep.predicted_term2 = t2;
                rep.deviation = rep.empirical - t1 - t2;
            } catch (const std::exception& e) {
                rep.family = config.family;
                rep.X = X;
                rep.l = lval;
                rep.alpha = config.alpha;
                rep.weight = config.weight;
                rep.code_version = kCodeVersion;
                rep.error = e.what();
            }
            res.reports.push_back(rep);
            if (!rep.error) per_l.push_back(rep);
        }
        if (per_l.size() >= 3) {
            try {
                res.fits.emplace_back(lval, fit_error_exponent(per_l));
            } catch (const std::exception&) {
                // degenerate grids simply get no fit
            }
        }
    }

    std::ostringstream csv;
    csv << report_csv_header() << '\n';
    for (auto& r : res.reports) csv << report_csv_row(r) << '\n';
    res.csv_path = config.out_prefix + ".csv";
    res.json_path = config.out_prefix + ".json";
    atomic_write(res.csv_path, csv.str());
    atomic_write(res.json_path, archive_json(res, config));
    return res;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    auto trim = [](std::string s) {
        std::size_t a = s.find_first_not_of(" \t\r");
        std::size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == '[') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) continue;
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key == "family") {
            cfg.family = (val == "all_moduli") ? Family::AllModuli : Family::Primitive;
        } else if (key == "X") {
            std::stringstream ss(val);
            std::string tok;
            cfg.X_values.clear();
            while (std::getline(ss, tok, ',')) cfg.X_values.push_back(std::stod(trim(tok)));
        } else if (key == "l") {
            std::stringstream ss(val);
            std::string tok;
            cfg.l_values.clear();
            while (std::getline(ss, tok, ',')) cfg.l_values.push_back(std::stoull(trim(tok)));
        } else if (key == "alpha_re") {
            cfg.alpha = Complex(std::stod(val), cfg.alpha.imag());
        } else if (key == "alpha_im") {
            cfg.alpha = Complex(cfg.alpha.real(), std::stod(val));
        } else if (key == "weight") {
            cfg.weight = val;
        } else if (key == "cache_dir") {
            cfg.cache_dir = val;
        } else if (key == "threads") {
            cfg.threads = std::stoi(val);
        } else if (key == "out") {
            cfg.out_prefix = val;
        }
    }
    return cfg;
}

} // namespace momentlab
