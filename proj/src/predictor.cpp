#include "momentlab/predictor.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "momentlab/gauss.hpp"

namespace momentlab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Complex cpow(double base, Complex e) { return std::exp(e * std::log(base)); }

const std::vector<std::uint32_t>& cached_primes(std::uint32_t limit) {
    static std::mutex mu;
    static std::vector<std::uint32_t> primes;
    static std::uint32_t have = 0;
    std::lock_guard<std::mutex> lock(mu);
    if (limit > have) {
        primes = primes_up_to(limit);
        have = limit;
    }
    return primes;
}

bool divides_l(const TwistIndex& l, std::uint64_t p) {
    for (auto& [q, e] : l.l.factors)
        if (q == p) return true;
    return false;
}

// Prime zeta P(s) = sum_p p^{-s} = sum_k mu(k)/k log zeta(ks), Re s > 1.
Complex prime_zeta(Complex s) {
    Complex sum = 0.0;
    for (int k = 1; k <= 64; ++k) {
        if (k * s.real() > 48.0 || k * std::abs(s.imag()) > 200.0) break;
        int mu = moebius(factor(static_cast<std::uint64_t>(k)));
        if (mu == 0) continue;
        sum += static_cast<double>(mu) / static_cast<double>(k) *
               std::log(zeta(static_cast<double>(k) * s));
    }
    return sum;
}

} // namespace

BAlphaValue b_alpha(const TwistIndex& l, Complex a, std::uint64_t prime_cutoff) {
    const auto& primes = cached_primes(static_cast<std::uint32_t>(prime_cutoff));
    Complex prod = 1.0;
    for (auto& [p, e] : l.l.factors) {
        (void)e;
        prod *= 1.0 / (1.0 + 1.0 / static_cast<double>(p));
    }
    // Accumulate sum_{p<=P} p^{-s} alongside for the prime-zeta tail correction.
    Complex s1 = 2.0 + 2.0 * a, s2 = 3.0 + 2.0 * a, s3 = 4.0 + 2.0 * a, s4 = 4.0 + 4.0 * a;
    Complex q1 = 0.0, q2 = 0.0, q3 = 0.0, q4 = 0.0;
    for (std::uint32_t p : primes) {
        if (p > prime_cutoff) continue;
        double pd = p;
        double lp = std::log(pd);
        q1 += std::exp(-s1 * lp);
        q2 += std::exp(-s2 * lp);
        q3 += std::exp(-s3 * lp);
        q4 += std::exp(-s4 * lp);
        if (p == 2 || divides_l(l, p)) continue;
        prod *= 1.0 - cpow(pd, -1.0 - 2.0 * a) / (pd + 1.0);
    }
    // Tail of log prod over p > P: expand log(1 - p^{-1-2a}/(p+1)) in powers of
    // 1/p and resum each p^{-s} against the prime zeta function.  Neglected
    // exponents start at 5+2a, so the remaining error is ~ P^{-4-2 Re a}.
    auto T = [&](Complex s, Complex partial) { return prime_zeta(s) - partial; };
    Complex log_tail = -T(s1, q1) + T(s2, q2) - T(s3, q3) - 0.5 * T(s4, q4);
    prod *= std::exp(log_tail);

    double re = a.real();
    double Pd = static_cast<double>(prime_cutoff);
    BAlphaValue out;
    out.value = prod;
    out.trunc.prime_cutoff = prime_cutoff;
    // Floor: accumulated rounding across ~pi(P) multiplications.
    out.trunc.tail_bound =
        std::abs(prod) * std::max(std::pow(Pd, -3.0 - 2.0 * re), 1e-12);
    return out;
}

// ---------------------------------------------------------------------------
// Residue routes.

Complex residue_at_s1(const TwistIndex& l, Complex a) {
    Complex prod = 1.0;
    for (auto& [p, e] : l.l.factors) {
        (void)e;
        double pd = p;
        prod *= (1.0 - 1.0 / pd) / (1.0 - cpow(pd, -2.0 - 2.0 * a));
    }
    return zeta2(1.0 + 2.0 * a) / (2.0 * cpow(static_cast<double>(l.l.value), 0.5 + a) *
                                    zeta2(2.0 + 2.0 * a)) * prod;
}

Complex residue_at_s1_via_omit(const TwistIndex& l, Complex a) {
    // Res_{s=1} of zeta^(2w) L^(2)(s, chi_{l^2}) / (l^w L^(2)(2w+s, chi_{l^2})) at w=1/2+a:
    //   zeta^(2)(1+2a) prod_{p|2l}(1-1/p) / (l^{1/2+a} zeta^(2l)(2+2a)).
    FactoredInt two_l = factor(2 * l.l.value);
    Complex num = zeta2(1.0 + 2.0 * a);
    double unit_frac = 1.0;
    for (auto& [p, e] : two_l.factors) {
        (void)e;
        unit_frac *= 1.0 - 1.0 / static_cast<double>(p);
    }
    return num * unit_frac / (cpow(static_cast<double>(l.l.value), 0.5 + a) * zeta_omit(2.0 + 2.0 * a, two_l));
}

Complex residue_at_shifted(const TwistIndex& l, Complex a) {
    Complex prod = 1.0;
    for (auto& [p, e] : l.l.factors) {
        (void)e;
        prod *= 1.0 / (1.0 + 1.0 / static_cast<double>(p));
    }
    return gamma_alpha(a) * cpow(static_cast<double>(l.l.value), -0.5 + a) *
           zeta2(1.0 - 2.0 * a) / (2.0 * zeta2(2.0)) * prod;
}

Complex residue_at_shifted_via_gamma(const TwistIndex& l, Complex a) {
    // The residue written before the Gamma-zeta simplification:
    //   2^{-1-a}(1 - 2^{-(1-2a)}) pi^{1/2-a} l^{-1/2+a} (Gamma_e+Gamma_o)(1-a)
    //     * zeta(2a) / (2 zeta^(2)(2)) * prod_{p|l}(1+1/p)^{-1}.
    Complex prod = 1.0;
    for (auto& [p, e] : l.l.factors) {
        (void)e;
        prod *= 1.0 / (1.0 + 1.0 / static_cast<double>(p));
    }
    Complex geo = gamma_e_o(1.0 - a, Parity::Even) + gamma_e_o(1.0 - a, Parity::Odd);
    return std::exp((-1.0 - a) * std::log(2.0)) * (1.0 - cpow(2.0, -(1.0 - 2.0 * a))) *
           cpow(kPi, 0.5 - a) * cpow(static_cast<double>(l.l.value), -0.5 + a) * geo *
           zeta(2.0 * a) / (2.0 * zeta2(2.0)) * prod;
}

// ---------------------------------------------------------------------------
// Main-term predictors.

MainTermBreakdown predict_all_moduli(double X, const TwistIndex& l, const ComplexShift& alpha,
                                     const SmoothWeight& w) {
    if (X <= 0) throw std::invalid_argument("predict_all_moduli: X must be positive");
    Complex a = alpha.alpha;
    if (alpha.strip == ShiftStrip::AllModuliStrip && (std::abs(a.real()) <= 0.0 || std::abs(a.real()) >= 0.5))
        throw std::invalid_argument("alpha outside the all-moduli validity strip 0<|Re alpha|<1/2");
    MainTermBreakdown out;
    out.X = X;
    out.l = l.l.value;
    out.alpha = a;
    out.weight_name = w.name;

    Complex what1 = mellin(w, 1.0).value;
    Complex what1ma = mellin(w, 1.0 - a).value;
    Complex gam = gamma_alpha(a);
    Complex z1 = zeta2(1.0 + 2.0 * a);
    Complex z2 = zeta2(2.0 + 2.0 * a);
    Complex z3 = zeta2(1.0 - 2.0 * a);
    Complex z4 = zeta2(2.0);
    Complex prod1 = 1.0, prod2 = 1.0;
    for (auto& [p, e] : l.l.factors) {
        (void)e;
        double pd = p;
        prod1 *= (1.0 - 1.0 / pd) / (1.0 - cpow(pd, -2.0 - 2.0 * a));
        prod2 *= 1.0 / (1.0 + 1.0 / pd);
    }
    double ld = static_cast<double>(l.l.value);
    out.term1 = X * what1 * z1 / (2.0 * cpow(ld, 0.5 + a) * z2) * prod1;
    out.term2 = cpow(X, 1.0 - a) * what1ma * gam * cpow(ld, -0.5 + a) * z3 / (2.0 * z4) * prod2;
    out.component_values = {
        {"what(1)", what1},         {"what(1-alpha)", what1ma}, {"gamma_alpha", gam},
        {"zeta2(1+2a)", z1},        {"zeta2(2+2a)", z2},        {"zeta2(1-2a)", z3},
        {"zeta2(2)", z4},           {"prod_l_term1", prod1},    {"prod_l_term2", prod2},
    };
    return out;
}

MainTermBreakdown predict_primitive(double X, const TwistIndex& l, const ComplexShift& alpha,
                                    const SmoothWeight& w) {
    if (X <= 0) throw std::invalid_argument("predict_primitive: X must be positive");
    Complex a = alpha.alpha;
    if (a == 0.0) throw std::invalid_argument("predict_primitive: alpha = 0 goes through predict_central");
    MainTermBreakdown out;
    out.X = X;
    out.l = l.l.value;
    out.alpha = a;
    out.weight_name = w.name;

    Complex what1 = mellin(w, 1.0).value;
    Complex what1ma = mellin(w, 1.0 - a).value;
    Complex gam = gamma_alpha(a);
    Complex z4 = zeta2(2.0);
    BAlphaValue bp = b_alpha(l, a);
    BAlphaValue bm = b_alpha(l, -a);
    double ld = static_cast<double>(l.l.value);
    out.term1 = X * what1 / (2.0 * z4) * cpow(ld, -0.5 - a) * zeta2(1.0 + 2.0 * a) * bp.value;
    out.term2 = cpow(X, 1.0 - a) * what1ma * gam / (2.0 * z4) * cpow(ld, -0.5 + a) *
                zeta2(1.0 - 2.0 * a) * bm.value;
    out.component_values = {
        {"what(1)", what1},
        {"what(1-alpha)", what1ma},
        {"gamma_alpha", gam},
        {"zeta2(2)", z4},
        {"zeta2(1+2a)", zeta2(1.0 + 2.0 * a)},
        {"zeta2(1-2a)", zeta2(1.0 - 2.0 * a)},
        {"B_{+alpha}(l)", bp.value},
        {"B_{-alpha}(l)", bm.value},
        {"B_tail_bound", Complex(bp.trunc.tail_bound, bm.trunc.tail_bound)},
    };
    return out;
}

namespace {

double primitive_sum_at(double X, const TwistIndex& l, Complex a, const SmoothWeight& w) {
    MainTermBreakdown b = predict_primitive(X, l, ComplexShift::primitive_strip(a), w);
    return (b.term1 + b.term2).real();
}

double central_limit_at(double X, const TwistIndex& l, const SmoothWeight& w, double eps) {
    return 0.5 * (primitive_sum_at(X, l, eps, w) + primitive_sum_at(X, l, -eps, w));
}

} // namespace

CentralPrediction predict_central(double X, const TwistIndex& l, const SmoothWeight& w) {
    const double eps = 1e-4;
    // Symmetric +-eps evaluation: the simple poles of zeta^(2)(1 +- 2a) carry
    // equal and opposite residues between the two main terms, and the +-eps
    // average cancels all odd orders in eps.
    auto limit_at = [&](double Xv) {
        double v1 = central_limit_at(Xv, l, w, eps);
        double v2 = central_limit_at(Xv, l, w, eps / 2.0);
        if (std::abs(v1 - v2) > 1e-6 * std::max(1.0, std::abs(v2)))
            throw std::runtime_error("predict_central: eps extrapolation failed to stabilize");
        return v2;
    };
    const double e1 = std::exp(1.0);
    double Xs[3] = {X, X * e1, X * e1 * e1};
    double ys[3], ls[3];
    for (int i = 0; i < 3; ++i) {
        ys[i] = limit_at(Xs[i]) / Xs[i];
        ls[i] = std::log(Xs[i]);
    }
    // Least-squares affine fit of value(X)/X against log X.
    double sl = ls[0] + ls[1] + ls[2], sy = ys[0] + ys[1] + ys[2];
    double sll = ls[0] * ls[0] + ls[1] * ls[1] + ls[2] * ls[2];
    double sly = ls[0] * ys[0] + ls[1] * ys[1] + ls[2] * ys[2];
    double det = 3.0 * sll - sl * sl;
    CentralPrediction out;
    out.q1 = (3.0 * sly - sl * sy) / det;
    out.q0 = (sy - out.q1 * sl) / 3.0;
    out.value = X * (out.q0 + out.q1 * std::log(X));
    return out;
}

// ---------------------------------------------------------------------------
// Resummation identities.

ResumResult resum_identity_check(const TwistIndex& l, const ComplexShift& alpha,
                                 std::uint64_t a_cutoff, std::uint64_t prime_cutoff) {
    Complex al = alpha.alpha;
    if (al == 0.0) throw std::invalid_argument("resum_identity_check: alpha must be nonzero");
    auto spf = spf_table(static_cast<std::uint32_t>(a_cutoff));

    // Per-prime local data, computed lazily as primes appear.
    auto g1_factor = [&](double p) {
        return (1.0 - cpow(p, -1.0 - 2.0 * al)) / (1.0 - cpow(p, -2.0 - 2.0 * al));
    };

    Complex sum1 = 0.0;   // sum mu(a)/a^2 zeta^(2a)/zeta^(2a) ratio factors
    Complex sum2 = 0.0;   // sum mu(a) a^{-2+2a} prod (1+1/p)^{-1}
    std::vector<std::pair<std::uint32_t, Complex>> g1_cache; // tiny LRU-less memo for small primes
    g1_cache.reserve(64);
    auto g1_at = [&](std::uint32_t p) {
        for (auto& [q, v] : g1_cache)
            if (q == p) return v;
        Complex v = g1_factor(static_cast<double>(p));
        if (g1_cache.size() < 64) g1_cache.emplace_back(p, v);
        return v;
    };

    for (std::uint64_t a = 1; a <= a_cutoff; a += 2) {
        std::uint32_t m = static_cast<std::uint32_t>(a);
        Complex g1 = 1.0;
        double g2 = 1.0;
        int mu = 1;
        bool ok = true;
        while (m > 1) {
            std::uint32_t p = spf[m];
            m /= p;
            if (m % p == 0) { ok = false; break; }      // not square-free
            if (l.l.value % p == 0) { ok = false; break; } // (a, l) != 1
            g1 *= g1_at(p);
            g2 *= 1.0 / (1.0 + 1.0 / static_cast<double>(p));
            mu = -mu;
        }
        if (!ok) continue;
        double ad = static_cast<double>(a);
        sum1 += static_cast<double>(mu) / (ad * ad) * g1;
        sum2 += static_cast<double>(mu) * cpow(ad, -2.0 + 2.0 * al) * g2;
    }

    Complex prod1 = 1.0, prod_inv = 1.0;
    for (auto& [p, e] : l.l.factors) {
        (void)e;
        double pd = p;
        prod1 *= (1.0 - 1.0 / pd) / (1.0 - cpow(pd, -2.0 - 2.0 * al));
        prod_inv *= 1.0 / (1.0 + 1.0 / pd);
    }
    Complex lhs1 = zeta2(1.0 + 2.0 * al) / zeta2(2.0 + 2.0 * al) * prod1 * sum1;
    Complex rhs1 = zeta2(1.0 + 2.0 * al) * b_alpha(l, al, prime_cutoff).value / zeta2(2.0);
    Complex lhs2 = prod_inv * sum2;
    Complex rhs2 = b_alpha(l, -al, prime_cutoff).value;
    return {std::abs(lhs1 - rhs1), std::abs(lhs2 - rhs2)};
}

// ---------------------------------------------------------------------------
// Truncated D_1 double Dirichlet series.

namespace {

struct D1Coeffs {
    std::vector<Complex> c;   // c[(m-1)/2] for odd m
    std::uint64_t M = 0;
};

// G(chi_{ml}, q2^2) given the factorization of ml; real-valued by the lemma's table.
double gauss_G_fast(const std::vector<std::pair<std::uint64_t, unsigned>>& ml_factors,
                    std::uint64_t q2) {
    double val = 1.0;
    for (auto& [p, k] : ml_factors) {
        unsigned a = 0;
        std::uint64_t qq = q2;
        while (qq % p == 0) { qq /= p; ++a; }
        a *= 2; // ord_p(q2^2)
        std::uint64_t q_red = q2 * q2;
        for (unsigned i = 0; i < a; ++i) q_red /= p;
        if (k <= a) {
            if (k % 2 == 0) {
                double pk = std::pow(static_cast<double>(p), static_cast<double>(k));
                val *= pk * (1.0 - 1.0 / static_cast<double>(p)); // phi(p^k)
            } else {
                return 0.0;
            }
        } else if (k == a + 1) {
            double pa = std::pow(static_cast<double>(p), static_cast<double>(a));
            if (k % 2 == 0) {
                val *= -pa;
            } else {
                int leg = kronecker(static_cast<std::int64_t>(q_red % p), static_cast<std::int64_t>(p));
                if (leg == 0) return 0.0;
                val *= leg * pa * std::sqrt(static_cast<double>(p));
            }
        } else {
            return 0.0;
        }
    }
    return val;
}

const D1Coeffs& d1_coeffs(Complex s, const TwistIndex& l, std::uint64_t M) {
    static std::mutex mu;
    static std::map<std::tuple<double, double, std::uint64_t, std::uint64_t>, D1Coeffs> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(s.real(), s.imag(), l.l.value, M);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const std::uint64_t Q = 299; // q2 cutoff; q2^{-2 Re s} with Re s >= 2 makes the tail ~ Q^{-3}
    std::vector<Complex> q2pow;
    for (std::uint64_t q2 = 1; q2 <= Q; q2 += 2)
        q2pow.push_back(std::exp(-2.0 * s * std::log(static_cast<double>(q2))));

    auto spf = spf_table(static_cast<std::uint32_t>(M));
    D1Coeffs out;
    out.M = M;
    out.c.resize((M + 1) / 2);
    std::vector<std::pair<std::uint64_t, unsigned>> fac;
    for (std::uint64_t m = 1; m <= M; m += 2) {
        fac.clear();
        std::uint32_t mm = static_cast<std::uint32_t>(m);
        while (mm > 1) {
            std::uint32_t p = spf[mm];
            unsigned e = 0;
            while (mm % p == 0) { mm /= p; ++e; }
            fac.emplace_back(p, e);
        }
        // merge l's primes (ml may be non-square-free when gcd(m,l) > 1)
        for (auto& [p, e] : l.l.factors) {
            bool merged = false;
            for (auto& [q, f] : fac)
                if (q == p) { f += e; merged = true; break; }
            if (!merged) fac.emplace_back(p, e);
        }
        Complex cm = 0.0;
        std::size_t qi = 0;
        for (std::uint64_t q2 = 1; q2 <= Q; q2 += 2, ++qi) {
            double g = gauss_G_fast(fac, q2);
            if (g != 0.0) cm += g * q2pow[qi];
        }
        out.c[(m - 1) / 2] = cm;
    }
    auto [ins, ok] = cache.emplace(key, std::move(out));
    (void)ok;
    return ins->second;
}

} // namespace

D1Partial d1_partial(Complex s, Complex w, const TwistIndex& l, std::uint64_t m_cutoff) {
    if (s.real() < 2.0 || w.real() <= 1.5)
        throw std::invalid_argument("d1_partial: needs Re s >= 2, Re w > 3/2");
    const D1Coeffs& co = d1_coeffs(s, l, m_cutoff);
    Complex val = 0.0;
    for (std::uint64_t m = 1; m <= co.M; m += 2)
        val += co.c[(m - 1) / 2] * std::exp(-w * std::log(static_cast<double>(m)));
    // Tail estimate: the mean density of c_m / sqrt(m) over the top window,
    // continued as kappa * sum_{odd m > M} m^{-(w-1/2)}.
    Complex kappa = 0.0;
    std::uint64_t cnt = 0;
    for (std::uint64_t m = co.M / 2 + 1; m <= co.M; ++m) {
        if (m % 2 == 0) continue;
        kappa += co.c[(m - 1) / 2] / std::sqrt(static_cast<double>(m));
        ++cnt;
    }
    kappa /= static_cast<double>(cnt);
    Complex u = w - 1.5; // sum_{odd m>M} m^{-(w-1/2)} ~ (1/2) M^{-u} / u
    Complex tail = kappa * 0.5 * std::exp(-u * std::log(static_cast<double>(co.M))) / u;
    return {val, tail};
}

} // namespace momentlab
