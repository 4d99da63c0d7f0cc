#include "momentlab/special.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace momentlab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Lanczos, g = 607/128, 15 coefficients.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

Complex log_gamma_core(Complex z) {
    // Requires Re z >= 1/2.
    Complex acc = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) acc += kLanczos[k] / (z - 1.0 + static_cast<double>(k));
    Complex t = z + kLanczosG - 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(acc);
}

// Bernoulli numbers B_2..B_20.
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,     -1.0 / 30.0,     1.0 / 42.0,      -1.0 / 30.0,      5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,     -3617.0 / 510.0, 43867.0 / 798.0,  -174611.0 / 330.0,
};

} // namespace

Complex log_gamma(Complex z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw std::domain_error("log_gamma: pole at nonpositive integer");
    if (z.real() >= 0.5) return log_gamma_core(z);
    // Reflection: Gamma(z)Gamma(1-z) = pi/sin(pi z).
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma_core(1.0 - z);
}

Complex cgamma(Complex z) { return std::exp(log_gamma(z)); }

Complex gamma_e_o(Complex s, Parity parity) {
    if (parity == Parity::Even) return std::exp(log_gamma((1.0 - s) / 2.0) - log_gamma(s / 2.0));
    return std::exp(log_gamma((2.0 - s) / 2.0) - log_gamma((s + 1.0) / 2.0));
}

Complex gamma_alpha(Complex alpha) {
    return std::exp(-alpha * std::log(8.0 / kPi) + log_gamma(0.25 - alpha / 2.0) -
                    log_gamma(0.25 + alpha / 2.0));
}

Complex zeta(Complex s) {
    if (std::abs(s - 1.0) < 1e-12) throw std::domain_error("zeta: pole at s=1");
    if (std::abs(s.imag()) > 220.0) throw std::domain_error("zeta: |Im s| too large for this evaluator");
    // Euler-Maclaurin with 10 Bernoulli correction terms.
    int N = std::max(20, static_cast<int>(std::ceil(2.0 * std::abs(s.imag()))));
    Complex sum = 0.0;
    for (int n = 1; n < N; ++n) sum += std::pow(static_cast<double>(n), -s);
    double Nd = static_cast<double>(N);
    Complex Nms = std::pow(Nd, -s);
    sum += Nd * Nms / (s - 1.0);  // N^{1-s}/(s-1)
    sum += 0.5 * Nms;
    Complex poch = s;               // s(s+1)...(s+2k-2), starts at k=1 with just s
    Complex Npow = Nms / Nd;        // N^{-s-1}
    for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
        double fact = 1.0;
        for (unsigned j = 2; j <= 2 * (k + 1); ++j) fact *= j;
        sum += kBernoulli[k] / fact * poch * Npow;
        poch *= (s + static_cast<double>(2 * k + 1)) * (s + static_cast<double>(2 * k + 2));
        Npow /= Nd * Nd;
    }
    return sum;
}

Complex zeta_omit(Complex s, const FactoredInt& omit) {
    Complex z = zeta(s);
    for (auto& [p, e] : omit.factors) {
        (void)e;
        z *= 1.0 - std::pow(static_cast<double>(p), -s);
    }
    return z;
}

Complex zeta2(Complex s) { return zeta(s) * (1.0 - std::pow(2.0, -s)); }

// ---------------------------------------------------------------------------
// Incomplete gamma.

namespace {

// gamma(a,x) by the standard ascending series, x in the series region.
Complex lower_gamma_series(Complex a, double x) {
    Complex term = 1.0 / a;
    Complex sum = term;
    for (int n = 1; n < 2000; ++n) {
        term *= x / (a + static_cast<double>(n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum * std::exp(a * std::log(x) - x);
}

// Gamma(a,x) continued fraction (modified Lentz), valid for x reasonably large.
Complex upper_gamma_cf(Complex a, double x) {
    const double tiny = 1e-300;
    Complex b = x + 1.0 - a;
    Complex c = 1.0 / tiny;
    Complex d = 1.0 / b;
    Complex h = d;
    for (int i = 1; i < 2000; ++i) {
        Complex an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        Complex del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
}

// Gamma(a,x) for |a| small via the cancellation-stable alternating form:
//   Gamma(a,x) = (Gamma(a+1)-x^a)/a - x^a sum_{n>=1} (-x)^n/(n!(a+n)).
Complex upper_gamma_small_a(Complex a, double x) {
    Complex lg1 = log_gamma(a + 1.0);
    Complex xa_log = a * std::log(x);
    Complex head;
    if (a == 0.0) {
        // lim_{a->0} (Gamma(a+1) - x^a)/a = Gamma'(1) - log x = -EulerGamma - log x
        head = -0.57721566490153286061 - std::log(x);
    } else if (std::abs(a) < 1e-3) {
        // (e^{lg1} - e^{xa_log})/a with both exponents ~ O(a); expand via expm1.
        auto expm1c = [](Complex z) {
            if (std::abs(z) < 0.5) {
                Complex term = z, sum = z;
                for (int n = 2; n < 40; ++n) {
                    term *= z / static_cast<double>(n);
                    sum += term;
                    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1.0)) break;
                }
                return sum;
            }
            return std::exp(z) - 1.0;
        };
        head = (expm1c(lg1) - expm1c(xa_log)) / a;
    } else {
        head = (std::exp(lg1) - std::exp(xa_log)) / a;
    }
    Complex xa = std::exp(xa_log);
    Complex sum = 0.0;
    double xn = 1.0;
    for (int n = 1; n < 500; ++n) {
        xn *= -x / static_cast<double>(n);
        Complex term = xn / (a + static_cast<double>(n));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1.0) && n > x) break;
    }
    return head - xa * sum;
}

} // namespace

Complex upper_gamma(Complex a, double x) {
    if (x < 0.0) throw std::invalid_argument("upper_gamma: x must be nonnegative");
    if (x == 0.0) return cgamma(a);
    double switch_x = 1.5 * std::abs(2.0 * a) + 5.0;
    if (x >= switch_x) return upper_gamma_cf(a, x);
    if (std::abs(a) < 0.3) {
        if (x >= 9.0) return upper_gamma_cf(a, x);
        return upper_gamma_small_a(a, x);
    }
    return cgamma(a) - lower_gamma_series(a, x);
}

Complex reg_upper_gamma(Complex a, double x) {
    if (x == 0.0) return 1.0;
    double switch_x = 1.5 * std::abs(2.0 * a) + 5.0;
    if (x >= switch_x) return upper_gamma_cf(a, x) * std::exp(-log_gamma(a));
    return 1.0 - lower_gamma_series(a, x) * std::exp(-log_gamma(a));
}

// ---------------------------------------------------------------------------
// Weights and Mellin transforms.

SmoothWeight weight_by_name(const std::string& name) {
    if (name == "bump") {
        SmoothWeight w;
        w.name = "bump";
        w.t0 = 1.0;
        w.t1 = 2.0;
        w.smoothness_order = 8;
        w.f = [](double t) {
            double u = 2.0 * t - 3.0;
            double d = 1.0 - u * u;
            if (d <= 1e-14) return 0.0;
            return std::exp(1.0 - 1.0 / d);
        };
        return w;
    }
    if (name == "expdecay") {
        SmoothWeight w;
        w.name = "expdecay";
        w.t0 = 1e-8;
        w.t1 = 60.0;
        w.smoothness_order = 8;
        w.f = [](double t) { return std::exp(-t); };
        return w;
    }
    throw std::invalid_argument("unknown weight: " + name);
}

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

void gk15(const std::function<Complex(double)>& f, double a, double b, Complex& val, double& err) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex resg = 0.0, resk = 0.0;
    for (int i = 0; i < 8; ++i) {
        Complex fv;
        if (i == 7) {
            fv = f(c);
            resk += kWgk[7] * fv;
            resg += kWg[3] * fv;
        } else {
            Complex f1 = f(c - h * kXgk[i]);
            Complex f2 = f(c + h * kXgk[i]);
            resk += kWgk[i] * (f1 + f2);
            if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
        }
    }
    val = resk * h;
    double diff = std::abs(resk - resg) * std::abs(h);
    err = std::pow(200.0 * diff, 1.5);
    if (err > diff) err = diff;
    if (err < 1e-300) err = diff;
}

} // namespace

Complex integrate_gk(const std::function<Complex(double)>& f, double a, double b,
                     double abs_tol, double* err_out) {
    struct Seg { double a, b; Complex val; double err; };
    std::vector<Seg> segs;
    Seg s0{a, b, 0.0, 0.0};
    gk15(f, a, b, s0.val, s0.err);
    segs.push_back(s0);
    for (int iter = 0; iter < 4000; ++iter) {
        double total_err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total_err += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        if (total_err <= abs_tol || segs[worst].err < 1e-300) {
            Complex total = 0.0;
            for (auto& s : segs) total += s.val;
            if (err_out) *err_out = total_err;
            return total;
        }
        Seg w = segs[worst];
        double mid = 0.5 * (w.a + w.b);
        Seg l{w.a, mid, 0.0, 0.0}, r{mid, w.b, 0.0, 0.0};
        gk15(f, l.a, l.b, l.val, l.err);
        gk15(f, r.a, r.b, r.val, r.err);
        segs[worst] = l;
        segs.push_back(r);
    }
    throw std::runtime_error("integrate_gk: quadrature failed to converge");
}

MellinValue mellin(const SmoothWeight& w, Complex s) {
    double err = 0.0;
    Complex v = integrate_gk(
        [&](double t) { return t > 0 ? w(t) * std::exp((s - 1.0) * std::log(t)) : Complex(0.0); },
        w.t0, w.t1, 1e-12, &err);
    return {s, v, err};
}

MellinValue mellin_derivative(const SmoothWeight& w, Complex s) {
    double err = 0.0;
    Complex v = integrate_gk(
        [&](double t) {
            if (t <= 0) return Complex(0.0);
            double lt = std::log(t);
            return w(t) * std::exp((s - 1.0) * lt) * lt;
        },
        w.t0, w.t1, 1e-12, &err);
    return {s, v, err};
}

} // namespace momentlab
