#ifndef MOMENTLAB_SPECIAL_HPP
#define MOMENTLAB_SPECIAL_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include "momentlab/arith.hpp"

namespace momentlab {

using Complex = std::complex<double>;

enum class ShiftStrip { AllModuliStrip, PrimitiveStrip, Central };

// The shift alpha together with the validity strip of the formula consuming it.
struct ComplexShift {
    Complex alpha;
    ShiftStrip strip = ShiftStrip::AllModuliStrip;

    static ComplexShift all_moduli_strip(Complex a) {
        double re = std::abs(a.real());
        if (re <= 0.0 || re >= 0.5)
            throw std::invalid_argument("alpha outside the 0<|Re alpha|<1/2 strip");
        return {a, ShiftStrip::AllModuliStrip};
    }
    static ComplexShift primitive_strip(Complex a) { return {a, ShiftStrip::PrimitiveStrip}; }
    static ComplexShift central() { return {0.0, ShiftStrip::Central}; }
};

// Principal-branch log Gamma; Lanczos with reflection for Re z < 1/2.
Complex log_gamma(Complex z);
Complex cgamma(Complex z);

enum class Parity { Even, Odd };

// Gamma_e(s) = Gamma((1-s)/2)/Gamma(s/2), Gamma_o(s) = Gamma((2-s)/2)/Gamma((s+1)/2).
Complex gamma_e_o(Complex s, Parity parity);

// gamma_alpha = (8/pi)^(-alpha) Gamma(1/4-alpha/2)/Gamma(1/4+alpha/2).
Complex gamma_alpha(Complex alpha);

// Riemann zeta by Euler-Maclaurin; valid for Re s > -1, |Im s| <= ~200, s != 1.
Complex zeta(Complex s);

// zeta with the Euler factors at primes dividing `omit` removed.
Complex zeta_omit(Complex s, const FactoredInt& omit);

// zeta^(2)(s) = zeta(s)(1 - 2^{-s}), the ubiquitous odd-primes zeta.
Complex zeta2(Complex s);

// Upper incomplete gamma Gamma(a,x) for complex a, real x >= 0.
Complex upper_gamma(Complex a, double x);
// Regularized Q(a,x) = Gamma(a,x)/Gamma(a).
Complex reg_upper_gamma(Complex a, double x);

// Compactly supported smooth weight w; w(t)=0 outside [t0,t1].
struct SmoothWeight {
    std::string name;
    double t0 = 1.0;
    double t1 = 2.0;
    int smoothness_order = 8;
    std::function<double(double)> f;

    double operator()(double t) const {
        if (t <= t0 || t >= t1) return 0.0;
        return f(t);
    }
};

// "bump": exp(1 - 1/(1-(2t-3)^2)) on (1,2).  "expdecay": e^{-t} on [1e-8, 60].
SmoothWeight weight_by_name(const std::string& name);

struct MellinValue {
    Complex s;
    Complex value;
    double abs_error_bound = 0.0;
};

// Mellin transform what(s) = int w(t) t^{s-1} dt over the support.
MellinValue mellin(const SmoothWeight& w, Complex s);
// d/ds what(s): integrand gains a log t factor.
MellinValue mellin_derivative(const SmoothWeight& w, Complex s);

// Adaptive Gauss-Kronrod 7/15 on [a,b] for a complex-valued integrand.
// Returns the value; *err_out (if non-null) receives the error estimate.
// Throws on non-convergence.
Complex integrate_gk(const std::function<Complex(double)>& f, double a, double b,
                     double abs_tol, double* err_out = nullptr);

} // namespace momentlab

#endif
