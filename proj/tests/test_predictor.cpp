#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "momentlab/predictor.hpp"

using namespace momentlab;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }
} // namespace

TEST_CASE("b_alpha stabilizes under cutoff growth within its tail bound") {
    for (Complex a : {Complex(0.0, 0.0), Complex(0.1, 0.0), Complex(-0.2, 0.5)}) {
        for (std::uint64_t l : {1ull, 15ull}) {
            TwistIndex t = TwistIndex::make(l);
            BAlphaValue lo = b_alpha(t, a, 20000);
            BAlphaValue hi = b_alpha(t, a, 400000);
            CHECK(std::abs(lo.value - hi.value) <= 2.0 * lo.trunc.tail_bound);
            // bounds floor at the rounding-noise level, so allow ulp slack
            CHECK(hi.trunc.tail_bound <= lo.trunc.tail_bound * (1.0 + 1e-9));
        }
    }
    // frozen oracle: B_0(1) via an independent high-precision prime product
    BAlphaValue b0 = b_alpha(TwistIndex::make(1), 0.0, 1000000);
    CHECK(std::abs(b0.value.real() - 0.84533066854594089175) < 1e-6);
    CHECK(std::abs(b0.value.imag()) < 1e-15);
}

TEST_CASE("dual residue routes agree") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 30; ++i) {
        Complex a(std::uniform_real_distribution<>(0.02, 0.45)(rng) *
                      (rng() % 2 ? 1.0 : -1.0),
                  std::uniform_real_distribution<>(-1.0, 1.0)(rng));
        for (std::uint64_t l : {1ull, 3ull, 15ull, 105ull}) {
            TwistIndex t = TwistIndex::make(l);
            CHECK(rel(residue_at_s1(t, a), residue_at_s1_via_omit(t, a)) < 1e-10);
            CHECK(rel(residue_at_shifted(t, a), residue_at_shifted_via_gamma(t, a)) < 1e-9);
        }
    }
}

TEST_CASE("Gamma-zeta simplification identity") {
    // (Gamma_o(1-a) + Gamma_e(1-a)) zeta(2a)
    //   = pi^{2a-1/2} 2^{1-2a} Gamma(1/4-a/2)/Gamma(1/4+a/2) zeta(1-2a)
    std::mt19937_64 rng(17);
    for (int i = 0; i < 25; ++i) {
        Complex a(std::uniform_real_distribution<>(0.02, 0.45)(rng),
                  std::uniform_real_distribution<>(-1.5, 1.5)(rng));
        Complex lhs = (gamma_e_o(1.0 - a, Parity::Odd) + gamma_e_o(1.0 - a, Parity::Even)) *
                      zeta(2.0 * a);
        Complex rhs = std::exp((2.0 * a - 0.5) * std::log(kPi)) *
                      std::exp((1.0 - 2.0 * a) * std::log(2.0)) *
                      cgamma(0.25 - a / 2.0) / cgamma(0.25 + a / 2.0) * zeta(1.0 - 2.0 * a);
        CHECK(rel(lhs, rhs) < 1e-9);
    }
}

TEST_CASE("main terms match a literal transcription") {
    // all-moduli term1/term2 re-derived inline as a guard against transcription slips
    double X = 750.0;
    TwistIndex l = TwistIndex::make(15);
    Complex a(0.12, 0.3);
    SmoothWeight w = weight_by_name("bump");
    MainTermBreakdown b = predict_all_moduli(X, l, ComplexShift::all_moduli_strip(a), w);
    Complex prod1 = 1.0, prod2 = 1.0;
    for (double p : {3.0, 5.0}) {
        prod1 *= (1.0 - 1.0 / p) / (1.0 - std::pow(Complex(p), -2.0 - 2.0 * a));
        prod2 /= 1.0 + 1.0 / p;
    }
    Complex t1 = X * mellin(w, 1.0).value * zeta2(1.0 + 2.0 * a) /
                 (2.0 * std::pow(Complex(15.0), 0.5 + a) * zeta2(2.0 + 2.0 * a)) * prod1;
    Complex t2 = std::pow(Complex(X), 1.0 - a) * mellin(w, 1.0 - a).value * gamma_alpha(a) *
                 std::pow(Complex(15.0), -0.5 + a) * zeta2(1.0 - 2.0 * a) / (2.0 * zeta2(2.0)) *
                 prod2;
    CHECK(rel(b.term1, t1) < 1e-12);
    CHECK(rel(b.term2, t2) < 1e-12);
    // primitive terms likewise
    MainTermBreakdown bp = predict_primitive(X, l, ComplexShift::primitive_strip(a), w);
    Complex bpa = b_alpha(l, a).value, bma = b_alpha(l, -a).value;
    Complex p1 = X * mellin(w, 1.0).value * std::pow(Complex(15.0), -0.5 - a) *
                 zeta2(1.0 + 2.0 * a) * bpa / (2.0 * zeta2(2.0));
    Complex p2 = std::pow(Complex(X), 1.0 - a) * mellin(w, 1.0 - a).value * gamma_alpha(a) *
                 std::pow(Complex(15.0), -0.5 + a) * zeta2(1.0 - 2.0 * a) * bma / (2.0 * zeta2(2.0));
    CHECK(rel(bp.term1, p1) < 1e-12);
    CHECK(rel(bp.term2, p2) < 1e-12);
}

TEST_CASE("predictor validation") {
    SmoothWeight w = weight_by_name("bump");
    TwistIndex l1 = TwistIndex::make(1);
    CHECK_THROWS(predict_all_moduli(-5.0, l1, ComplexShift::all_moduli_strip(0.1), w));
    CHECK_THROWS(ComplexShift::all_moduli_strip(0.0));
    CHECK_THROWS(ComplexShift::all_moduli_strip(0.7));
    CHECK_THROWS(predict_primitive(10.0, l1, ComplexShift::primitive_strip(0.0), w));
    // term1 is linear in X
    MainTermBreakdown b1 = predict_primitive(100.0, l1, ComplexShift::primitive_strip(0.1), w);
    MainTermBreakdown b2 = predict_primitive(200.0, l1, ComplexShift::primitive_strip(0.1), w);
    CHECK(rel(b2.term1, 2.0 * b1.term1) < 1e-12);
    // term2 scales like X^{1-a}
    CHECK(rel(b2.term2, std::pow(Complex(2.0), Complex(0.9)) * b1.term2) < 1e-12);
}

TEST_CASE("central limit is smooth and matches small-alpha evaluations") {
    SmoothWeight w = weight_by_name("bump");
    for (std::uint64_t l : {1ull, 3ull, 15ull}) {
        TwistIndex t = TwistIndex::make(l);
        CentralPrediction c = predict_central(1000.0, t, w);
        CHECK(c.value > 0.0);
        // symmetric average at a larger eps approaches the same limit ~ eps^2
        double eps = 1e-3;
        MainTermBreakdown bp = predict_primitive(1000.0, t, ComplexShift::primitive_strip(eps), w);
        MainTermBreakdown bm = predict_primitive(1000.0, t, ComplexShift::primitive_strip(-eps), w);
        double avg = 0.5 * (bp.term1 + bp.term2 + bm.term1 + bm.term2).real();
        CHECK(std::abs(avg - c.value) / c.value < 1e-4);
        // the fitted coefficients reproduce value(X) at the anchor
        CHECK(rel(c.value, 1000.0 * (c.q0 + c.q1 * std::log(1000.0))) < 1e-12);
        CHECK(c.q1 > 0.0); // the log X coefficient is positive
    }
}

TEST_CASE("resummation identities at loose cutoffs") {
    for (std::uint64_t l : {1ull, 15ull}) {
        TwistIndex t = TwistIndex::make(l);
        ResumResult r = resum_identity_check(t, ComplexShift::all_moduli_strip(0.1), 300000, 200000);
        CHECK(r.residual_s1 < 1e-5);
        CHECK(r.residual_s2 < 1e-4);
    }
    CHECK_THROWS(resum_identity_check(TwistIndex::make(1), ComplexShift::central(), 1000, 1000));
}

TEST_CASE("d1_partial zone and stability") {
    TwistIndex l1 = TwistIndex::make(1);
    CHECK_THROWS(d1_partial(Complex(1.0, 0.0), Complex(2.0, 0.0), l1, 100));
    CHECK_THROWS(d1_partial(Complex(2.0, 0.0), Complex(1.2, 0.0), l1, 100));
    // the partial sums grow toward the pole direction but stay finite and real
    D1Partial a = d1_partial(Complex(2.0, 0.0), Complex(2.0, 0.0), l1, 801);
    D1Partial b = d1_partial(Complex(2.0, 0.0), Complex(2.0, 0.0), l1, 1601);
    CHECK(std::abs(a.value.imag()) < 1e-10);
    CHECK(std::abs(b.value.imag()) < 1e-10);
    // deeper truncation plus its tail estimate is consistent with the shallower one
    Complex full_a = a.value + a.tail_estimate;
    Complex full_b = b.value + b.tail_estimate;
    CHECK(std::abs(full_a - full_b) / std::abs(full_b) < 0.05);
}
