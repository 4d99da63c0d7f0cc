#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "momentlab/gauss.hpp"

using namespace momentlab;

namespace {
using C = std::complex<double>;

C normalize(std::uint64_t n, C tau) {
    int eps = kronecker(-1, static_cast<std::int64_t>(n));
    return (C(1, -1) / 2.0 + static_cast<double>(eps) * C(1, 1) / 2.0) * tau;
}
} // namespace

TEST_CASE("prime-power table matches normalized brute-force tau") {
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= 105; n += 2) {
        FactoredInt fn = factor(n);
        for (std::int64_t q = 0; q <= 32; ++q) {
            C tau = tau_bruteforce(n, {CharacterSpec::JacobiN, 0}, q).value;
            C g = gauss_G(fn, static_cast<std::uint64_t>(q)).value;
            worst = std::max(worst, std::abs(normalize(n, tau) - g));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("exact forms evaluate to the numeric value") {
    for (std::uint64_t n = 1; n <= 45; n += 2) {
        FactoredInt fn = factor(n);
        for (std::uint64_t q = 0; q <= 20; ++q) {
            GaussSumValue g = gauss_G(fn, q);
            REQUIRE(g.exact_form.has_value());
            CHECK(std::abs(g.exact_form->evaluate() - g.value) < 1e-10);
        }
    }
}

TEST_CASE("prime-power cases directly") {
    // k <= a, k even: phi(p^k); k <= a, k odd: 0
    FactoredInt p9 = factor(9); // 3^2
    CHECK(std::abs(gauss_G(p9, 9).value - 6.0) < 1e-12);  // a=2>=k=2 even -> phi(9)=6
    FactoredInt p3 = factor(3);
    CHECK(std::abs(gauss_G(p3, 3).value) < 1e-12);        // wait: a=1 >= k=1 odd -> 0
    // k = a+1, k even: -p^a
    CHECK(std::abs(gauss_G(p9, 3).value - (-3.0)) < 1e-12); // a=1, k=2 -> -3
    // k = a+1, k odd: (q p^{-a} | p) p^a sqrt(p)
    CHECK(std::abs(gauss_G(p3, 1).value - std::sqrt(3.0)) < 1e-12); // (1|3) sqrt 3
    CHECK(std::abs(gauss_G(p3, 2).value - (-std::sqrt(3.0))) < 1e-12); // (2|3) = -1
    // k >= a+2: 0
    FactoredInt p27 = factor(27);
    CHECK(std::abs(gauss_G(p27, 1).value) < 1e-12);
    // q = 0: a = infinity
    CHECK(std::abs(gauss_G(p9, 0).value - 6.0) < 1e-12);  // k=2 even -> phi(9)
    CHECK(std::abs(gauss_G(p3, 0).value) < 1e-12);        // k=1 odd -> 0
}

TEST_CASE("multiplicativity in n") {
    for (std::uint64_t n1 : {3ull, 5ull, 9ull, 11ull})
        for (std::uint64_t n2 : {7ull, 13ull, 25ull, 49ull}) {
            for (std::uint64_t q = 0; q <= 12; ++q) {
                C lhs = gauss_G(factor(n1 * n2), q).value;
                C rhs = gauss_G(factor(n1), q).value * gauss_G(factor(n2), q).value;
                CHECK(std::abs(lhs - rhs) < 1e-9);
            }
        }
}

TEST_CASE("period-4 invariance in q") {
    for (std::uint64_t n = 1; n <= 99; n += 2) {
        FactoredInt fn = factor(n);
        for (std::uint64_t q = 1; q <= 32; ++q)
            CHECK(std::abs(gauss_G(fn, 4 * q).value - gauss_G(fn, q).value) < 1e-10);
    }
}

TEST_CASE("tau_from_G inverts the normalization") {
    for (std::uint64_t n = 1; n <= 55; n += 2) {
        FactoredInt fn = factor(n);
        for (std::int64_t q = 1; q <= 16; ++q) {
            C brute = tau_bruteforce(n, {CharacterSpec::JacobiN, 0}, q).value;
            CHECK(std::abs(tau_from_G(fn, static_cast<std::uint64_t>(q)) - brute) < 1e-9);
        }
    }
}

TEST_CASE("twisted tau against brute force over modulus 4n") {
    for (std::uint64_t n = 1; n <= 35; n += 2) {
        FactoredInt fn = factor(n);
        for (std::int64_t q = 1; q <= 16; ++q) {
            C brute = tau_bruteforce(n, {CharacterSpec::Chi4TimesN, 0}, q).value;
            C fast = tau_twisted(fn, static_cast<std::uint64_t>(q)).value;
            CHECK(std::abs(brute - fast) < 1e-9);
        }
    }
}

TEST_CASE("twisted tau q (mod 4) structure") {
    for (std::uint64_t n = 1; n <= 25; n += 2) {
        FactoredInt fn = factor(n);
        for (std::uint64_t q = 1; q <= 20; q += 2)
            CHECK(std::abs(tau_twisted(fn, q).value) < 1e-12); // odd q -> 0
        for (std::uint64_t q = 2; q <= 20; q += 4)
            CHECK(std::abs(tau_twisted(fn, q).value + 2.0 * tau_from_G(fn, q)) < 1e-9);
        for (std::uint64_t q = 4; q <= 20; q += 4)
            CHECK(std::abs(tau_twisted(fn, q).value - 2.0 * tau_from_G(fn, q)) < 1e-9);
    }
}

TEST_CASE("psi_j brute-force sums") {
    // psi_0 is trivial: tau = 1 by convention of the modulus-1 sum
    CHECK(std::abs(tau_bruteforce(1, {CharacterSpec::PsiJ, 0}, 3).value - 1.0) < 1e-12);
    // psi_1 = chi^{(4)} is principal mod 4: tau(psi_1, q) = sum over odd j mod 4 of e(jq/4)
    C t = tau_bruteforce(4, {CharacterSpec::PsiJ, 1}, 1).value;
    C expect = std::exp(C(0, 2 * 3.141592653589793 * 1.0 / 4.0)) +
               std::exp(C(0, 2 * 3.141592653589793 * 3.0 / 4.0));
    CHECK(std::abs(t - expect) < 1e-12);
}

TEST_CASE("square q2^2 twists used by the double series are real") {
    for (std::uint64_t m = 1; m <= 31; m += 2) {
        FactoredInt fm = factor(m);
        for (std::uint64_t q2 = 1; q2 <= 15; q2 += 2) {
            GaussSumValue g = gauss_G(fm, q2 * q2);
            CHECK(std::abs(g.value.imag()) < 1e-12);
        }
    }
}
