#include "momentlab/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace momentlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t ipow(std::uint64_t p, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= p;
    return r;
}

} // namespace

std::complex<double> GaussExactForm::evaluate() const {
    std::complex<double> v = static_cast<double>(coef) * std::sqrt(static_cast<double>(sqrt_arg));
    return imaginary ? v * std::complex<double>(0.0, 1.0) : v;
}

std::string GaussExactForm::to_string() const {
    std::string s = std::to_string(coef);
    if (sqrt_arg != 1) s += "*sqrt(" + std::to_string(sqrt_arg) + ")";
    if (imaginary) s += "*i";
    return s;
}

GaussSumValue tau_bruteforce(std::uint64_t n, const CharacterSpec& chi, std::int64_t q) {
    std::uint64_t modulus;
    std::function<int(std::uint64_t)> chi_at;
    switch (chi.kind) {
        case CharacterSpec::JacobiN:
            if (n == 0 || n % 2 == 0) throw std::invalid_argument("tau_bruteforce: chi_n needs odd n");
            modulus = n;
            chi_at = [n](std::uint64_t j) {
                return kronecker(static_cast<std::int64_t>(j), static_cast<std::int64_t>(n));
            };
            break;
        case CharacterSpec::Chi4TimesN:
            if (n == 0 || n % 2 == 0) throw std::invalid_argument("tau_bruteforce: chi_n needs odd n");
            modulus = 4 * n;
            chi_at = [n](std::uint64_t j) {
                return kronecker(4, static_cast<std::int64_t>(j)) *
                       kronecker(static_cast<std::int64_t>(j), static_cast<std::int64_t>(n));
            };
            break;
        case CharacterSpec::PsiJ: {
            int jj = chi.j;
            if (jj == 0) {
                // Primitive principal character: modulus 1, tau = 1.
                return {std::complex<double>(1.0, 0.0), GaussExactForm{1, 1, false}};
            }
            if (jj != 1 && jj != -1 && jj != 2 && jj != -2)
                throw std::invalid_argument("tau_bruteforce: psi_j needs j in {0,+-1,+-2}");
            modulus = 4 * static_cast<std::uint64_t>(std::abs(jj));
            chi_at = [jj](std::uint64_t j) {
                return kronecker(4 * static_cast<std::int64_t>(jj), static_cast<std::int64_t>(j));
            };
            break;
        }
        default:
            throw std::invalid_argument("tau_bruteforce: unknown character spec");
    }
    if (modulus == 1) {
        // Empty-modulus convention: the single term j = 0 contributes 1.
        return {std::complex<double>(1.0, 0.0), GaussExactForm{1, 1, false}};
    }
    std::complex<double> sum = 0.0;
    for (std::uint64_t j = 0; j < modulus; ++j) {
        int c = chi_at(j);
        if (c == 0) continue;
        double ang = kTwoPi * static_cast<double>((static_cast<__int128>(j) * q) % static_cast<std::int64_t>(modulus)) /
                     static_cast<double>(modulus);
        sum += static_cast<double>(c) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return {sum, std::nullopt};
}

GaussSumValue gauss_G(const FactoredInt& n, std::uint64_t q) {
    if (!n.is_odd()) throw std::invalid_argument("gauss_G: n must be odd");
    GaussExactForm form;
    for (auto& [p, k] : n.factors) {
        // a = ord_p(q), with a = infinity for q = 0.
        unsigned a = 0;
        bool a_inf = (q == 0);
        std::uint64_t qq = q;
        if (!a_inf)
            while (qq % p == 0) { qq /= p; ++a; }
        // Lemma: five cases for G(chi_{p^k}, q).
        if (a_inf || k <= a) {
            if (k % 2 == 0) {
                form.coef *= static_cast<long long>(ipow(p, k) - ipow(p, k - 1)); // phi(p^k)
            } else {
                return {std::complex<double>(0.0, 0.0), GaussExactForm{0, 1, false}};
            }
        } else if (k == a + 1) {
            if (k % 2 == 0) {
                form.coef *= -static_cast<long long>(ipow(p, a));
            } else {
                int leg = kronecker(static_cast<std::int64_t>(qq), static_cast<std::int64_t>(p));
                if (leg == 0) return {std::complex<double>(0.0, 0.0), GaussExactForm{0, 1, false}};
                form.coef *= leg * static_cast<long long>(ipow(p, a));
                form.sqrt_arg *= p;
            }
        } else {
            return {std::complex<double>(0.0, 0.0), GaussExactForm{0, 1, false}};
        }
    }
    return {form.evaluate(), form};
}

std::complex<double> tau_from_G(const FactoredInt& n, std::uint64_t q) {
    GaussSumValue g = gauss_G(n, q);
    // G = tau for n = 1 mod 4, G = -i tau for n = 3 mod 4.
    if (n.value % 4 == 1) return g.value;
    return std::complex<double>(0.0, 1.0) * g.value;
}

GaussSumValue tau_twisted(const FactoredInt& n, std::uint64_t q) {
    if (!n.is_odd()) throw std::invalid_argument("tau_twisted: n must be odd");
    if (q % 2 == 1) return {std::complex<double>(0.0, 0.0), GaussExactForm{0, 1, false}};
    std::complex<double> tau = tau_from_G(n, q);
    double c = (q % 4 == 2) ? -2.0 : 2.0;
    return {c * tau, std::nullopt};
}

} // namespace momentlab
