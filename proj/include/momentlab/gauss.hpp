#ifndef MOMENTLAB_GAUSS_HPP
#define MOMENTLAB_GAUSS_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "momentlab/arith.hpp"

namespace momentlab {

// An exactly representable Gauss-sum value: coef * sqrt(sqrt_arg) * (i if imaginary).
struct GaussExactForm {
    long long coef = 1;
    std::uint64_t sqrt_arg = 1;
    bool imaginary = false;

    std::complex<double> evaluate() const;
    std::string to_string() const;
};

struct GaussSumValue {
    std::complex<double> value;
    std::optional<GaussExactForm> exact_form;
};

// Which character the brute-force tau is taken over.
struct CharacterSpec {
    enum Kind {
        JacobiN,       // chi_n = (./n), n odd positive
        Chi4TimesN,    // chi^(4) chi_n, modulus 4n
        PsiJ,          // psi_j = chi^(4j), j in {0, +-1, +-2}; modulus 4|j| (1 for j=0)
    } kind = JacobiN;
    int j = 0; // only for PsiJ
};

// The literal Gauss sum tau(chi, q) = sum_{j mod n} chi(j) e(jq/n).
GaussSumValue tau_bruteforce(std::uint64_t n, const CharacterSpec& chi, std::int64_t q);

// G(chi_n, q) via the multiplicative prime-power evaluation; n odd, fully factored.
// q = 0 is allowed (treated as p^inf for every p).
GaussSumValue gauss_G(const FactoredInt& n, std::uint64_t q);

// tau(chi^(4) chi_n, q): 0 for odd q, -2 tau(chi_n,q) for q=2 mod 4, +2 tau(chi_n,q)
// for q=0 mod 4, with tau(chi_n,q) recovered from gauss_G by inverting the
// normalization G = ((1-i)/2 + (-1|n)(1+i)/2) tau.
GaussSumValue tau_twisted(const FactoredInt& n, std::uint64_t q);

// tau(chi_n, q) from gauss_G (normalization inverted).
std::complex<double> tau_from_G(const FactoredInt& n, std::uint64_t q);

} // namespace momentlab

#endif
