#ifndef MOMENTLAB_ARITH_HPP
#define MOMENTLAB_ARITH_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab {

// A positive integer together with its full prime factorization.
// Invariant: value == prod p^e, primes strictly increasing, e >= 1.
struct FactoredInt {
    std::uint64_t value = 1;
    std::vector<std::pair<std::uint64_t, unsigned>> factors;

    bool is_squarefree() const {
        for (auto& [p, e] : factors)
            if (e > 1) return false;
        return true;
    }
    bool is_odd() const { return (value & 1) != 0; }
    unsigned num_prime_factors() const { return static_cast<unsigned>(factors.size()); }
};

FactoredInt factor(std::uint64_t n);

// Mobius function from a factorization.
int moebius(const FactoredInt& n);

std::uint64_t euler_phi(const FactoredInt& n);

// Full Kronecker symbol (m/n), defined for all integer pairs except (0,0).
int kronecker(std::int64_t m, std::int64_t n);

// Deterministic 64-bit primality test (Miller-Rabin with a fixed base set).
bool is_prime_u64(std::uint64_t n);

// Calls fn(d) for every odd square-free d <= limit in ascending order.
// Segmented; memory stays O(segment) independent of limit.
void for_each_odd_squarefree(std::uint64_t limit, const std::function<void(std::uint64_t)>& fn);

std::vector<std::uint64_t> odd_squarefree_up_to(std::uint64_t limit);

// Primes <= limit by a plain sieve (limit expected modest, <= ~1e8).
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

// Smallest-prime-factor table for [0, limit]; spf[0] = spf[1] = 0.
std::vector<std::uint32_t> spf_table(std::uint32_t limit);

// An odd, positive, square-free twist index l.
struct TwistIndex {
    FactoredInt l;

    static TwistIndex make(std::uint64_t value) {
        TwistIndex t{factor(value)};
        if (!t.l.is_odd() || !t.l.is_squarefree())
            throw std::invalid_argument("twist index must be odd and square-free: " + std::to_string(value));
        return t;
    }
};

// Odd positive square-free d; the associated character chi^(8d) has conductor 8d.
struct QuadraticFamilyIndex {
    FactoredInt d;

    static QuadraticFamilyIndex make(std::uint64_t value) {
        QuadraticFamilyIndex q{factor(value)};
        if (!q.d.is_odd() || !q.d.is_squarefree())
            throw std::invalid_argument("family index must be odd and square-free: " + std::to_string(value));
        return q;
    }
    std::uint64_t conductor() const { return 8 * d.value; }
};

} // namespace momentlab

#endif
