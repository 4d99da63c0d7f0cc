#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "momentlab/arith.hpp"

using namespace momentlab;

namespace {

// Independent trial-division oracle.
std::vector<std::pair<std::uint64_t, unsigned>> factor_oracle(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

int legendre_oracle(std::int64_t a, std::int64_t p) {
    // Euler criterion, p odd prime.
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    std::int64_t r = 1, base = a, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = (__int128)r * base % p;
        base = (__int128)base * base % p;
        e >>= 1;
    }
    return r == 1 ? 1 : (r == p - 1 ? -1 : 0);
}

} // namespace

TEST_CASE("factor matches trial division") {
    std::mt19937_64 rng(12345);
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        FactoredInt f = factor(n);
        CHECK(f.value == n);
        CHECK(f.factors == factor_oracle(n));
    }
    for (int i = 0; i < 200; ++i) {
        std::uint64_t n = rng() % 100000000 + 2;
        FactoredInt f = factor(n);
        std::uint64_t prod = 1;
        for (auto& [p, e] : f.factors) {
            CHECK(is_prime_u64(p));
            for (unsigned k = 0; k < e; ++k) prod *= p;
        }
        CHECK(prod == n);
    }
    // semiprime with two large factors exercises the rho path
    std::uint64_t p1 = 1000000007ULL, p2 = 1000000009ULL;
    FactoredInt f = factor(p1 * p2);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == p1);
    CHECK(f.factors[1].first == p2);
}

TEST_CASE("moebius and phi against brute force") {
    // independent: count square divisors / coprime residues
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        FactoredInt f = factor(n);
        int mu = 1;
        for (std::uint64_t p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0) mu = 0;
        if (mu != 0) {
            unsigned k = 0;
            std::uint64_t m = n;
            for (std::uint64_t p = 2; p <= m; ++p)
                while (m % p == 0) {
                    m /= p;
                    ++k;
                }
            mu = (k % 2 == 0) ? 1 : -1;
        }
        CHECK(moebius(f) == mu);
        std::uint64_t phi = 0;
        for (std::uint64_t a = 1; a <= n; ++a)
            if (std::gcd(a, n) == 1) ++phi;
        CHECK(euler_phi(f) == phi);
    }
}

TEST_CASE("kronecker equals Euler criterion at odd primes") {
    std::vector<std::int64_t> ps = {3, 5, 7, 11, 13, 101, 9973};
    for (std::int64_t p : ps)
        for (std::int64_t a = -50; a <= 50; ++a)
            CHECK(kronecker(a, p) == legendre_oracle(a, p));
}

TEST_CASE("kronecker structural properties") {
    // complete multiplicativity in both arguments (odd positive bottom)
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        std::int64_t a = static_cast<std::int64_t>(rng() % 2001) - 1000;
        std::int64_t b = static_cast<std::int64_t>(rng() % 2001) - 1000;
        std::int64_t n = static_cast<std::int64_t>(rng() % 500) * 2 + 1;
        std::int64_t m = static_cast<std::int64_t>(rng() % 500) * 2 + 1;
        CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
        CHECK(kronecker(a, n * m) == kronecker(a, n) * kronecker(a, m));
    }
    // (2/n) table
    for (std::int64_t n = 1; n <= 101; n += 2) {
        int want = (n % 8 == 1 || n % 8 == 7) ? 1 : -1;
        CHECK(kronecker(2, n) == want);
    }
    // periodicity of chi^{8d}(.) = (8d/.) mod 8d
    for (std::int64_t d : {1, 3, 5, 15}) {
        for (std::int64_t n = 1; n <= 64; ++n)
            CHECK(kronecker(8 * d, n) == kronecker(8 * d, n + 8 * d));
    }
    // chi^{8d} is even
    for (std::int64_t d : {1, 3, 5, 7, 11})
        for (std::int64_t n = 1; n <= 30; ++n)
            CHECK(kronecker(8 * d, n) == kronecker(8 * d, -n));
    // edge cases
    CHECK(kronecker(1, 1) == 1);
    CHECK(kronecker(0, 1) == 1);
    CHECK(kronecker(0, 5) == 0);
    CHECK(kronecker(5, 0) == 0);
    CHECK(kronecker(1, 0) == 1);
}

TEST_CASE("is_prime_u64 against sieve and known values") {
    std::vector<bool> sieve(100001, true);
    sieve[0] = sieve[1] = false;
    for (std::uint64_t p = 2; p * p <= 100000; ++p)
        if (sieve[p])
            for (std::uint64_t m = p * p; m <= 100000; m += p) sieve[m] = false;
    for (std::uint64_t n = 0; n <= 100000; ++n) CHECK(is_prime_u64(n) == sieve[n]);
    CHECK(is_prime_u64((1ULL << 61) - 1));      // Mersenne prime
    CHECK(!is_prime_u64(561));                  // Carmichael
    CHECK(!is_prime_u64(3215031751ULL));        // strong pseudoprime to 2,3,5,7
    CHECK(is_prime_u64(18446744073709551557ULL)); // largest 64-bit prime
}

TEST_CASE("square-free enumeration") {
    // brute force oracle
    std::vector<std::uint64_t> expect;
    for (std::uint64_t n = 1; n <= 50000; n += 2) {
        bool sf = true;
        for (std::uint64_t p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0) sf = false;
        if (sf) expect.push_back(n);
    }
    CHECK(odd_squarefree_up_to(50000) == expect);
    // segmented path crosses segment boundaries for larger limits
    std::uint64_t count = 0, last = 0;
    bool ascending = true;
    for_each_odd_squarefree(3000000, [&](std::uint64_t d) {
        if (d <= last) ascending = false;
        last = d;
        ++count;
    });
    CHECK(ascending);
    CHECK(last <= 3000000);
    // density ~ (4/pi^2) N; exact count cross-checked against mu^2 sum
    std::uint64_t expect_count = 0;
    {
        auto spf = spf_table(3000000);
        for (std::uint64_t n = 1; n <= 3000000; n += 2) {
            std::uint64_t m = n;
            bool sf = true;
            while (m > 1) {
                std::uint64_t p = spf[m];
                m /= p;
                if (m % p == 0) {
                    sf = false;
                    break;
                }
            }
            if (sf) ++expect_count;
        }
    }
    CHECK(count == expect_count);
}

TEST_CASE("spf table") {
    auto spf = spf_table(10000);
    CHECK(spf[0] == 0);
    CHECK(spf[1] == 0);
    for (std::uint64_t n = 2; n <= 10000; ++n) {
        CHECK(n % spf[n] == 0);
        CHECK(is_prime_u64(spf[n]));
        for (std::uint64_t p = 2; p < spf[n]; ++p) CHECK(n % p != 0);
    }
}

TEST_CASE("index type validation") {
    CHECK_NOTHROW(TwistIndex::make(15));
    CHECK_THROWS_AS(TwistIndex::make(9), std::invalid_argument);
    CHECK_THROWS_AS(TwistIndex::make(6), std::invalid_argument);
    CHECK_NOTHROW(QuadraticFamilyIndex::make(1));
    CHECK_THROWS_AS(QuadraticFamilyIndex::make(25), std::invalid_argument);
    CHECK_THROWS_AS(QuadraticFamilyIndex::make(4), std::invalid_argument);
    CHECK(QuadraticFamilyIndex::make(5).conductor() == 40);
}
