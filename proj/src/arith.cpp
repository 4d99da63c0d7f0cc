#include "momentlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace momentlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin(u64 n, u64 a) {
    if (a % n == 0) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    // Brent's cycle-finding variant.
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 q = 1;
        int iter = 0;
        while (d == 1) {
            x = (mulmod(x, x, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            y = (mulmod(y, y, n) + c) % n;
            u64 diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            q = mulmod(q, diff, n);
            if (++iter % 64 == 0 || iter > 1 << 20) {
                d = std::gcd(q, n);
                if (d != 1) break;
            }
        }
        if (d == 1) d = std::gcd(q, n);
        if (d != 1 && d != n) return d;
    }
}

constexpr u64 kTrialLimit = 1ull << 21;

void factor_rec(u64 n, std::vector<std::pair<u64, unsigned>>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.emplace_back(n, 1);
        return;
    }
    u64 d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // Deterministic for all 64-bit n with this base set.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (!miller_rabin(n, a)) return false;
    return true;
}

FactoredInt factor(u64 n) {
    if (n == 0) throw std::invalid_argument("factor: n must be positive");
    if (n >= (1ull << 63)) throw std::invalid_argument("factor: n out of 64-bit signed range");
    FactoredInt f;
    f.value = n;
    u64 m = n;
    for (u64 p = 2; p * p <= m && p < kTrialLimit; p += (p == 2) ? 1 : 2) {
        if (m % p == 0) {
            unsigned e = 0;
            while (m % p == 0) { m /= p; ++e; }
            f.factors.emplace_back(p, e);
        }
    }
    if (m > 1) {
        if (m < kTrialLimit * kTrialLimit || is_prime_u64(m)) {
            f.factors.emplace_back(m, 1);
        } else {
            std::vector<std::pair<u64, unsigned>> rest;
            factor_rec(m, rest);
            std::sort(rest.begin(), rest.end());
            for (auto& [p, e] : rest) {
                if (!f.factors.empty() && f.factors.back().first == p)
                    f.factors.back().second += e;
                else
                    f.factors.emplace_back(p, e);
            }
        }
    }
    return f;
}

int moebius(const FactoredInt& n) {
    for (auto& [p, e] : n.factors)
        if (e >= 2) return 0;
    return (n.factors.size() % 2 == 0) ? 1 : -1;
}

std::uint64_t euler_phi(const FactoredInt& n) {
    u64 r = n.value;
    for (auto& [p, e] : n.factors) r = r / p * (p - 1);
    return r;
}

int kronecker(std::int64_t a, std::int64_t n) {
    if (a == 0 && n == 0) throw std::invalid_argument("kronecker(0,0) is undefined");
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    if ((n & 1) == 0) {
        if ((a & 1) == 0) return 0;
        int t = 0;
        while ((n & 1) == 0) { n >>= 1; ++t; }
        if (t & 1) {
            int am8 = static_cast<int>(((a % 8) + 8) % 8);
            if (am8 == 3 || am8 == 5) sign = -sign;
        }
    }
    // n odd positive from here: Jacobi symbol (a/n).
    std::uint64_t un = static_cast<std::uint64_t>(n);
    std::int64_t am = a % n;
    if (am < 0) am += n;
    std::uint64_t ua = static_cast<std::uint64_t>(am);
    while (ua != 0) {
        while ((ua & 1) == 0) {
            ua >>= 1;
            std::uint64_t r = un & 7;
            if (r == 3 || r == 5) sign = -sign;
        }
        std::swap(ua, un);
        if ((ua & 3) == 3 && (un & 3) == 3) sign = -sign;
        ua %= un;
    }
    return un == 1 ? sign : 0;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> comp(limit + 1, false);
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (!comp[i]) {
            primes.push_back(i);
            for (std::uint64_t j = (std::uint64_t)i * i; j <= limit; j += i) comp[j] = true;
        }
    }
    return primes;
}

std::vector<std::uint32_t> spf_table(std::uint32_t limit) {
    std::vector<std::uint32_t> spf(limit + 1, 0);
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            for (std::uint64_t j = i; j <= limit; j += i)
                if (spf[j] == 0) spf[j] = i;
        }
    }
    return spf;
}

void for_each_odd_squarefree(u64 limit, const std::function<void(u64)>& fn) {
    constexpr u64 kSegment = 1ull << 20;
    if (limit == 0) return;
    u64 root = static_cast<u64>(std::sqrt(static_cast<double>(limit))) + 2;
    auto primes = primes_up_to(static_cast<std::uint32_t>(std::min<u64>(root, 0xFFFFFFFFull)));
    std::vector<bool> sf(kSegment);
    for (u64 lo = 1; lo <= limit; lo += kSegment) {
        u64 hi = std::min(limit, lo + kSegment - 1);
        std::fill(sf.begin(), sf.end(), true);
        for (u64 p : primes) {
            u64 p2 = p * p;
            if (p2 > hi) break;
            u64 start = ((lo + p2 - 1) / p2) * p2;
            for (u64 m = start; m <= hi; m += p2) sf[m - lo] = false;
        }
        u64 d0 = (lo & 1) ? lo : lo + 1;
        for (u64 d = d0; d <= hi; d += 2)
            if (sf[d - lo]) fn(d);
    }
}

std::vector<u64> odd_squarefree_up_to(u64 limit) {
    std::vector<u64> out;
    for_each_odd_squarefree(limit, [&](u64 d) { out.push_back(d); });
    return out;
}

} // namespace momentlab
