#ifndef MOMENTLAB_LFUNC_HPP
#define MOMENTLAB_LFUNC_HPP

#include <complex>
#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>

#include "momentlab/arith.hpp"
#include "momentlab/special.hpp"

namespace momentlab {

enum class LMethod : std::uint32_t { SmoothedAfe = 1, DirectSeries = 2 };

struct LValueRecord {
    std::uint64_t d = 1;          // odd square-free index; conductor 8d
    Complex s;
    Complex value;
    double abs_error = 0.0;
    LMethod method = LMethod::SmoothedAfe;
    std::uint32_t terms_used = 0;
};

// L(s, chi^(8d)) for the even primitive character of conductor 8d, by the
// smoothed approximate functional equation.  Window: 0 < Re s < 3, |Im s| <= 50.
LValueRecord l_value(const QuadraticFamilyIndex& d, Complex s);

// Same value via an independent split of the completed L-function (the theta
// integral cut at t = A instead of t = 1); used as the dual-method oracle.
LValueRecord l_value_direct(const QuadraticFamilyIndex& d, Complex s);

// l_value times prod_{p | omit} (1 - chi^(8d)(p) p^{-s}).
LValueRecord l_value_omit(const QuadraticFamilyIndex& d, Complex s, const FactoredInt& omit);

// Plain truncated Dirichlet series sum_{n<=terms} chi^(8d)(n) n^{-s};
// only sensible for Re s > 1.
Complex dirichlet_series_partial(std::uint64_t d, Complex s, std::uint64_t terms);

// Completed Lambda(s) = (8d/pi)^{s/2} Gamma(s/2) L(s, chi^(8d)).
Complex completed_lambda(const QuadraticFamilyIndex& d, Complex s);

// Persistent append-only binary cache of L-value records, keyed by
// (d, s bits, method, layout version).  Corrupt records are skipped and the
// affected keys recomputed.
class LValueCache {
public:
    explicit LValueCache(std::string cache_dir);

    LValueRecord get_or_compute(const QuadraticFamilyIndex& d, Complex s,
                                LMethod method = LMethod::SmoothedAfe);

    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }

    static constexpr std::uint32_t kLayoutVersion = 1;

private:
    void load();
    void append(const LValueRecord& rec);

    std::string dir_;
    std::string bin_path_;
    std::unordered_map<std::string, LValueRecord> map_;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
    std::mutex mu_;
    bool loaded_ = false;
};

// Cache directory resolution: MOMENTLAB_CACHE_DIR env var, else "./cache".
std::string default_cache_dir();

} // namespace momentlab

#endif
