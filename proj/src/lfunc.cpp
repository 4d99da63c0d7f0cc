#include "momentlab/lfunc.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace momentlab {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_window(Complex s) {
    if (s.real() <= 0.0 || s.real() >= 3.0 || std::abs(s.imag()) > 50.0)
        throw std::invalid_argument("l_value: s outside the window 0 < Re s < 3, |Im s| <= 50");
}

// AFE with the theta integral split at t = A (A = 1 is the symmetric AFE):
//   L(s) = sum chi(n) n^{-s} Gamma(s/2, pi n^2 A / N) / Gamma(s/2)
//        + (pi/N)^{s-1/2} Gamma(s/2)^{-1} sum chi(n) n^{s-1} Gamma((1-s)/2, pi n^2/(A N)).
LValueRecord afe_split(const QuadraticFamilyIndex& d, Complex s, double A, LMethod tag) {
    check_window(s);
    const double N = static_cast<double>(d.conductor());
    const std::int64_t m8d = static_cast<std::int64_t>(8 * d.d.value);
    const Complex a1 = s / 2.0;
    const Complex a2 = (1.0 - s) / 2.0;
    const Complex lg1 = log_gamma(a1);

    // Cutoffs: the incomplete-gamma weights die like e^{-pi n^2 A/N}.
    const double C = 40.0 + std::abs(s.imag());
    const std::uint64_t n1max = static_cast<std::uint64_t>(std::ceil(std::sqrt(N * C / (kPi * A)))) + 2;
    const std::uint64_t n2max = static_cast<std::uint64_t>(std::ceil(std::sqrt(N * C * A / kPi))) + 2;

    Complex sum1 = 0.0, sum2 = 0.0;
    std::uint32_t terms = 0;
    for (std::uint64_t n = 1; n <= n1max; ++n) {
        int chi = kronecker(m8d, static_cast<std::int64_t>(n));
        if (chi == 0) continue;
        double x = kPi * static_cast<double>(n) * static_cast<double>(n) * A / N;
        sum1 += static_cast<double>(chi) * std::exp(-s * std::log(static_cast<double>(n))) *
                reg_upper_gamma(a1, x);
        ++terms;
    }
    for (std::uint64_t n = 1; n <= n2max; ++n) {
        int chi = kronecker(m8d, static_cast<std::int64_t>(n));
        if (chi == 0) continue;
        double x = kPi * static_cast<double>(n) * static_cast<double>(n) / (A * N);
        sum2 += static_cast<double>(chi) * std::exp((s - 1.0) * std::log(static_cast<double>(n))) *
                upper_gamma(a2, x);
        ++terms;
    }
    Complex pref2 = std::exp((s - 0.5) * std::log(kPi / N) - lg1);
    Complex value = sum1 + pref2 * sum2;

    // Crude but honest tail bound: the first omitted terms of each sum.
    double tail = std::exp(-kPi * static_cast<double>(n1max * n1max) * A / N) +
                  std::abs(pref2) * std::exp(-kPi * static_cast<double>(n2max * n2max) / (A * N));
    LValueRecord rec;
    rec.d = d.d.value;
    rec.s = s;
    rec.value = value;
    rec.abs_error = std::max(tail, 1e-13 * (1.0 + std::abs(value)));
    rec.method = tag;
    rec.terms_used = terms;
    return rec;
}

} // namespace

LValueRecord l_value(const QuadraticFamilyIndex& d, Complex s) {
    return afe_split(d, s, 1.0, LMethod::SmoothedAfe);
}

LValueRecord l_value_direct(const QuadraticFamilyIndex& d, Complex s) {
    return afe_split(d, s, 4.0, LMethod::DirectSeries);
}

LValueRecord l_value_omit(const QuadraticFamilyIndex& d, Complex s, const FactoredInt& omit) {
    LValueRecord rec = l_value(d, s);
    const std::int64_t m8d = static_cast<std::int64_t>(8 * d.d.value);
    for (auto& [p, e] : omit.factors) {
        (void)e;
        int chi = kronecker(m8d, static_cast<std::int64_t>(p));
        rec.value *= 1.0 - static_cast<double>(chi) * std::exp(-s * std::log(static_cast<double>(p)));
    }
    return rec;
}

Complex dirichlet_series_partial(std::uint64_t d, Complex s, std::uint64_t terms) {
    const std::int64_t m8d = static_cast<std::int64_t>(8 * d);
    Complex sum = 0.0;
    for (std::uint64_t n = 1; n <= terms; ++n) {
        int chi = kronecker(m8d, static_cast<std::int64_t>(n));
        if (chi == 0) continue;
        sum += static_cast<double>(chi) * std::exp(-s * std::log(static_cast<double>(n)));
    }
    return sum;
}

Complex completed_lambda(const QuadraticFamilyIndex& d, Complex s) {
    double N = static_cast<double>(d.conductor());
    return std::exp(0.5 * s * std::log(N / kPi) + log_gamma(s / 2.0)) * l_value(d, s).value;
}

// ---------------------------------------------------------------------------
// Cache.

namespace {

struct RawRecord {
    std::uint64_t d;
    double s_re, s_im;
    double v_re, v_im;
    double abs_error;
    std::uint32_t method_version;
    std::uint32_t terms_used;
    std::uint32_t reserved;
    std::uint32_t checksum;
};
static_assert(sizeof(RawRecord) == 64);

std::uint32_t fnv1a(const unsigned char* p, std::size_t n) {
    std::uint32_t h = 2166136261u;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 16777619u;
    }
    return h;
}

std::uint32_t record_checksum(const RawRecord& r) {
    return fnv1a(reinterpret_cast<const unsigned char*>(&r), offsetof(RawRecord, checksum));
}

std::string cache_key(std::uint64_t d, Complex s, LMethod m) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%llu|%.15e|%.15e|%u|%u",
                  static_cast<unsigned long long>(d), s.real(), s.imag(),
                  static_cast<unsigned>(m), LValueCache::kLayoutVersion);
    return buf;
}

} // namespace

std::string default_cache_dir() {
    if (const char* env = std::getenv("MOMENTLAB_CACHE_DIR")) return env;
    return "./cache";
}

LValueCache::LValueCache(std::string cache_dir) : dir_(std::move(cache_dir)) {
    bin_path_ = dir_ + "/lvalues.bin";
}

void LValueCache::load() {
    loaded_ = true;
    std::ifstream in(bin_path_, std::ios::binary);
    if (!in) return;
    RawRecord r;
    while (in.read(reinterpret_cast<char*>(&r), sizeof r)) {
        if (record_checksum(r) != r.checksum) continue; // corrupt record: recompute later
        std::uint32_t ver = r.method_version >> 16;
        if (ver != kLayoutVersion) continue;
        LMethod m = static_cast<LMethod>(r.method_version & 0xFFFF);
        LValueRecord rec;
        rec.d = r.d;
        rec.s = Complex(r.s_re, r.s_im);
        rec.value = Complex(r.v_re, r.v_im);
        rec.abs_error = r.abs_error;
        rec.method = m;
        rec.terms_used = r.terms_used;
        map_[cache_key(r.d, rec.s, m)] = rec;
    }
}

void LValueCache::append(const LValueRecord& rec) {
    std::filesystem::create_directories(dir_);
    // Sidecar describing the fixed little-endian layout, written once.
    std::string meta = dir_ + "/lvalues.meta.json";
    if (!std::filesystem::exists(meta)) {
        std::ofstream out(meta);
        out << "{\n"
               "  \"layout_version\": " << kLayoutVersion << ",\n"
               "  \"record_bytes\": 64,\n"
               "  \"fields\": [\"u64 d\", \"f64 s_re\", \"f64 s_im\", \"f64 value_re\",\n"
               "             \"f64 value_im\", \"f64 abs_error\", \"u32 method_version\",\n"
               "             \"u32 terms_used\", \"u32 reserved\", \"u32 checksum\"],\n"
               "  \"endianness\": \"little\"\n"
               "}\n";
    }
    RawRecord r;
    std::memset(&r, 0, sizeof r);
    r.d = rec.d;
    r.s_re = rec.s.real();
    r.s_im = rec.s.imag();
    r.v_re = rec.value.real();
    r.v_im = rec.value.imag();
    r.abs_error = rec.abs_error;
    r.method_version = (kLayoutVersion << 16) | static_cast<std::uint32_t>(rec.method);
    r.terms_used = rec.terms_used;
    r.checksum = record_checksum(r);
    std::ofstream out(bin_path_, std::ios::binary | std::ios::app);
    out.write(reinterpret_cast<const char*>(&r), sizeof r);
}

LValueRecord LValueCache::get_or_compute(const QuadraticFamilyIndex& d, Complex s, LMethod method) {
    std::string key = cache_key(d.d.value, s, method);
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (!loaded_) load();
        auto it = map_.find(key);
        if (it != map_.end()) {
            ++hits_;
            return it->second;
        }
        ++misses_;
    }
    LValueRecord rec = (method == LMethod::DirectSeries) ? l_value_direct(d, s) : l_value(d, s);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = map_.emplace(key, rec);
        if (inserted) append(rec);
        return it->second; // identical by determinism if another thread won the race
    }
}

} // namespace momentlab
