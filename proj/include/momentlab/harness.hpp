#ifndef MOMENTLAB_HARNESS_HPP
#define MOMENTLAB_HARNESS_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "momentlab/arith.hpp"
#include "momentlab/lfunc.hpp"
#include "momentlab/predictor.hpp"
#include "momentlab/special.hpp"

namespace momentlab {

// Neumaier-compensated accumulator; addition order is part of the contract.
class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double total() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class ComplexNeumaierSum {
public:
    void add(Complex z) {
        re_.add(z.real());
        im_.add(z.imag());
    }
    Complex total() const { return {re_.total(), im_.total()}; }

private:
    NeumaierSum re_, im_;
};

enum class Family { Primitive, AllModuli };

struct MomentReport {
    Family family = Family::Primitive;
    double X = 0.0;
    std::uint64_t l = 1;
    Complex alpha;
    Complex empirical;
    Complex predicted_term1;
    Complex predicted_term2;
    Complex deviation;            // empirical - term1 - term2
    std::uint64_t d_count = 0;    // d with w(d/X) != 0 actually summed
    double wall_time = 0.0;       // seconds; excluded from the JSON archive
    std::string weight;
    std::string code_version;
    std::optional<std::string> error; // partial-failure diagnostic
};

struct ExponentFit {
    std::vector<std::pair<double, double>> points; // (X, |deviation|)
    double delta_hat = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Twisted first moment over the family: sum_d L(1/2+alpha, chi^(8d)) chi^(8d)(l) w(d/X).
// Non-square-free d in the all-moduli family reduce to the primitive core by
// Euler-factor removal (d = d0 e^2).
MomentReport empirical_moment(Family family, double X, const TwistIndex& l, Complex alpha,
                              const SmoothWeight& w, LValueCache& cache, int threads = 1);

// The exact finite rearrangement of the primitive moment into M1 (a <= Y) and M2 (a > Y).
struct M1M2 {
    Complex M1;
    Complex M2;
};
M1M2 decompose_m1_m2(double X, const TwistIndex& l, Complex alpha, std::uint64_t Y,
                     const SmoothWeight& w, LValueCache& cache);

// |contour integral of A_D(s,1/2+alpha;l) X^s what(s) - direct weighted d-sum|,
// both sides over the same truncated Dirichlet series (d <= truncation_D).
double mellin_inversion_check(double X, const TwistIndex& l, Complex alpha,
                              std::uint64_t truncation_D, const SmoothWeight& w,
                              LValueCache& cache);

ExponentFit fit_error_exponent(const std::vector<MomentReport>& reports);

struct ExperimentConfig {
    Family family = Family::Primitive;
    std::vector<double> X_values;
    std::vector<std::uint64_t> l_values;
    Complex alpha = 0.0;
    std::string weight = "bump";
    std::string cache_dir;
    int threads = 1;
    std::string out_prefix = "momentlab_run";
};

// key = value config parser; "[section]" headers are tolerated and ignored.
ExperimentConfig parse_config_file(const std::string& path);

struct ExperimentResult {
    std::vector<MomentReport> reports;
    std::vector<std::pair<std::uint64_t, ExponentFit>> fits; // one per l
    std::string csv_path;
    std::string json_path;
};

// Runs the full grid; cell failures are recorded in the report and the run
// continues.  CSV and JSON are written atomically (temp file + rename).
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string report_csv_header();
std::string report_csv_row(const MomentReport& r);
std::string archive_json(const ExperimentResult& res, const ExperimentConfig& config);

inline const char* kCodeVersion = "momentlab-1.0";

} // namespace momentlab

#endif
