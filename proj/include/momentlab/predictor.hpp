#ifndef MOMENTLAB_PREDICTOR_HPP
#define MOMENTLAB_PREDICTOR_HPP

#include <complex>
#include <map>
#include <string>

#include "momentlab/arith.hpp"
#include "momentlab/special.hpp"

namespace momentlab {

struct EulerProductTruncation {
    std::uint64_t prime_cutoff = 100000;
    double tail_bound = 0.0;
};

struct MainTermBreakdown {
    Complex term1;       // X-term
    Complex term2;       // X^{1-alpha}-term
    double X = 0.0;
    std::uint64_t l = 1;
    Complex alpha;
    std::string weight_name;
    std::map<std::string, Complex> component_values;
};

// B_alpha(l) as a convergent Euler product:
//   prod_{p|l}(1+1/p)^{-1} * prod_{p<=P, p \nmid 2l}(1 - p^{-1-2a}/(p+1)).
struct BAlphaValue {
    Complex value;
    EulerProductTruncation trunc;
};
BAlphaValue b_alpha(const TwistIndex& l, Complex a, std::uint64_t prime_cutoff = 100000);

// Main terms of the all-moduli twisted first moment (sum over all odd d).
MainTermBreakdown predict_all_moduli(double X, const TwistIndex& l, const ComplexShift& alpha,
                                     const SmoothWeight& w);

// Main terms of the primitive-family (square-free d) twisted first moment.
MainTermBreakdown predict_primitive(double X, const TwistIndex& l, const ComplexShift& alpha,
                                    const SmoothWeight& w);

struct CentralPrediction {
    double value = 0.0;          // lim_{a->0} [term1 + term2]
    double q0 = 0.0, q1 = 0.0;   // value(X) = X * (q0 + q1 log X)
};

// alpha -> 0 limit of predict_primitive by symmetric +-eps evaluation; the
// 1/(2a) poles of the two terms cancel.  Throws if the eps and eps/2 averages
// disagree by more than 1e-6 relative.
CentralPrediction predict_central(double X, const TwistIndex& l, const SmoothWeight& w);

// Residue-formula routes for the two main terms, written from the residue
// computations rather than the closed-form display; used to guard transcriptions.
Complex residue_at_s1(const TwistIndex& l, Complex a);          // term1 / (X what(1))
Complex residue_at_s1_via_omit(const TwistIndex& l, Complex a); // independent code path
Complex residue_at_shifted(const TwistIndex& l, Complex a);           // term2 / (X^{1-a} what(1-a))
Complex residue_at_shifted_via_gamma(const TwistIndex& l, Complex a); // independent code path

// Resummation identity residuals (truncated Mobius sums against Euler products).
struct ResumResult {
    double residual_s1 = 0.0;
    double residual_s2 = 0.0;
};
ResumResult resum_identity_check(const TwistIndex& l, const ComplexShift& alpha,
                                 std::uint64_t a_cutoff = 10000000,
                                 std::uint64_t prime_cutoff = 1000000);

// Truncated double Dirichlet series
//   D_1(s,w;l) = sum_{m odd, q2 odd} G(chi_{ml}, q2^2) m^{-w} q2^{-2s},
// sensible only in the absolute-convergence zone Re s >= 2, Re w > 3/2.
struct D1Partial {
    Complex value;
    Complex tail_estimate;
};
D1Partial d1_partial(Complex s, Complex w, const TwistIndex& l, std::uint64_t m_cutoff);

} // namespace momentlab

#endif
