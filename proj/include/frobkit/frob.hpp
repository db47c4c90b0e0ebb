#pragma once
// Frobenius structures on Bessel-type connections d + (A0 + x A1) dx/x as truncated matrix power series.

#include <string>
#include <vector>

#include "frobkit/ff.hpp"
#include "frobkit/padic.hpp"
#include "json.hpp"

namespace frob {

using padic::CfgPtr;
using padic::KMat;
using padic::KNum;
using padic::PMat;

enum class Group { GL, SO, Hyp };

struct ConnectionSpec {
    Group group = Group::GL;
    int n = 1, p = 2, r = 1;
    int h = 1;                 // Coxeter number (power of lambda in A1)
    int lambda_sign = -1;      // lambda = lambda_sign * pi
    std::vector<std::vector<long>> A0;
    KMat A1;
    // scalar ODE delta^r y = c x (delta - beta) y  (beta unused for GL, where the x-term is c x y)
    KNum c;
    mpq_class beta = 0;
    bool has_beta = false;
    std::string label;
    nlohmann::json to_json() const;
};

// labels: GLn | SO2n1 | scalar-hypergeometric (also gl | so | hyp)
ConnectionSpec connection_preset(const std::string& label, int n, int p, int lambda_sign = -1);

struct OdeSeries {
    std::vector<KNum> exact;            // B(0..D-1)
    std::vector<padic::PadicNum> reduced;
    long min_valuation = 0;             // pi-digits
    bool verified = false;              // operator applied to the series vanishes mod x^D
};
OdeSeries ode_solution_series(const ConnectionSpec& spec, int D, const CfgPtr& cfg);

struct FrobSeries {
    ConnectionSpec spec;
    CfgPtr cfg;
    int D = 0;
    std::vector<KMat> exact;            // phi_k, k < D
    padic::PSeriesMat phi;              // reduced mod pi^M
    KMat phi0;
    std::vector<KNum> gamma;            // weights of the kernel solutions B_1..B_{r-1}
    std::vector<long> coeff_min_val;    // per k, pi-digits
    double growth_slope = 0;            // fitted over the upper half of the range
    long residual_val = 0;              // valuation of the defining-equation residual (M if zero)
    long fit_residual_val = 0;          // how well the overconvergence fit is satisfied
    long stability_val = 0;             // agreement with a solve at larger degree
    int precision = 0;                  // M' usable at Teichmuller points
    nlohmann::json to_json(bool with_coeffs = false) const;
};

// phi~ with phi~(0) in the kernel of X -> X A0 - p A0 X, selected as the overconvergent solution.
// stability_extra > 0 re-solves at D + stability_extra and records the agreement.
FrobSeries solve_frobenius(const ConnectionSpec& spec, const CfgPtr& cfg, int D, int stability_extra = 16);

// residual of delta(phi) + phi A - p A(x^p) phi over PadicNum, min valuation (M when exactly zero)
long defining_residual(const FrobSeries& fs);

struct PointValue {
    uint32_t a = 0;
    PMat value;
    int precision = 0;
};
PointValue frobenius_at_point(const FrobSeries& fs, ff::FqElem a);


struct TraceRow {
    uint32_t a = 0;
    std::vector<int> lhs, rhs;   // pi-digits mod pi^precision
    int agree = 0;               // valuation of the difference
    int precision = 0;
    bool pass = false;
};
struct TraceReport {
    std::string label;
    int p = 0, n = 0, M = 0, D = 0, required = 0;
    std::vector<TraceRow> rows;
    bool pass() const;
    nlohmann::json to_json() const;
};
// Tr phi~(a~) against the exponential-sum side at every a in F_p^x; required = digits that must agree
TraceReport trace_check(const FrobSeries& fs, int required);

// determinant of phi~ at Teichmuller points against det phi~(0)
bool det_constant_check(const FrobSeries& fs, int* agree = nullptr);

// slope multiset of the Frobenius at a over F_q, from extension sums
std::vector<mpq_class> slope_set_at_point(const ConnectionSpec& spec, const ff::Field& F, uint32_t a);

}  // namespace frob
