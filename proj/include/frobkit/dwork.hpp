#pragma once
// Dwork's congruences for hypergeometric-type coefficient sequences, unit-root truncations.

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "frobkit/frob.hpp"
#include "json.hpp"

namespace dwork {

// r -> B(r), exact; values are cached on demand
class CoeffSeq {
public:
    CoeffSeq() = default;
    CoeffSeq(std::string label, std::function<mpq_class(long)> f) : label_(std::move(label)), f_(std::move(f)) {}
    const std::string& label() const { return label_; }
    const mpq_class& operator()(long r) const;
    std::vector<mpq_class> prefix(long len) const;

private:
    std::string label_;
    std::function<mpq_class(long)> f_;
    mutable std::deque<mpq_class> cache_;   // stable references while growing
};

CoeffSeq bessel_seq(int n);         // (-2)^{(2n+1) r} / (r!)^{2n+1}
CoeffSeq so_seq(int n);             // 2^{(2n+1) r} (2r-1)!! / (r!)^{2n+1}
CoeffSeq gl_ode_seq(int n);         // p = 2 solution of the GL_n preset: 2^{n r}/(r!)^n
CoeffSeq delta_seq();               // 1, 0, 0, ...

struct ConditionReport {
    int p = 2, R = 0, Smax = 0;
    bool cprime = false;            // (c') instead of (c)
    std::vector<std::string> labels;
    bool a = false, b = false, c = false, d = false, e = false;
    bool integral = false;          // every B^{(i)}(r), r <= R, lies in Z_p
    // u(i,1,m) for (c'): set of admissible signs after intersecting over all (a,n)
    std::map<std::pair<int, long>, std::set<int>> u;
    long checked = 0;
    std::vector<std::string> counterexamples;
    bool pass() const { return a && b && c && d && e && integral; }
    // is sign(m) admissible for u(i,1,m) at every tested m?
    bool u_matches(int i, const std::function<int(long)>& sign) const;
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

// B^{(i)} = seqs[i mod seqs.size()]
ConditionReport check_conditions(const std::vector<CoeffSeq>& seqs, int p, long R, int Smax, bool cprime);

struct CongruenceReport {
    bool pass = true;
    long checked = 0;
    std::vector<std::string> counterexamples;
    nlohmann::json to_json() const;
};
// F^{(0)}(x) F^{(1)}_{m,s}(x^p) = F^{(0)}_{m,s+1}(x) F^{(1)}(x^p) mod p^{s+1} B^{(s+1)}(m)
// (mod 2^s B^{(s+1)}(m) when modified), over x-degrees < (m+2) p^{s+1}.
CongruenceReport congruence_theorem_check(const std::vector<CoeffSeq>& seqs, int p, long mmax, int smax, bool modified);

// power series mod p^K, K digits, length L
struct ModSeries {
    int p = 2, K = 1;
    mpz_class mod;
    std::vector<mpz_class> c;
};

struct UnitRootFn {
    int p = 2, delta = 0, degree = 0;
    CoeffSeq B0, B1;
    std::map<int, ModSeries> f;     // s -> F_{s+1}(x)/F_s(x^p) mod p^{s-delta}
    std::map<int, ModSeries> eta;   // s -> F'_{s+1}(x)/F_{s+1}(x) mod p^s
    // F^{(0)}_{s+1}(x)/F^{(1)}_s(x^p) at an integer point, mod p^{s-delta}; nullopt when F^{(1)}_s(x^p) is not a unit
    std::optional<mpz_class> eval(int s, const mpz_class& x) const;
};
// f as power series to x-degree < degree; delta = 1 when the pair only satisfies (c')
UnitRootFn unit_root_truncations(const CoeffSeq& B0, const CoeffSeq& B1, int p, int Smax, int delta, int degree);

struct UnitRootChecks {
    bool f0_is_one = true, coherence = true, diff_relation = true, eta_matches = true;
    std::vector<std::string> notes;
    bool pass() const { return f0_is_one && coherence && diff_relation && eta_matches; }
};
UnitRootChecks unit_root_properties(const UnitRootFn& U, int points, uint64_t seed);

struct CrosscheckReport {
    std::string label;
    uint32_t a = 0;
    int required = 0;               // p-adic digits (powers of p) that must agree
    std::vector<int> unit_root_digits, f_digits;
    int agree_p = 0;                // valuation of the difference, in powers of p
    bool charpoly_agree = false;    // matrix charpoly vs the one from power sums
    int charpoly_agree_digits = 0;
    bool unique_unit_root = false;
    bool pass = false;
    nlohmann::json to_json() const;
};
// unit root of charpoly(phi~(a~)) against f(a~) = F_{s+1}(a~)/F_s(a~^p), s = required + delta
CrosscheckReport unit_root_crosscheck(const CoeffSeq& B, const frob::FrobSeries& fs, uint32_t a, int required, int delta);
// the slope-0 root of a monic polynomial over Z_p[pi] by Hensel lifting; nullopt if not unique
std::optional<padic::PadicNum> unit_root(const std::vector<padic::PadicNum>& monic);

struct RatioReport {
    long degree = 0;
    long min_valuation = 0;
    long first_bad = -1;
    bool stable = true;
    bool pass() const { return first_bad < 0 && stable; }
    nlohmann::json to_json() const;
};
RatioReport ratio_integrality(const CoeffSeq& F, const CoeffSeq& G, int p, long D);

// charpoly of a matrix over Z_p[pi] without divisions; coefficient i multiplies X^i
std::vector<padic::PadicNum> charpoly(const padic::PMat& m);

}  // namespace dwork
