#pragma once
// Exponential sums over F_q with exact values in Z[zeta_p].

#include <map>
#include <string>
#include <vector>

#include "frobkit/cyc.hpp"
#include "frobkit/ff.hpp"
#include "json.hpp"

namespace sums {

using ff::Field;
using cyc::CycInt;
using cyc::ScaledCyc;

// psi_b(x) = zeta_p^{Tr(b x)}
struct AdditiveChar {
    const Field* F = nullptr;
    uint32_t b = 1;
    int shift = 0;   // nonzero only in mutation tests: breaks additivity on purpose
    AdditiveChar() = default;
    AdditiveChar(const Field& f, uint32_t bb = 1);
    int eval(uint32_t x) const { return (F->trace(F->mul(b, x)) + shift) % F->p; }   // exponent of zeta
    std::vector<uint8_t> log_table() const;   // t[l] = Tr(b g^l)
};

struct QuadChar {
    const Field* F = nullptr;
    explicit QuadChar(const Field& f);
    int eval(uint32_t x) const { return F->quad(x); }
};

// Signed multiset of zeta exponents; the additive accumulator every enumerator uses.
struct Counts {
    int p;
    std::vector<long long> c;
    explicit Counts(int pp) : p(pp), c(pp, 0) {}
    Counts& operator+=(const Counts& o);
    CycInt value() const { return CycInt::from_counts(p, c); }
};

CycInt psi_value(const AdditiveChar& psi, uint32_t x);

// S_n(a) = sum over z_1..z_{n-1} of psi(z_1+...+z_{n-1} + a/(z_1...z_{n-1})), by enumeration
CycInt kloosterman_raw(const Field& F, int n, uint32_t a, const AdditiveChar& psi, int workers = 0);
ScaledCyc kloosterman_normalized(const Field& F, int n, uint32_t a, const AdditiveChar& psi);

// sum_{x != 0} psi(x) rho(x); q odd
CycInt gauss_sum(const AdditiveChar& psi, const QuadChar& rho);
// sum_{x != 0} psi(x); the trivial-character helper
CycInt gauss_sum_trivial(const AdditiveChar& psi);

// Sum over prod x_i = a prod y_j of psi(sum x - sum y) prod rho(y_j)^{-1}, m quadratic rho's.
CycInt hyp_sum(const Field& F, int n, int m, uint32_t a, const AdditiveChar& psi, int workers = 0);
// Same sum with the last y eliminated instead of the last x (independent enumeration order).
CycInt hyp_sum_alt(const Field& F, int n, int m, uint32_t a, const AdditiveChar& psi);

// Tables of S_n over all of F^x, indexed by discrete log.
class KlTables {
public:
    KlTables(const Field& F, const AdditiveChar& psi, int workers = 0);
    const Field& field() const { return *F_; }
    // counts of S_n(g^e), n in {1, 2}
    const std::vector<long long>& table(int n);
    CycInt value(int n, uint32_t a);           // any n >= 1 via convolution of tables
    bool used_fft() const { return used_fft_; }
    static std::vector<long long> s2_direct(const Field& F, const std::vector<uint8_t>& tr);
    static std::vector<long long> s2_fft(const Field& F, const std::vector<uint8_t>& tr);

private:
    const Field* F_;
    int workers_;
    std::vector<uint8_t> tr_;
    std::map<int, std::vector<long long>> t_;
    bool used_fft_ = false;
};

// q^{n-1} Kl_{SO_{2n},Std}(a), as ScaledCyc with k = 2n-2.
struct QuadricResult {
    ScaledCyc value;
    long long points = 0;
};
QuadricResult so2n_quadric_sum(const Field& F, int n, uint32_t a, const AdditiveChar& psi);
long long quadric_point_count(const Field& F, int n);   // independent count of Q°(F_q)
ScaledCyc so2n_toric_sum(const Field& F, int n, uint32_t a, const AdditiveChar& psi, int workers = 0);
// raw torus part of the toric formula (without the constant)
CycInt so2n_toric_raw(const Field& F, int n, uint32_t a, const AdditiveChar& psi, int workers = 0);
// q^n Kl_{SO_{2n+1},Std}(a) = sum_{xy=a} (S_2(x)^2 - q) S_{2n-2}(y); k = 2n
ScaledCyc so2n1_sum(const Field& F, int n, uint32_t a, const AdditiveChar& psi);
ScaledCyc so2n1_sum(KlTables& T, int n, uint32_t a);

struct LaurentPoly {
    const Field* F = nullptr;
    int nvars = 0;
    std::map<std::vector<int>, uint32_t> terms;   // exponent vector -> coefficient code
    LaurentPoly() = default;
    LaurentPoly(const Field& f, int v) : F(&f), nvars(v) {}
    void add_term(const std::vector<int>& e, uint32_t c);
};
// x_1+...+x_{2n} - x_{2n+1}^d + a x_{2n+1}^d/(x_1...x_{2n})
LaurentPoly toric_family_fd(const Field& F, int n, int d, uint32_t a);
// sum over the torus of F_{q^m} of psi(Tr f)
CycInt toric_sum_Sm(const LaurentPoly& f, int m, int workers = 0);

struct IdentityRow {
    std::string identity;
    int p = 0, s = 0, n = 0;
    uint32_t a = 0;
    nlohmann::json lhs, rhs;
    bool pass = false;
    std::string note;
};
struct IdentityReport {
    std::string identity;
    std::vector<IdentityRow> rows;
    bool pass() const;
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

struct IdentityParams {
    int p = 2;
    int smin = 1, smax = 1;
    int nmin = 2, nmax = 2;
    int workers = 0;
    int psi_shift = 0;   // test hook: evaluate psi with Tr(x)+shift, used for mutation tests
};
// carlitz | so3 | so-chain | so-convolution | quadric-vs-toric | weil-bound | psi-rescale
IdentityReport verify_identity(const std::string& name, const IdentityParams& prm);

}  // namespace sums
