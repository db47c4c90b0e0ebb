#pragma once
// Exact arithmetic in Z[zeta_m] for prime m, power basis 1, zeta, ..., zeta^{m-2}.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

namespace cyc {

class CycInt {
public:
    CycInt() = default;
    explicit CycInt(int m);                  // zero
    CycInt(int m, long c);                   // integer constant
    CycInt(int m, std::vector<mpz_class> c); // canonical coefficients, length m-1

    static CycInt zeta_pow(int m, long k);
    // sum_t counts[t] zeta^t, counts of length m
    static CycInt from_counts(int m, const std::vector<long long>& counts);
    static CycInt from_counts(int m, const std::vector<mpz_class>& counts);

    int m() const { return m_; }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    bool is_zero() const;
    bool is_integer() const;                 // in Z
    mpz_class integer_value() const;         // requires is_integer()

    CycInt operator+(const CycInt& b) const;
    CycInt operator-(const CycInt& b) const;
    CycInt operator-() const;
    CycInt operator*(const CycInt& b) const;
    CycInt operator*(const mpz_class& k) const;
    CycInt& operator+=(const CycInt& b);
    CycInt& operator-=(const CycInt& b);
    bool operator==(const CycInt& b) const;
    bool operator!=(const CycInt& b) const { return !(*this == b); }

    // exact division by an integer; nullopt when not exact
    std::optional<CycInt> div_exact(const mpz_class& k) const;
    bool divisible_by(const mpz_class& k) const;
    // Galois action zeta -> zeta^c, gcd(c,m)=1
    CycInt galois(long c) const;
    CycInt conj() const { return galois(-1); }
    CycInt pow(unsigned e) const;

    std::complex<double> embed(long j = 1) const;
    std::string str() const;

private:
    int m_ = 0;
    std::vector<mpz_class> c_;
    void check_same(const CycInt& b) const;
    // from m coefficients of the cyclic representation
    static CycInt reduce_full(int m, std::vector<mpz_class> full);
};

std::complex<double> complex_embed(const CycInt& a, long j);

// a/(1 - zeta), nullopt if not integral
std::optional<CycInt> div_by_lambda(const CycInt& a);

// v(a) normalised by v(m) = 1, i.e. (#divisions by 1-zeta)/(m-1)
struct LambdaVal {
    bool infinite = false;
    long count = 0;   // number of divisions by (1 - zeta)
    int m = 2;
    mpq_class value() const;  // count / (m-1)
};
LambdaVal lambda_valuation(const CycInt& a);

// Value num * (-sqrt q)^{-k}.
struct ScaledCyc {
    CycInt num;
    int k = 0;
    long q = 1;

    ScaledCyc() = default;
    ScaledCyc(CycInt n, int kk, long qq);
    void canonicalize();
    std::complex<double> embed(long j = 1) const;
};

struct EqualityCert {
    bool equal = false;
    std::string path;       // "exact" or "squared+sign"
    std::string detail;
};
EqualityCert scaled_equal(const ScaledCyc& a, const ScaledCyc& b);

void to_json(nlohmann::json& j, const CycInt& a);
void to_json(nlohmann::json& j, const ScaledCyc& a);
CycInt cyc_from_json(const nlohmann::json& j);

}  // namespace cyc
