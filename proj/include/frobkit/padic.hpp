#pragma once
// Z_p[pi]/(pi^{p-1} + p): fixed-precision elements mod pi^M, exact elements of
// Q(pi), and truncated power series over both.

#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "frobkit/cyc.hpp"
#include "frobkit/ff.hpp"
#include "json.hpp"

namespace padic {

long vp(const mpz_class& x, long p);        // LONG_MAX for 0
long vp(const mpq_class& x, long p);

struct PadicCfg {
    int p = 2;
    int e = 1;     // ramification index p-1
    int M = 24;    // precision in pi-digits
    std::vector<mpz_class> mod;   // mod[i] = p^{ceil((M-i)/e)}

    PadicCfg(int p, int M);
};
using CfgPtr = std::shared_ptr<const PadicCfg>;
CfgPtr make_cfg(int p, int M);

// Element of Z_p[pi] mod pi^M stored as sum c_i pi^i, i < e, with c_i mod p^{ceil((M-i)/e)}.
// Precision is global: division by pi discards the unknown top digit.
class PadicNum {
public:
    PadicNum() = default;
    explicit PadicNum(CfgPtr cfg);
    PadicNum(CfgPtr cfg, const mpz_class& n);
    PadicNum(CfgPtr cfg, std::vector<mpz_class> c);

    static PadicNum pi(CfgPtr cfg);
    static PadicNum from_digits(CfgPtr cfg, const std::vector<int>& d);

    const CfgPtr& cfg() const { return cfg_; }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    int p() const { return cfg_->p; }

    PadicNum operator+(const PadicNum& b) const;
    PadicNum operator-(const PadicNum& b) const;
    PadicNum operator-() const;
    PadicNum operator*(const PadicNum& b) const;
    PadicNum& operator+=(const PadicNum& b);
    PadicNum& operator-=(const PadicNum& b);
    bool operator==(const PadicNum& b) const { return c_ == b.c_; }
    bool operator!=(const PadicNum& b) const { return !(*this == b); }

    bool is_zero() const;
    int valuation() const;             // M when zero mod pi^M
    bool is_unit() const { return valuation() == 0; }
    PadicNum inv() const;              // units only
    PadicNum div(const PadicNum& b) const;   // requires v(this) >= v(b)
    PadicNum div_pi(int k = 1) const;        // requires v >= k
    PadicNum pow(unsigned long e) const;
    PadicNum reduce(int prec) const;   // truncate mod pi^prec
    // canonical base-p digits of sum d_i pi^i, little-endian, length M
    std::vector<int> digits() const;
    std::string str() const;

private:
    CfgPtr cfg_;
    std::vector<mpz_class> c_;
    void normalize();
};

// Exact element of Q(pi), pi^{p-1} = -p.
class KNum {
public:
    KNum() = default;
    explicit KNum(int p);
    KNum(int p, const mpq_class& x);
    KNum(int p, std::vector<mpq_class> c);
    static KNum pi(int p);

    int p() const { return p_; }
    int e() const { return p_ - 1; }
    const std::vector<mpq_class>& coeffs() const { return c_; }

    KNum operator+(const KNum& b) const;
    KNum operator-(const KNum& b) const;
    KNum operator-() const;
    KNum operator*(const KNum& b) const;
    KNum operator*(const mpq_class& k) const;
    KNum operator/(const KNum& b) const;
    KNum operator/(const mpq_class& k) const;
    KNum& operator+=(const KNum& b);
    KNum& operator-=(const KNum& b);
    bool operator==(const KNum& b) const { return p_ == b.p_ && c_ == b.c_; }
    bool operator!=(const KNum& b) const { return !(*this == b); }
    KNum pow(unsigned long e) const;
    KNum inv() const;

    bool is_zero() const;
    bool is_rational() const;
    long valuation() const;   // in pi-digits; LONG_MAX for 0
    PadicNum to_padic(const CfgPtr& cfg) const;   // requires valuation >= 0
    std::string str() const;

private:
    int p_ = 2;
    std::vector<mpq_class> c_;
};

KNum knum_from_padic(const PadicNum& x);   // integer representative

template <class T>
struct Mat {
    int r = 0;
    std::vector<T> a;
    Mat() = default;
    Mat(int n, const T& z) : r(n), a(size_t(n) * n, z) {}
    T& operator()(int i, int j) { return a[size_t(i) * r + j]; }
    const T& operator()(int i, int j) const { return a[size_t(i) * r + j]; }
    Mat operator+(const Mat& b) const { Mat c = *this; for (size_t i = 0; i < a.size(); ++i) c.a[i] += b.a[i]; return c; }
    Mat operator-(const Mat& b) const { Mat c = *this; for (size_t i = 0; i < a.size(); ++i) c.a[i] -= b.a[i]; return c; }
    Mat operator*(const Mat& b) const
    {
        Mat c(r, a[0] - a[0]);
        for (int i = 0; i < r; ++i)
            for (int k = 0; k < r; ++k) {
                if ((*this)(i, k).is_zero()) continue;
                for (int j = 0; j < r; ++j) c(i, j) += (*this)(i, k) * b(k, j);
            }
        return c;
    }
    T trace() const { T t = a[0] - a[0]; for (int i = 0; i < r; ++i) t += (*this)(i, i); return t; }
};

using PMat = Mat<PadicNum>;
using KMat = Mat<KNum>;

PMat to_padic(const KMat& m, const CfgPtr& cfg);

struct PSeries {
    std::vector<PadicNum> c;   // degree < D
    int D() const { return int(c.size()); }
};

struct PSeriesMat {
    std::vector<PMat> c;
    int D() const { return int(c.size()); }
};

PSeries series_add(const PSeries& f, const PSeries& g);
PSeries series_mul(const PSeries& f, const PSeries& g);
PSeries series_compose_xp(const PSeries& f);   // f(x^p)
PSeries series_delta(const PSeries& f);        // x d/dx
PSeriesMat series_add(const PSeriesMat& f, const PSeriesMat& g);
PSeriesMat series_sub(const PSeriesMat& f, const PSeriesMat& g);
PSeriesMat series_mul(const PSeriesMat& f, const PSeriesMat& g);
PSeriesMat series_compose_xp(const PSeriesMat& f);
PSeriesMat series_delta(const PSeriesMat& f);
PadicNum series_eval(const PSeries& f, const PadicNum& x);
PMat series_eval(const PSeriesMat& f, const PadicNum& x);

PadicNum teichmuller(ff::FqElem a, const CfgPtr& cfg);

// zeta_p as Dwork's theta(1) = sum of the coefficients of exp(pi(x - x^p)); zeta = 1 + pi mod pi^2
PadicNum zeta(const CfgPtr& cfg);
std::vector<KNum> dwork_theta_coeffs(int p, int K);
PadicNum embed_zeta(const cyc::CycInt& c, const CfgPtr& cfg);

void to_json(nlohmann::json& j, const PadicNum& x);

}  // namespace padic
