#include "frobkit/cyc.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "frobkit/ff.hpp"

namespace cyc {

CycInt::CycInt(int m) : m_(m)
{
    if (!ff::is_prime(m)) throw std::invalid_argument("CycInt: m must be prime");
    c_.assign(m - 1, 0);
}

CycInt::CycInt(int m, long c) : CycInt(m) { c_[0] = c; }

CycInt::CycInt(int m, std::vector<mpz_class> c) : m_(m), c_(std::move(c))
{
    if (!ff::is_prime(m)) throw std::invalid_argument("CycInt: m must be prime");
    if ((int)c_.size() != m - 1) throw std::invalid_argument("CycInt: need m-1 coefficients");
}

CycInt CycInt::reduce_full(int m, std::vector<mpz_class> full)
{
    // zeta^{m-1} = -(1 + ... + zeta^{m-2})
    std::vector<mpz_class> c(m - 1);
    for (int i = 0; i < m - 1; ++i) c[i] = full[i] - full[m - 1];
    return CycInt(m, std::move(c));
}

CycInt CycInt::zeta_pow(int m, long k)
{
    std::vector<mpz_class> full(m, 0);
    full[((k % m) + m) % m] = 1;
    return reduce_full(m, std::move(full));
}

CycInt CycInt::from_counts(int m, const std::vector<long long>& counts)
{
    std::vector<mpz_class> full(m, 0);
    static_assert(sizeof(long) == sizeof(long long), "LP64 expected");
    for (int t = 0; t < m; ++t) full[t] = (long)counts[t];
    return reduce_full(m, std::move(full));
}

CycInt CycInt::from_counts(int m, const std::vector<mpz_class>& counts)
{
    return reduce_full(m, counts);
}

bool CycInt::is_zero() const
{
    for (auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CycInt::is_integer() const
{
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

mpz_class CycInt::integer_value() const
{
    if (!is_integer()) throw std::domain_error("CycInt is not rational");
    return c_[0];
}

void CycInt::check_same(const CycInt& b) const
{
    if (m_ != b.m_) throw std::invalid_argument("CycInt: mixed m");
}

CycInt CycInt::operator+(const CycInt& b) const { CycInt r = *this; r += b; return r; }
CycInt CycInt::operator-(const CycInt& b) const { CycInt r = *this; r -= b; return r; }

CycInt& CycInt::operator+=(const CycInt& b)
{
    check_same(b);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
    return *this;
}

CycInt& CycInt::operator-=(const CycInt& b)
{
    check_same(b);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
    return *this;
}

CycInt CycInt::operator-() const
{
    CycInt r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

CycInt CycInt::operator*(const CycInt& b) const
{
    check_same(b);
    std::vector<mpz_class> full(m_, 0);
    for (int i = 0; i < m_ - 1; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < m_ - 1; ++j) {
            if (b.c_[j] == 0) continue;
            int k = (i + j) % m_;
            mpz_addmul(full[k].get_mpz_t(), c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
        }
    }
    return reduce_full(m_, std::move(full));
}

CycInt CycInt::operator*(const mpz_class& k) const
{
    CycInt r = *this;
    for (auto& x : r.c_) x *= k;
    return r;
}

bool CycInt::operator==(const CycInt& b) const { return m_ == b.m_ && c_ == b.c_; }

bool CycInt::divisible_by(const mpz_class& k) const
{
    for (auto& x : c_)
        if (!mpz_divisible_p(x.get_mpz_t(), k.get_mpz_t())) return false;
    return true;
}

std::optional<CycInt> CycInt::div_exact(const mpz_class& k) const
{
    if (k == 0 || !divisible_by(k)) return std::nullopt;
    CycInt r = *this;
    for (auto& x : r.c_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), k.get_mpz_t());
    return r;
}

CycInt CycInt::galois(long c) const
{
    long cc = ((c % m_) + m_) % m_;
    if (cc == 0) throw std::invalid_argument("galois: exponent divisible by m");
    std::vector<mpz_class> full(m_, 0);
    for (int i = 0; i < m_ - 1; ++i) full[(i * cc) % m_] += c_[i];
    return reduce_full(m_, std::move(full));
}

CycInt CycInt::pow(unsigned e) const
{
    CycInt r(m_, 1), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

std::complex<double> CycInt::embed(long j) const { return complex_embed(*this, j); }

std::string CycInt::str() const
{
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << (c_[i] > 0 ? " + " : " - ");
        else if (c_[i] < 0) os << "-";
        mpz_class a = abs(c_[i]);
        if (i == 0) os << a;
        else {
            if (a != 1) os << a << "*";
            os << "z";
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

std::complex<double> complex_embed(const CycInt& a, long j)
{
    int m = a.m();
    if (std::gcd(j, (long)m) != 1) throw std::invalid_argument("complex_embed: gcd(j,m) != 1");
    std::complex<double> s = 0;
    for (int i = 0; i < m - 1; ++i) {
        double ang = 2.0 * std::numbers::pi * double((i * j) % m) / m;
        s += a.coeffs()[i].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

std::optional<CycInt> div_by_lambda(const CycInt& a)
{
    // 1/(1 - zeta) = -(1/m) sum_k k zeta^k
    int m = a.m();
    std::vector<mpz_class> full(m, 0);
    for (int k = 1; k < m; ++k) full[k] = -k;
    CycInt w = CycInt::from_counts(m, full);
    return (a * w).div_exact(m);
}

mpq_class LambdaVal::value() const
{
    mpq_class r(count, m - 1);
    r.canonicalize();
    return r;
}

LambdaVal lambda_valuation(const CycInt& a)
{
    LambdaVal v;
    v.m = a.m();
    if (a.is_zero()) { v.infinite = true; return v; }
    int m = a.m();
    // strip the rational content first: p | a in Z[zeta] iff p divides every coefficient
    mpz_class g = 0;
    for (auto& x : a.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    long t = 0;
    while (mpz_divisible_ui_p(g.get_mpz_t(), m)) { g /= m; ++t; }
    mpz_class pt;
    mpz_ui_pow_ui(pt.get_mpz_t(), m, t);
    CycInt cur = *a.div_exact(pt);
    long cnt = t * (m - 1);
    while (true) {
        auto nx = div_by_lambda(cur);
        if (!nx) break;
        cur = std::move(*nx);
        ++cnt;
    }
    v.count = cnt;
    return v;
}

ScaledCyc::ScaledCyc(CycInt n, int kk, long qq) : num(std::move(n)), k(kk), q(qq)
{
    if (k < 0) throw std::invalid_argument("ScaledCyc: k must be >= 0");
    canonicalize();
}

void ScaledCyc::canonicalize()
{
    while (k >= 2 && num.divisible_by(q)) {
        num = *num.div_exact(q);
        k -= 2;
    }
    if (num.is_zero()) k = 0;
}

std::complex<double> ScaledCyc::embed(long j) const
{
    return num.embed(j) / std::pow(-std::sqrt(double(q)), k);
}

EqualityCert scaled_equal(const ScaledCyc& a, const ScaledCyc& b)
{
    if (a.q != b.q) throw std::invalid_argument("scaled_equal: different q");
    EqualityCert c;
    mpz_class q = a.q;
    auto qpow = [&](int e) { mpz_class r; mpz_pow_ui(r.get_mpz_t(), q.get_mpz_t(), e); return r; };
    if ((a.k - b.k) % 2 == 0) {
        c.path = "exact";
        // a.num * (-sqrt q)^{b.k - a.k} == b.num, exponent even
        if (a.k <= b.k) c.equal = a.num * qpow((b.k - a.k) / 2) == b.num;
        else c.equal = b.num * qpow((a.k - b.k) / 2) == a.num;
        return c;
    }
    c.path = "squared+sign";
    bool sq = a.num * a.num * qpow(b.k) == b.num * b.num * qpow(a.k);
    auto za = a.embed(1), zb = b.embed(1);
    double scale = std::max({std::abs(za), std::abs(zb), 1e-300});
    bool sign = std::abs(za - zb) <= 1e-6 * scale;
    c.equal = sq && sign;
    std::ostringstream os;
    os << "squared " << (sq ? "equal" : "differ") << ", principal embedding |diff|/scale = "
       << std::abs(za - zb) / scale;
    c.detail = os.str();
    return c;
}

void to_json(nlohmann::json& j, const CycInt& a)
{
    std::vector<std::string> cs;
    for (auto& x : a.coeffs()) cs.push_back(x.get_str());
    j = nlohmann::json{{"m", a.m()}, {"coeffs", cs}};
}

void to_json(nlohmann::json& j, const ScaledCyc& a)
{
    to_json(j, a.num);
    j["k"] = a.k;
    j["q"] = a.q;
}

CycInt cyc_from_json(const nlohmann::json& j)
{
    int m = j.at("m").get<int>();
    std::vector<mpz_class> c;
    for (auto& x : j.at("coeffs")) {
        if (x.is_string()) c.emplace_back(x.get<std::string>());
        else c.emplace_back(x.get<long>());
    }
    return CycInt(m, std::move(c));
}

}  // namespace cyc
