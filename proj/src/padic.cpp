#include "frobkit/padic.hpp"

#include <climits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace padic {

long vp(const mpz_class& x, long p)
{
    if (x == 0) return LONG_MAX;
    mpz_class t = x, pp = p;
    return (long)mpz_remove(t.get_mpz_t(), t.get_mpz_t(), pp.get_mpz_t());
}

long vp(const mpq_class& x, long p)
{
    if (x == 0) return LONG_MAX;
    return vp(x.get_num(), p) - vp(x.get_den(), p);
}

PadicCfg::PadicCfg(int p_, int M_) : p(p_), e(p_ - 1), M(M_)
{
    if (!ff::is_prime(p)) throw std::invalid_argument("PadicCfg: p must be prime");
    if (M < 1) throw std::invalid_argument("PadicCfg: M must be >= 1");
    mod.resize(e);
    for (int i = 0; i < e; ++i) {
        int n = M > i ? (M - i + e - 1) / e : 0;
        mpz_ui_pow_ui(mod[i].get_mpz_t(), p, n);
    }
}

CfgPtr make_cfg(int p, int M) { return std::make_shared<const PadicCfg>(p, M); }

PadicNum::PadicNum(CfgPtr cfg) : cfg_(std::move(cfg)), c_(cfg_->e, 0) {}

PadicNum::PadicNum(CfgPtr cfg, const mpz_class& n) : PadicNum(std::move(cfg))
{
    c_[0] = n;
    normalize();
}

PadicNum::PadicNum(CfgPtr cfg, std::vector<mpz_class> c) : cfg_(std::move(cfg)), c_(std::move(c))
{
    if ((int)c_.size() != cfg_->e) throw std::invalid_argument("PadicNum: need e coefficients");
    normalize();
}

void PadicNum::normalize()
{
    for (int i = 0; i < cfg_->e; ++i) mpz_fdiv_r(c_[i].get_mpz_t(), c_[i].get_mpz_t(), cfg_->mod[i].get_mpz_t());
}

PadicNum PadicNum::pi(CfgPtr cfg)
{
    PadicNum x(cfg);
    if (cfg->e == 1) x.c_[0] = -cfg->p;   // p = 2: pi = -2
    else x.c_[1] = 1;
    x.normalize();
    return x;
}

PadicNum PadicNum::from_digits(CfgPtr cfg, const std::vector<int>& d)
{
    PadicNum acc(cfg), pi_ = pi(cfg);
    for (int i = int(d.size()) - 1; i >= 0; --i) acc = acc * pi_ + PadicNum(cfg, mpz_class(d[i]));
    return acc;
}

PadicNum PadicNum::operator+(const PadicNum& b) const { PadicNum r = *this; r += b; return r; }
PadicNum PadicNum::operator-(const PadicNum& b) const { PadicNum r = *this; r -= b; return r; }

PadicNum& PadicNum::operator+=(const PadicNum& b)
{
    for (int i = 0; i < cfg_->e; ++i) c_[i] += b.c_[i];
    normalize();
    return *this;
}

PadicNum& PadicNum::operator-=(const PadicNum& b)
{
    for (int i = 0; i < cfg_->e; ++i) c_[i] -= b.c_[i];
    normalize();
    return *this;
}

PadicNum PadicNum::operator-() const
{
    PadicNum r = *this;
    for (auto& x : r.c_) x = -x;
    r.normalize();
    return r;
}

PadicNum PadicNum::operator*(const PadicNum& b) const
{
    int e = cfg_->e;
    PadicNum r(cfg_);
    mpz_class t;
    for (int i = 0; i < e; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < e; ++j) {
            if (b.c_[j] == 0) continue;
            int k = i + j;
            if (k < e) mpz_addmul(r.c_[k].get_mpz_t(), c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
            else {
                // pi^{e+t} = -p pi^t
                mpz_mul(t.get_mpz_t(), c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
                mpz_submul_ui(r.c_[k - e].get_mpz_t(), t.get_mpz_t(), cfg_->p);
            }
        }
    }
    r.normalize();
    return r;
}

bool PadicNum::is_zero() const
{
    for (auto& x : c_)
        if (x != 0) return false;
    return true;
}

int PadicNum::valuation() const
{
    long best = cfg_->M;
    for (int i = 0; i < cfg_->e; ++i) {
        if (c_[i] == 0) continue;
        long v = long(cfg_->e) * vp(c_[i], cfg_->p) + i;
        best = std::min(best, v);
    }
    return int(best);
}

PadicNum PadicNum::inv() const
{
    if (!is_unit()) throw std::domain_error("PadicNum::inv: not a unit");
    int p = cfg_->p;
    mpz_class c0 = c_[0] % p, pp = p, i0;
    mpz_invert(i0.get_mpz_t(), c0.get_mpz_t(), pp.get_mpz_t());
    PadicNum x(cfg_, i0), two(cfg_, mpz_class(2));
    for (int prec = 1; prec < cfg_->M; prec *= 2) x = x * (two - *this * x);
    x = x * (two - *this * x);
    if (!(*this * x - PadicNum(cfg_, mpz_class(1))).is_zero())
        throw std::logic_error("PadicNum::inv: Newton iteration failed");
    return x;
}

PadicNum PadicNum::div_pi(int k) const
{
    if (valuation() < k) throw std::domain_error("PadicNum::div_pi: not divisible");
    int e = cfg_->e, p = cfg_->p;
    PadicNum r = *this;
    for (int step = 0; step < k; ++step) {
        std::vector<mpz_class> n(e);
        mpz_class c0 = r.c_[0];
        mpz_divexact_ui(c0.get_mpz_t(), c0.get_mpz_t(), p);
        if (e == 1) n[0] = -c0;   // divide by -2
        else {
            for (int i = 0; i + 1 < e; ++i) n[i] = r.c_[i + 1];
            n[e - 1] = -c0;
        }
        r.c_ = std::move(n);
        r.normalize();
    }
    return r;
}

PadicNum PadicNum::div(const PadicNum& b) const
{
    int vb = b.valuation();
    if (vb >= cfg_->M) throw std::domain_error("PadicNum::div: division by zero");
    if (valuation() < vb) throw std::domain_error("PadicNum::div: not exactly divisible");
    return div_pi(vb) * b.div_pi(vb).inv();
}

PadicNum PadicNum::pow(unsigned long e) const
{
    PadicNum r(cfg_, mpz_class(1)), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

PadicNum PadicNum::reduce(int prec) const
{
    auto d = digits();
    for (int i = std::max(prec, 0); i < (int)d.size(); ++i) d[i] = 0;
    return from_digits(cfg_, d);
}

std::vector<int> PadicNum::digits() const
{
    int M = cfg_->M, p = cfg_->p;
    std::vector<int> d(M, 0);
    PadicNum r = *this;
    for (int i = 0; i < M; ++i) {
        mpz_class t;
        mpz_fdiv_r_ui(t.get_mpz_t(), r.c_[0].get_mpz_t(), p);
        d[i] = (int)t.get_si();
        r.c_[0] -= t;
        if (i + 1 < M) r = r.div_pi(1);
    }
    return d;
}

std::string PadicNum::str() const
{
    std::ostringstream os;
    auto d = digits();
    os << "[";
    for (size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
    os << "] (p=" << cfg_->p << ", M=" << cfg_->M << ")";
    return os.str();
}

// ---------------------------------------------------------------- KNum

KNum::KNum(int p) : p_(p), c_(p - 1, 0) {}
KNum::KNum(int p, const mpq_class& x) : KNum(p) { c_[0] = x; }
KNum::KNum(int p, std::vector<mpq_class> c) : p_(p), c_(std::move(c))
{
    if ((int)c_.size() != p - 1) throw std::invalid_argument("KNum: need p-1 coefficients");
}

KNum KNum::pi(int p)
{
    KNum x(p);
    if (p == 2) x.c_[0] = -2;
    else x.c_[1] = 1;
    return x;
}

KNum KNum::operator+(const KNum& b) const { KNum r = *this; r += b; return r; }
KNum KNum::operator-(const KNum& b) const { KNum r = *this; r -= b; return r; }

KNum& KNum::operator+=(const KNum& b)
{
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
    return *this;
}

KNum& KNum::operator-=(const KNum& b)
{
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
    return *this;
}

KNum KNum::operator-() const
{
    KNum r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

KNum KNum::operator*(const KNum& b) const
{
    int e = p_ - 1;
    KNum r(p_);
    for (int i = 0; i < e; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < e; ++j) {
            if (b.c_[j] == 0) continue;
            int k = i + j;
            if (k < e) r.c_[k] += c_[i] * b.c_[j];
            else r.c_[k - e] -= p_ * (c_[i] * b.c_[j]);
        }
    }
    return r;
}

KNum KNum::operator*(const mpq_class& k) const
{
    KNum r = *this;
    for (auto& x : r.c_) x *= k;
    return r;
}

KNum KNum::operator/(const mpq_class& k) const
{
    if (k == 0) throw std::domain_error("KNum: division by zero");
    KNum r = *this;
    for (auto& x : r.c_) x /= k;
    return r;
}

KNum KNum::inv() const
{
    if (is_zero()) throw std::domain_error("KNum::inv of zero");
    int e = p_ - 1;
    if (e == 1) return KNum(p_, 1 / c_[0]);
    // solve (this * y) = 1 with the multiplication matrix
    std::vector<std::vector<mpq_class>> A(e, std::vector<mpq_class>(e + 1, 0));
    for (int j = 0; j < e; ++j) {
        KNum basis(p_);
        basis.c_[j] = 1;
        KNum col = *this * basis;
        for (int i = 0; i < e; ++i) A[i][j] = col.c_[i];
    }
    A[0][e] = 1;
    for (int c = 0; c < e; ++c) {
        int piv = c;
        while (A[piv][c] == 0) ++piv;
        std::swap(A[piv], A[c]);
        for (int r = 0; r < e; ++r) {
            if (r == c || A[r][c] == 0) continue;
            mpq_class f = A[r][c] / A[c][c];
            for (int k = c; k <= e; ++k) A[r][k] -= f * A[c][k];
        }
    }
    KNum y(p_);
    for (int i = 0; i < e; ++i) y.c_[i] = A[i][e] / A[i][i];
    return y;
}

KNum KNum::operator/(const KNum& b) const { return *this * b.inv(); }

KNum KNum::pow(unsigned long e) const
{
    KNum r(p_, mpq_class(1)), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

bool KNum::is_zero() const
{
    for (auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool KNum::is_rational() const
{
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

long KNum::valuation() const
{
    long best = LONG_MAX, e = p_ - 1;
    for (long i = 0; i < e; ++i) {
        if (c_[i] == 0) continue;
        best = std::min(best, e * vp(c_[i], p_) + i);
    }
    return best;
}

PadicNum KNum::to_padic(const CfgPtr& cfg) const
{
    if (cfg->p != p_) throw std::invalid_argument("KNum::to_padic: prime mismatch");
    if (valuation() < 0) throw std::domain_error("KNum::to_padic: negative valuation");
    std::vector<mpz_class> c(p_ - 1);
    for (int i = 0; i < p_ - 1; ++i) {
        mpz_class den = c_[i].get_den(), inv;
        if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), cfg->mod[i].get_mpz_t())) {
            if (cfg->mod[i] == 1) { c[i] = 0; continue; }
            throw std::domain_error("KNum::to_padic: denominator not a unit");
        }
        c[i] = c_[i].get_num() * inv;
    }
    return PadicNum(cfg, std::move(c));
}

std::string KNum::str() const
{
    std::ostringstream os;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << " + ";
        os << c_[i].get_str();
        if (i) os << "*pi" << (i > 1 ? "^" + std::to_string(i) : "");
    }
    return os.str();
}

KNum knum_from_padic(const PadicNum& x)
{
    std::vector<mpq_class> c;
    for (auto& z : x.coeffs()) c.emplace_back(z);
    return KNum(x.p(), std::move(c));
}

PMat to_padic(const KMat& m, const CfgPtr& cfg)
{
    PMat r(m.r, PadicNum(cfg));
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].to_padic(cfg);
    return r;
}

// ---------------------------------------------------------------- series

PSeries series_add(const PSeries& f, const PSeries& g)
{
    int D = std::min(f.D(), g.D());
    PSeries r;
    for (int k = 0; k < D; ++k) r.c.push_back(f.c[k] + g.c[k]);
    return r;
}

PSeries series_mul(const PSeries& f, const PSeries& g)
{
    int D = std::min(f.D(), g.D());
    if (D == 0) return {};
    PSeries r;
    r.c.assign(D, PadicNum(f.c[0].cfg()));
    for (int i = 0; i < D; ++i)
        for (int j = 0; i + j < D; ++j) r.c[i + j] += f.c[i] * g.c[j];
    return r;
}

PSeries series_compose_xp(const PSeries& f)
{
    if (f.c.empty()) return f;
    int p = f.c[0].p();
    PSeries r;
    r.c.assign(f.D(), PadicNum(f.c[0].cfg()));
    for (int k = 0; k * p < f.D(); ++k) r.c[k * p] = f.c[k];
    return r;
}

PSeries series_delta(const PSeries& f)
{
    PSeries r = f;
    for (int k = 0; k < f.D(); ++k) r.c[k] = f.c[k] * PadicNum(f.c[k].cfg(), mpz_class(k));
    return r;
}

PSeriesMat series_add(const PSeriesMat& f, const PSeriesMat& g)
{
    int D = std::min(f.D(), g.D());
    PSeriesMat r;
    for (int k = 0; k < D; ++k) r.c.push_back(f.c[k] + g.c[k]);
    return r;
}

PSeriesMat series_sub(const PSeriesMat& f, const PSeriesMat& g)
{
    int D = std::min(f.D(), g.D());
    PSeriesMat r;
    for (int k = 0; k < D; ++k) r.c.push_back(f.c[k] - g.c[k]);
    return r;
}

PSeriesMat series_mul(const PSeriesMat& f, const PSeriesMat& g)
{
    int D = std::min(f.D(), g.D());
    if (D == 0) return {};
    PMat z(f.c[0].r, PadicNum(f.c[0].a[0].cfg()));
    PSeriesMat r;
    r.c.assign(D, z);
    for (int i = 0; i < D; ++i)
        for (int j = 0; i + j < D; ++j) r.c[i + j] = r.c[i + j] + f.c[i] * g.c[j];
    return r;
}

PSeriesMat series_compose_xp(const PSeriesMat& f)
{
    if (f.c.empty()) return f;
    int p = f.c[0].a[0].p();
    PMat z(f.c[0].r, PadicNum(f.c[0].a[0].cfg()));
    PSeriesMat r;
    r.c.assign(f.D(), z);
    for (int k = 0; k * p < f.D(); ++k) r.c[k * p] = f.c[k];
    return r;
}

PSeriesMat series_delta(const PSeriesMat& f)
{
    PSeriesMat r = f;
    for (int k = 0; k < f.D(); ++k) {
        PadicNum kk(f.c[k].a[0].cfg(), mpz_class(k));
        for (auto& x : r.c[k].a) x = x * kk;
    }
    return r;
}

PadicNum series_eval(const PSeries& f, const PadicNum& x)
{
    PadicNum acc(x.cfg());
    for (int k = f.D() - 1; k >= 0; --k) acc = acc * x + f.c[k];
    return acc;
}

PMat series_eval(const PSeriesMat& f, const PadicNum& x)
{
    PMat acc(f.c.at(0).r, PadicNum(x.cfg()));
    for (int k = f.D() - 1; k >= 0; --k) {
        for (auto& y : acc.a) y = y * x;
        acc = acc + f.c[k];
    }
    return acc;
}

// ---------------------------------------------------------------- lifts

PadicNum teichmuller(ff::FqElem a, const CfgPtr& cfg)
{
    if (a.F->s != 1) throw std::invalid_argument("teichmuller: prime field elements only");
    if (a.F->p != cfg->p) throw std::invalid_argument("teichmuller: prime mismatch");
    PadicNum x(cfg, mpz_class(ff::teichmuller_digit(a)));
    if (x.is_zero()) return x;
    for (int it = 0; it <= cfg->M + 1; ++it) {
        PadicNum y = x.pow(cfg->p);
        if (y == x) return x;
        x = y;
    }
    throw std::logic_error("teichmuller: no fixed point");
}

std::vector<KNum> dwork_theta_coeffs(int p, int K)
{
    // theta' = pi (1 - p x^{p-1}) theta:  (k+1) l_{k+1} = pi l_k - p pi l_{k+1-p}
    KNum pi_ = KNum::pi(p);
    std::vector<KNum> l;
    l.emplace_back(p, mpq_class(1));
    for (int k = 0; k + 1 < K; ++k) {
        KNum t = pi_ * l[k];
        if (k + 1 - p >= 0) t -= pi_ * l[k + 1 - p] * mpq_class(p);
        l.push_back(t / mpq_class(k + 1));
    }
    return l;
}

PadicNum zeta(const CfgPtr& cfg)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, PadicNum> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto key = std::make_pair(cfg->p, cfg->M);
    auto it = cache.find(key);
    if (it != cache.end()) return PadicNum(cfg, it->second.coeffs());
    int p = cfg->p;
    // ord_p of the k-th coefficient is at least k(p-1)/p^2, i.e. k(p-1)^2/p^2 in pi-digits
    long K = 1;
    while (K * (p - 1) * (p - 1) < long(cfg->M + 1) * p * p) ++K;
    auto l = dwork_theta_coeffs(p, int(K) + 1);
    KNum s(p);
    for (auto& x : l) s += x;
    PadicNum z = s.to_padic(cfg);
    // Phi_p(z) must vanish
    PadicNum phi(cfg), one(cfg, mpz_class(1)), zp = one;
    for (int i = 0; i < p; ++i) { phi += zp; zp = zp * z; }
    if (!phi.is_zero()) throw std::logic_error("zeta: cyclotomic residual nonzero");
    cache.emplace(key, z);
    return z;
}

PadicNum embed_zeta(const cyc::CycInt& c, const CfgPtr& cfg)
{
    if (c.m() != cfg->p) throw std::invalid_argument("embed_zeta: m must equal p");
    if (cfg->M < 2) throw std::invalid_argument("embed_zeta: need M >= 2");
    PadicNum z = zeta(cfg), acc(cfg);
    for (int i = c.m() - 2; i >= 0; --i) acc = acc * z + PadicNum(cfg, c.coeffs()[i]);
    return acc;
}

void to_json(nlohmann::json& j, const PadicNum& x)
{
    j = nlohmann::json{{"p", x.p()}, {"M", x.cfg()->M}, {"digits", x.digits()}};
}

}  // namespace padic
