#include "frobkit/dwork.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "frobkit/lfun.hpp"

namespace dwork {

using padic::PadicNum;
using padic::vp;

const mpq_class& CoeffSeq::operator()(long r) const
{
    if (r < 0) throw std::invalid_argument("CoeffSeq: negative index");
    while (long(cache_.size()) <= r) {
        mpq_class v = f_(long(cache_.size()));
        v.canonicalize();
        cache_.push_back(v);
    }
    return cache_[r];
}

std::vector<mpq_class> CoeffSeq::prefix(long len) const
{
    std::vector<mpq_class> out;
    out.reserve(len);
    for (long r = 0; r < len; ++r) out.push_back((*this)(r));
    return out;
}

namespace {

mpz_class fact(long r)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), r);
    return f;
}

mpz_class pow2(unsigned long e)
{
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), 2, e);
    return t;
}

mpz_class pow_z(const mpz_class& b, unsigned long e)
{
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), b.get_mpz_t(), e);
    return t;
}

mpz_class double_fact_odd(long r)   // (2r-1)!!
{
    mpz_class t = 1;
    for (long k = 1; k <= 2 * r - 1; k += 2) t *= k;
    return t;
}

long val(const mpq_class& x, int p) { return vp(x, p); }

std::string vstr(long v) { return v == LONG_MAX ? std::string("inf") : std::to_string(v); }

// x mod m for a p-integral rational
mpz_class to_mod(const mpq_class& x, const mpz_class& m)
{
    mpz_class d = x.get_den(), inv;
    if (!mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t()))
        throw std::domain_error("to_mod: denominator not invertible");
    mpz_class r = (x.get_num() * inv) % m;
    if (r < 0) r += m;
    return r;
}

mpz_class p_pow(int p, long k)
{
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), p, k < 0 ? 0 : k);
    return t;
}

using Ser = std::vector<mpz_class>;

void red(Ser& a, const mpz_class& m)
{
    for (auto& x : a) {
        x %= m;
        if (x < 0) x += m;
    }
}

Ser ser_mul(const Ser& a, const Ser& b, size_t L, const mpz_class& m)
{
    Ser c(L, 0);
    for (size_t i = 0; i < a.size() && i < L; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && i + j < L; ++j) c[i + j] += a[i] * b[j];
    }
    red(c, m);
    return c;
}

// 1/a with a[0] a unit
Ser ser_inv(const Ser& a, size_t L, const mpz_class& m)
{
    Ser c(L, 0);
    mpz_class i0;
    if (!mpz_invert(i0.get_mpz_t(), a[0].get_mpz_t(), m.get_mpz_t()))
        throw std::domain_error("ser_inv: constant term not a unit");
    if (L == 0) return c;
    c[0] = i0;
    for (size_t k = 1; k < L; ++k) {
        mpz_class s = 0;
        for (size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * c[k - j];
        c[k] = (-s * i0) % m;
        if (c[k] < 0) c[k] += m;
    }
    return c;
}

Ser ser_deriv(const Ser& a)
{
    Ser d;
    for (size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * long(i));
    return d;
}

Ser ser_xp(const Ser& a, int p, size_t L)
{
    Ser c(L, 0);
    for (size_t i = 0; i < a.size() && i * p < L; ++i) c[i * p] = a[i];
    return c;
}

// sum_{j in [lo,hi)} B(j) x^j as a dense series of length L, mod m
Ser window(const CoeffSeq& B, long lo, long hi, size_t L, const mpz_class& m)
{
    Ser c(L, 0);
    for (long j = lo; j < hi && j < long(L); ++j) c[j] = to_mod(B(j), m);
    return c;
}

PadicNum to_padic(const mpq_class& x, const padic::CfgPtr& cfg)
{
    return PadicNum(cfg, mpz_class(x.get_num())).div(PadicNum(cfg, mpz_class(x.get_den())));
}

}  // namespace

CoeffSeq bessel_seq(int n)
{
    const long k = 2 * n + 1;
    return CoeffSeq("bessel(n=" + std::to_string(n) + ")", [k](long r) {
        mpz_class num = pow2(k * r);
        if ((k * r) % 2) num = -num;
        return mpq_class(num, pow_z(fact(r), k));
    });
}

CoeffSeq so_seq(int n)
{
    const long k = 2 * n + 1;
    return CoeffSeq("so(n=" + std::to_string(n) + ")", [k](long r) {
        return mpq_class(pow2(k * r) * double_fact_odd(r), pow_z(fact(r), k));
    });
}

CoeffSeq gl_ode_seq(int n)
{
    return CoeffSeq("gl-ode(n=" + std::to_string(n) + ")", [n](long r) {
        return mpq_class(pow2(long(n) * r), pow_z(fact(r), n));
    });
}

CoeffSeq delta_seq()
{
    return CoeffSeq("delta", [](long r) { return mpq_class(r == 0 ? 1 : 0); });
}

// ---------------------------------------------------------------- conditions

bool ConditionReport::u_matches(int i, const std::function<int(long)>& sign) const
{
    bool any = false;
    for (auto& [key, signs] : u) {
        if (key.first != i) continue;
        any = true;
        if (!signs.count(sign(key.second))) return false;
    }
    return any;
}

nlohmann::json ConditionReport::to_json() const
{
    nlohmann::json j;
    j["p"] = p;
    j["R"] = R;
    j["Smax"] = Smax;
    j["sequences"] = labels;
    j["variant"] = cprime ? "c'" : "c";
    j["conditions"] = {{"a", a}, {"b", b}, {cprime ? "c'" : "c", c}, {"d", d}, {"e", e}, {"integral", integral}};
    j["checked"] = checked;
    j["pass"] = pass();
    nlohmann::json uj = nlohmann::json::array();
    for (auto& [key, signs] : u)
        uj.push_back({{"i", key.first}, {"m", key.second}, {"u", std::vector<int>(signs.begin(), signs.end())}});
    j["u_pattern"] = uj;
    j["counterexamples"] = counterexamples;
    return j;
}

std::string ConditionReport::to_csv() const
{
    std::ostringstream o;
    o << "condition,status\n";
    o << "a," << (a ? "pass" : "fail") << "\n";
    o << "b," << (b ? "pass" : "fail") << "\n";
    o << (cprime ? "c'" : "c") << "," << (c ? "pass" : "fail") << "\n";
    o << "d," << (d ? "pass" : "fail") << "\n";
    o << "e," << (e ? "pass" : "fail") << "\n";
    o << "integral," << (integral ? "pass" : "fail") << "\n";
    if (!u.empty()) {
        o << "\ni,m,u\n";
        for (auto& [key, signs] : u) {
            o << key.first << "," << key.second << ",";
            bool first = true;
            for (int sg : signs) {
                o << (first ? "" : "|") << (sg > 0 ? "+1" : "-1");
                first = false;
            }
            if (signs.empty()) o << "none";
            o << "\n";
        }
    }
    return o.str();
}

ConditionReport check_conditions(const std::vector<CoeffSeq>& seqs, int p, long R, int Smax, bool cprime)
{
    if (seqs.empty()) throw std::invalid_argument("check_conditions: no sequences");
    if (cprime && p != 2) throw std::invalid_argument("check_conditions: (c') is a 2-adic condition");
    ConditionReport rep;
    rep.p = p;
    rep.R = R;
    rep.Smax = Smax;
    rep.cprime = cprime;
    for (auto& s : seqs) rep.labels.push_back(s.label());
    const int K = int(seqs.size());
    auto B = [&](int i, long r) -> const mpq_class& { return seqs[i % K](r); };
    auto fail = [&](const std::string& msg) {
        if (rep.counterexamples.size() < 20) rep.counterexamples.push_back(msg);
    };

    rep.a = rep.d = rep.integral = true;
    for (int i = 0; i < K; ++i) {
        if (val(B(i, 0), p) != 0) {
            rep.a = false;
            fail("(a) i=" + std::to_string(i) + ": v(B(0))=" + vstr(val(B(i, 0), p)));
        }
        if (B(i, 0) != 1) rep.d = false;
        for (long r = 0; r <= R; ++r)
            if (B(i, r) != 0 && val(B(i, r), p) < 0) {
                rep.integral = false;
                fail("integrality i=" + std::to_string(i) + " r=" + std::to_string(r) + ": v=" + vstr(val(B(i, r), p)));
                break;
            }
    }
    // period K by construction; compare B^{(i)} with B^{(i+K)} through the same indexing used below
    rep.e = true;
    for (int i = 0; i < K; ++i)
        for (long r = 0; r <= std::min(R, 32L); ++r)
            if (B(i, r) != B(i + K, r)) rep.e = false;

    rep.b = true;
    for (int i = 0; i < K; ++i)
        for (long n = 0; n * p <= R; ++n)
            for (int a = 0; a < p && a + n * p <= R; ++a) {
                const mpq_class& den = B(i + 1, n);
                ++rep.checked;
                if (den == 0) continue;   // vacuous
                mpq_class q = B(i, a + n * p) / den;
                if (q != 0 && val(q, p) < 0) {
                    rep.b = false;
                    fail("(b) i=" + std::to_string(i) + " a=" + std::to_string(a) + " n=" + std::to_string(n) +
                         ": v=" + vstr(val(q, p)));
                }
            }

    rep.c = true;
    for (int i = 0; i < K; ++i)
        for (int s = 0; s <= Smax; ++s) {
            const long ps = long(p_pow(p, s).get_si()), ps1 = ps * p;
            if (ps1 > R) break;
            for (long m = 1; m * ps1 <= R; ++m) {
                std::set<int> ok = {1, -1};
                if (!(cprime && s == 1)) ok = {1};
                for (long n = 0; n * p + m * ps1 <= R; ++n)
                    for (int a = 0; a < p && a + n * p + m * ps1 <= R; ++a) {
                        const mpq_class& d1 = B(i + 1, n + m * ps);
                        const mpq_class& d0 = B(i + 1, n);
                        ++rep.checked;
                        if (d1 == 0 || d0 == 0) continue;
                        mpq_class x = B(i, a + n * p + m * ps1) / d1;
                        mpq_class y = B(i, a + n * p) / d0;
                        for (auto it = ok.begin(); it != ok.end();) {
                            mpq_class diff = x - (*it) * y;
                            long v = diff == 0 ? LONG_MAX : val(diff, p);
                            if (v < s + 1) {
                                if (ok.size() == 1 || !(cprime && s == 1))
                                    fail("(c) i=" + std::to_string(i) + " s=" + std::to_string(s) + " m=" +
                                         std::to_string(m) + " n=" + std::to_string(n) + " a=" + std::to_string(a) +
                                         " u=" + std::to_string(*it) + ": v(diff)=" + vstr(v) + " < " +
                                         std::to_string(s + 1));
                                it = ok.erase(it);
                            } else {
                                ++it;
                            }
                        }
                    }
                if (cprime && s == 1) rep.u[{i, m}] = ok;
                if (ok.empty()) {
                    rep.c = false;
                    if (cprime && s == 1)
                        fail("(c') i=" + std::to_string(i) + " m=" + std::to_string(m) + ": no admissible u");
                }
            }
        }
    return rep;
}

// ---------------------------------------------------------------- product congruence

nlohmann::json CongruenceReport::to_json() const
{
    return {{"pass", pass}, {"checked", checked}, {"counterexamples", counterexamples}};
}

CongruenceReport congruence_theorem_check(const std::vector<CoeffSeq>& seqs, int p, long mmax, int smax, bool modified)
{
    if (seqs.empty()) throw std::invalid_argument("congruence_theorem_check: no sequences");
    CongruenceReport rep;
    const int K = int(seqs.size());
    const CoeffSeq& B0 = seqs[0];
    const CoeffSeq& B1 = seqs[1 % K];
    for (int s = 0; s <= smax; ++s) {
        const long ps = long(p_pow(p, s).get_si()), ps1 = ps * p;
        for (long m = 0; m <= mmax; ++m) {
            const mpq_class& Bm = seqs[(s + 1) % K](m);
            if (Bm == 0) continue;
            const long need = (modified ? s : s + 1) + val(Bm, p);
            const long T = (m + 2) * ps1;
            for (long k = 0; k < T; ++k) {
                // F0(x) F1_{m,s}(x^p)
                mpq_class lhs = 0, rhs = 0;
                for (long j = m * ps; j < (m + 1) * ps && p * j <= k; ++j) lhs += B0(k - p * j) * B1(j);
                // F0_{m,s+1}(x) F1(x^p)
                for (long i = m * ps1; i < (m + 1) * ps1 && i <= k; ++i)
                    if ((k - i) % p == 0) rhs += B0(i) * B1((k - i) / p);
                mpq_class diff = lhs - rhs;
                ++rep.checked;
                if (diff != 0 && val(diff, p) < need) {
                    rep.pass = false;
                    if (rep.counterexamples.size() < 20)
                        rep.counterexamples.push_back("s=" + std::to_string(s) + " m=" + std::to_string(m) +
                                                      " x^" + std::to_string(k) + ": v=" + vstr(val(diff, p)) +
                                                      " < " + std::to_string(need));
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- unit-root function

std::optional<mpz_class> UnitRootFn::eval(int s, const mpz_class& x) const
{
    const long K = s - delta;
    if (K <= 0) return mpz_class(0);
    const mpz_class m = p_pow(p, K);
    const long ps = long(p_pow(p, s).get_si());
    mpz_class xm = x % m;
    if (xm < 0) xm += m;
    mpz_class xp;
    mpz_powm_ui(xp.get_mpz_t(), xm.get_mpz_t(), p, m.get_mpz_t());
    mpz_class num = 0, den = 0;
    for (long j = ps * p - 1; j >= 0; --j) num = (num * xm + to_mod(B0(j), m)) % m;
    for (long j = ps - 1; j >= 0; --j) den = (den * xp + to_mod(B1(j), m)) % m;
    mpz_class inv;
    if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t())) return std::nullopt;
    mpz_class r = (num * inv) % m;
    if (r < 0) r += m;
    return r;
}

UnitRootFn unit_root_truncations(const CoeffSeq& B0, const CoeffSeq& B1, int p, int Smax, int delta, int degree)
{
    if (B0(0) != 1 || B1(0) != 1) throw std::invalid_argument("unit_root_truncations: B(0) must be 1");
    UnitRootFn U;
    U.p = p;
    U.delta = delta;
    U.degree = degree;
    U.B0 = B0;
    U.B1 = B1;
    const size_t L = size_t(degree);
    for (int s = 1; s <= Smax; ++s) {
        const mpz_class m = p_pow(p, s);
        const long ps = long(p_pow(p, s).get_si());
        Ser Fs1 = window(B0, 0, ps * p, L, m);
        Ser Fs = window(B1, 0, ps, L, m);
        ModSeries f{p, int(std::max(0, s - delta)), p_pow(p, s - delta), {}};
        f.c = ser_mul(Fs1, ser_inv(ser_xp(Fs, p, L), L, m), L, f.mod);
        ModSeries eta{p, s, m, {}};
        Ser Fs1e = window(B0, 0, ps * p, L + 1, m);
        eta.c = ser_mul(ser_deriv(Fs1e), ser_inv(Fs1e, L, m), L, m);
        U.f[s] = std::move(f);
        U.eta[s] = std::move(eta);
    }
    return U;
}

UnitRootChecks unit_root_properties(const UnitRootFn& U, int points, uint64_t seed)
{
    UnitRootChecks c;
    const int p = U.p;
    const size_t L = size_t(U.degree);
    std::mt19937_64 rng(seed);
    for (auto& [s, f] : U.f) {
        const long K = s - U.delta;
        if (K <= 0) continue;
        const mpz_class m = p_pow(p, K);
        if (f.c.empty() || f.c[0] % m != 1 % m) {
            c.f0_is_one = false;
            c.notes.push_back("f(0) != 1 at s=" + std::to_string(s));
        }
        // coherence with the next truncation at random p-adic points (32 base-p digits)
        if (U.f.count(s + 1))
            for (int t = 0; t < points; ++t) {
                mpz_class x = 0;
                for (int d = 0; d < 32; ++d) x = x * p + long(rng() % p);
                auto a = U.eval(s, x), b = U.eval(s + 1, x);
                if (!a || !b) {
                    c.notes.push_back("point excluded (F_1 not a unit) at s=" + std::to_string(s));
                    continue;
                }
                mpz_class d = (*a - *b) % m;
                if (d != 0) {
                    c.coherence = false;
                    c.notes.push_back("truncations s=" + std::to_string(s) + "," + std::to_string(s + 1) +
                                      " disagree mod p^" + std::to_string(K));
                    break;
                }
            }
        // f'/f + p x^{p-1} eta(x^p) - eta(x)
        const Ser& eta = U.eta.at(s).c;
        Ser fl = f.c;
        red(fl, m);
        Ser lhs = ser_mul(ser_deriv(fl), ser_inv(fl, L, m), L - 1, m);
        Ser etap = ser_xp(eta, p, L);
        for (size_t k = 0; k + 1 < L; ++k) {
            mpz_class t = lhs[k] - eta[k];
            if (k + 1 >= size_t(p)) t += p * etap[k + 1 - p];
            if (t % m != 0) {
                c.diff_relation = false;
                c.notes.push_back("differential relation fails at s=" + std::to_string(s) + " x^" + std::to_string(k));
                break;
            }
        }
        // eta against F'/F from the untruncated series
        const size_t Lc = std::min(L, size_t(1) << std::min(s, 20));
        const mpz_class ms = p_pow(p, s);
        Ser Fe = window(U.B0, 0, long(Lc) + 1, Lc + 1, ms);
        Ser logd = ser_mul(ser_deriv(Fe), ser_inv(Fe, Lc, ms), Lc, ms);
        for (size_t k = 0; k < Lc; ++k)
            if ((logd[k] - eta[k]) % m != 0) {
                c.eta_matches = false;
                c.notes.push_back("eta differs from F'/F at s=" + std::to_string(s) + " x^" + std::to_string(k));
                break;
            }
    }
    return c;
}

// ---------------------------------------------------------------- charpoly and unit root

std::vector<PadicNum> charpoly(const padic::PMat& M)
{
    const int r = M.r;
    const auto& cfg = M.a.at(0).cfg();
    const PadicNum zero(cfg), one(cfg, mpz_class(1));
    std::vector<PadicNum> out(r + 1, zero);
    std::vector<int> perm(r);
    for (int i = 0; i < r; ++i) perm[i] = i;
    // det(X - M) by expansion over permutations; entries are polynomials of degree <= 1
    do {
        int inv = 0;
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j)
                if (perm[i] > perm[j]) ++inv;
        std::vector<PadicNum> prod = {one};
        for (int i = 0; i < r; ++i) {
            const int j = perm[i];
            std::vector<PadicNum> next(prod.size() + 1, zero);
            for (size_t k = 0; k < prod.size(); ++k) {
                next[k] -= prod[k] * M(i, j);
                if (i == j) next[k + 1] += prod[k];
            }
            prod = std::move(next);
        }
        for (size_t k = 0; k < prod.size() && k <= size_t(r); ++k) out[k] = inv % 2 ? out[k] - prod[k] : out[k] + prod[k];
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::optional<PadicNum> unit_root(const std::vector<PadicNum>& P)
{
    const int r = int(P.size()) - 1;
    if (r < 1) return std::nullopt;
    int first_unit = -1;
    for (int i = 0; i <= r; ++i)
        if (P[i].is_unit()) {
            first_unit = i;
            break;
        }
    if (first_unit != r - 1) return std::nullopt;
    const auto& cfg = P[0].cfg();
    PadicNum x = -P[r - 1];
    for (int it = 0; it < cfg->M + 4; ++it) {
        PadicNum v(cfg), d(cfg);
        for (int i = r; i >= 0; --i) v = v * x + P[i];
        for (int i = r; i >= 1; --i) d = d * x + P[i] * PadicNum(cfg, mpz_class(i));
        if (v.is_zero()) break;
        x -= v.div(d);
    }
    return x;
}

nlohmann::json CrosscheckReport::to_json() const
{
    return {{"label", label},
            {"a", a},
            {"required_p_digits", required},
            {"unit_root_pi_digits", unit_root_digits},
            {"f_pi_digits", f_digits},
            {"agree_p_digits", agree_p},
            {"unique_unit_root", unique_unit_root},
            {"charpoly_matches_power_sums", charpoly_agree},
            {"charpoly_agree_pi_digits", charpoly_agree_digits},
            {"pass", pass}};
}

CrosscheckReport unit_root_crosscheck(const CoeffSeq& B, const frob::FrobSeries& fs, uint32_t a, int required, int delta)
{
    const auto& cfg = fs.cfg;
    const int p = cfg->p, e = cfg->e;
    CrosscheckReport rep;
    rep.label = fs.spec.label + " vs " + B.label();
    rep.a = a;
    rep.required = required;
    auto F = ff::make_field(p, 1);
    auto pv = frob::frobenius_at_point(fs, ff::FqElem(F.get(), a));
    auto P = charpoly(pv.value);
    const int prec = pv.precision;

    // the same polynomial from exponential sums
    if (fs.spec.group != frob::Group::Hyp) {
        auto fam = fs.spec.group == frob::Group::GL ? lfun::Family::Kl : lfun::Family::SOodd;
        auto ts = lfun::family_power_sums(fam, *F, fs.spec.n, a, fs.spec.r);
        auto Q = lfun::charpoly_from_power_sums(ts, fs.spec.r);
        int agree = prec;
        for (int i = 0; i <= fs.spec.r; ++i)
            agree = std::min(agree, (P[i] - padic::embed_zeta(Q[i], cfg)).valuation());
        rep.charpoly_agree_digits = agree;
        rep.charpoly_agree = agree >= prec;
    }

    auto u = unit_root(P);
    rep.unique_unit_root = bool(u);
    if (!u) return rep;
    const int s = required + delta;
    PadicNum t = padic::teichmuller(ff::FqElem(F.get(), a), cfg);
    PadicNum tp = t.pow(p);
    const long ps = long(p_pow(p, s).get_si());
    PadicNum num(cfg), den(cfg);
    for (long j = ps * p - 1; j >= 0; --j) num = num * t + to_padic(B(j), cfg);
    for (long j = ps - 1; j >= 0; --j) den = den * tp + to_padic(B(j), cfg);
    if (!den.is_unit()) return rep;
    PadicNum f = num.div(den);
    const int digits = std::min(prec, required * e);
    auto dig = [&](const PadicNum& x) {
        auto d = x.digits();
        d.resize(size_t(digits));
        return d;
    };
    rep.unit_root_digits = dig(*u);
    rep.f_digits = dig(f);
    const int v = std::min((*u - f).valuation(), prec);
    rep.agree_p = v / e;
    rep.pass = prec >= required * e && rep.agree_p >= required;
    return rep;
}

// ---------------------------------------------------------------- F/G

nlohmann::json RatioReport::to_json() const
{
    return {{"degree", degree}, {"min_valuation", min_valuation}, {"first_bad", first_bad}, {"stable", stable},
            {"pass", pass()}};
}

namespace {
std::vector<mpq_class> ratio_series(const CoeffSeq& F, const CoeffSeq& G, long D)
{
    std::vector<mpq_class> q(D);
    const mpq_class g0 = G(0);
    if (g0 == 0) throw std::domain_error("ratio_integrality: G(0) = 0");
    for (long k = 0; k < D; ++k) {
        mpq_class s = F(k);
        for (long j = 1; j <= k; ++j) s -= G(j) * q[k - j];
        q[k] = s / g0;
    }
    return q;
}
}  // namespace

RatioReport ratio_integrality(const CoeffSeq& F, const CoeffSeq& G, int p, long D)
{
    RatioReport rep;
    rep.degree = D;
    auto q = ratio_series(F, G, D + 1);
    rep.min_valuation = LONG_MAX;
    for (long k = 0; k <= D; ++k) {
        if (q[k] == 0) continue;
        long v = val(q[k], p);
        rep.min_valuation = std::min(rep.min_valuation, v);
        if (v < 0 && rep.first_bad < 0) rep.first_bad = k;
    }
    // reductions mod p^t from a shorter division agree on the common range
    if (rep.first_bad < 0) {
        auto h = ratio_series(F, G, D / 2 + 1);
        const mpz_class m = p_pow(p, 16);
        for (long k = 0; k <= D / 2; ++k)
            if (to_mod(h[k], m) != to_mod(q[k], m)) rep.stable = false;
    }
    return rep;
}

}  // namespace dwork
