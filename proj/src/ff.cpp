#include "frobkit/ff.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ff {

bool is_prime(long n)
{
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<long> prime_factors(long n)
{
    std::vector<long> out;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

namespace {

int md(long a, int p) { a %= p; return int(a < 0 ? a + p : a); }

void trim(Poly& f)
{
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly pmul(const Poly& a, const Poly& b, int p)
{
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    trim(r);
    return r;
}

// remainder of a by monic-or-not f
Poly pmod(Poly a, const Poly& f, int p)
{
    trim(a);
    int df = int(f.size()) - 1;
    long lead_inv = 1;
    for (long e = p - 2, b = f.back(); e > 0; e >>= 1, b = b * b % p)
        if (e & 1) lead_inv = lead_inv * b % p;
    while ((int)a.size() - 1 >= df && !a.empty()) {
        int shift = int(a.size()) - 1 - df;
        long c = a.back() * lead_inv % p;
        for (int i = 0; i <= df; ++i)
            a[shift + i] = md(a[shift + i] - c * f[i], p);
        trim(a);
    }
    return a;
}

Poly pgcd(Poly a, Poly b, int p)
{
    trim(a); trim(b);
    while (!b.empty()) {
        Poly r = pmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Poly ppowmod(Poly base, uint64_t e, const Poly& f, int p)
{
    Poly r{1};
    base = pmod(base, f, p);
    while (e) {
        if (e & 1) r = pmod(pmul(r, base, p), f, p);
        base = pmod(pmul(base, base, p), f, p);
        e >>= 1;
    }
    return r;
}

Poly decode(uint32_t c, int p, int s)
{
    Poly f(s, 0);
    for (int i = 0; i < s; ++i) { f[i] = int(c % p); c /= p; }
    trim(f);
    return f;
}

uint32_t encode(const Poly& f, int p)
{
    uint32_t c = 0;
    for (int i = int(f.size()) - 1; i >= 0; --i) c = c * p + f[i];
    return c;
}

}  // namespace

bool poly_irreducible(const Poly& f0, int p)
{
    Poly f = f0;
    trim(f);
    int s = int(f.size()) - 1;
    if (s < 1) return false;
    if (s == 1) return true;
    Poly x{0, 1};
    Poly xp = x;
    for (int k = 1; k < s; ++k) {
        xp = ppowmod(xp, p, f, p);
        Poly d = xp;
        d.resize(std::max<size_t>(d.size(), 2), 0);
        d[1] = md(d[1] - 1, p);
        trim(d);
        if (pgcd(f, d, p).size() > 1) return false;
    }
    xp = ppowmod(xp, p, f, p);
    return xp == pmod(x, f, p);
}

uint32_t Field::add(uint32_t a, uint32_t b) const
{
    if (p == 2) return a ^ b;
    uint32_t r = 0, m = 1;
    while (a || b) {
        uint32_t d = (a % p + b % p) % p;
        r += d * m;
        m *= p; a /= p; b /= p;
    }
    return r;
}

uint32_t Field::neg(uint32_t a) const
{
    if (p == 2) return a;
    uint32_t r = 0, m = 1;
    while (a) {
        uint32_t d = a % p;
        r += ((p - d) % p) * m;
        m *= p; a /= p;
    }
    return r;
}

uint32_t Field::sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

uint32_t Field::mul(uint32_t a, uint32_t b) const
{
    if (!a || !b) return 0;
    uint64_t e = uint64_t(log_[a]) + log_[b];
    if (e >= q - 1) e -= q - 1;
    return exp_[e];
}

uint32_t Field::inv(uint32_t a) const
{
    if (!a) throw std::domain_error("inverse of zero in F_q");
    uint32_t l = log_[a];
    return exp_[l ? q - 1 - l : 0];
}

uint32_t Field::pow(uint32_t a, uint64_t e) const
{
    if (e == 0) return 1;
    if (!a) return 0;
    return exp_[(uint64_t(log_[a]) * (e % (q - 1))) % (q - 1)];
}

uint32_t Field::from_int(long c) const { return uint32_t(md(c, p)); }

uint32_t Field::norm(uint32_t a, int t) const
{
    if (t <= 0 || s % t) throw std::invalid_argument("norm: subfield degree must divide s");
    uint64_t pt = 1;
    for (int i = 0; i < t; ++i) pt *= p;
    return pow(a, (q - 1) / (pt - 1));
}

int Field::quad(uint32_t a) const
{
    if (p == 2) throw std::invalid_argument("quadratic character needs odd q");
    if (!a) return 0;
    return (log_[a] & 1) ? -1 : 1;
}

std::string Field::describe() const
{
    std::ostringstream os;
    os << "F_" << q << " (p=" << p << ", s=" << s << ")";
    return os.str();
}

FieldPtr make_field(int p, int s, const Poly& modulus)
{
    if (!is_prime(p)) throw std::invalid_argument("make_field: p must be prime");
    if (s < 1) throw std::invalid_argument("make_field: s must be >= 1");
    uint64_t q = 1;
    for (int i = 0; i < s; ++i) {
        q *= p;
        if (q > (1u << 20)) throw std::invalid_argument("make_field: q exceeds 2^20");
    }
    auto F = std::make_shared<Field>();
    F->p = p; F->s = s; F->q = uint32_t(q);

    if (!modulus.empty()) {
        Poly f = modulus;
        trim(f);
        if ((int)f.size() != s + 1 || f.back() != 1)
            throw std::invalid_argument("make_field: modulus must be monic of degree s");
        for (int c : f)
            if (c < 0 || c >= p) throw std::invalid_argument("make_field: coefficients must lie in [0,p)");
        if (s > 1 && !poly_irreducible(f, p))
            throw std::invalid_argument("make_field: modulus is reducible");
        F->modulus = f;
    } else if (s == 1) {
        F->modulus = {0, 1};
    } else {
        for (uint32_t c = 0; c < q; ++c) {
            Poly f(s + 1, 0);
            uint32_t t = c;
            for (int i = 0; i < s; ++i) { f[i] = int(t % p); t /= p; }
            f[s] = 1;
            if (f[0] == 0) continue;
            if (poly_irreducible(f, p)) { F->modulus = f; break; }
        }
    }

    // primitive element, smallest code
    const Poly& f = F->modulus;
    auto facs = prime_factors(long(q - 1));
    for (uint32_t c = 1; c < q; ++c) {
        Poly g = decode(c, p, s);
        bool ok = true;
        for (long l : facs) {
            Poly r = ppowmod(g, (q - 1) / l, f, p);
            if (r == Poly{1}) { ok = false; break; }
        }
        if (ok) { F->gen = c; break; }
    }
    if (q == 2) F->gen = 1;

    F->exp_.assign(q - 1, 0);
    F->log_.assign(q, 0);
    Poly g = decode(F->gen, p, s), cur{1};
    for (uint32_t i = 0; i < q - 1; ++i) {
        uint32_t code = encode(cur, p);
        F->exp_[i] = code;
        F->log_[code] = i;
        cur = pmod(pmul(cur, g, p), f, p);
    }
    F->zech_.assign(q - 1, 0);
    for (uint32_t i = 0; i < q - 1; ++i) {
        uint32_t v = F->add(1, F->exp_[i]);
        F->zech_[i] = v ? F->log_[v] : q - 1;
    }
    F->tr_.assign(q, 0);
    for (uint32_t x = 1; x < q; ++x) {
        uint32_t acc = 0;
        uint64_t l = F->log_[x];
        for (int i = 0; i < s; ++i) {
            acc = F->add(acc, F->exp_[l]);
            l = (l * p) % (q - 1);
        }
        if (acc >= uint32_t(p)) throw std::logic_error("trace left the prime field");
        F->tr_[x] = uint8_t(acc);
    }
    return F;
}

std::vector<int> FqElem::coeffs() const
{
    std::vector<int> c(F->s, 0);
    uint32_t t = v;
    for (int i = 0; i < F->s; ++i) { c[i] = int(t % F->p); t /= F->p; }
    return c;
}

FqElem trace(FqElem x) { return {x.F, uint32_t(x.F->trace(x.v))}; }

FqElem norm(FqElem x, int t) { return {x.F, x.F->norm(x.v, t)}; }

std::vector<FqElem> units(const Field& F)
{
    std::vector<FqElem> out;
    out.reserve(F.q - 1);
    for (uint32_t i = 0; i < F.q - 1; ++i) out.emplace_back(&F, F.exp_[i]);
    return out;
}

int teichmuller_digit(FqElem x)
{
    if (x.F->s != 1) throw std::invalid_argument("teichmuller_digit: prime field only");
    return int(x.v);
}

std::vector<uint32_t> embedding(const Field& small, const Field& big)
{
    if (small.p != big.p || big.s % small.s)
        throw std::invalid_argument("embedding: not a subfield");
    uint32_t beta = big.q;
    for (uint32_t c = 0; c < big.q && beta == big.q; ++c) {
        uint32_t acc = 0;
        for (int i = small.s; i >= 0; --i)
            acc = big.add(big.mul(acc, c), big.from_int(small.modulus[i]));
        if (!acc) beta = c;
    }
    if (beta == big.q) throw std::logic_error("embedding: no root found");
    std::vector<uint32_t> map(small.q, 0);
    for (uint32_t x = 0; x < small.q; ++x) {
        uint32_t acc = 0, t = x;
        std::vector<int> d(small.s);
        for (int i = 0; i < small.s; ++i) { d[i] = int(t % small.p); t /= small.p; }
        for (int i = small.s - 1; i >= 0; --i)
            acc = big.add(big.mul(acc, beta), big.from_int(d[i]));
        map[x] = acc;
    }
    return map;
}

void to_json(nlohmann::json& j, const Field& F)
{
    j = nlohmann::json{{"p", F.p}, {"s", F.s}, {"modulus", F.modulus}};
}

}  // namespace ff
