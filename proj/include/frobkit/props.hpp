#pragma once
// Randomized ring and valuation checks shared by the unit tests and the acceptance run.

#include <random>
#include <string>

#include "frobkit/cyc.hpp"
#include "frobkit/padic.hpp"

namespace props {

struct Tally {
    long cases = 0, failures = 0;
    std::string first;
    void check(bool ok, const std::string& what)
    {
        ++cases;
        if (!ok && failures++ == 0) first = what;
    }
};

// v_lambda via the lambda-power basis: zeta = 1 - lambda, then
// v = min_k (k + (m-1) v_m(b_k)) since the k are distinct mod m-1.
inline long lambda_val_oracle(const cyc::CycInt& a)
{
    int m = a.m();
    std::vector<mpz_class> b(m - 1, 0);
    for (int i = 0; i < m - 1; ++i) {
        mpz_class binom = 1;
        for (int k = 0; k <= i; ++k) {
            mpz_class t = a.coeffs()[i] * binom;
            if (k & 1) b[k] -= t; else b[k] += t;
            binom = binom * (i - k) / (k + 1);
        }
    }
    long best = -1;
    for (int k = 0; k < m - 1; ++k) {
        if (b[k] == 0) continue;
        long v = k + long(m - 1) * padic::vp(b[k], m);
        if (best < 0 || v < best) best = v;
    }
    return best;   // -1 for zero
}

inline cyc::CycInt random_cyc(std::mt19937_64& rng, int m, int range)
{
    std::vector<mpz_class> c(m - 1);
    for (auto& x : c) x = long(rng() % (2 * range + 1)) - range;
    // sprinkle in extra powers of m so high valuations occur
    if (rng() % 3 == 0) for (auto& x : c) x *= m;
    return cyc::CycInt(m, c);
}

inline Tally cyc_invariants(long n, uint64_t seed)
{
    Tally t;
    std::mt19937_64 rng(seed);
    const int primes[] = {2, 3, 5, 7};
    for (long it = 0; it < n; ++it) {
        int m = primes[rng() % 4];
        auto a = random_cyc(rng, m, 9), b = random_cyc(rng, m, 9), c = random_cyc(rng, m, 9);
        t.check((a * b) * c == a * (b * c), "associativity");
        t.check(a * (b + c) == a * b + a * c, "distributivity");
        t.check(a * b == b * a, "commutativity");
        t.check(a - a == cyc::CycInt(m), "additive inverse");
        auto ea = a.embed(1), eb = b.embed(1), eab = (a * b).embed(1);
        t.check(std::abs(eab - ea * eb) <= 1e-7 * (1 + std::abs(ea) * std::abs(eb)), "embedding multiplicative");
        if (m > 2) t.check((a * b).galois(2) == a.galois(2) * b.galois(2), "galois homomorphism");
        auto lv = cyc::lambda_valuation(a);
        long ora = lambda_val_oracle(a);
        if (ora < 0) t.check(lv.infinite, "zero valuation");
        else t.check(!lv.infinite && lv.count == ora, "lambda valuation vs oracle");
        if (!a.is_zero() && !b.is_zero()) {
            auto lab = cyc::lambda_valuation(a * b);
            t.check(lab.count == lv.count + cyc::lambda_valuation(b).count, "valuation additive");
        }
        mpz_class k = long(rng() % 5) + 2;
        auto d = (a * k).div_exact(k);
        t.check(d && *d == a, "exact division");
    }
    return t;
}

inline Tally padic_invariants(long n, uint64_t seed)
{
    Tally t;
    std::mt19937_64 rng(seed);
    const int primes[] = {2, 3, 5};
    for (long it = 0; it < n; ++it) {
        int p = primes[rng() % 3];
        int M = 8 + int(rng() % 16);
        auto cfg = padic::make_cfg(p, M);
        auto rnd = [&] {
            std::vector<int> d(M);
            int lead = int(rng() % 4);
            for (int i = 0; i < M; ++i) d[i] = i < lead ? 0 : int(rng() % p);
            return padic::PadicNum::from_digits(cfg, d);
        };
        auto a = rnd(), b = rnd(), c = rnd();
        t.check((a * b) * c == a * (b * c), "padic associativity");
        t.check(a * (b + c) == a * b + a * c, "padic distributivity");
        t.check(padic::PadicNum::from_digits(cfg, a.digits()) == a, "digit roundtrip");
        int va = a.valuation(), vb = b.valuation();
        if (va + vb < M) t.check((a * b).valuation() == va + vb, "padic valuation additive");
        t.check((a + b).valuation() >= std::min(va, vb), "ultrametric");
        if (a.is_unit()) t.check(a * a.inv() == padic::PadicNum(cfg, 1), "unit inverse");
        if (va < M) {
            auto x = a.div_pi(va);
            t.check(x.is_unit(), "div_pi unit part");
        }
        auto ka = padic::knum_from_padic(a), kb = padic::knum_from_padic(b);
        t.check((ka * kb).to_padic(cfg) == a * b, "KNum reduction is a homomorphism");
        t.check(ka.valuation() == (va >= M ? ka.valuation() : va), "KNum valuation");
    }
    return t;
}

}  // namespace props
