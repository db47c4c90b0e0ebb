#include "doctest.h"

#include <random>

#include "frobkit/ff.hpp"

using namespace ff;

namespace {

// schoolbook product mod the field modulus, the oracle for Field::mul
uint32_t slow_mul(const Field& F, uint32_t a, uint32_t b)
{
    std::vector<int> x(F.s), y(F.s), z(2 * F.s, 0);
    for (int i = 0; i < F.s; ++i) { x[i] = a % F.p; a /= F.p; y[i] = b % F.p; b /= F.p; }
    for (int i = 0; i < F.s; ++i)
        for (int j = 0; j < F.s; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % F.p;
    for (int d = 2 * F.s - 1; d >= F.s; --d) {
        int c = z[d];
        if (!c) continue;
        for (int i = 0; i <= F.s; ++i) z[d - F.s + i] = ((z[d - F.s + i] - c * F.modulus[i]) % F.p + F.p) % F.p;
    }
    uint32_t r = 0;
    for (int i = F.s - 1; i >= 0; --i) r = r * F.p + z[i];
    return r;
}

}  // namespace

TEST_CASE("field tables agree with polynomial arithmetic")
{
    for (auto [p, s] : std::vector<std::pair<int, int>>{{2, 1}, {2, 4}, {3, 2}, {5, 2}, {7, 1}, {2, 6}}) {
        auto F = make_field(p, s);
        CHECK(F->q == uint32_t(std::pow(p, s)));
        for (uint32_t a = 0; a < F->q; ++a)
            for (uint32_t b = 0; b < F->q; b += 1 + F->q / 17) CHECK(F->mul(a, b) == slow_mul(*F, a, b));
        for (uint32_t a = 1; a < F->q; ++a) CHECK(F->mul(a, F->inv(a)) == 1);
    }
}

TEST_CASE("trace is additive and Frobenius invariant; norm is multiplicative")
{
    auto F = make_field(3, 4);
    std::mt19937 rng(1);
    for (int it = 0; it < 500; ++it) {
        uint32_t a = rng() % F->q, b = rng() % F->q;
        CHECK(F->trace(F->add(a, b)) == (F->trace(a) + F->trace(b)) % 3);
        CHECK(F->trace(F->frob(a)) == F->trace(a));
        if (a && b) CHECK(F->norm(F->mul(a, b), 2) == F->mul(F->norm(a, 2), F->norm(b, 2)));
    }
    // norm to the prime field lands in F_p
    for (uint32_t a = 1; a < F->q; ++a) CHECK(F->norm(a, 1) < 3u);
}

TEST_CASE("modulus choice and generator are canonical")
{
    auto F = make_field(2, 3);
    CHECK(F->modulus == Poly{1, 1, 0, 1});
    CHECK(poly_irreducible(F->modulus, 2));
    CHECK_FALSE(poly_irreducible(Poly{1, 0, 1}, 2));
    CHECK_THROWS(make_field(4, 1));
    CHECK_THROWS(make_field(2, 3, Poly{1, 0, 0, 1}));
    auto G = make_field(2, 3, Poly{1, 0, 1, 1});
    CHECK(G->q == 8u);
    auto u = units(*F);
    CHECK(u.size() == 7u);
    std::vector<bool> seen(8, false);
    for (auto& x : u) { CHECK_FALSE(seen[x.v]); seen[x.v] = true; }
}

TEST_CASE("quadratic character is multiplicative")
{
    auto F = make_field(5, 2);
    for (uint32_t a = 1; a < F->q; ++a)
        for (uint32_t b = 1; b < F->q; ++b) CHECK(F->quad(F->mul(a, b)) == F->quad(a) * F->quad(b));
    int tot = 0;
    for (uint32_t a = 1; a < F->q; ++a) tot += F->quad(a);
    CHECK(tot == 0);
}

TEST_CASE("embedding is a ring homomorphism")
{
    auto S = make_field(3, 2), B = make_field(3, 4);
    auto e = embedding(*S, *B);
    for (uint32_t a = 0; a < S->q; ++a)
        for (uint32_t b = 0; b < S->q; ++b) {
            CHECK(e[S->add(a, b)] == B->add(e[a], e[b]));
            CHECK(e[S->mul(a, b)] == B->mul(e[a], e[b]));
        }
}
