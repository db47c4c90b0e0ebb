#include "doctest.h"

#include <random>

#include "frobkit/dwork.hpp"

using namespace dwork;

namespace {

// exact F(x) = sum_{j<len} B(j) x^j at an integer, no modular arithmetic
mpq_class poly_at(const CoeffSeq& B, long len, const mpz_class& x)
{
    mpq_class s = 0;
    for (long j = len - 1; j >= 0; --j) s = s * x + B(j);
    return s;
}

mpz_class reduce(const mpq_class& q, const mpz_class& m)
{
    mpz_class inv;
    mpz_class den = q.get_den();
    REQUIRE(mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()));
    mpz_class r = (q.get_num() * inv) % m;
    return r < 0 ? r + m : r;
}

int alt(long m) { return m % 2 ? -1 : 1; }

}  // namespace

TEST_CASE("closed forms of the coefficient families")
{
    auto F = bessel_seq(1), G = so_seq(1);
    CHECK(F(0) == 1);
    CHECK(F(1) == -8);
    CHECK(F(2) == 8);   // 64/2!^3
    CHECK(G(1) == 8);
    CHECK(G(2) == 24);
    CHECK(gl_ode_seq(3)(2) == 8);
    CHECK(delta_seq()(0) == 1);
    CHECK(delta_seq()(5) == 0);
    // references stay valid while the cache grows
    const mpq_class& r0 = F(0);
    F(500);
    CHECK(r0 == 1);
}

TEST_CASE("Bessel family satisfies (c') with u(1,m) = (-1)^m")
{
    auto rep = check_conditions({bessel_seq(1)}, 2, 256, 7, true);
    CHECK(rep.pass());
    CHECK(rep.u.size() == 64);
    CHECK(rep.u_matches(0, alt));
    for (auto& [k, signs] : rep.u) CHECK(signs.size() == 1);
    // without the sign twist the same sequence breaks (c)
    CHECK_FALSE(check_conditions({bessel_seq(1)}, 2, 256, 3, false).c);
}

TEST_CASE("mixed pair F, G recovers u(0,1,m) = 1 and u(1,1,m) = (-1)^m")
{
    auto rep = check_conditions({bessel_seq(1), so_seq(1)}, 2, 256, 7, true);
    CHECK(rep.pass());
    CHECK(rep.u_matches(0, [](long) { return 1; }));
    CHECK(rep.u_matches(1, alt));
    CHECK_FALSE(rep.u_matches(1, [](long) { return 1; }));
}

TEST_CASE("SO family satisfies (c) without a twist")
{
    auto rep = check_conditions({so_seq(1)}, 2, 256, 7, false);
    CHECK(rep.pass());
    CHECK(rep.counterexamples.empty());
    CHECK(check_conditions({so_seq(2)}, 2, 128, 6, false).pass());
}

TEST_CASE("degenerate delta sequence")
{
    auto rep = check_conditions({delta_seq()}, 2, 64, 3, false);
    CHECK(rep.a);
    CHECK(rep.d);
    CHECK(rep.b);
    CHECK(rep.c);
    CHECK_THROWS_AS(check_conditions({delta_seq()}, 3, 16, 1, true), std::invalid_argument);
}

TEST_CASE("non-integral sequence is caught")
{
    CoeffSeq bad("half", [](long r) { return mpq_class(1, 1L << std::min(r, 20L)); });
    auto rep = check_conditions({bad}, 2, 32, 2, false);
    CHECK_FALSE(rep.integral);
    CHECK_FALSE(rep.b);
    CHECK_FALSE(rep.counterexamples.empty());
}

TEST_CASE("product congruence (i') and (i)")
{
    auto F = bessel_seq(1), G = so_seq(1);
    CHECK(congruence_theorem_check({F}, 2, 3, 5, true).pass);
    CHECK(congruence_theorem_check({F, G}, 2, 3, 5, true).pass);
    CHECK(congruence_theorem_check({G}, 2, 3, 5, false).pass);
    // the unmodified bound is too strong for F
    CHECK_FALSE(congruence_theorem_check({F}, 2, 3, 5, false).pass);
    // s = 0 only
    auto r0 = congruence_theorem_check({F}, 2, 3, 0, false);
    CHECK(r0.pass);
    CHECK(r0.checked > 0);
}

TEST_CASE("unit-root truncations: f(0), coherence, differential relation, eta")
{
    auto F = bessel_seq(1);
    auto U = unit_root_truncations(F, F, 2, 7, 1, 128);
    auto c = unit_root_properties(U, 32, 7);
    CHECK(c.f0_is_one);
    CHECK(c.coherence);
    CHECK(c.diff_relation);
    CHECK(c.eta_matches);

    // s = 6 against s = 7 mod 2^5 at random points, and both against exact rationals
    std::mt19937_64 rng(11);
    const mpz_class m5 = 32;
    for (int t = 0; t < 32; ++t) {
        mpz_class x = long(rng() % 100000);
        auto a = U.eval(6, x), b = U.eval(7, x);
        REQUIRE(a);
        REQUIRE(b);
        CHECK((*a - *b) % m5 == 0);
        mpq_class exact = poly_at(F, 128, x) / poly_at(F, 64, x * x);
        CHECK(reduce(exact, m5) == *a % m5);
    }

    auto G = so_seq(1);
    auto UG = unit_root_truncations(G, G, 2, 6, 0, 96);
    CHECK(unit_root_properties(UG, 16, 3).pass());
}

TEST_CASE("charpoly and Hensel unit root")
{
    auto cfg = padic::make_cfg(2, 20);
    padic::PMat M(3, padic::PadicNum(cfg));
    M(0, 0) = padic::PadicNum(cfg, mpz_class(1));
    M(1, 1) = padic::PadicNum(cfg, mpz_class(2));
    M(2, 2) = padic::PadicNum(cfg, mpz_class(4));
    M(0, 2) = padic::PadicNum(cfg, mpz_class(5));
    auto P = charpoly(M);
    // (X-1)(X-2)(X-4) = X^3 - 7X^2 + 14X - 8
    CHECK(P[0] == padic::PadicNum(cfg, mpz_class(-8)));
    CHECK(P[1] == padic::PadicNum(cfg, mpz_class(14)));
    CHECK(P[2] == padic::PadicNum(cfg, mpz_class(-7)));
    CHECK(P[3] == padic::PadicNum(cfg, mpz_class(1)));
    auto u = unit_root(P);
    REQUIRE(u);
    CHECK(*u == padic::PadicNum(cfg, mpz_class(1)));
    // (X-1)(X-3): two unit roots
    std::vector<padic::PadicNum> Q = {padic::PadicNum(cfg, mpz_class(3)), padic::PadicNum(cfg, mpz_class(-4)),
                                      padic::PadicNum(cfg, mpz_class(1))};
    CHECK_FALSE(unit_root(Q));
    // (X-7)(X-6)(X-12) over Z_3[pi]: unit root 7
    auto c3 = padic::make_cfg(3, 20);
    std::vector<padic::PadicNum> R = {padic::PadicNum(c3, mpz_class(-504)), padic::PadicNum(c3, mpz_class(198)),
                                      padic::PadicNum(c3, mpz_class(-25)), padic::PadicNum(c3, mpz_class(1))};
    auto u3 = unit_root(R);
    REQUIRE(u3);
    CHECK(*u3 == padic::PadicNum(c3, mpz_class(7)));
}

TEST_CASE("unit root of the solved Frobenius against f(1)")
{
    auto cfg = padic::make_cfg(2, 24);
    auto gl = frob::solve_frobenius(frob::connection_preset("gl", 3, 2), cfg, 64);
    auto r = unit_root_crosscheck(bessel_seq(1), gl, 1, 5, 1);
    CHECK(r.unique_unit_root);
    CHECK(r.charpoly_agree);
    CHECK(r.agree_p >= 5);
    CHECK(r.pass);

    auto so = frob::solve_frobenius(frob::connection_preset("so", 1, 2), cfg, 64);
    auto s = unit_root_crosscheck(so_seq(1), so, 1, 5, 0);
    CHECK(s.charpoly_agree);
    CHECK(s.pass);

    // rank one: the connection is its own unit-root part
    auto g1 = frob::solve_frobenius(frob::connection_preset("gl", 1, 2), cfg, 64);
    CHECK(unit_root_crosscheck(gl_ode_seq(1), g1, 1, 5, 0).pass);

    // a wrong function is rejected
    CoeffSeq wrong("wrong", [](long r) { return mpq_class(r == 1 ? 2 : r == 0 ? 1 : 0); });
    CHECK_FALSE(unit_root_crosscheck(wrong, gl, 1, 5, 0).pass);
}

TEST_CASE("F/G has 2-integral coefficients")
{
    auto r1 = ratio_integrality(bessel_seq(1), so_seq(1), 2, 128);
    CHECK(r1.pass());
    CHECK(r1.min_valuation >= 0);
    CHECK(ratio_integrality(bessel_seq(2), so_seq(2), 2, 64).pass());
    auto id = ratio_integrality(bessel_seq(1), bessel_seq(1), 2, 32);
    CHECK(id.pass());
    CHECK(id.min_valuation == 0);
    // G/F is fine too, 1/(1 - x/2) is not
    CoeffSeq half("geom", [](long r) { return mpq_class(1, 1L << std::min(r, 40L)); });
    CHECK_FALSE(ratio_integrality(half, delta_seq(), 2, 8).pass());
}
