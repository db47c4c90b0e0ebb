#include "doctest.h"

#include "frobkit/padic.hpp"
#include "frobkit/props.hpp"

using namespace padic;

TEST_CASE("pi relation")
{
    for (int p : {2, 3, 5}) {
        auto cfg = make_cfg(p, 20);
        auto pi = PadicNum::pi(cfg);
        CHECK(pi.pow(p - 1) == PadicNum(cfg, -p));
        CHECK(pi.valuation() == 1);
        CHECK(PadicNum(cfg, p).valuation() == p - 1);
        KNum kp = KNum::pi(p);
        CHECK(kp.pow(p - 1) == KNum(p, mpq_class(-p)));
        CHECK(kp.valuation() == 1);
    }
}

TEST_CASE("zeta_p from Dwork's series")
{
    for (int p : {2, 3, 5}) {
        auto cfg = make_cfg(p, 24);
        auto z = zeta(cfg);
        CHECK(z.pow(p) == PadicNum(cfg, 1));
        CHECK(z != PadicNum(cfg, 1));
        // zeta = 1 + pi mod pi^2
        CHECK((z - PadicNum(cfg, 1) - PadicNum::pi(cfg)).valuation() >= 2);
    }
}

TEST_CASE("embedding Z[zeta_p] is a ring map")
{
    auto cfg = make_cfg(3, 20);
    cyc::CycInt a(3, std::vector<mpz_class>{2, -5}), b(3, std::vector<mpz_class>{7, 1});
    CHECK(embed_zeta(a * b, cfg) == embed_zeta(a, cfg) * embed_zeta(b, cfg));
    CHECK(embed_zeta(a + b, cfg) == embed_zeta(a, cfg) + embed_zeta(b, cfg));
}

TEST_CASE("Teichmuller lifts are roots of unity")
{
    for (int p : {3, 5, 7}) {
        auto F = ff::make_field(p, 1);
        auto cfg = make_cfg(p, 20);
        for (auto x : ff::units(*F)) {
            auto t = teichmuller(x, cfg);
            CHECK(t.pow(p - 1) == PadicNum(cfg, 1));
            for (auto y : ff::units(*F)) CHECK(teichmuller(x * y, cfg) == t * teichmuller(y, cfg));
        }
        CHECK(teichmuller(ff::FqElem(F.get(), 1), cfg) == PadicNum(cfg, 1));
        CHECK(teichmuller(ff::FqElem(F.get(), p - 1), cfg) == PadicNum(cfg, -1));
    }
    auto F9 = ff::make_field(3, 2);
    CHECK_THROWS(teichmuller(ff::FqElem(F9.get(), 4), make_cfg(3, 8)));
}

TEST_CASE("KNum field operations")
{
    KNum a(3, std::vector<mpq_class>{mpq_class(1, 3), 2}), b(3, std::vector<mpq_class>{5, mpq_class(-1, 2)});
    CHECK((a / b) * b == a);
    CHECK(a.inv() * a == KNum(3, mpq_class(1)));
}

TEST_CASE("randomized padic invariants")
{
    auto t = props::padic_invariants(2000, 11);
    INFO(t.first);
    CHECK(t.failures == 0);
}

TEST_CASE("series helpers")
{
    auto cfg = make_cfg(2, 12);
    PSeries f{{PadicNum(cfg, 1), PadicNum(cfg, 3), PadicNum(cfg, 0), PadicNum(cfg, 5)}};
    auto d = series_delta(f);
    CHECK(d.c[1] == PadicNum(cfg, 3));
    CHECK(d.c[3] == PadicNum(cfg, 15));
    auto g = series_compose_xp(f);
    CHECK(g.c[2] == PadicNum(cfg, 3));
    CHECK(g.D() == f.D());
}
