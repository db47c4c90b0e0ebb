#include "doctest.h"

#include "frobkit/cyc.hpp"
#include "frobkit/props.hpp"

using cyc::CycInt;

TEST_CASE("zeta relations")
{
    for (int m : {2, 3, 5, 7}) {
        CycInt sum(m);
        for (int k = 0; k < m; ++k) sum += CycInt::zeta_pow(m, k);
        CHECK(sum.is_zero());
        CHECK(CycInt::zeta_pow(m, 1).pow(m) == CycInt(m, 1));
        CHECK(CycInt::zeta_pow(m, -1) == CycInt::zeta_pow(m, m - 1));
    }
}

TEST_CASE("norm of 1 - zeta is m, valuation one division")
{
    for (int m : {3, 5, 7}) {
        CycInt lam = CycInt(m, 1) - CycInt::zeta_pow(m, 1);
        CycInt nrm(m, 1);
        for (int c = 1; c < m; ++c) nrm = nrm * lam.galois(c);
        CHECK(nrm == CycInt(m, m));
        auto v = cyc::lambda_valuation(lam);
        CHECK(v.count == 1);
        CHECK(cyc::lambda_valuation(CycInt(m, m)).count == m - 1);
        CHECK(cyc::lambda_valuation(CycInt(m, m)).value() == 1);
    }
}

TEST_CASE("randomized ring and valuation invariants")
{
    auto t = props::cyc_invariants(3000, 7);
    INFO(t.first);
    CHECK(t.failures == 0);
}

TEST_CASE("scaled values compare through squares and sign")
{
    // 2 = (-sqrt 4)^1 * (-1): num -2, k 1, q 4 ; also num 4*(-2), k 3
    cyc::ScaledCyc a(CycInt(3, -6), 1, 9), b(CycInt(3, -54), 3, 9);
    CHECK(cyc::scaled_equal(a, b).equal);
    cyc::ScaledCyc c(CycInt(3, 6), 1, 9);
    CHECK_FALSE(cyc::scaled_equal(a, c).equal);
    CHECK(std::abs(a.embed(1) - std::complex<double>(2, 0)) < 1e-12);
    // a k=2 vs k=0 pair: 9 / 9 = 1
    cyc::ScaledCyc d(CycInt(3, 9), 2, 9), e(CycInt(3, 1), 0, 9);
    auto cert = cyc::scaled_equal(d, e);
    CHECK(cert.equal);
    CHECK(cert.path == "exact");
}

TEST_CASE("embeddings at non-units are rejected")
{
    CHECK_THROWS(cyc::complex_embed(CycInt(5, 1), 5));
    CHECK_THROWS(CycInt(3, 1) + CycInt(5, 1));
}

TEST_CASE("json roundtrip")
{
    CycInt a(5, std::vector<mpz_class>{1, -2, 3, mpz_class("123456789012345678901234567890")});
    nlohmann::json j;
    cyc::to_json(j, a);
    CHECK(cyc::cyc_from_json(j) == a);
}
