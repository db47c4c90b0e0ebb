#include "doctest.h"

#include "frobkit/sums.hpp"

using namespace sums;
using ff::make_field;

namespace {

// tuple enumeration with field ops only, independent of the log tables
CycInt brute_kl(const Field& F, int n, uint32_t a)
{
    std::vector<long long> c(F.p, 0);
    std::vector<uint32_t> z(n - 1, 1);
    while (true) {
        uint32_t s = 0, prod = 1;
        for (auto x : z) { s = F.add(s, x); prod = F.mul(prod, x); }
        s = F.add(s, F.div(a, prod));
        c[F.trace(s)]++;
        int i = n - 2;
        while (i >= 0 && ++z[i] == F.q) { z[i] = 1; --i; }
        if (i < 0) break;
    }
    return CycInt::from_counts(F.p, c);
}

CycInt brute_hyp(const Field& F, int n, int m, uint32_t a)
{
    // all x_1..x_n, y_1..y_m in F^x with prod x = a prod y
    std::vector<long long> c(F.p, 0);
    std::vector<uint32_t> v(n + m, 1);
    while (true) {
        uint32_t px = 1, py = a, s = 0;
        int chi = 1;
        for (int i = 0; i < n; ++i) { px = F.mul(px, v[i]); s = F.add(s, v[i]); }
        for (int j = 0; j < m; ++j) { py = F.mul(py, v[n + j]); s = F.sub(s, v[n + j]); chi *= F.quad(v[n + j]); }
        if (px == py) c[F.trace(s)] += chi;
        int i = n + m - 1;
        while (i >= 0 && ++v[i] == F.q) { v[i] = 1; --i; }
        if (i < 0) break;
    }
    return CycInt::from_counts(F.p, c);
}

}  // namespace

TEST_CASE("Kloosterman enumeration matches a brute oracle")
{
    for (auto [p, s, n] : std::vector<std::tuple<int, int, int>>{{2, 2, 3}, {3, 1, 4}, {5, 1, 3}, {3, 2, 2}, {2, 3, 2}}) {
        auto F = make_field(p, s);
        AdditiveChar psi(*F);
        KlTables T(*F, psi);
        for (uint32_t a = 1; a < F->q; ++a) {
            auto ref = brute_kl(*F, n, a);
            CHECK(kloosterman_raw(*F, n, a, psi) == ref);
            CHECK(hyp_sum_alt(*F, n, 0, a, psi) == ref);
            CHECK(T.value(n, a) == ref);
        }
    }
}

TEST_CASE("known small values")
{
    // over F_2: S_2(1) = psi(1+1) ... single point z=1, Tr(0) -> 1
    auto F2 = ff::make_field(2, 1);
    AdditiveChar psi2(*F2);
    CHECK(kloosterman_raw(*F2, 2, 1, psi2) == CycInt(2, 1));
    // over F_3, a=1: z in {1,2}: 1+1=2, 2+2=1 -> zeta^2 + zeta = -1
    auto F3 = ff::make_field(3, 1);
    AdditiveChar psi3(*F3);
    CHECK(kloosterman_raw(*F3, 2, 1, psi3) == CycInt(3, -1));
}

TEST_CASE("hypergeometric sums match a brute oracle")
{
    for (auto [p, s, n, m] : std::vector<std::tuple<int, int, int, int>>{{3, 1, 3, 1}, {5, 1, 3, 1}, {3, 2, 2, 1}, {3, 1, 3, 2}}) {
        auto F = make_field(p, s);
        AdditiveChar psi(*F);
        for (uint32_t a = 1; a < F->q; ++a) {
            auto ref = brute_hyp(*F, n, m, a);
            CHECK(hyp_sum(*F, n, m, a, psi) == ref);
            CHECK(hyp_sum_alt(*F, n, m, a, psi) == ref);
        }
    }
}

TEST_CASE("FFT and direct S_2 tables agree")
{
    for (auto [p, s] : std::vector<std::pair<int, int>>{{2, 8}, {3, 5}, {5, 3}}) {
        auto F = make_field(p, s);
        AdditiveChar psi(*F);
        auto tr = psi.log_table();
        CHECK(KlTables::s2_fft(*F, tr) == KlTables::s2_direct(*F, tr));
    }
}

TEST_CASE("Gauss sum squares to rho(-1) q")
{
    for (auto [p, s] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {3, 2}, {7, 1}}) {
        auto F = make_field(p, s);
        AdditiveChar psi(*F);
        auto g = gauss_sum(psi, QuadChar(*F));
        CHECK(g * g == CycInt(p, long(F->quad(F->neg(1))) * long(F->q)));
        CHECK(gauss_sum_trivial(psi) == CycInt(p, -1));
    }
}

TEST_CASE("identities hold and a perturbed character breaks them")
{
    IdentityParams prm;
    prm.p = 2; prm.smin = 1; prm.smax = 3;
    CHECK(verify_identity("carlitz", prm).pass());
    prm.psi_shift = 1;
    CHECK_FALSE(verify_identity("carlitz", prm).pass());

    IdentityParams q3;
    q3.p = 3; q3.smin = 1; q3.smax = 1;
    CHECK(verify_identity("so3", q3).pass());
    q3.nmin = 1; q3.nmax = 2;
    CHECK(verify_identity("so-convolution", q3).pass());
    q3.nmin = 2; q3.nmax = 2;
    CHECK(verify_identity("so-chain", q3).pass());
    CHECK(verify_identity("psi-rescale", q3).pass());
    q3.psi_shift = 1;
    CHECK_FALSE(verify_identity("so3", q3).pass());
    CHECK_THROWS(verify_identity("no-such-identity", q3));
}

TEST_CASE("quadric model against the toric formula")
{
    IdentityParams prm;
    prm.p = 2; prm.smin = 1; prm.smax = 1; prm.nmin = 2; prm.nmax = 3;
    auto rep = verify_identity("quadric-vs-toric", prm);
    CHECK(rep.pass());
}

TEST_CASE("toric sums of f_d")
{
    // d = 1, n = 1 over F_3: direct S_1 via the generic torus enumerator
    auto F = make_field(3, 1);
    auto f = toric_family_fd(*F, 1, 1, 1);
    CHECK(f.terms.size() == 4u);
    // brute: sum over x1,x2,x3 of psi(x1 + x2 - x3 + x3/(x1 x2))
    std::vector<long long> c(3, 0);
    for (uint32_t x1 = 1; x1 < 3; ++x1)
        for (uint32_t x2 = 1; x2 < 3; ++x2)
            for (uint32_t x3 = 1; x3 < 3; ++x3) {
                uint32_t v = F->add(F->add(x1, x2), F->sub(F->div(x3, F->mul(x1, x2)), x3));
                c[F->trace(v)]++;
            }
    CHECK(toric_sum_Sm(f, 1) == CycInt::from_counts(3, c));
    CHECK_THROWS(toric_family_fd(*F, 1, 1, 0));
}

TEST_CASE("argument validation")
{
    auto F = make_field(2, 2);
    AdditiveChar psi(*F);
    CHECK_THROWS(kloosterman_raw(*F, 2, 0, psi));
    CHECK_THROWS(QuadChar(*F));
    CHECK_THROWS(hyp_sum(*F, 3, 1, 1, psi));
}
