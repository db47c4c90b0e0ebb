#include "doctest.h"

#include "frobkit/lfun.hpp"
#include "frobkit/sums.hpp"

using namespace lfun;
using cyc::CycInt;

TEST_CASE("Newton identities on small examples")
{
    CycInt c(3, std::vector<mpz_class>{2, 1});
    auto P = charpoly_from_power_sums({c}, 1);
    CHECK(P[1] == CycInt(3, 1));
    CHECK(P[0] == -c);
    // roots 1 and 3
    auto Q = charpoly_from_power_sums({CycInt(3, 4), CycInt(3, 10)}, 2);
    CHECK(Q[0] == CycInt(3, 3));
    CHECK(Q[1] == CycInt(3, -4));
    auto np = newton_polygon(Q, 1, PolyKind::Charpoly);
    CHECK(np.slopes == std::vector<mpq_class>{0, 1});
    CHECK_THROWS_AS(charpoly_from_power_sums({CycInt(3, 1), CycInt(3, 0)}, 2), std::domain_error);
}

TEST_CASE("round trip through the companion action")
{
    auto F = ff::make_field(3, 1);
    auto t = family_power_sums(Family::Kl, *F, 3, 1, 3);
    auto P = charpoly_from_power_sums(t, 3);
    CHECK(power_sums_of_roots(P, 3) == t);
}

TEST_CASE("Kl_2 at q=3: constant term has valuation one")
{
    auto F = ff::make_field(3, 1);
    auto t = family_power_sums(Family::Kl, *F, 2, 1, 2);
    auto P = charpoly_from_power_sums(t, 2);
    CHECK(cyc::lambda_valuation(P[0]).value() == 1);
}

TEST_CASE("NP invariance under units and endpoint identity")
{
    auto F = ff::make_field(2, 2);
    for (uint32_t a = 1; a < 4; ++a) {
        auto P = charpoly_from_power_sums(family_power_sums(Family::Kl, *F, 3, a, 3), 3);
        auto np = newton_polygon(P, 2, PolyKind::Charpoly);
        CHECK(np.slopes == std::vector<mpq_class>{0, 1, 2});
        mpq_class sum = 0;
        for (auto& s : np.slopes) sum += s;
        CHECK(sum == cyc::lambda_valuation(P[0]).value() / 2);
        CycInt u = CycInt::zeta_pow(2, 1);   // -1
        CycPoly Pu;
        for (auto& c : P) Pu.push_back(c * u);
        CHECK(newton_polygon(Pu, 2, PolyKind::Charpoly).slopes == np.slopes);
    }
}

TEST_CASE("Kl eigenvalues pair off under alpha -> q^{r-1}/conj(alpha)")
{
    for (auto [p, s, n] : std::vector<std::tuple<int, int, int>>{{3, 1, 2}, {5, 1, 3}, {2, 2, 3}, {3, 1, 4}}) {
        auto F = ff::make_field(p, s);
        for (uint32_t a = 1; a < F->q; ++a) {
            auto P = charpoly_from_power_sums(family_power_sums(Family::Kl, *F, n, a, n), n);
            // e_i = (-1)^i P[n-i]
            auto e = [&](int i) { return (i & 1) ? -P[n - i] : P[n - i]; };
            for (int i = 0; i <= n; ++i) {
                mpz_class qp;
                mpz_ui_pow_ui(qp.get_mpz_t(), F->q, (n - 1) * i);
                CHECK(e(n - i) * qp == e(n) * e(i).conj());
            }
        }
    }
}

TEST_CASE("L-polynomial of a toy family")
{
    // f = x_1: S_m = -1 for every m, so L = 1 - T
    std::vector<CycInt> S(4, CycInt(3, -1));
    auto L = lpoly_from_sums(S, 1);
    CHECK(L.size() == 2u);
    CHECK(L[1] == CycInt(3, -1));
    CHECK_THROWS_AS(lpoly_from_sums(S, 0), std::domain_error);
}

TEST_CASE("Hodge presets")
{
    CHECK(hodge_polygon_preset(Family::Fd, 1, 1) == std::vector<mpq_class>{0, 1, 2});
    CHECK(hodge_polygon_preset(Family::Fd, 1, 2) ==
          std::vector<mpq_class>{0, mpq_class(1, 2), 1, mpq_class(3, 2), 2, mpq_class(5, 2)});
    CHECK(hodge_polygon_preset(Family::Hyp, 1) == std::vector<mpq_class>{mpq_class(1, 2), mpq_class(3, 2), mpq_class(5, 2)});
    CHECK_THROWS(parse_family("e8"));
}

TEST_CASE("ordinarity on small instances")
{
    CHECK(ordinarity_check(Family::Kl, 2, 2, 3, 1).pass());
    CHECK(ordinarity_check(Family::SOodd, 3, 1, 2, 1).pass());
    CHECK(ordinarity_check(Family::Fd, 3, 1, 1, 1).pass());
    CHECK(ordinarity_check(Family::Hyp, 3, 1, 1, 1).pass());
}
