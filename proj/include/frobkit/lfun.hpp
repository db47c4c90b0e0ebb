#pragma once
// Characteristic polynomials and L-polynomials from power sums in Z[zeta_p]; Newton polygons.

#include <string>
#include <vector>

#include <gmpxx.h>

#include "frobkit/cyc.hpp"
#include "frobkit/ff.hpp"
#include "json.hpp"

namespace lfun {

using cyc::CycInt;

// coefficient vector, index = power of the variable
using CycPoly = std::vector<CycInt>;

// Monic X^r - e_1 X^{r-1} + ... with root power sums ts[0..r-1]. Throws on inexact division.
CycPoly charpoly_from_power_sums(const std::vector<CycInt>& ts, int r);
// L(T) = exp(sum S_m T^m / m) truncated at degree D; coefficients past D (when ts is longer) must vanish.
CycPoly lpoly_from_sums(const std::vector<CycInt>& S, int D);
// power sums of the roots of a monic polynomial (companion action), for round trips
std::vector<CycInt> power_sums_of_roots(const CycPoly& monic, int count);

struct NewtonPolygon {
    std::vector<std::pair<int, mpq_class>> points;   // (i, v_i), zero coefficients omitted
    std::vector<std::pair<int, mpq_class>> hull;
    std::vector<mpq_class> slopes;                   // weakly increasing
    nlohmann::json to_json() const;
};

enum class PolyKind { Charpoly, LPoly };

// v normalized by v(q) = 1 with q = p^s. Slopes are valuations of the eigenvalues:
// roots of a charpoly, reciprocal roots of an L-polynomial.
NewtonPolygon newton_polygon(const CycPoly& f, int s, PolyKind kind);

// families with known Frobenius power sums
enum class Family { Kl, SOodd, Hyp, Fd };
Family parse_family(const std::string& name);   // kl | so | hyp | fd
std::string family_name(Family f);
int family_rank(Family f, int n, int d = 1);

// Explicit Hodge slope multisets, v(q) = 1.
std::vector<mpq_class> hodge_polygon_preset(Family f, int n, int d = 1);

// t_m, m = 1..count: traces of the m-th power of (unnormalized) Frobenius at a in F^x,
// computed from sums over F_{q^m}.
std::vector<CycInt> family_power_sums(Family fam, const ff::Field& F, int n, uint32_t a, int count, int d = 1);

struct OrdinarityRow {
    uint32_t a = 0;
    std::vector<mpq_class> np, hodge;
    bool pass = false;
    std::string note;
};
struct OrdinarityReport {
    std::string family;
    int p = 0, s = 0, n = 0, d = 1;
    std::vector<OrdinarityRow> rows;
    bool pass() const;
    nlohmann::json to_json() const;
};

// a_list empty means every a in F^x
OrdinarityReport ordinarity_check(Family fam, int p, int s, int n, int d, std::vector<uint32_t> a_list = {});

std::string slopes_str(const std::vector<mpq_class>& v);

}  // namespace lfun
