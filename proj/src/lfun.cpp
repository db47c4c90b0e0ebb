#include "frobkit/lfun.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "frobkit/sums.hpp"

namespace lfun {

namespace {

CycInt exact_div(const CycInt& x, long k, const char* who)
{
    auto r = x.div_exact(mpz_class(k));
    if (!r) throw std::domain_error(std::string(who) + ": inexact division by " + std::to_string(k));
    return *r;
}

int common_m(const std::vector<CycInt>& v)
{
    if (v.empty()) throw std::invalid_argument("empty power-sum sequence");
    return v[0].m();
}

}  // namespace

CycPoly charpoly_from_power_sums(const std::vector<CycInt>& ts, int r)
{
    if (r < 0 || r > int(ts.size())) throw std::invalid_argument("charpoly_from_power_sums: need r <= #power sums");
    int m = r ? common_m(ts) : (ts.empty() ? 2 : ts[0].m());
    // Newton: k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} t_i
    std::vector<CycInt> e{CycInt(m, 1)};
    for (int k = 1; k <= r; ++k) {
        CycInt acc(m);
        for (int i = 1; i <= k; ++i) {
            CycInt t = e[k - i] * ts[i - 1];
            if (i & 1) acc += t; else acc -= t;
        }
        e.push_back(exact_div(acc, k, "charpoly_from_power_sums"));
    }
    CycPoly P(r + 1, CycInt(m));
    for (int k = 0; k <= r; ++k) P[r - k] = (k & 1) ? -e[k] : e[k];
    return P;
}

CycPoly lpoly_from_sums(const std::vector<CycInt>& S, int D)
{
    if (D < 0 || D > int(S.size())) throw std::invalid_argument("lpoly_from_sums: need D <= #sums");
    int m = common_m(S);
    int K = int(S.size());
    // k l_k = sum_{j=1}^k S_j l_{k-j}
    std::vector<CycInt> l{CycInt(m, 1)};
    for (int k = 1; k <= K; ++k) {
        CycInt acc(m);
        for (int j = 1; j <= k; ++j) acc += S[j - 1] * l[k - j];
        l.push_back(exact_div(acc, k, "lpoly_from_sums"));
    }
    for (int k = D + 1; k <= K; ++k)
        if (!l[k].is_zero())
            throw std::domain_error("lpoly_from_sums: coefficient of T^" + std::to_string(k) + " is nonzero, degree exceeds " + std::to_string(D));
    l.resize(D + 1);
    return l;
}

std::vector<CycInt> power_sums_of_roots(const CycPoly& P, int count)
{
    int r = int(P.size()) - 1;
    if (r < 0 || P[r] != CycInt(P[r].m(), 1)) throw std::invalid_argument("power_sums_of_roots: monic polynomial expected");
    int m = P[0].m();
    // e_k from coefficients, then Newton forwards
    std::vector<CycInt> e(r + 1, CycInt(m));
    for (int k = 0; k <= r; ++k) e[k] = (k & 1) ? -P[r - k] : P[r - k];
    std::vector<CycInt> t;
    for (int k = 1; k <= count; ++k) {
        // t_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i t_{k-i} + (-1)^{k-1} k e_k
        CycInt acc(m);
        for (int i = 1; i < k && i <= r; ++i) {
            CycInt x = e[i] * t[k - i - 1];
            if (i & 1) acc += x; else acc -= x;
        }
        if (k <= r) {
            CycInt x = e[k] * mpz_class(k);
            if (k & 1) acc += x; else acc -= x;
        }
        t.push_back(acc);
    }
    return t;
}

nlohmann::json NewtonPolygon::to_json() const
{
    nlohmann::json j;
    j["coeff_valuations"] = nlohmann::json::array();
    for (auto& [i, v] : points) j["coeff_valuations"].push_back({{"i", i}, {"v", v.get_str()}});
    j["slopes"] = nlohmann::json::array();
    for (auto& s : slopes) j["slopes"].push_back(s.get_str());
    return j;
}

NewtonPolygon newton_polygon(const CycPoly& f0, int s, PolyKind kind)
{
    if (s < 1) throw std::invalid_argument("newton_polygon: s >= 1");
    CycPoly f = f0;
    if (kind == PolyKind::Charpoly) std::reverse(f.begin(), f.end());
    NewtonPolygon np;
    for (int i = 0; i < int(f.size()); ++i) {
        auto lv = cyc::lambda_valuation(f[i]);
        if (lv.infinite) continue;
        np.points.emplace_back(i, lv.value() / s);
    }
    if (np.points.empty()) throw std::invalid_argument("newton_polygon: zero polynomial");
    // lower hull, monotone chain
    auto& H = np.hull;
    for (auto& pt : np.points) {
        while (H.size() >= 2) {
            auto& A = H[H.size() - 2];
            auto& B = H[H.size() - 1];
            // drop B if it lies on or above segment A -> pt
            mpq_class lhs = (B.second - A.second) * (pt.first - A.first);
            mpq_class rhs = (pt.second - A.second) * (B.first - A.first);
            if (lhs >= rhs) H.pop_back();
            else break;
        }
        H.push_back(pt);
    }
    for (size_t k = 1; k < H.size(); ++k) {
        int w = H[k].first - H[k - 1].first;
        mpq_class sl = (H[k].second - H[k - 1].second) / w;
        for (int t = 0; t < w; ++t) np.slopes.push_back(sl);
    }
    return np;
}

Family parse_family(const std::string& n)
{
    if (n == "kl" || n == "gl") return Family::Kl;
    if (n == "so") return Family::SOodd;
    if (n == "hyp") return Family::Hyp;
    if (n == "fd") return Family::Fd;
    throw std::invalid_argument("unsupported family '" + n + "'");
}

std::string family_name(Family f)
{
    switch (f) {
    case Family::Kl: return "kl";
    case Family::SOodd: return "so";
    case Family::Hyp: return "hyp";
    case Family::Fd: return "fd";
    }
    return "?";
}

int family_rank(Family f, int n, int d)
{
    switch (f) {
    case Family::Kl: return n;
    case Family::SOodd: return 2 * n + 1;
    case Family::Hyp: return 2 * n + 1;
    case Family::Fd: return d * (2 * n + 1);
    }
    return 0;
}

std::vector<mpq_class> hodge_polygon_preset(Family f, int n, int d)
{
    if (n < 1 || d < 1) throw std::invalid_argument("hodge_polygon_preset: n, d >= 1");
    std::vector<mpq_class> v;
    switch (f) {
    case Family::Kl:
        for (int i = 0; i < n; ++i) v.push_back(i);
        break;
    case Family::SOodd:
        for (int i = 0; i <= 2 * n; ++i) v.push_back(i);
        break;
    case Family::Hyp:
        for (int i = 0; i <= 2 * n; ++i) v.push_back(mpq_class(2 * i + 1, 2));
        break;
    case Family::Fd:
        for (int i = 0; i < d * (2 * n + 1); ++i) {
            mpq_class x(i, d);
            x.canonicalize();
            v.push_back(x);
        }
        break;
    }
    return v;
}

std::vector<CycInt> family_power_sums(Family fam, const ff::Field& F, int n, uint32_t a, int count, int d)
{
    if (!a) throw std::invalid_argument("family_power_sums: a must be nonzero");
    if (fam == Family::Hyp && F.p == 2) throw std::invalid_argument("hyp family needs odd p");
    if (fam == Family::Fd && (F.p - 1) % d != 0) throw std::invalid_argument("fd family needs d | p-1");
    std::vector<CycInt> t;
    sums::LaurentPoly fd;
    if (fam == Family::Fd) fd = sums::toric_family_fd(F, n, d, a);
    for (int m = 1; m <= count; ++m) {
        if (fam == Family::Fd) {
            t.push_back(-sums::toric_sum_Sm(fd, m));
            continue;
        }
        auto G = m == 1 ? nullptr : ff::make_field(F.p, F.s * m);
        const ff::Field& E = m == 1 ? F : *G;
        uint32_t am = m == 1 ? a : ff::embedding(F, E)[a];
        sums::AdditiveChar psi(E);
        switch (fam) {
        case Family::Kl: {
            sums::KlTables T(E, psi);
            CycInt S = T.value(n, am);
            t.push_back((n % 2 == 1) ? S : -S);   // (-1)^{n-1} S_n
            break;
        }
        case Family::SOodd: {
            sums::KlTables T(E, psi);
            auto v = sums::so2n1_sum(T, n, am);
            mpz_class sc;
            mpz_ui_pow_ui(sc.get_mpz_t(), E.q, (2 * n - v.k) / 2);
            t.push_back(v.num * sc);
            break;
        }
        case Family::Hyp: {
            // rank 2n+1 with one quadratic character; trace = (-1)^{(2n+1)+1-1} H = -H
            t.push_back(-sums::hyp_sum(E, 2 * n + 1, 1, am, psi));
            break;
        }
        default: break;
        }
    }
    return t;
}

bool OrdinarityReport::pass() const
{
    if (rows.empty()) return false;
    for (auto& r : rows)
        if (!r.pass) return false;
    return true;
}

std::string slopes_str(const std::vector<mpq_class>& v)
{
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
    os << "}";
    return os.str();
}

nlohmann::json OrdinarityReport::to_json() const
{
    nlohmann::json j{{"family", family}, {"p", p}, {"s", s}, {"n", n}, {"d", d}, {"pass", pass()}};
    j["rows"] = nlohmann::json::array();
    for (auto& r : rows) {
        nlohmann::json x{{"a", r.a}, {"ordinary", r.pass}};
        x["slopes"] = nlohmann::json::array();
        for (auto& v : r.np) x["slopes"].push_back(v.get_str());
        x["hodge"] = nlohmann::json::array();
        for (auto& v : r.hodge) x["hodge"].push_back(v.get_str());
        if (!r.note.empty()) x["note"] = r.note;
        j["rows"].push_back(x);
    }
    return j;
}

OrdinarityReport ordinarity_check(Family fam, int p, int s, int n, int d, std::vector<uint32_t> a_list)
{
    auto F = ff::make_field(p, s);
    OrdinarityReport rep;
    rep.family = family_name(fam);
    rep.p = p; rep.s = s; rep.n = n; rep.d = d;
    if (a_list.empty())
        for (uint32_t a = 1; a < F->q; ++a) a_list.push_back(a);
    int r = family_rank(fam, n, d);
    auto hodge = hodge_polygon_preset(fam, n, d);
    for (uint32_t a : a_list) {
        OrdinarityRow row;
        row.a = a;
        row.hodge = hodge;
        try {
            auto t = family_power_sums(fam, *F, n, a, r, d);
            NewtonPolygon np;
            if (fam == Family::Fd) {
                std::vector<CycInt> S;
                for (auto& x : t) S.push_back(-x);
                np = newton_polygon(lpoly_from_sums(S, r), s, PolyKind::LPoly);
            } else {
                np = newton_polygon(charpoly_from_power_sums(t, r), s, PolyKind::Charpoly);
            }
            row.np = np.slopes;
            row.pass = row.np == row.hodge;
        } catch (const std::domain_error& e) {
            row.pass = false;
            row.note = e.what();
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace lfun
