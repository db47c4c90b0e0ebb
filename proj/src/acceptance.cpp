#include "frobkit/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "frobkit/dwork.hpp"
#include "frobkit/frob.hpp"
#include "frobkit/lfun.hpp"
#include "frobkit/props.hpp"
#include "frobkit/sums.hpp"

namespace acceptance {

namespace {

struct Ctx {
    bool ok = true;
    std::vector<std::string> notes;
    nlohmann::json data = nlohmann::json::object();
    void expect(bool c, const std::string& what)
    {
        if (!c) {
            ok = false;
            if (notes.size() < 8) notes.push_back(what);
        }
    }
};

std::string qstr(int p, int s) { return "q=" + std::to_string(p) + "^" + std::to_string(s); }

bool identity(Ctx& cx, const std::string& name, int p, int smin, int smax, int nmin, int nmax)
{
    sums::IdentityParams prm;
    prm.p = p;
    prm.smin = smin;
    prm.smax = smax;
    prm.nmin = nmin;
    prm.nmax = nmax;
    auto rep = sums::verify_identity(name, prm);
    std::string key = name + " p=" + std::to_string(p) + " s=" + std::to_string(smin) + ".." + std::to_string(smax) +
                      " n=" + std::to_string(nmin) + ".." + std::to_string(nmax);
    cx.data[key] = {{"rows", rep.rows.size()}, {"pass", rep.pass()}};
    for (auto& r : rep.rows)
        if (!r.pass) {
            cx.expect(false, name + " fails at " + qstr(r.p, r.s) + " n=" + std::to_string(r.n) + " a=" +
                                 std::to_string(r.a) + (r.note.empty() ? "" : " (" + r.note + ")"));
            break;
        }
    cx.expect(!rep.rows.empty(), name + ": no rows");
    return rep.pass();
}

void c1(Ctx& cx, bool quick) { identity(cx, "carlitz", 2, 1, quick ? 3 : 4, 3, 3); }

void c2(Ctx& cx, bool)
{
    identity(cx, "so3", 2, 1, 3, 1, 1);
    identity(cx, "so3", 3, 1, 1, 1, 1);
    identity(cx, "so3", 5, 1, 1, 1, 1);
}

void c3(Ctx& cx, bool quick)
{
    identity(cx, "quadric-vs-toric", 2, 1, 1, 3, 3);
    if (!quick) identity(cx, "quadric-vs-toric", 3, 1, 1, 3, 3);
    identity(cx, "quadric-vs-toric", 2, 1, 2, 2, 2);
    identity(cx, "quadric-vs-toric", 3, 1, 1, 2, 2);
}

void c4(Ctx& cx, bool quick)
{
    identity(cx, "so-chain", 2, 1, quick ? 1 : 2, 2, 2);
    identity(cx, "so-chain", 3, 1, 1, 2, 2);
    identity(cx, "so-convolution", 2, 1, quick ? 1 : 2, 2, 2);
    identity(cx, "so-convolution", 3, 1, 1, 2, 2);
}

void c5(Ctx& cx, bool quick)
{
    struct Job { const char* g; int n, p; };
    std::vector<Job> jobs = {{"gl", 2, 2}, {"gl", 2, 3}, {"gl", 3, 2}, {"gl", 3, 3}, {"so", 1, 2}, {"so", 1, 3}};
    if (!quick) {
        jobs.push_back({"so", 2, 2});
        jobs.push_back({"so", 2, 3});
    }
    for (auto& j : jobs) {
        auto cfg = padic::make_cfg(j.p, 24);
        auto fs = frob::solve_frobenius(frob::connection_preset(j.g, j.n, j.p), cfg, 64);
        auto rep = frob::trace_check(fs, 16);
        int worst = 24;
        for (auto& r : rep.rows) worst = std::min(worst, r.agree);
        std::string key = fs.spec.label + " p=" + std::to_string(j.p);
        cx.data[key] = {{"precision", fs.precision}, {"min_agree_pi_digits", worst}, {"pass", rep.pass()}};
        cx.expect(rep.pass(), key + ": trace agrees to " + std::to_string(worst) + " pi-digits only");
    }
}

void c6(Ctx& cx, bool quick)
{
    const std::pair<int, int> fields[] = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}};
    long rows = 0;
    for (auto [p, s] : fields) {
        long q = 1;
        for (int i = 0; i < s; ++i) q *= p;
        if (quick && q > 5) continue;
        for (int n = 1; n <= 4; ++n) {
            auto rep = lfun::ordinarity_check(lfun::Family::Kl, p, s, n, 1);
            rows += long(rep.rows.size());
            for (auto& r : rep.rows)
                cx.expect(r.pass, "Kl_" + std::to_string(n) + " " + qstr(p, s) + " a=" + std::to_string(r.a) +
                                      ": NP " + lfun::slopes_str(r.np) + " " + r.note);
        }
        for (int n = 1; n <= 2; ++n) {
            auto rep = lfun::ordinarity_check(lfun::Family::SOodd, p, s, n, 1);
            rows += long(rep.rows.size());
            for (auto& r : rep.rows)
                cx.expect(r.pass, "SO_" + std::to_string(2 * n + 1) + " " + qstr(p, s) + " a=" + std::to_string(r.a) +
                                      ": NP " + lfun::slopes_str(r.np) + " " + r.note);
        }
    }
    cx.data["points"] = rows;
}

void c7(Ctx& cx, bool quick)
{
    auto F = ff::make_field(3, 1);
    // degree exactly 3: the coefficient of T^4 vanishes given S_1..S_4
    for (uint32_t a = 1; a < 3; ++a) {
        auto t = lfun::family_power_sums(lfun::Family::Fd, *F, 1, a, 4, 1);
        std::vector<cyc::CycInt> S;
        for (auto& x : t) S.push_back(-x);
        bool deg_ok = true;
        try {
            auto L = lfun::lpoly_from_sums(S, 3);
            deg_ok = L.size() == 4 && !L[3].is_zero();
        } catch (const std::domain_error&) {
            deg_ok = false;
        }
        cx.expect(deg_ok, "f_1: L-polynomial is not of degree 3 at a=" + std::to_string(a));
    }
    auto r1 = lfun::ordinarity_check(lfun::Family::Fd, 3, 1, 1, 1);
    cx.expect(r1.pass(), "f_1 (n=1, p=3) not ordinary");
    cx.data["f1"] = r1.to_json();
    auto rh = lfun::ordinarity_check(lfun::Family::Hyp, 3, 1, 1, 1);
    cx.expect(rh.pass(), "Hyp(3; rho) slopes differ from {1/2,3/2,5/2}");
    cx.data["hyp"] = rh.to_json();
    if (quick) {
        cx.data["f2"] = "skipped in quick profile";
        return;
    }
    auto r2 = lfun::ordinarity_check(lfun::Family::Fd, 3, 1, 1, 2);
    cx.expect(r2.pass(), "f_2 (n=1, p=3) not ordinary");
    cx.data["f2"] = r2.to_json();
}

void c8(Ctx& cx, bool quick)
{
    const long R = quick ? 128 : 256;
    const int S = quick ? 5 : 7;
    auto F = dwork::bessel_seq(1), G = dwork::so_seq(1);
    auto alt = [](long m) { return m % 2 ? -1 : 1; };
    auto one = [](long) { return 1; };

    auto bf = dwork::check_conditions({F}, 2, R, S, true);
    cx.expect(bf.pass(), "Bessel family: conditions fail");
    cx.expect(bf.u_matches(0, alt), "Bessel family: u(1,m) != (-1)^m");
    auto pair = dwork::check_conditions({F, G}, 2, R, S, true);
    cx.expect(pair.pass(), "pair F,G: conditions fail");
    cx.expect(pair.u_matches(0, one) && pair.u_matches(1, alt), "pair F,G: u-pattern differs");
    auto so = dwork::check_conditions({G}, 2, R, S, false);
    cx.expect(so.pass(), "SO family: condition (c) fails");

    auto cong = dwork::congruence_theorem_check({F}, 2, 3, quick ? 4 : 5, true);
    cx.expect(cong.pass, "(i') fails for F");
    auto congp = dwork::congruence_theorem_check({F, G}, 2, 3, quick ? 4 : 5, true);
    cx.expect(congp.pass, "(i') fails for the pair F,G");
    auto congg = dwork::congruence_theorem_check({G}, 2, 3, quick ? 4 : 5, false);
    cx.expect(congg.pass, "(i) fails for G");

    auto ratio = dwork::ratio_integrality(F, G, 2, quick ? 64 : 128);
    cx.expect(ratio.pass(), "F/G has a non-integral coefficient");

    std::string pattern;
    for (auto& [k, signs] : pair.u)
        if (k.first == 1 && k.second <= 6) pattern += (signs.count(-1) && !signs.count(1)) ? "-" : signs.count(1) && !signs.count(-1) ? "+" : "?";
    cx.data["bessel"] = bf.to_json()["conditions"];
    cx.data["so"] = so.to_json()["conditions"];
    cx.data["pair_u(1,1,m)_m=1..6"] = pattern;
    cx.data["congruence_coefficients"] = cong.checked + congp.checked + congg.checked;
    cx.data["ratio"] = ratio.to_json();
}

void c9(Ctx& cx, bool)
{
    auto cfg = padic::make_cfg(2, 24);
    auto gl = frob::solve_frobenius(frob::connection_preset("gl", 3, 2), cfg, 64);
    auto r = dwork::unit_root_crosscheck(dwork::bessel_seq(1), gl, 1, 5, 1);
    cx.expect(r.unique_unit_root, "GL_3: no unique unit root");
    cx.expect(r.charpoly_agree, "GL_3: charpoly of phi~ differs from the one built from sums");
    cx.expect(r.pass, "GL_3: unit root and f(1) agree mod 2^" + std::to_string(r.agree_p) + " only");
    auto so = frob::solve_frobenius(frob::connection_preset("so", 1, 2), cfg, 64);
    auto s = dwork::unit_root_crosscheck(dwork::so_seq(1), so, 1, 5, 0);
    cx.expect(s.unique_unit_root, "SO_3: no unique unit root");
    cx.expect(s.charpoly_agree, "SO_3: charpoly of phi~ differs from the one built from sums");
    cx.expect(s.pass, "SO_3: unit root and f_G(1) agree mod 2^" + std::to_string(s.agree_p) + " only");
    cx.data["gl3"] = r.to_json();
    cx.data["so3"] = s.to_json();
}

void c10(Ctx& cx, bool quick)
{
    const long cases = quick ? 2000 : 10000;
    for (int s = 1; s <= (quick ? 3 : 4); ++s) identity(cx, "weil-bound", 2, s, s, 1, 4);
    identity(cx, "weil-bound", 3, 1, 2, 1, 4);
    identity(cx, "weil-bound", 5, 1, 1, 1, 4);
    identity(cx, "weil-bound", 7, 1, 1, 1, 4);
    if (!quick) {
        identity(cx, "weil-bound", 11, 1, 1, 1, 4);
        identity(cx, "weil-bound", 13, 1, 1, 1, 4);
    }
    auto tc = props::cyc_invariants(cases, 20261018);
    cx.expect(tc.failures == 0, "cyclotomic invariant: " + tc.first);
    auto tp = props::padic_invariants(cases, 20261019);
    cx.expect(tp.failures == 0, "padic invariant: " + tp.first);
    cx.data["cyc_cases"] = cases;
    cx.data["cyc_checks"] = tc.cases;
    cx.data["padic_checks"] = tp.cases;
    struct Job { const char* g; int n, p; };
    for (auto j : {Job{"gl", 1, 2}, Job{"gl", 2, 3}, Job{"so", 1, 2}, Job{"hyp", 1, 3}}) {
        auto cfg = padic::make_cfg(j.p, 24);
        auto fs = frob::solve_frobenius(frob::connection_preset(j.g, j.n, j.p), cfg, 64);
        long res = frob::defining_residual(fs);
        cx.expect(res >= cfg->M, fs.spec.label + ": residual nonzero mod pi^" + std::to_string(res));
        cx.data["residual " + fs.spec.label + " p=" + std::to_string(j.p)] = res;
    }
}

struct Entry {
    int id;
    const char* title;
    double budget;
    void (*fn)(Ctx&, bool);
};

const Entry kEntries[] = {
    {1, "Carlitz identity S_3 = S_2^2 - q, q <= 16", 1, c1},
    {2, "SO_3 identity, p=2 at q<=8 and p in {3,5}", 5, c2},
    {3, "quadric = toric (n=3, q in {2,3}); q Kl_SO4 = S_2^2 (q<=4)", 30, c3},
    {4, "SO chain and convolution, n=2, q in {2,3,4}", 30, c4},
    {5, "Frobenius trace = Kloosterman sum mod pi^16 (GL_2,3; SO_3,5)", 60, c5},
    {6, "Newton polygon slopes {0..r-1}, Kl_n (n<=4), SO_2n+1 (n<=2), q<=9", 30, c6},
    {7, "L(f_d) degree and NP = HP; Hyp(3) slopes {1/2,3/2,5/2}", 600, c7},
    {8, "Dwork conditions, u-pattern, product congruence, F/G integrality", 60, c8},
    {9, "unit root of phi~(1) = f(1) mod 2^5, GL_3 and SO_3", 10, c9},
    {10, "Weil bound, ring/valuation invariants, solver residual", 120, c10},
};

}  // namespace

double budget_seconds(int id)
{
    for (auto& e : kEntries)
        if (e.id == id) return e.budget;
    return 0;
}

std::string Result::line() const
{
    char buf[96];
    std::snprintf(buf, sizeof buf, " (%.2f s, budget %.0f s)", seconds, budget);
    std::string s = std::string(pass() ? "PASS" : "FAIL") + "  criterion " + std::to_string(id) + ": " + title + buf;
    if (!detail.empty()) s += " -- " + detail;
    return s;
}

nlohmann::json Result::to_json() const
{
    return {{"id", id},       {"title", title},   {"pass", pass()},           {"checks_pass", checks_pass},
            {"seconds", seconds}, {"budget", budget}, {"within_budget", within_budget}, {"detail", detail},
            {"data", data}};
}

std::vector<Result> run(Profile profile, const std::vector<int>& only, const std::function<void(const Result&)>& on_result)
{
    const bool quick = profile == Profile::Quick;
    std::vector<Result> out;
    for (auto& e : kEntries) {
        if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end()) continue;
        Ctx cx;
        auto t0 = std::chrono::steady_clock::now();
        try {
            e.fn(cx, quick);
        } catch (const std::exception& ex) {
            cx.ok = false;
            cx.notes.push_back(std::string("exception: ") + ex.what());
        }
        Result r;
        r.id = e.id;
        r.title = e.title;
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.budget = e.budget;
        r.within_budget = quick || r.seconds <= e.budget;
        r.checks_pass = cx.ok;
        std::ostringstream d;
        for (size_t i = 0; i < cx.notes.size(); ++i) d << (i ? "; " : "") << cx.notes[i];
        if (!r.within_budget) d << (cx.notes.empty() ? "" : "; ") << "over runtime budget";
        r.detail = d.str();
        r.data = cx.data;
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace acceptance
