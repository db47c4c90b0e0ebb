// frobkit: command-line front end. Exit 0 when every check passes, 1 on a failed check, 2 on usage errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "frobkit/acceptance.hpp"
#include "frobkit/dwork.hpp"
#include "frobkit/frob.hpp"
#include "frobkit/lfun.hpp"
#include "frobkit/par.hpp"
#include "frobkit/sums.hpp"

#ifndef FROBKIT_VERSION
#define FROBKIT_VERSION "dev"
#endif

using nlohmann::json;

namespace {

struct Common {
    std::string format = "json";
    std::string out;
    std::string counterexample = "frobkit-counterexample.json";
    int workers = 1;
};

struct FieldArgs {
    int p = 2, s = 1;
    long q = 0;
    void add(CLI::App* c)
    {
        c->add_option("--p", p, "characteristic");
        c->add_option("--s", s, "degree of F_q over F_p");
        c->add_option("--q", q, "field size (overrides --p/--s)");
    }
    ff::FieldPtr field()
    {
        if (q > 0) {
            long pp = 2;
            while (q % pp) ++pp;
            long t = q;
            int e = 0;
            while (t % pp == 0) t /= pp, ++e;
            if (t != 1) throw std::invalid_argument("--q must be a prime power");
            p = int(pp);
            s = e;
        }
        if (!ff::is_prime(p)) throw std::invalid_argument("--p must be prime");
        return ff::make_field(p, s);
    }
};

std::vector<uint32_t> parse_points(const std::string& spec, const ff::Field& F)
{
    std::vector<uint32_t> out;
    if (spec == "all") {
        for (uint32_t a = 1; a < F.q; ++a) out.push_back(a);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        long v = std::stol(tok);
        if (v <= 0 || v >= long(F.q)) throw std::invalid_argument("point " + tok + " is not a nonzero element code");
        out.push_back(uint32_t(v));
    }
    return out;
}

std::string invocation_str(const std::vector<std::string>& argv)
{
    std::string s;
    for (auto& a : argv) s += (s.empty() ? "" : " ") + a;
    return s;
}

int emit(const Common& c, const std::vector<std::string>& argv, const std::string& sub, bool pass, const json& result,
         const std::string& csv = "")
{
    json env = {{"tool", "frobkit"},       {"version", FROBKIT_VERSION}, {"invocation", invocation_str(argv)},
                {"subcommand", sub}, {"pass", pass},         {"result", result}};
    std::string text;
    if (c.format == "csv") {
        text = "# frobkit " + std::string(FROBKIT_VERSION) + ": " + invocation_str(argv) + "\n" + csv;
    } else {
        text = env.dump(2) + "\n";
    }
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.out);
        if (!f) throw std::runtime_error("cannot write " + c.out);
        f << text;
    }
    if (!pass && !c.counterexample.empty()) {
        std::ofstream f(c.counterexample);
        f << env.dump(2) << "\n";
        std::cerr << "check failed; report written to " << c.counterexample << "\n";
    }
    return pass ? 0 : 1;
}

std::string cyc_str(const cyc::CycInt& x) { return x.str(); }

}  // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"frobkit: exponential sums, Frobenius structures and Dwork congruences"};
    app.set_version_flag("--version", FROBKIT_VERSION);
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* c) {
        c->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        c->add_option("--out", common.out, "write the report here instead of stdout");
        c->add_option("--counterexample", common.counterexample, "report file written on failure");
        c->add_option("--workers", common.workers, "worker threads")->check(CLI::Range(1, 256));
    };

    // kloosterman
    FieldArgs kf;
    int kn = 2;
    std::string ka = "all";
    auto* kl = app.add_subcommand("kloosterman", "S_n(a) over F_q, exact in Z[zeta_p]");
    kf.add(kl);
    kl->add_option("--n", kn, "number of variables")->check(CLI::Range(1, 8));
    kl->add_option("--a", ka, "'all' or comma-separated element codes");
    add_common(kl);

    // gauss
    FieldArgs gf;
    uint32_t gb = 1;
    auto* ga = app.add_subcommand("gauss", "Gauss sums of the quadratic and trivial characters");
    gf.add(ga);
    ga->add_option("--b", gb, "additive character psi_b");
    add_common(ga);

    // hyp
    FieldArgs hf;
    int hn = 3, hm = 1;
    std::string ha = "all";
    auto* hy = app.add_subcommand("hyp", "hypergeometric sums Hyp(n; rho^m)");
    hf.add(hy);
    hy->add_option("--n", hn)->check(CLI::Range(1, 7));
    hy->add_option("--m", hm, "number of quadratic characters")->check(CLI::Range(0, 7));
    hy->add_option("--a", ha);
    add_common(hy);

    // so-sum
    FieldArgs sf;
    int sn = 1;
    std::string sa = "all", skind = "odd";
    auto* so = app.add_subcommand("so-sum", "SO Kloosterman sums (odd convolution, quadric, toric)");
    sf.add(so);
    so->add_option("--n", sn)->check(CLI::Range(1, 6));
    so->add_option("--kind", skind)->check(CLI::IsMember({"odd", "quadric", "toric"}));
    so->add_option("--a", sa);
    add_common(so);

    // verify-identity
    std::string vname;
    sums::IdentityParams vp;
    int vs = 0;
    int vn = 0;
    auto* vi = app.add_subcommand("verify-identity", "exact identities between exponential sums");
    vi->add_option("name", vname, "carlitz | so3 | so-chain | so-convolution | quadric-vs-toric | weil-bound | psi-rescale")
        ->required()
        ->check(CLI::IsMember({"carlitz", "so3", "so-chain", "so-convolution", "quadric-vs-toric", "weil-bound", "psi-rescale"}));
    vi->add_option("--p", vp.p);
    vi->add_option("--s", vs, "single degree (sets smin = smax)");
    vi->add_option("--smin", vp.smin);
    vi->add_option("--smax", vp.smax);
    vi->add_option("--n", vn, "single n (sets nmin = nmax)");
    vi->add_option("--nmin", vp.nmin);
    vi->add_option("--nmax", vp.nmax);
    vi->add_option("--psi-shift", vp.psi_shift, "mutation hook: evaluate psi off by this shift")->group("");
    add_common(vi);

    // frobenius-solve / frobenius-trace-check
    std::string fgroup = "gl";
    int fn = 2, fp = 3, fM = 24, fD = 64, freq = 16;
    bool fcoeffs = false;
    auto add_frob = [&](CLI::App* c) {
        c->add_option("--group", fgroup, "gl | so | hyp")->check(CLI::IsMember({"gl", "so", "hyp", "GLn", "SO2n1", "scalar-hypergeometric"}));
        c->add_option("--n", fn)->check(CLI::Range(1, 6));
        c->add_option("--p", fp);
        c->add_option("--M", fM, "precision in pi-digits")->check(CLI::Range(4, 200));
        c->add_option("--D", fD, "series degree")->check(CLI::Range(4, 4096));
        add_common(c);
    };
    auto* fsv = app.add_subcommand("frobenius-solve", "solve for the Frobenius structure phi~(x)");
    add_frob(fsv);
    fsv->add_flag("--coeffs", fcoeffs, "include the reduced coefficients");
    auto* ftc = app.add_subcommand("frobenius-trace-check", "Tr phi~(a~) against exponential sums at every a");
    add_frob(ftc);
    ftc->add_option("--required", freq, "pi-digits that must agree");

    // dwork-congruence
    std::string dfam = "bessel";
    int dn = 1, dp = 2, dS = 7, dsmax = 5, dmmax = 3;
    long dR = 256;
    bool dtheorem = false;
    auto* dw = app.add_subcommand("dwork-congruence", "Dwork's conditions, u-pattern and product congruence");
    dw->add_option("--family", dfam, "bessel | so | pair")->check(CLI::IsMember({"bessel", "so", "pair"}));
    dw->add_option("--n", dn)->check(CLI::Range(1, 6));
    dw->add_option("--p", dp);
    dw->add_option("--R", dR, "largest index r")->check(CLI::Range(4L, 4096L));
    dw->add_option("--S", dS, "largest s")->check(CLI::Range(0, 12));
    dw->add_flag("--theorem", dtheorem, "also verify the product congruence");
    dw->add_option("--theorem-s", dsmax)->check(CLI::Range(0, 8));
    dw->add_option("--theorem-m", dmmax)->check(CLI::Range(0, 16));
    add_common(dw);

    // unit-root
    std::string ugroup = "gl";
    int un = 3, uM = 24, uD = 64, ureq = 5;
    uint32_t ua = 1;
    auto* ur = app.add_subcommand("unit-root", "unit root of phi~(a~) against the Dwork function f(a~), p = 2");
    ur->add_option("--group", ugroup, "gl | so")->check(CLI::IsMember({"gl", "so"}));
    ur->add_option("--n", un)->check(CLI::Range(1, 5));
    ur->add_option("--a", ua);
    ur->add_option("--M", uM)->check(CLI::Range(8, 200));
    ur->add_option("--D", uD)->check(CLI::Range(8, 4096));
    ur->add_option("--required", ureq, "2-adic digits that must agree")->check(CLI::Range(1, 60));
    add_common(ur);

    // lpoly
    FieldArgs lf;
    int ln = 1, ld = 1;
    std::string la = "all";
    auto* lp = app.add_subcommand("lpoly", "L-polynomial of the toric family f_d and its Newton polygon");
    lf.add(lp);
    lp->add_option("--n", ln)->check(CLI::Range(1, 3));
    lp->add_option("--d", ld)->check(CLI::Range(1, 6));
    lp->add_option("--a", la);
    add_common(lp);

    // newton-polygon
    FieldArgs nf;
    std::string nfam = "kl", na = "all";
    int nn = 3, nd = 1;
    auto* np = app.add_subcommand("newton-polygon", "Frobenius slopes at points from exponential sums");
    nf.add(np);
    np->add_option("--family", nfam, "kl | so | hyp | fd")->check(CLI::IsMember({"kl", "gl", "so", "hyp", "fd"}));
    np->add_option("--n", nn)->check(CLI::Range(1, 6));
    np->add_option("--d", nd)->check(CLI::Range(1, 6));
    np->add_option("--a", na);
    add_common(np);

    // verify-all
    std::string vprofile = "quick";
    std::vector<int> vonly;
    auto* va = app.add_subcommand("verify-all", "run the acceptance criteria");
    va->add_option("--profile", vprofile)->check(CLI::IsMember({"quick", "full"}));
    va->add_option("--only", vonly, "criterion ids");
    add_common(va);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        par::set_default_workers(common.workers);
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();

        if (sub == kl) {
            auto F = kf.field();
            sums::AdditiveChar psi(*F);
            json rows = json::array();
            std::string csv = "a,S_n,abs_normalized\n";
            for (auto a : parse_points(ka, *F)) {
                auto v = sums::kloosterman_raw(*F, kn, a, psi, common.workers);
                auto nv = sums::kloosterman_normalized(*F, kn, a, psi);
                json r = {{"a", a}, {"value", v}, {"normalized", nv}, {"abs_normalized", std::abs(nv.embed(1))}};
                rows.push_back(r);
                csv += std::to_string(a) + ",\"" + cyc_str(v) + "\"," + std::to_string(std::abs(nv.embed(1))) + "\n";
            }
            return emit(common, args, name, true, {{"field", *F}, {"n", kn}, {"rows", rows}}, csv);
        }
        if (sub == ga) {
            auto F = gf.field();
            sums::AdditiveChar psi(*F, gb);
            json r = {{"field", *F}, {"b", gb}, {"trivial", sums::gauss_sum_trivial(psi)}};
            std::string csv = "character,value\ntrivial,\"" + cyc_str(sums::gauss_sum_trivial(psi)) + "\"\n";
            if (F->p != 2) {
                auto g = sums::gauss_sum(psi, sums::QuadChar(*F));
                r["quadratic"] = g;
                r["quadratic_squared"] = g * g;
                csv += "quadratic,\"" + cyc_str(g) + "\"\n";
            }
            return emit(common, args, name, true, r, csv);
        }
        if (sub == hy) {
            auto F = hf.field();
            if (hm > 0 && F->p == 2) throw std::invalid_argument("quadratic characters need odd q");
            sums::AdditiveChar psi(*F);
            json rows = json::array();
            std::string csv = "a,value\n";
            for (auto a : parse_points(ha, *F)) {
                auto v = sums::hyp_sum(*F, hn, hm, a, psi, common.workers);
                rows.push_back({{"a", a}, {"value", v}});
                csv += std::to_string(a) + ",\"" + cyc_str(v) + "\"\n";
            }
            return emit(common, args, name, true, {{"field", *F}, {"n", hn}, {"m", hm}, {"rows", rows}}, csv);
        }
        if (sub == so) {
            auto F = sf.field();
            sums::AdditiveChar psi(*F);
            json rows = json::array();
            std::string csv = "a,numerator,k\n";
            bool pass = true;
            for (auto a : parse_points(sa, *F)) {
                json r = {{"a", a}};
                cyc::ScaledCyc v;
                if (skind == "odd") {
                    v = sums::so2n1_sum(*F, sn, a, psi);
                } else if (skind == "quadric") {
                    auto Q = sums::so2n_quadric_sum(*F, sn, a, psi);
                    v = Q.value;
                    r["points"] = Q.points;
                    long long cnt = sums::quadric_point_count(*F, sn);
                    r["points_independent"] = cnt;
                    pass = pass && cnt == Q.points;
                } else {
                    v = sums::so2n_toric_sum(*F, sn, a, psi, common.workers);
                }
                r["value"] = v;
                rows.push_back(r);
                csv += std::to_string(a) + ",\"" + cyc_str(v.num) + "\"," + std::to_string(v.k) + "\n";
            }
            return emit(common, args, name, pass, {{"field", *F}, {"n", sn}, {"kind", skind}, {"rows", rows}}, csv);
        }
        if (sub == vi) {
            if (vs > 0) vp.smin = vp.smax = vs;
            if (vn > 0) vp.nmin = vp.nmax = vn;
            if (vp.smax < vp.smin) vp.smax = vp.smin;
            if (vp.nmax < vp.nmin) vp.nmax = vp.nmin;
            vp.workers = common.workers;
            auto rep = sums::verify_identity(vname, vp);
            return emit(common, args, name, rep.pass(), rep.to_json(), rep.to_csv());
        }
        if (sub == fsv || sub == ftc) {
            auto spec = frob::connection_preset(fgroup, fn, fp);
            auto cfg = padic::make_cfg(fp, fM);
            auto fs = frob::solve_frobenius(spec, cfg, fD);
            if (sub == fsv) {
                bool ok = fs.residual_val >= fM;
                std::string csv = "k,min_valuation\n";
                for (size_t k = 0; k < fs.coeff_min_val.size(); ++k)
                    csv += std::to_string(k) + "," + std::to_string(fs.coeff_min_val[k]) + "\n";
                return emit(common, args, name, ok, fs.to_json(fcoeffs), csv);
            }
            auto rep = frob::trace_check(fs, freq);
            std::string csv = "a,agree,precision,pass\n";
            for (auto& r : rep.rows)
                csv += std::to_string(r.a) + "," + std::to_string(r.agree) + "," + std::to_string(r.precision) + "," +
                       (r.pass ? "1" : "0") + "\n";
            return emit(common, args, name, rep.pass(), rep.to_json(), csv);
        }
        if (sub == dw) {
            std::vector<dwork::CoeffSeq> seqs;
            bool cprime = true;
            if (dfam == "bessel") seqs = {dwork::bessel_seq(dn)};
            else if (dfam == "so") seqs = {dwork::so_seq(dn)}, cprime = false;
            else seqs = {dwork::bessel_seq(dn), dwork::so_seq(dn)};
            if (dp != 2) {
                if (dfam != "so") throw std::invalid_argument("the Bessel family is a 2-adic example; use --p 2");
                cprime = false;
            }
            auto rep = dwork::check_conditions(seqs, dp, dR, dS, cprime);
            json res = rep.to_json();
            bool pass = rep.pass();
            std::string csv = rep.to_csv();
            if (dtheorem) {
                auto th = dwork::congruence_theorem_check(seqs, dp, dmmax, dsmax, cprime);
                res["product_congruence"] = th.to_json();
                res["product_congruence"]["variant"] = cprime ? "mod 2^s B(m)" : "mod p^{s+1} B(m)";
                pass = pass && th.pass;
                csv += "\nproduct_congruence," + std::string(th.pass ? "pass" : "fail") + "\n";
            }
            return emit(common, args, name, pass, res, csv);
        }
        if (sub == ur) {
            auto spec = frob::connection_preset(ugroup, un, 2);
            auto cfg = padic::make_cfg(2, uM);
            auto fs = frob::solve_frobenius(spec, cfg, uD);
            dwork::CoeffSeq B;
            int delta = 0;
            if (ugroup == "gl") {
                if (un % 2 == 1) B = dwork::bessel_seq((un - 1) / 2), delta = 1;
                else B = dwork::gl_ode_seq(un);
            } else {
                B = dwork::so_seq(un);
            }
            auto rep = dwork::unit_root_crosscheck(B, fs, ua, ureq, delta);
            json res = rep.to_json();
            res["delta"] = delta;
            std::string csv = "label,a,agree_2_digits,required,pass\n\"" + rep.label + "\"," + std::to_string(ua) + "," +
                              std::to_string(rep.agree_p) + "," + std::to_string(ureq) + "," + (rep.pass ? "1" : "0") + "\n";
            return emit(common, args, name, rep.pass, res, csv);
        }
        if (sub == lp || sub == np) {
            const bool is_l = sub == lp;
            auto F = (is_l ? lf : nf).field();
            auto fam = is_l ? lfun::Family::Fd : lfun::parse_family(nfam);
            int n = is_l ? ln : nn, d = is_l ? ld : nd;
            if (fam == lfun::Family::Fd && (F->q - 1) % d) throw std::invalid_argument("d must divide q-1");
            auto pts = parse_points(is_l ? la : na, *F);
            int r = lfun::family_rank(fam, n, d);
            auto hodge = lfun::hodge_polygon_preset(fam, n, d);
            json rows = json::array();
            std::string csv = "a,slopes,hodge,ordinary\n";
            bool all = true;
            for (auto a : pts) {
                auto t = lfun::family_power_sums(fam, *F, n, a, r, d);
                lfun::CycPoly P;
                lfun::NewtonPolygon poly;
                if (fam == lfun::Family::Fd) {
                    std::vector<cyc::CycInt> S;
                    for (auto& x : t) S.push_back(-x);
                    P = lfun::lpoly_from_sums(S, r);
                    poly = lfun::newton_polygon(P, F->s, lfun::PolyKind::LPoly);
                } else {
                    P = lfun::charpoly_from_power_sums(t, r);
                    poly = lfun::newton_polygon(P, F->s, lfun::PolyKind::Charpoly);
                }
                json vals = json::array();
                for (auto& c : P) {
                    auto lv = cyc::lambda_valuation(c);
                    if (lv.infinite) vals.push_back(nullptr);
                    else vals.push_back(mpq_class(lv.value() / F->s).get_str());
                }
                std::vector<std::string> sl, hs;
                for (auto& x : poly.slopes) sl.push_back(x.get_str());
                for (auto& x : hodge) hs.push_back(x.get_str());
                bool ord = poly.slopes == hodge;
                all = all && ord;
                rows.push_back({{"a", a}, {"coeff_valuations", vals}, {"slopes", sl}, {"hodge", hs}, {"ordinary", ord}});
                csv += std::to_string(a) + ",\"" + lfun::slopes_str(poly.slopes) + "\",\"" + lfun::slopes_str(hodge) +
                       "\"," + (ord ? "1" : "0") + "\n";
            }
            json res = {{"family", lfun::family_name(fam)}, {"field", *F}, {"n", n}, {"d", d},
                        {"normalization", "v(q) = 1"}, {"rows", rows}, {"ordinary", all}};
            return emit(common, args, name, all, res, csv);
        }
        if (sub == va) {
            auto prof = vprofile == "full" ? acceptance::Profile::Full : acceptance::Profile::Quick;
            json rows = json::array();
            std::string csv = "id,pass,seconds,budget,title,detail\n";
            bool all = true;
            acceptance::run(prof, vonly, [&](const acceptance::Result& r) {
                std::cerr << r.line() << "\n";
                rows.push_back(r.to_json());
                all = all && r.pass();
                char secs[32];
                std::snprintf(secs, sizeof secs, "%.3f", r.seconds);
                csv += std::to_string(r.id) + "," + (r.pass() ? "1" : "0") + "," + secs + "," +
                       std::to_string(int(r.budget)) + ",\"" + r.title + "\",\"" + r.detail + "\"\n";
            });
            return emit(common, args, name, all, {{"profile", vprofile}, {"criteria", rows}}, csv);
        }
        throw std::logic_error("unhandled subcommand");
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
