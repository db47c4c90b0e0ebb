#include "frobkit/frob.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>

#include "frobkit/lfun.hpp"
#include "frobkit/sums.hpp"

namespace frob {

using padic::PadicNum;

namespace {

KMat zero_kmat(int r, int p) { return KMat(r, KNum(p)); }

long kmat_min_val(const KMat& m)
{
    long v = LONG_MAX;
    for (auto& x : m.a) v = std::min(v, x.valuation());
    return v;
}

std::string group_name(Group g)
{
    switch (g) {
    case Group::GL: return "GLn";
    case Group::SO: return "SO2n1";
    case Group::Hyp: return "scalar-hypergeometric";
    }
    return "?";
}

mpz_class factorial(long r)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), r);
    return f;
}

mpz_class double_factorial_odd(long r)   // (2r-1)!!
{
    mpz_class f = 1;
    for (long k = 1; k <= r; ++k) f *= 2 * k - 1;
    return f;
}

}  // namespace

nlohmann::json ConnectionSpec::to_json() const
{
    nlohmann::json j{{"label", label}, {"group", group_name(group)}, {"n", n}, {"p", p}, {"r", r}, {"h", h},
                     {"lambda", lambda_sign < 0 ? "-pi" : "pi"}};
    j["A0"] = A0;
    nlohmann::json a1 = nlohmann::json::array();
    for (int i = 0; i < r; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < r; ++k) row.push_back(A1(i, k).str());
        a1.push_back(row);
    }
    j["A1"] = a1;
    j["ode_c"] = c.str();
    if (has_beta) j["ode_beta"] = beta.get_str();
    return j;
}

ConnectionSpec connection_preset(const std::string& label0, int n, int p, int lambda_sign)
{
    if (!ff::is_prime(p)) throw std::invalid_argument("connection_preset: p must be prime");
    if (n < 1) throw std::invalid_argument("connection_preset: n >= 1");
    if (lambda_sign != 1 && lambda_sign != -1) throw std::invalid_argument("connection_preset: lambda sign must be +-1");
    std::string label = label0;
    ConnectionSpec s;
    s.n = n;
    s.p = p;
    s.lambda_sign = lambda_sign;
    KNum lam = KNum::pi(p) * mpq_class(lambda_sign);
    if (label == "gl" || label == "GLn") {
        s.group = Group::GL;
        s.r = n;
        s.h = n;
        s.label = "GLn(" + std::to_string(n) + ")";
    } else if (label == "so" || label == "SO2n1") {
        s.group = Group::SO;
        s.r = 2 * n + 1;
        s.h = 2 * n;
        s.label = "SO2n1(" + std::to_string(n) + ")";
    } else if (label == "hyp" || label == "scalar-hypergeometric") {
        if (p == 2) throw std::invalid_argument("connection_preset: scalar-hypergeometric needs odd p");
        s.group = Group::Hyp;
        s.r = 2 * n + 1;
        s.h = 2 * n;
        s.label = "scalar-hypergeometric(" + std::to_string(n) + ")";
    } else {
        throw std::invalid_argument("connection_preset: unsupported label '" + label0 + "'");
    }
    int r = s.r;
    s.A0.assign(r, std::vector<long>(r, 0));
    for (int i = 0; i + 1 < r; ++i) s.A0[i][i + 1] = 1;
    s.A1 = zero_kmat(r, p);
    switch (s.group) {
    case Group::GL:
        s.A1(r - 1, 0) = lam.pow(n);
        s.c = lam.pow(n);   // delta^n y = lambda^n x y
        break;
    case Group::SO: {
        KNum e = lam.pow(2 * n) * mpq_class(2);
        s.A1(r - 2, 0) = e;
        s.A1(r - 1, 1) = e;
        // delta^{2n+1} y = 4 lambda^{2n} x (delta + 1/2) y
        s.c = lam.pow(2 * n) * mpq_class(4);
        s.beta = mpq_class(-1, 2);
        s.has_beta = true;
        break;
    }
    case Group::Hyp: {
        // delta^N - (-1)^{N+p} pi^{N-1} x (delta - 1/2), companion form conjugated by diag((-1)^i)
        int N = r;
        // delta^N y = c x (delta - beta) y
        KNum c = KNum::pi(p).pow(N - 1) * mpq_class(((N + p) % 2) ? -1 : 1);
        s.c = c;
        s.beta = mpq_class(1, 2);
        s.has_beta = true;
        KNum sg(p, mpq_class((N - 1) % 2 ? -1 : 1));
        s.A1(N - 1, 1) = sg * c;
        s.A1(N - 1, 0) = sg * c * s.beta;
        break;
    }
    }
    return s;
}

OdeSeries ode_solution_series(const ConnectionSpec& spec, int D, const CfgPtr& cfg)
{
    if (D < 1) throw std::invalid_argument("ode_solution_series: D >= 1");
    int p = spec.p, r = spec.r;
    OdeSeries out;
    KNum lam = KNum::pi(p) * mpq_class(spec.lambda_sign);
    for (long k = 0; k < D; ++k) {
        KNum b(p);
        switch (spec.group) {
        case Group::GL: {
            mpz_class f = factorial(k), fn;
            mpz_pow_ui(fn.get_mpz_t(), f.get_mpz_t(), spec.n);
            b = lam.pow(spec.n).pow(k) / mpq_class(fn);
            break;
        }
        case Group::SO: {
            mpz_class f = factorial(k), fn;
            mpz_pow_ui(fn.get_mpz_t(), f.get_mpz_t(), 2 * spec.n + 1);
            b = (lam.pow(2 * spec.n) * mpq_class(2)).pow(k) * mpq_class(double_factorial_odd(k)) / mpq_class(fn);
            break;
        }
        case Group::Hyp: {
            mpz_class f = factorial(k), fn;
            mpz_pow_ui(fn.get_mpz_t(), f.get_mpz_t(), r);
            mpq_class prod = 1;
            for (long j = 1; j <= k; ++j) prod *= mpq_class(j - 1) - spec.beta;
            b = spec.c.pow(k) * prod / mpq_class(fn);
            break;
        }
        }
        out.exact.push_back(b);
    }
    // apply the operator: k^r B(k) - c (k - 1 - beta) B(k-1), or k^r B(k) - c B(k-1)
    out.verified = out.exact[0] == KNum(p, mpq_class(1));
    for (long k = 1; k < D && out.verified; ++k) {
        mpz_class kr;
        mpz_ui_pow_ui(kr.get_mpz_t(), k, r);
        KNum lhs = out.exact[k] * mpq_class(kr);
        KNum rhs = spec.c * out.exact[k - 1];
        if (spec.has_beta) rhs = rhs * (mpq_class(k - 1) - spec.beta);
        if (lhs != rhs) out.verified = false;
    }
    out.min_valuation = LONG_MAX;
    for (auto& b : out.exact) out.min_valuation = std::min(out.min_valuation, b.valuation());
    if (out.min_valuation < 0)
        throw std::domain_error("ode_solution_series: non-integral coefficient (valuation " + std::to_string(out.min_valuation) + ")");
    for (auto& b : out.exact) out.reduced.push_back(b.to_padic(cfg));
    return out;
}

namespace {

// phi_k for k < D from phi_0, exact
std::vector<KMat> solve_from(const ConnectionSpec& s, const KMat& phi0, int D)
{
    int r = s.r, p = s.p;
    std::vector<KMat> ph{phi0};
    // nonzero entries of A1
    std::vector<std::tuple<int, int, KNum>> a1;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (!s.A1(i, j).is_zero()) a1.emplace_back(i, j, s.A1(i, j));
    for (int k = 1; k < D; ++k) {
        // k phi_k + phi_k A0 - p A0 phi_k = p A1 phi_{k-p} - phi_{k-1} A1
        KMat R = zero_kmat(r, p);
        for (auto& [i, l, v] : a1) {
            if (k - p >= 0)
                for (int j = 0; j < r; ++j) R(i, j) += v * ph[k - p](l, j) * mpq_class(p);
            for (int i2 = 0; i2 < r; ++i2) R(i2, l) -= ph[k - 1](i2, i) * v;
        }
        KMat X = zero_kmat(r, p);
        mpq_class inv_k(1, k);
        for (int j = 0; j < r; ++j)
            for (int i = r - 1; i >= 0; --i) {
                KNum v = R(i, j);
                if (j >= 1) v -= X(i, j - 1);
                if (i + 1 < r) v += X(i + 1, j) * mpq_class(p);
                X(i, j) = v * inv_k;
            }
        ph.push_back(std::move(X));
    }
    return ph;
}

struct Fit {
    std::vector<KMat> phi;
    std::vector<KNum> gamma;
    long residual_val = LONG_MAX;
};

Fit overconvergent(const ConnectionSpec& s, int D)
{
    int r = s.r, p = s.p;
    std::vector<std::vector<KMat>> bases;
    for (int d = 0; d < r; ++d) {
        KMat B = zero_kmat(r, p);
        for (int i = 0; i + d < r; ++i) {
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), p, r - 1 - d - i);
            B(i, i + d) = KNum(p, mpq_class(pw));
        }
        bases.push_back(solve_from(s, B, D));
    }
    Fit fit;
    int m = r - 1;
    if (m > 0) {
        // kill the top coefficients: sum_d gamma_d B_d[K] = -B_0[K], K in [D-2r, D)
        std::vector<std::vector<KNum>> rows;
        for (int K = std::max(1, D - 2 * r); K < D; ++K)
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    std::vector<KNum> row;
                    for (int d = 1; d < r; ++d) row.push_back(bases[d][K](i, j));
                    row.push_back(-bases[0][K](i, j));
                    bool any = false;
                    for (auto& x : row) any = any || !x.is_zero();
                    if (any) rows.push_back(std::move(row));
                }
        std::vector<int> used(rows.size(), 0);
        std::vector<int> pivrow(m, -1);
        for (int c = 0; c < m; ++c) {
            int best = -1;
            long bv = LONG_MAX;
            for (size_t i = 0; i < rows.size(); ++i) {
                if (used[i]) continue;
                long v = rows[i][c].valuation();
                if (v < bv) { bv = v; best = int(i); }
            }
            if (best < 0 || bv == LONG_MAX) throw std::runtime_error("solve_frobenius: singular overconvergence system");
            used[best] = 1;
            pivrow[c] = best;
            KNum inv = rows[best][c].inv();
            for (size_t i = 0; i < rows.size(); ++i) {
                if (int(i) == best || rows[i][c].is_zero()) continue;
                KNum f = rows[i][c] * inv;
                for (int t = 0; t <= m; ++t) rows[i][t] -= f * rows[best][t];
            }
        }
        fit.gamma.resize(m, KNum(p));
        for (int c = 0; c < m; ++c) fit.gamma[c] = rows[pivrow[c]][m] / rows[pivrow[c]][c];
        for (size_t i = 0; i < rows.size(); ++i)
            if (!used[i]) fit.residual_val = std::min(fit.residual_val, rows[i][m].valuation());
    }
    fit.phi = bases[0];
    for (int d = 1; d < r; ++d)
        for (int k = 0; k < D; ++k)
            for (auto idx = size_t(0); idx < fit.phi[k].a.size(); ++idx)
                if (!bases[d][k].a[idx].is_zero()) fit.phi[k].a[idx] += fit.gamma[d - 1] * bases[d][k].a[idx];
    return fit;
}

}  // namespace

FrobSeries solve_frobenius(const ConnectionSpec& spec, const CfgPtr& cfg, int D, int stability_extra)
{
    if (cfg->p != spec.p) throw std::invalid_argument("solve_frobenius: prime mismatch");
    if (D < 2 * spec.r + 2) throw std::invalid_argument("solve_frobenius: degree too small for the overconvergence fit");
    FrobSeries fs;
    fs.spec = spec;
    fs.cfg = cfg;
    fs.D = D;
    Fit fit = overconvergent(spec, D);
    fs.exact = std::move(fit.phi);
    fs.gamma = fit.gamma;
    fs.fit_residual_val = fit.residual_val;
    fs.phi0 = fs.exact[0];
    int M = cfg->M;
    for (auto& m : fs.exact) fs.coeff_min_val.push_back(kmat_min_val(m));
    long minv = *std::min_element(fs.coeff_min_val.begin(), fs.coeff_min_val.end());
    if (minv < 0)
        throw std::domain_error("solve_frobenius: coefficient of negative valuation " + std::to_string(minv) +
                                "; the overconvergence fit failed (raise D)");
    for (auto& m : fs.exact) fs.phi.c.push_back(padic::to_padic(m, cfg));
    // growth slope by least squares over the upper half, zero coefficients capped at 2M
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int k = D / 2; k < D; ++k) {
            double y = double(std::min<long>(fs.coeff_min_val[k], 2L * M + 2 * D));
            sx += k; sy += y; sxx += double(k) * k; sxy += k * y;
            ++cnt;
        }
        fs.growth_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }
    fs.residual_val = defining_residual(fs);
    // tail estimate: the smallest valuation among the last p r coefficients bounds what is dropped
    long tail = LONG_MAX;
    for (int k = std::max(0, D - spec.p * spec.r); k < D; ++k) tail = std::min(tail, fs.coeff_min_val[k]);
    fs.stability_val = LONG_MAX;
    if (stability_extra > 0) {
        Fit big = overconvergent(spec, D + stability_extra);
        for (int k = 0; k < D; ++k)
            for (size_t idx = 0; idx < fs.exact[k].a.size(); ++idx)
                fs.stability_val = std::min(fs.stability_val, (fs.exact[k].a[idx] - big.phi[k].a[idx]).valuation());
        for (int k = D; k < D + stability_extra; ++k) tail = std::min(tail, kmat_min_val(big.phi[k]));
    }
    long prec = std::min<long>({long(M), tail, fs.stability_val, fs.residual_val});
    fs.precision = int(std::max<long>(prec, 0));
    return fs;
}

long defining_residual(const FrobSeries& fs)
{
    const auto& s = fs.spec;
    int r = s.r, D = fs.D;
    auto cfg = fs.cfg;
    padic::PSeriesMat A;
    PMat z(r, PadicNum(cfg));
    A.c.assign(D, z);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) A.c[0](i, j) = PadicNum(cfg, mpz_class(s.A0[i][j]));
    if (D > 1) A.c[1] = padic::to_padic(s.A1, cfg);
    auto pA = padic::series_compose_xp(A);
    PadicNum pp(cfg, mpz_class(s.p));
    for (auto& m : pA.c)
        for (auto& x : m.a) x = x * pp;
    auto res = padic::series_sub(padic::series_add(padic::series_delta(fs.phi), padic::series_mul(fs.phi, A)),
                                 padic::series_mul(pA, fs.phi));
    long v = cfg->M;
    for (auto& m : res.c)
        for (auto& x : m.a) v = std::min<long>(v, x.valuation());
    return v;
}

PointValue frobenius_at_point(const FrobSeries& fs, ff::FqElem a)
{
    if (!a.F || a.F->s != 1) throw std::invalid_argument("frobenius_at_point: degree-one points only");
    if (a.F->p != fs.spec.p) throw std::invalid_argument("frobenius_at_point: prime mismatch");
    if (a.is_zero()) throw std::invalid_argument("frobenius_at_point: a must be nonzero");
    PointValue pv;
    pv.a = a.v;
    PadicNum t = padic::teichmuller(a, fs.cfg);
    pv.value = padic::series_eval(fs.phi, t);
    pv.precision = fs.precision;
    for (auto& x : pv.value.a) x = x.reduce(pv.precision);
    return pv;
}

bool TraceReport::pass() const
{
    if (rows.empty()) return false;
    for (auto& r : rows)
        if (!r.pass) return false;
    return true;
}

nlohmann::json TraceReport::to_json() const
{
    nlohmann::json j{{"label", label}, {"p", p}, {"n", n}, {"M", M}, {"D", D}, {"required_digits", required}, {"pass", pass()}};
    j["rows"] = nlohmann::json::array();
    for (auto& r : rows)
        j["rows"].push_back({{"a", r.a}, {"trace_digits", r.lhs}, {"sum_digits", r.rhs}, {"agree", r.agree},
                             {"precision", r.precision}, {"pass", r.pass}});
    return j;
}

TraceReport trace_check(const FrobSeries& fs, int required)
{
    const auto& s = fs.spec;
    TraceReport rep;
    rep.label = s.label;
    rep.p = s.p; rep.n = s.n; rep.M = fs.cfg->M; rep.D = fs.D; rep.required = required;
    auto F = ff::make_field(s.p, 1);
    sums::AdditiveChar psi(*F);
    for (uint32_t a = 1; a < F->q; ++a) {
        TraceRow row;
        row.a = a;
        auto pv = frobenius_at_point(fs, ff::FqElem(F.get(), a));
        PadicNum tr = pv.value.trace();
        cyc::CycInt expect;
        switch (s.group) {
        case Group::GL: {
            auto S = sums::kloosterman_raw(*F, s.n, a, psi);
            expect = (s.n % 2 == 1) ? S : -S;
            break;
        }
        case Group::SO: {
            auto v = sums::so2n1_sum(*F, s.n, a, psi);
            mpz_class sc;
            mpz_ui_pow_ui(sc.get_mpz_t(), F->q, (2 * s.n - v.k) / 2);
            expect = v.num * sc;
            break;
        }
        case Group::Hyp:
            // the hypergeometric Frobenius is phi~ times the Gauss sum G(psi^-1, rho)
            expect = sums::hyp_sum(*F, s.r, 1, a, psi);
            tr = tr * padic::embed_zeta(sums::gauss_sum(sums::AdditiveChar(*F, F->neg(1)), sums::QuadChar(*F)), fs.cfg);
            break;
        }
        PadicNum rhs = padic::embed_zeta(expect, fs.cfg);
        row.precision = pv.precision;
        row.agree = std::min((tr - rhs).valuation(), pv.precision);
        row.lhs = tr.reduce(pv.precision).digits();
        row.rhs = rhs.reduce(pv.precision).digits();
        row.lhs.resize(pv.precision);
        row.rhs.resize(pv.precision);
        row.pass = row.agree >= required && pv.precision >= required;
        rep.rows.push_back(row);
    }
    return rep;
}

namespace {

PadicNum det(const PMat& m)
{
    int r = m.r;
    std::vector<int> perm(r);
    for (int i = 0; i < r; ++i) perm[i] = i;
    PadicNum acc(m.a[0].cfg());
    do {
        int inv = 0;
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) inv += perm[i] > perm[j];
        PadicNum t(m.a[0].cfg(), mpz_class(1));
        for (int i = 0; i < r; ++i) t = t * m(i, perm[i]);
        if (inv & 1) acc -= t; else acc += t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

}  // namespace

bool det_constant_check(const FrobSeries& fs, int* agree)
{
    if (!fs.spec.A1.trace().is_zero()) throw std::invalid_argument("det_constant_check: A1 has nonzero trace");
    auto F = ff::make_field(fs.spec.p, 1);
    PadicNum d0 = det(padic::to_padic(fs.phi0, fs.cfg));
    int worst = fs.precision;
    for (uint32_t a = 1; a < F->q; ++a) {
        auto pv = frobenius_at_point(fs, ff::FqElem(F.get(), a));
        worst = std::min(worst, (det(pv.value) - d0).valuation());
    }
    if (agree) *agree = worst;
    return worst >= fs.precision;
}

std::vector<mpq_class> slope_set_at_point(const ConnectionSpec& spec, const ff::Field& F, uint32_t a)
{
    lfun::Family fam = spec.group == Group::GL ? lfun::Family::Kl : spec.group == Group::SO ? lfun::Family::SOodd : lfun::Family::Hyp;
    if (F.p != spec.p) throw std::invalid_argument("slope_set_at_point: prime mismatch");
    auto t = lfun::family_power_sums(fam, F, spec.n, a, spec.r);
    auto P = lfun::charpoly_from_power_sums(t, spec.r);
    return lfun::newton_polygon(P, F.s, lfun::PolyKind::Charpoly).slopes;
}

nlohmann::json FrobSeries::to_json(bool with_coeffs) const
{
    nlohmann::json j;
    j["spec"] = spec.to_json();
    j["M"] = cfg->M;
    j["D"] = D;
    j["gamma"] = nlohmann::json::array();
    for (auto& g : gamma) j["gamma"].push_back(g.str());
    j["coeff_min_valuation"] = coeff_min_val;
    j["growth_slope"] = growth_slope;
    j["residual_valuation"] = residual_val;
    j["residual_zero"] = residual_val >= cfg->M;
    j["fit_residual_valuation"] = fit_residual_val == LONG_MAX ? -1 : fit_residual_val;
    j["stability_valuation"] = stability_val == LONG_MAX ? -1 : stability_val;
    j["precision"] = precision;
    if (with_coeffs) {
        j["coefficients"] = nlohmann::json::array();
        for (auto& m : phi.c) {
            nlohmann::json mm = nlohmann::json::array();
            for (int i = 0; i < m.r; ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (int k = 0; k < m.r; ++k) row.push_back(m(i, k).digits());
                mm.push_back(row);
            }
            j["coefficients"].push_back(mm);
        }
    }
    return j;
}

}  // namespace frob
