#include "abcd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

// Term order of Decomposition, with phi', phi'', phi''' the weight derivatives
// and H = (1 - d_xx)^{-1}:
//   Q:  ((1+c)(a-b-1)+1/2) phi' eta^2      c(b-a-1/2) phi' eta_x^2
//       ((1+a)(b-a-1)+1/2) phi' u^2        a(a-b-1/2) phi' u_x^2
//       (1+c)(b-a+1) phi' eta H eta        (1+a)(a-b+1) phi' u H u
//   SQ: b(1+c) phi'' eta H eta_x           a(1+a) phi'' u H u_x
//       (a c/2) phi''' eta^2               (b a/2) phi''' u^2
//   NQ: 1/2(b-a-1) phi' u^2 eta            1/2(b-a+1) phi' eta H(u^2)
//       (a-b+1) phi' u H(u eta)            (b/2) phi'' eta H(u^2)_x
//       a phi'' u H(u eta)_x
// where in the coefficients a, b stand for alpha, beta.

namespace abcd::diag {

using spectral::weighted_integral;

namespace {

//! f, f', ..., f^(order) from one forward transform.
std::vector<Field> derivs(SpectralOps& ops, const Field& f, int order) {
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(order) + 1);
    out.push_back(f);
    const auto base = ops.forward(f);
    for (int p = 1; p <= order; ++p) {
        auto s = base;
        ops.differentiate_in_place(s, p);
        out.push_back(ops.backward(s));
    }
    return out;
}

//! f = H u and its derivatives from one forward transform.
std::vector<Field> canonical(SpectralOps& ops, const Field& u, int order) {
    auto base = ops.forward(u);
    const auto& k = ops.grid().wavenumbers();
    for (std::size_t m = 0; m < base.size(); ++m) base[m] /= 1.0 + k[m] * k[m];
    std::vector<Field> out;
    out.push_back(ops.backward(base));
    for (int p = 1; p <= order; ++p) {
        auto s = base;
        ops.differentiate_in_place(s, p);
        out.push_back(ops.backward(s));
    }
    return out;
}

Field ones_like(const Field& f) { return Field(f.grid, std::vector<double>(f.size(), 1.0)); }

}  // namespace

Field energy_density(SpectralOps& ops, const FieldPair& s, const NormalizedParameters& n) {
    const Field ux = ops.derivative(s.u);
    const Field ex = ops.derivative(s.eta);
    Field e = s.u;
    for (std::size_t j = 0; j < e.size(); ++j) {
        const double u = s.u[j], h = s.eta[j];
        e[j] = 0.5 * (-n.a * ux[j] * ux[j] - n.c * ex[j] * ex[j] + u * u + h * h + u * u * h);
    }
    return e;
}

double energy(SpectralOps& ops, const FieldPair& s, const NormalizedParameters& n) {
    return spectral::integral(energy_density(ops, s, n));
}

double momentum(SpectralOps& ops, const FieldPair& s) {
    const Field ux = ops.derivative(s.u);
    const Field ex = ops.derivative(s.eta);
    const Field one = ones_like(s.u);
    return weighted_integral(one, s.u, s.eta) + weighted_integral(one, ux, ex);
}

Virials virials(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi, const AlphaBeta& ab) {
    const Field ux = ops.derivative(s.u);
    const Field ex = ops.derivative(s.eta);
    Virials v;
    v.I = weighted_integral(phi.w, s.u, s.eta) + weighted_integral(phi.w, ux, ex);
    v.J = weighted_integral(phi.w1, s.eta, ux);
    v.K = weighted_integral(phi.w1, ex, s.u);
    v.H = v.I + ab.alpha * v.J + ab.beta * v.K;
    return v;
}

Decomposition dH_decomposition(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                               const NormalizedParameters& n, const AlphaBeta& ab) {
    const double a = n.a, c = n.c, al = ab.alpha, be = ab.beta;
    const Field& u = s.u;
    const Field& e = s.eta;
    const Field ux = ops.derivative(u);
    const Field ex = ops.derivative(e);
    const Field Hu = ops.helmholtz_inverse(u);
    const Field He = ops.helmholtz_inverse(e);
    const Field Hux = ops.derivative(Hu);
    const Field Hex = ops.derivative(He);
    const Field u2 = u * u;
    const Field ue = u * e;
    const auto Hu2 = canonical(ops, u2, 1);
    const auto Hue = canonical(ops, ue, 1);
    const Field& p1 = phi.w1;
    const Field& p2 = phi.w2;
    const Field& p3 = phi.w3;

    Decomposition d;
    d.q_terms[0] = ((1 + c) * (al - be - 1) + 0.5) * weighted_integral(p1, e, e);
    d.q_terms[1] = c * (be - al - 0.5) * weighted_integral(p1, ex, ex);
    d.q_terms[2] = ((1 + a) * (be - al - 1) + 0.5) * weighted_integral(p1, u, u);
    d.q_terms[3] = a * (al - be - 0.5) * weighted_integral(p1, ux, ux);
    d.q_terms[4] = (1 + c) * (be - al + 1) * weighted_integral(p1, e, He);
    d.q_terms[5] = (1 + a) * (al - be + 1) * weighted_integral(p1, u, Hu);

    d.sq_terms[0] = be * (1 + c) * weighted_integral(p2, e, Hex);
    d.sq_terms[1] = al * (1 + a) * weighted_integral(p2, u, Hux);
    d.sq_terms[2] = 0.5 * al * c * weighted_integral(p3, e, e);
    d.sq_terms[3] = 0.5 * be * a * weighted_integral(p3, u, u);

    d.nq_terms[0] = 0.5 * (be - al - 1) * weighted_integral(p1, u2, e);
    d.nq_terms[1] = 0.5 * (be - al + 1) * weighted_integral(p1, e, Hu2[0]);
    d.nq_terms[2] = (al - be + 1) * weighted_integral(p1, u, Hue[0]);
    d.nq_terms[3] = 0.5 * be * weighted_integral(p2, e, Hu2[1]);
    d.nq_terms[4] = al * weighted_integral(p2, u, Hue[1]);

    for (double t : d.q_terms) d.Q += t;
    for (double t : d.sq_terms) d.SQ += t;
    for (double t : d.nq_terms) d.NQ += t;
    return d;
}

CanonicalParts canonical_parts(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                               const VirialCoefficients& v) {
    const auto f = canonical(ops, s.u, 3);
    const auto g = canonical(ops, s.eta, 3);
    const Field& p1 = phi.w1;
    CanonicalParts r;
    for (std::size_t k = 0; k < 4; ++k) {
        const double ff = weighted_integral(p1, f[k], f[k]);
        const double gg = weighted_integral(p1, g[k], g[k]);
        r.leading_f += v.A[k] * ff;
        r.leading_g += v.B[k] * gg;
        r.norm += ff + gg;
    }
    const Field& p3 = phi.w3;
    r.tail = v.D11 * weighted_integral(p3, f[0], f[0]) + v.D12 * weighted_integral(p3, f[1], f[1]) +
             v.D21 * weighted_integral(p3, g[0], g[0]) + v.D22 * weighted_integral(p3, g[1], g[1]);
    return r;
}

double quadratic_Q_canonical(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                             const VirialCoefficients& v) {
    const auto p = canonical_parts(ops, s, phi, v);
    return p.leading_f + p.leading_g + p.tail;
}

double quadratic_Q_canonical(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                             const NormalizedParameters& n, const AlphaBeta& ab) {
    return quadratic_Q_canonical(ops, s, phi, atlas::virial_coefficients(n, ab));
}

SqRewrite sq_canonical_rewrite(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                               const NormalizedParameters& n, const AlphaBeta& ab) {
    const auto f = canonical(ops, s.u, 1);
    const auto g = canonical(ops, s.eta, 1);
    const double cb = ab.beta * (1.0 + n.c);
    const double ca = ab.alpha * (1.0 + n.a);
    SqRewrite r;
    r.beta_lhs = cb * weighted_integral(phi.w2, s.eta, g[1]);
    r.beta_rhs = -0.5 * cb * (weighted_integral(phi.w3, g[0], g[0]) - weighted_integral(phi.w3, g[1], g[1]));
    r.alpha_lhs = ca * weighted_integral(phi.w2, s.u, f[1]);
    r.alpha_rhs = -0.5 * ca * (weighted_integral(phi.w3, f[0], f[0]) - weighted_integral(phi.w3, f[1], f[1]));
    return r;
}

double local_energy(SpectralOps& ops, const FieldPair& s, const WeightFamily& psi, const NormalizedParameters& n) {
    return weighted_integral(psi.w, energy_density(ops, s, n));
}

ElocDecomposition dEloc_decomposition(SpectralOps& ops, const FieldPair& s, const WeightFamily& psi,
                                      const NormalizedParameters& n) {
    const double a = n.a, c = n.c;
    const auto f = canonical(ops, s.u, 3);
    const auto g = canonical(ops, s.eta, 3);
    const auto u = derivs(ops, s.u, 2);
    const auto e = derivs(ops, s.eta, 2);
    const auto M = canonical(ops, s.u * s.eta, 1);  // H(u eta)
    const auto N = canonical(ops, s.u * s.u, 1);    // H(u^2)
    const Field& q1 = psi.w1;
    const Field& q2 = psi.w2;

    ElocDecomposition d;
    d.linear = weighted_integral(q1, f[0], g[0]) - (1.0 + 2.0 * (a + c)) * weighted_integral(q1, f[1], g[1]) +
               3.0 * a * c * weighted_integral(q1, f[2], g[2]) + a * c * weighted_integral(q1, f[3], g[3]) -
               a * weighted_integral(q2, f[1], g[0]) - c * weighted_integral(q2, f[0], g[1]) +
               a * c * weighted_integral(q2, f[2], g[1]) + a * c * weighted_integral(q2, f[1], g[2]);

    // (psi' u_x)_x by the product rule with the analytic psi''.
    const Field dux = q2 * u[1] + q1 * u[2];
    const Field dex = q2 * e[1] + q1 * e[2];
    const Field one = ones_like(s.u);
    d.snl1 = 0.5 * a * weighted_integral(one, dux, N[0]) + c * weighted_integral(one, dex, M[0]);

    d.snl2 = 0.5 * weighted_integral(q1, f[0], N[0]) + 0.5 * a * weighted_integral(q1, f[2], N[0]) +
             weighted_integral(q1, g[0], M[0]) + c * weighted_integral(q1, g[2], M[0]) -
             0.5 * weighted_integral(q1, f[1], N[1]) - weighted_integral(q1, g[1], M[1]);

    d.snl3 = -(0.5 * a * weighted_integral(q1, f[3], N[1]) + c * weighted_integral(q1, g[3], M[1]));

    d.snl4 = 0.5 * weighted_integral(q1, M[0], N[0]) - 0.5 * weighted_integral(q1, M[1], N[1]);
    return d;
}

double dEloc_rhs(SpectralOps& ops, const FieldPair& s, const WeightFamily& psi, const NormalizedParameters& n) {
    return dEloc_decomposition(ops, s, psi, n).total();
}

double local_h1(SpectralOps& ops, const FieldPair& s, const WeightFamily& w) {
    const Field ux = ops.derivative(s.u);
    const Field ex = ops.derivative(s.eta);
    return weighted_integral(w.w, s.u, s.u) + weighted_integral(w.w, ux, ux) + weighted_integral(w.w, s.eta, s.eta) +
           weighted_integral(w.w, ex, ex);
}

double lambda_of_t(double t, double C0) {
    if (!(t >= 2.0)) throw std::domain_error("lambda_of_t: requires t >= 2");
    const double l = std::log(t);
    return C0 * t / (l * l);
}

double lambda_log_rate(double t) {
    if (!(t >= 2.0)) throw std::domain_error("lambda_log_rate: requires t >= 2");
    return (1.0 - 2.0 / std::log(t)) / t;
}

double dH_weight_term(SpectralOps& ops, const FieldPair& s, double lambda, double rate, const AlphaBeta& ab) {
    const auto& x = ops.grid().nodes();
    const Field ux = ops.derivative(s.u);
    const Field ex = ops.derivative(s.eta);
    Field wi = s.u, wj = s.u;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double z = x[j] / lambda;
        const double sc = 1.0 / std::cosh(z);
        const double s2 = sc * sc;
        wi[j] = -rate * z * s2;
        wj[j] = -rate * (1.0 - 2.0 * z * std::tanh(z)) * s2 / lambda;
    }
    return weighted_integral(wi, s.u, s.eta) + weighted_integral(wi, ux, ex) +
           ab.alpha * weighted_integral(wj, s.eta, ux) + ab.beta * weighted_integral(wj, s.u, ex);
}

double dEloc_weight_term(SpectralOps& ops, const FieldPair& s, double lambda, double rate,
                         const NormalizedParameters& n) {
    const auto& x = ops.grid().nodes();
    Field w = s.u;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double z = x[j] / lambda;
        const double sc = 1.0 / std::cosh(z);
        const double s4 = sc * sc * sc * sc;
        w[j] = 4.0 * rate * z * s4 * std::tanh(z);
    }
    return weighted_integral(w, energy_density(ops, s, n));
}

double dH_dt_chain(SpectralOps& ops, const FieldPair& s, const FieldPair& st, const WeightFamily& phi,
                   const AlphaBeta& ab) {
    const Field ux = ops.derivative(s.u);
    const Field ex = ops.derivative(s.eta);
    const Field utx = ops.derivative(st.u);
    const Field etx = ops.derivative(st.eta);
    const double dI = weighted_integral(phi.w, st.eta, s.u) + weighted_integral(phi.w, s.eta, st.u) +
                      weighted_integral(phi.w, utx, ex) + weighted_integral(phi.w, ux, etx);
    const double dJ = weighted_integral(phi.w1, st.eta, ux) + weighted_integral(phi.w1, s.eta, utx);
    const double dK = weighted_integral(phi.w1, etx, s.u) + weighted_integral(phi.w1, ex, st.u);
    return dI + ab.alpha * dJ + ab.beta * dK;
}

double dEloc_dt_chain(SpectralOps& ops, const FieldPair& s, const FieldPair& st, const WeightFamily& psi,
                      const NormalizedParameters& n) {
    const Field ux = ops.derivative(s.u);
    const Field ex = ops.derivative(s.eta);
    const Field utx = ops.derivative(st.u);
    const Field etx = ops.derivative(st.eta);
    Field d = s.u;
    for (std::size_t j = 0; j < d.size(); ++j) {
        const double u = s.u[j], h = s.eta[j];
        d[j] = -n.a * ux[j] * utx[j] - n.c * ex[j] * etx[j] + u * st.u[j] + h * st.eta[j] + u * h * st.u[j] +
               0.5 * u * u * st.eta[j];
    }
    return weighted_integral(psi.w, d);
}

NormEquivalence norm_equivalence(SpectralOps& ops, const Field& u, const WeightFamily& w) {
    const auto f = canonical(ops, u, 3);
    const Field ux = ops.derivative(u);
    const double wu2 = weighted_integral(w.w, u, u);
    const double wux2 = weighted_integral(w.w, ux, ux);
    const double F0 = weighted_integral(w.w, f[0], f[0]);
    const double F1 = weighted_integral(w.w, f[1], f[1]);
    const double F2 = weighted_integral(w.w, f[2], f[2]);
    const double F3 = weighted_integral(w.w, f[3], f[3]);
    NormEquivalence r;
    r.l2_ratio = (F0 + F1 + F2) / wu2;
    r.h1_ratio = (F1 + F2 + F3) / wux2;
    r.identity_residual = wu2 - (F0 + 2.0 * F1 + F2 - weighted_integral(w.w2, f[0], f[0]));
    return r;
}

// --- time series --------------------------------------------------------

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {
        "t",       "E",        "P",         "I",          "J",       "K",
        "H",       "Q",        "SQ",        "NQ",         "Q_canonical", "E_loc",
        "dEloc_rhs", "localH1", "lambda_t", "boundary_flag", "localH1_lambda_t", "dH_weight_term",
        "dEloc_weight_term", "canonical_norm", "canonical_leading"};
    return cols;
}

void write_csv_header(std::ostream& os) {
    const auto& cols = record_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
}

void write_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
    const double v[] = {r.t,      r.E,           r.P,          r.I,          r.J,
                        r.K,      r.H,           r.Q,          r.SQ,         r.NQ,
                        r.Q_canonical, r.E_loc,  r.dEloc_rhs,  r.localH1,    r.lambda_t,
                        r.boundary_flag, r.localH1_lambda_t, r.dH_weight_term, r.dEloc_weight_term,
                        r.canonical_norm, r.canonical_leading};
    char buf[40];
    for (std::size_t i = 0; i < std::size(v); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i) os << ',';
        os << buf;
    }
    os << '\n';
}

DiagnosticsEvaluator::DiagnosticsEvaluator(const spectral::Grid& g, const NormalizedParameters& n,
                                           const DiagnosticsOptions& opt)
    : grid_(g),
      ops_(g),
      n_(n),
      opt_(opt),
      coeffs_(atlas::virial_coefficients(n, opt.ab)),
      phi_(spectral::weight_family(spectral::WeightKind::tanh, opt.lambda, g)),
      psi_(spectral::weight_family(spectral::WeightKind::sech4, opt.lambda, g)),
      sech2_(spectral::weight_family(spectral::WeightKind::sech2, opt.lambda, g)) {}

DiagnosticsRecord DiagnosticsEvaluator::evaluate(const FieldPair& s, double t) {
    using spectral::WeightKind;
    DiagnosticsRecord r;
    r.t = t;
    r.E = energy(ops_, s, n_);
    r.P = momentum(ops_, s);

    const double tau = opt_.t0 + t;
    const double lam_t = lambda_of_t(tau, opt_.C0);
    WeightFamily moving_phi, moving_psi;
    const WeightFamily* phi = &phi_;
    const WeightFamily* psi = &psi_;
    if (opt_.time_dependent) {
        moving_phi = spectral::weight_family(WeightKind::tanh, lam_t, grid_, 1.0 / lam_t);
        moving_psi = spectral::weight_family(WeightKind::sech4, lam_t, grid_, 1.0 / lam_t);
        phi = &moving_phi;
        psi = &moving_psi;
        const double rate = lambda_log_rate(tau);
        r.dH_weight_term = dH_weight_term(ops_, s, lam_t, rate, opt_.ab);
        r.dEloc_weight_term = dEloc_weight_term(ops_, s, lam_t, rate, n_);
        r.lambda_t = lam_t;
    } else {
        r.lambda_t = opt_.lambda;
    }

    const auto v = virials(ops_, s, *phi, opt_.ab);
    r.I = v.I;
    r.J = v.J;
    r.K = v.K;
    r.H = v.H;
    const auto d = dH_decomposition(ops_, s, *phi, n_, opt_.ab);
    r.Q = d.Q;
    r.SQ = d.SQ;
    r.NQ = d.NQ;
    const auto cp = canonical_parts(ops_, s, *phi, coeffs_);
    r.Q_canonical = cp.leading_f + cp.leading_g + cp.tail;
    r.canonical_norm = cp.norm;
    r.canonical_leading = cp.leading_f + cp.leading_g;

    r.E_loc = local_energy(ops_, s, *psi, n_);
    r.dEloc_rhs = dEloc_rhs(ops_, s, *psi, n_);
    r.localH1 = local_h1(ops_, s, sech2_);
    const auto w_t = spectral::weight_family(WeightKind::sech2, lam_t, grid_);
    r.localH1_lambda_t = local_h1(ops_, s, w_t);
    r.boundary_flag = sim::boundary_amplitude(grid_, s);
    return r;
}

std::vector<double> centered_derivative(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw std::invalid_argument("centered_derivative: size mismatch");
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) out.push_back((y[i + 1] - y[i - 1]) / (t[i + 1] - t[i - 1]));
    return out;
}

IdentityResidual identity_residual(const std::vector<DiagnosticsRecord>& rs, double DiagnosticsRecord::*value,
                                   double (DiagnosticsRecord::*predicted)() const, bool pointwise) {
    IdentityResidual r;
    if (rs.size() < 3) return r;
    std::vector<double> t, y;
    for (const auto& rec : rs) {
        t.push_back(rec.t);
        y.push_back(rec.*value);
    }
    const auto fd = centered_derivative(t, y);
    double scale = 0.0;
    for (std::size_t i = 1; i + 1 < rs.size(); ++i) scale = std::max(scale, std::abs((rs[i].*predicted)()));
    for (std::size_t i = 1; i + 1 < rs.size(); ++i) {
        const double p = (rs[i].*predicted)();
        const double err = std::abs(fd[i - 1] - p);
        const double den = pointwise ? std::abs(p) : scale;
        r.max_absolute = std::max(r.max_absolute, err);
        r.max_relative = std::max(r.max_relative, den > 0.0 ? err / den : (err > 0.0 ? INFINITY : 0.0));
        ++r.points;
    }
    return r;
}

TimeIntegral localized_time_integral(const std::vector<DiagnosticsRecord>& rs, double C0, double t0,
                                     double tail_fraction) {
    TimeIntegral r;
    if (rs.size() < 2) return r;
    const double cut = (1.0 - tail_fraction) * rs.back().t;
    auto f = [&](const DiagnosticsRecord& x) { return x.localH1_lambda_t / lambda_of_t(t0 + x.t, C0); };
    for (std::size_t i = 1; i < rs.size(); ++i) {
        const double piece = 0.5 * (rs[i].t - rs[i - 1].t) * (f(rs[i]) + f(rs[i - 1]));
        r.total += piece;
        if (rs[i - 1].t >= cut) r.tail += piece;
    }
    return r;
}

}  // namespace abcd::diag
