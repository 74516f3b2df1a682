#pragma once

// Observables of the normalized system: conserved quantities, the virial
// functionals I, J, K, H and the term-by-term split of dH/dt, the canonical
// (f, g) form of the quadratic part, the localized energy and its variation,
// local H^1 norms and the light-cone scale lambda(t).

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "abcd/atlas.hpp"
#include "abcd/simulator.hpp"
#include "abcd/spectral.hpp"

namespace abcd::diag {

using atlas::AlphaBeta;
using atlas::NormalizedParameters;
using atlas::VirialCoefficients;
using sim::FieldPair;
using spectral::Field;
using spectral::SpectralOps;
using spectral::WeightFamily;

//! E = 1/2 int(-a u_x^2 - c eta_x^2 + u^2 + eta^2 + u^2 eta)
[[nodiscard]] double energy(SpectralOps& ops, const FieldPair& s, const NormalizedParameters& n);
[[nodiscard]] Field energy_density(SpectralOps& ops, const FieldPair& s, const NormalizedParameters& n);

//! P = int(u eta + u_x eta_x)
[[nodiscard]] double momentum(SpectralOps& ops, const FieldPair& s);

struct Virials {
    double I = 0.0;
    double J = 0.0;
    double K = 0.0;
    double H = 0.0;
};

//! I = int phi (u eta + u_x eta_x), J = int phi' eta u_x, K = int phi' eta_x u,
//! H = I + alpha J + beta K.
[[nodiscard]] Virials virials(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi, const AlphaBeta& ab);

//! Right-hand side of dH/dt = Q + SQ + NQ, every term kept separately in the
//! order they are listed in the header comment of diagnostics.cpp.
struct Decomposition {
    std::array<double, 6> q_terms{};
    std::array<double, 4> sq_terms{};
    std::array<double, 5> nq_terms{};
    double Q = 0.0;
    double SQ = 0.0;
    double NQ = 0.0;

    [[nodiscard]] double total() const { return Q + SQ + NQ; }
};

[[nodiscard]] Decomposition dH_decomposition(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                                             const NormalizedParameters& n, const AlphaBeta& ab);

//! Q in canonical variables f = H u, g = H eta with the atlas coefficients.
[[nodiscard]] double quadratic_Q_canonical(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                                           const NormalizedParameters& n, const AlphaBeta& ab);
//! Same with caller-supplied coefficients (used for fault injection).
[[nodiscard]] double quadratic_Q_canonical(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                                           const VirialCoefficients& v);

struct CanonicalParts {
    double leading_f = 0.0;  // int phi' sum A_k f_k^2
    double leading_g = 0.0;  // int phi' sum B_k g_k^2
    double tail = 0.0;       // phi''' block
    double norm = 0.0;       // int phi' sum_k (f_k^2 + g_k^2), k = 0..3
};

[[nodiscard]] CanonicalParts canonical_parts(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                                             const VirialCoefficients& v);

//! beta(1+c) int phi'' eta H eta_x = -1/2 beta(1+c) int phi''' (g^2 - g_x^2)
//! and the alpha(1+a) analogue in u, f.
struct SqRewrite {
    double beta_lhs = 0.0;
    double beta_rhs = 0.0;
    double alpha_lhs = 0.0;
    double alpha_rhs = 0.0;
};

[[nodiscard]] SqRewrite sq_canonical_rewrite(SpectralOps& ops, const FieldPair& s, const WeightFamily& phi,
                                             const NormalizedParameters& n, const AlphaBeta& ab);

//! E_loc = 1/2 int psi (-a u_x^2 - c eta_x^2 + u^2 + eta^2 + u^2 eta)
[[nodiscard]] double local_energy(SpectralOps& ops, const FieldPair& s, const WeightFamily& psi,
                                  const NormalizedParameters& n);

struct ElocDecomposition {
    double linear = 0.0;
    double snl1 = 0.0;
    double snl2 = 0.0;
    double snl3 = 0.0;
    double snl4 = 0.0;

    [[nodiscard]] double total() const { return linear + snl1 + snl2 + snl3 + snl4; }
};

[[nodiscard]] ElocDecomposition dEloc_decomposition(SpectralOps& ops, const FieldPair& s, const WeightFamily& psi,
                                                    const NormalizedParameters& n);

[[nodiscard]] double dEloc_rhs(SpectralOps& ops, const FieldPair& s, const WeightFamily& psi,
                               const NormalizedParameters& n);

//! int w (u^2 + u_x^2 + eta^2 + eta_x^2)
[[nodiscard]] double local_h1(SpectralOps& ops, const FieldPair& s, const WeightFamily& w);

//! C0 t / log^2 t; throws std::domain_error for t < 2.
[[nodiscard]] double lambda_of_t(double t, double C0);
//! lambda'/lambda = (1/t)(1 - 2/log t).
[[nodiscard]] double lambda_log_rate(double t);

//! Contribution of d/dt acting on phi = tanh(x/lambda(t)) (and phi') to dH/dt.
[[nodiscard]] double dH_weight_term(SpectralOps& ops, const FieldPair& s, double lambda, double rate,
                                    const AlphaBeta& ab);
//! Contribution of d/dt acting on psi = sech^4(x/lambda(t)) to dE_loc/dt.
[[nodiscard]] double dEloc_weight_term(SpectralOps& ops, const FieldPair& s, double lambda, double rate,
                                       const NormalizedParameters& n);

//! Chain-rule time derivatives for a given state velocity s_t (weights frozen).
[[nodiscard]] double dH_dt_chain(SpectralOps& ops, const FieldPair& s, const FieldPair& s_t, const WeightFamily& phi,
                                 const AlphaBeta& ab);
[[nodiscard]] double dEloc_dt_chain(SpectralOps& ops, const FieldPair& s, const FieldPair& s_t,
                                    const WeightFamily& psi, const NormalizedParameters& n);

//! Two-sided comparison of weighted norms of u and its canonical variable f:
//! l2_ratio  = int w (f^2 + f_x^2 + f_xx^2) / int w u^2,
//! h1_ratio  = int w (f_x^2 + f_xx^2 + f_xxx^2) / int w u_x^2,
//! plus the residual of int w u^2 = int w (f^2 + 2 f_x^2 + f_xx^2) - int w'' f^2.
struct NormEquivalence {
    double l2_ratio = 0.0;
    double h1_ratio = 0.0;
    double identity_residual = 0.0;
};

[[nodiscard]] NormEquivalence norm_equivalence(SpectralOps& ops, const Field& u, const WeightFamily& w);

// --- time series --------------------------------------------------------

struct DiagnosticsRecord {
    double t = 0.0;
    double E = 0.0;
    double P = 0.0;
    double I = 0.0;
    double J = 0.0;
    double K = 0.0;
    double H = 0.0;
    double Q = 0.0;
    double SQ = 0.0;
    double NQ = 0.0;
    double Q_canonical = 0.0;
    double E_loc = 0.0;
    double dEloc_rhs = 0.0;
    double localH1 = 0.0;
    double lambda_t = 0.0;
    double boundary_flag = 0.0;
    // trailing extras
    double localH1_lambda_t = 0.0;
    double dH_weight_term = 0.0;
    double dEloc_weight_term = 0.0;
    double canonical_norm = 0.0;
    double canonical_leading = 0.0;

    //! Q + SQ + NQ plus the moving-weight term.
    [[nodiscard]] double dH_predicted() const { return Q + SQ + NQ + dH_weight_term; }
    [[nodiscard]] double dEloc_predicted() const { return dEloc_rhs + dEloc_weight_term; }
};

[[nodiscard]] const std::vector<std::string>& record_columns();
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const DiagnosticsRecord& r);

struct DiagnosticsOptions {
    double lambda = 20.0;
    //! Weights follow lambda(t0 + t) instead of the fixed lambda.
    bool time_dependent = false;
    double C0 = 4.0;
    double t0 = 2.0;
    AlphaBeta ab{};
};

//! Caches the fixed-lambda weights and a transform workspace. One per thread.
class DiagnosticsEvaluator {
  public:
    DiagnosticsEvaluator(const spectral::Grid& g, const NormalizedParameters& n, const DiagnosticsOptions& opt);

    DiagnosticsRecord evaluate(const FieldPair& s, double t);

    [[nodiscard]] const DiagnosticsOptions& options() const { return opt_; }
    SpectralOps& ops() { return ops_; }

  private:
    spectral::Grid grid_;
    SpectralOps ops_;
    NormalizedParameters n_;
    DiagnosticsOptions opt_;
    VirialCoefficients coeffs_;
    WeightFamily phi_;
    WeightFamily psi_;
    WeightFamily sech2_;
};

//! Centered-difference derivative of a sampled series at interior points:
//! out[i-1] = (y[i+1] - y[i-1]) / (t[i+1] - t[i-1]), i = 1..n-2.
[[nodiscard]] std::vector<double> centered_derivative(const std::vector<double>& t, const std::vector<double>& y);

struct IdentityResidual {
    double max_relative = 0.0;  // max_i |fd_i - rhs_i| / scale_i
    double max_absolute = 0.0;
    std::size_t points = 0;
};

//! Compares centered-difference derivatives of `value` against `predicted`
//! at interior points. pointwise: scale each point by |predicted_i|;
//! otherwise by max_i |predicted_i| over the series.
[[nodiscard]] IdentityResidual identity_residual(const std::vector<DiagnosticsRecord>& rs,
                                                 double DiagnosticsRecord::*value,
                                                 double (DiagnosticsRecord::*predicted)() const, bool pointwise);

struct TimeIntegral {
    double total = 0.0;
    double tail = 0.0;  // contribution of t >= (1 - tail_fraction) * t_last

    [[nodiscard]] double tail_fraction() const { return total > 0.0 ? tail / total : 0.0; }
};

//! Trapezoid rule for int localH1_lambda_t(t) / lambda(t0 + t) dt over the series.
[[nodiscard]] TimeIntegral localized_time_integral(const std::vector<DiagnosticsRecord>& rs, double C0, double t0,
                                                   double tail_fraction = 0.25);

}  // namespace abcd::diag
