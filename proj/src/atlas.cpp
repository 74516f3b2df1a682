#include "abcd/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abcd::atlas {

namespace {

constexpr double kSixth = 1.0 / 6.0;
constexpr double kThird = 1.0 / 3.0;
constexpr double kCriticalPointTol = 1e-12;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

bool Interval::empty() const {
    if (lo > hi) return true;
    if (lo == hi) return !(lo_closed && hi_closed);
    return false;
}

bool Interval::contains(double x) const {
    if (empty()) return false;
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
}

std::string Interval::to_string() const {
    if (empty()) return "{}";
    std::ostringstream os;
    os.precision(17);
    os << (lo_closed ? '[' : '(') << lo << ", " << hi << (hi_closed ? ']' : ')');
    return os.str();
}

Band Band::intersect(const Band& other) const {
    return {std::max(lower, other.lower), std::min(upper, other.upper)};
}

double VirialCoefficients::min_coercive() const {
    const double a = *std::min_element(A.begin(), A.end());
    const double b = *std::min_element(B.begin(), B.end());
    return std::min(a, b);
}

const char* to_string(RegionStatus s) {
    switch (s) {
        case RegionStatus::inside: return "inside";
        case RegionStatus::boundary: return "boundary";
        case RegionStatus::outside: return "outside";
    }
    return "?";
}

bool ValidationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (const auto& c : checks) os << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    return os.str();
}

ValidationReport validate_physical(const PhysicalParameters& p, double tol) {
    ValidationReport r;
    const bool finite = std::isfinite(p.a) && std::isfinite(p.b) && std::isfinite(p.c) && std::isfinite(p.d);
    r.checks.push_back({"finite", finite, finite ? "all coefficients finite" : "non-finite coefficient"});
    if (!finite) return r;

    const double a = p.a, b = p.b, c = p.c, d = p.d;
    r.checks.push_back({"B0", a < 0.0 && c < 0.0, "a = " + fmt(a) + ", c = " + fmt(c) + " (need both < 0)"});

    const double line = a + c - (kThird - 2.0 * b);
    r.checks.push_back({"B1", std::abs(line) <= tol, "a + c - (1/3 - 2b) = " + fmt(line)});

    const bool b2 = a >= -b - kSixth - tol && a <= -b + kThird + tol;
    r.checks.push_back({"B2", b2, "a in [" + fmt(-b - kSixth) + ", " + fmt(-b + kThird) + "]"});

    const bool b3 = c >= -b - tol && c <= -b + 0.5 + tol;
    r.checks.push_back({"B3", b3, "c in [" + fmt(-b) + ", " + fmt(-b + 0.5) + "]"});

    r.checks.push_back({"b_equals_d", std::abs(b - d) <= tol, "b - d = " + fmt(b - d)});

    const double sum = a + b + c + d - kThird;
    r.checks.push_back({"zero_surface_tension", std::abs(sum) <= tol, "a + b + c + d - 1/3 = " + fmt(sum)});

    r.checks.push_back({"b_above_one_sixth", b > kSixth, "b = " + fmt(b) + " (need > 1/6)"});
    return r;
}

PhysicalParameters from_nu_b(const NuB& q) {
    const double half = 0.5 * q.nu;
    return {-half + kThird - q.b, q.b, half - q.b, q.b};
}

Interval admissible_nu_interval(double b) {
    if (!(b > 0.0)) throw ParameterError("admissible_nu_interval: b must be positive");
    Interval iv;
    const double left = 2.0 / 3.0 - 2.0 * b;  // a < 0  <=>  nu > left
    const double right = 2.0 * b;             // c < 0  <=>  nu < right
    if (left < 0.0) {
        iv.lo = 0.0;
        iv.lo_closed = true;
    } else {
        iv.lo = left;
        iv.lo_closed = false;
    }
    if (right > 1.0) {
        iv.hi = 1.0;
        iv.hi_closed = true;
    } else {
        iv.hi = right;
        iv.hi_closed = false;
    }
    return iv.empty() ? Interval::empty_set() : iv;
}

double dispersive_radicand(double b) { return 6.0 * b * b - (11.0 / 6.0) * b + 1.0 / 9.0; }

Interval dispersive_nu_interval(double b) {
    if (!(b > 0.0)) throw ParameterError("dispersive_nu_interval: b must be positive");
    if (b <= 2.0 / 9.0) return Interval::empty_set();
    if (b <= 0.25) {
        const double r = std::sqrt(dispersive_radicand(b));
        return {kThird - r, kThird + r, false, false};
    }
    if (b <= kThird) return {2.0 / 3.0 - 2.0 * b, 2.0 * b, false, false};
    if (b <= 0.5) return {0.0, 2.0 * b, true, false};
    return {0.0, 1.0, true, true};
}

NormalizedParameters normalize(const PhysicalParameters& p) {
    const auto report = validate_physical(p);
    if (!report.pass()) throw ParameterError("normalize: inadmissible parameters\n" + report.summary());
    return {p.a / p.b, p.c / p.b, p.b};
}

double dispersion_margin(const NormalizedParameters& n) {
    return 8.0 * n.a * n.c - 3.0 * (n.a + n.c) - 2.0;
}

bool is_dispersion_like(const NormalizedParameters& n, double tol) {
    if (!(n.a < 0.0 && n.c < 0.0)) throw ParameterError("is_dispersion_like: requires a, c < 0");
    return dispersion_margin(n) > tol;
}

RegionStatus dispersion_status(const NormalizedParameters& n, double tol) {
    if (!(n.a < 0.0 && n.c < 0.0)) throw ParameterError("dispersion_status: requires a, c < 0");
    const double m = dispersion_margin(n);
    if (m > tol) return RegionStatus::inside;
    if (m < -tol) return RegionStatus::outside;
    return RegionStatus::boundary;
}

double gamma_boundary(double b, double a) {
    const double den = 3.0 * b - 8.0 * a;
    if (std::abs(den) <= 1e-14 * std::max({1.0, std::abs(b), std::abs(a)}))
        throw ParameterError("gamma_boundary: singular at a = 3b/8");
    return -b * (2.0 * b + 3.0 * a) / den;
}

double gamma_line_discriminant(double b) { return 3456.0 * b * b - 1056.0 * b + 64.0; }

std::vector<double> gamma_line_intersections(double b) {
    // With c = s - a, s = 1/3 - 2b, the curve becomes 8a^2 - 8sa + 3bs + 2b^2 = 0.
    const double s = kThird - 2.0 * b;
    const double qa = 8.0, qb = -8.0 * s, qc = 3.0 * b * s + 2.0 * b * b;
    const double disc = qb * qb - 4.0 * qa * qc;
    const double scale = qb * qb + std::abs(4.0 * qa * qc);
    if (disc < -1e-14 * scale) return {};
    if (disc <= 1e-14 * scale) return {-qb / (2.0 * qa)};
    const double r = std::sqrt(disc);
    return {(-qb - r) / (2.0 * qa), (-qb + r) / (2.0 * qa)};
}

BandSet alpha_beta_bands(const NormalizedParameters& n) {
    if (!(n.a < 0.0 && n.c < 0.0)) throw ParameterError("alpha_beta_bands: requires a, c < 0");
    const double a = n.a, c = n.c;
    BandSet s;
    s.a2 = {1.5 * a, -1.5 * c};
    s.a3 = {(1.0 + 4.0 * a) / (2.0 * (1.0 - a)), -(1.0 + 4.0 * c) / (2.0 * (1.0 - c))};
    s.a4 = {-0.5, 0.5};
    return s;
}

AlphaBeta select_alpha_beta(const NormalizedParameters& n) {
    const auto bands = alpha_beta_bands(n);
    const auto cut = bands.intersection();
    if (cut.empty()) {
        std::ostringstream os;
        os << "select_alpha_beta: empty band intersection for (a, c) = (" << n.a << ", " << n.c << ")";
        if (bands.a3.empty()) os << "; A3 band is empty";
        throw ParameterError(os.str());
    }
    return {0.0, 0.5 * (cut.lower + cut.upper)};
}

VirialCoefficients virial_coefficients(const NormalizedParameters& n, const AlphaBeta& ab) {
    const double a = n.a, c = n.c;
    const double ba = ab.beta - ab.alpha;  // beta - alpha
    const double ab_ = -ba;                // alpha - beta
    VirialCoefficients v;
    v.A[0] = 0.5;
    v.B[0] = 0.5;
    v.A[1] = ba - 1.5 * a;
    v.B[1] = ab_ - 1.5 * c;
    v.A[2] = (1.0 - a) * ba - 2.0 * a - 0.5;
    v.B[2] = (1.0 - c) * ab_ - 2.0 * c - 0.5;
    v.A[3] = a * (ab_ - 0.5);
    v.B[3] = c * (ba - 0.5);
    v.D11 = -0.5 * (1.0 + a) * (ba - 1.0) - 0.5;
    v.D12 = -a * (ab_ - 0.5);
    v.D21 = -0.5 * (1.0 + c) * (ab_ - 1.0) - 0.5;
    v.D22 = -c * (ba - 0.5);
    return v;
}

double dispersion_omega(double k, const NormalizedParameters& n) {
    const double k2 = k * k;
    return std::abs(k) * std::sqrt((1.0 - n.a * k2) * (1.0 - n.c * k2)) / (1.0 + k2);
}

double group_velocity(double k, const NormalizedParameters& n) {
    const double k2 = k * k;
    const double ac = n.a * n.c;
    const double num = ((ac * k2 + 3.0 * ac) * k2 - (1.0 + 2.0 * n.a + 2.0 * n.c)) * k2 + 1.0;
    const double den = (1.0 + k2) * (1.0 + k2) * std::sqrt((1.0 - n.a * k2) * (1.0 - n.c * k2));
    return std::abs(num) / den;
}

namespace {

GroupVelocityReport analyze_cubic(double ac, double linear) {
    GroupVelocityReport r;
    r.cubic.ac = ac;
    r.cubic.linear = linear;
    // p'(mu) = 3ac mu^2 + 6ac mu + linear
    r.radicand = 1.0 - linear / (3.0 * ac);
    r.real_critical_points = r.radicand >= 0.0;
    r.min_value = r.cubic(0.0);
    r.argmin = 0.0;
    if (r.real_critical_points) {
        const double s = std::sqrt(r.radicand);
        r.mu_minus = -1.0 - s;
        r.mu_plus = -1.0 + s;
        // ac > 0, so mu_plus is the local minimum of the cubic.
        r.positive_critical_point = r.mu_plus > kCriticalPointTol;
        if (r.positive_critical_point) {
            const double v = r.cubic(r.mu_plus);
            if (v < r.min_value) {
                r.min_value = v;
                r.argmin = r.mu_plus;
            }
        }
    }
    r.everywhere_positive = r.min_value > 0.0;
    return r;
}

}  // namespace

GroupVelocityReport analyze_group_velocity(double b, const NormalizedParameters& n) {
    if (!(n.a < 0.0 && n.c < 0.0)) throw ParameterError("analyze_group_velocity: requires a, c < 0");
    if (!(b > kSixth)) throw ParameterError("analyze_group_velocity: requires b > 1/6");
    return analyze_cubic(n.a * n.c, 3.0 - 2.0 / (3.0 * b));
}

GroupVelocityReport analyze_group_velocity(const NormalizedParameters& n) {
    if (!(n.a < 0.0 && n.c < 0.0)) throw ParameterError("analyze_group_velocity: requires a, c < 0");
    return analyze_cubic(n.a * n.c, -(1.0 + 2.0 * n.a + 2.0 * n.c));
}

std::string GroupVelocityReport::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (!positive_critical_point) {
        os << "no positive critical point; p >= 1";
        return os.str();
    }
    os << "positive critical point mu+ = " << mu_plus << "; min p = " << min_value
       << (everywhere_positive ? " > 0" : " <= 0 (group velocity vanishes)");
    return os.str();
}

bool group_velocity_everywhere_positive(double b, const NormalizedParameters& n) {
    return analyze_group_velocity(b, n).everywhere_positive;
}

}  // namespace abcd::atlas
