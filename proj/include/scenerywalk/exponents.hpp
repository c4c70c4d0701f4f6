#pragma once

// Closed-form tail exponents of the random walk in random scenery and of the
// layered conductance walk, and a variational solver reproducing q from p.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace scenerywalk {

enum class Regime {
    Polynomial,     // no stretched-exponential decay
    BoundaryZero,   // lower threshold with exponent 0 by monotonicity
    DependsOnC,     // rho = 1 above the LLN scale: the tail depends on the constant
    First,
    Second,
    Third,
    Fourth,
    Fifth,
};

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::Polynomial: return "polynomial";
        case Regime::BoundaryZero: return "boundary_zero";
        case Regime::DependsOnC: return "depends_on_c";
        case Regime::First: return "first";
        case Regime::Second: return "second";
        case Regime::Third: return "third";
        case Regime::Fourth: return "fourth";
        case Regime::Fifth: return "fifth";
    }
    return "unknown";
}

/// Exponent with the case of the piecewise formula that produced it.
/// Marker regimes (Polynomial, DependsOnC) carry no value (NaN).
struct ExponentResult {
    double value = std::numeric_limits<double>::quiet_NaN();
    Regime regime = Regime::Polynomial;
    double alpha = 0.0;
    int dim = 1;
    double x = 0.0;  // rho or delta

    bool has_value() const { return regime != Regime::Polynomial && regime != Regime::DependsOnC; }
    /// Value with markers read as 0, as inside the variational formula.
    double value_or_zero() const { return has_value() ? value : 0.0; }
};

namespace detail {

inline void check_alpha_dim(double alpha, int dim, const char* who) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error(std::string(who) + ": alpha must be positive");
    if (dim < 1) throw std::domain_error(std::string(who) + ": dimension must be positive");
}

// alpha / (alpha - d)_+ with alpha/0 = infinity.
inline double fifth_threshold(double alpha, int d) {
    return alpha > d ? alpha / (alpha - d) : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Lower end of the first p-regime: ((alpha+1)/(2 alpha) or d/(2 alpha)) v 1.
inline double p_lower_threshold(double alpha, int dim) {
    const double raw = dim == 1 ? (alpha + 1.0) / (2.0 * alpha) : dim / (2.0 * alpha);
    return std::max(raw, 1.0);
}

/// Upper end of the first p-regime, (alpha+d)/alpha.
inline double p_upper_threshold(double alpha, int dim) { return (alpha + dim) / alpha; }

/// Whether the LLN scale applies (alpha > 1 for d = 1, alpha > d/2 otherwise).
inline bool above_lln_scale(double alpha, int dim) { return dim == 1 ? alpha > 1.0 : alpha > dim / 2.0; }

/// Formula of the first or second p-regime evaluated at rho, whatever the regime of rho.
inline double p_branch(double alpha, double rho, int dim, Regime which) {
    const double d = dim;
    if (which == Regime::First)
        return dim == 1 ? 2.0 * alpha * rho / (alpha + 1.0) - 1.0 : (2.0 * alpha * rho - d) / (2.0 * alpha + d);
    if (which == Regime::Second) return alpha * (rho - 1.0) / d;
    throw std::invalid_argument("p_branch: only the first and second regimes have formulas");
}

/// Stretched-exponential exponent of P_0(A_t >= t^rho).
inline ExponentResult p_exponent(double alpha, double rho, int dim) {
    detail::check_alpha_dim(alpha, dim, "p_exponent");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::domain_error("p_exponent: rho must be positive");
    ExponentResult r{std::numeric_limits<double>::quiet_NaN(), Regime::Polynomial, alpha, dim, rho};
    const double lo = p_lower_threshold(alpha, dim);
    const double hi = p_upper_threshold(alpha, dim);
    if (rho < lo) return r;
    if (rho == lo) {
        r.regime = above_lln_scale(alpha, dim) ? Regime::DependsOnC : Regime::BoundaryZero;
        if (r.regime == Regime::BoundaryZero) r.value = 0.0;
        return r;
    }
    if (rho <= hi) {
        r.regime = Regime::First;
        r.value = p_branch(alpha, rho, dim, Regime::First);
        return r;
    }
    r.regime = Regime::Second;
    r.value = p_branch(alpha, rho, dim, Regime::Second);
    return r;
}

/// Exponent of P_0(A_t >= c t) for c > E z(0).
inline double ldp_exponent(double alpha, int dim) {
    detail::check_alpha_dim(alpha, dim, "ldp_exponent");
    if (!above_lln_scale(alpha, dim))
        throw std::domain_error(dim == 1 ? "ldp_exponent: requires alpha > 1 for d = 1"
                                         : "ldp_exponent: requires alpha > d/2 for d >= 2");
    const double d = dim;
    return dim == 1 ? (alpha - 1.0) / (alpha + 1.0) : (2.0 * alpha - d) / (2.0 * alpha + d);
}

/// Start points of the q-regimes 2..5 (second may be void, fifth may be infinite).
struct QThresholds {
    double second_lo;  // 1/2
    double third_lo;   // (alpha/(alpha+1) or 2alpha/(2alpha+d)) v (alpha+1)/(4alpha) or d/(4alpha)
    double second_hi;  // alpha/(alpha+1) or 2alpha/(2alpha+d)
    double first_hi;   // 1/2 v (alpha+1)/(4alpha) or 1/2 v d/(4alpha)
    double third_hi;   // (2alpha+d)/(2alpha)
    double fifth_lo;   // alpha/(alpha-d)_+
};

inline QThresholds q_thresholds(double alpha, int dim) {
    const double d = dim;
    QThresholds t{};
    t.second_lo = 0.5;
    const double small = dim == 1 ? (alpha + 1.0) / (4.0 * alpha) : d / (4.0 * alpha);
    t.second_hi = dim == 1 ? alpha / (alpha + 1.0) : 2.0 * alpha / (2.0 * alpha + d);
    t.first_hi = std::max(0.5, small);
    t.third_lo = std::max(t.second_hi, small);
    t.third_hi = (2.0 * alpha + d) / (2.0 * alpha);
    t.fifth_lo = detail::fifth_threshold(alpha, dim);
    return t;
}

/// Formula of the given q-case evaluated at delta, whatever the case of delta.
inline double q_branch(double alpha, double delta, int dim, Regime which) {
    const double d = dim;
    switch (which) {
        case Regime::First: return 0.0;
        case Regime::Second: return 2.0 * delta - 1.0;
        case Regime::Third:
            return dim == 1 ? (4.0 * alpha * delta - alpha - 1.0) / (3.0 * alpha + 1.0)
                            : (4.0 * alpha * delta - d) / (4.0 * alpha + d);
        case Regime::Fourth: return alpha * (2.0 * delta - 1.0) / (alpha + d);
        case Regime::Fifth: return delta;
        default: throw std::invalid_argument("q_branch: q has cases first to fifth only");
    }
}

/// Displacement exponent q(alpha, delta) from the five-case formula.
inline ExponentResult q_closed_form(double alpha, double delta, int dim) {
    detail::check_alpha_dim(alpha, dim, "q_closed_form");
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::domain_error("q_closed_form: delta must be >= 0");
    const QThresholds th = q_thresholds(alpha, dim);
    Regime which = Regime::Fifth;
    if (delta < th.first_hi)
        which = Regime::First;
    else if (delta >= th.second_lo && delta < th.second_hi)
        which = Regime::Second;
    else if (delta >= th.third_lo && delta <= th.third_hi)
        which = Regime::Third;
    else if (delta > th.third_hi && delta < th.fifth_lo)
        which = Regime::Fourth;
    return {q_branch(alpha, delta, dim, which), which, alpha, dim, delta};
}

/// Right end M of the search interval [delta, M] in the variational formula.
inline double variational_upper_end(double alpha, double delta, int dim) {
    return 2.0 * delta + (alpha + dim) / alpha + 1.0;
}

/// delta ^ inf_{rho in [delta, M]} max(p(alpha, rho), 2 delta - rho), with p
/// read as 0 wherever it has no stretched-exponential value.
///
/// g(rho) = p(rho) + rho - 2 delta is strictly increasing (p is nondecreasing),
/// so the infimum sits at its sign change rho*, found by bisection; p may jump
/// upward at rho*, in which case the infimum is the left limit 2 delta - rho*.
inline double q_variational(double alpha, double delta, int dim, double tolerance = 1e-13) {
    detail::check_alpha_dim(alpha, dim, "q_variational");
    if (!(tolerance > 0.0)) throw std::domain_error("q_variational: tolerance must be positive");
    if (!(delta >= 0.0)) throw std::domain_error("q_variational: delta must be >= 0");
    auto p0 = [&](double rho) { return rho > 0.0 ? p_exponent(alpha, rho, dim).value_or_zero() : 0.0; };
    auto g = [&](double rho) { return p0(rho) + rho - 2.0 * delta; };
    if (g(delta) >= 0.0) return std::min(delta, std::max(p0(delta), delta));
    double lo = delta;
    double hi = variational_upper_end(alpha, delta, dim);
    if (g(hi) < 0.0) throw std::logic_error("q_variational: no crossing inside [delta, M]");
    while (hi - lo > tolerance * 0.5) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    // The infimum is approached from below the crossing, where max(...) = 2 delta - rho.
    return std::min(delta, std::max(0.0, 2.0 * delta - hi));
}

/// Exponent of P_0(X_t = t^delta e_1 + t^gamma e): q v ((2 gamma - 1) ^ gamma).
inline double displacement_exponent(double alpha, double delta, double gamma, int dim) {
    if (!(gamma >= 0.0)) throw std::domain_error("displacement_exponent: gamma must be >= 0");
    const double q = q_closed_form(alpha, delta, dim).value;
    return std::max(q, std::min(2.0 * gamma - 1.0, gamma));
}

/// Growth exponent of d(0, t^delta e_1 + t^gamma e): (2 delta alpha / (2 alpha + d)) v gamma.
inline double chemdist_exponent(double alpha, double delta, double gamma, int dim) {
    detail::check_alpha_dim(alpha, dim, "chemdist_exponent");
    if (!(delta > 0.5)) throw std::domain_error("chemdist_exponent: requires delta > 1/2");
    if (!(gamma >= 0.0)) throw std::domain_error("chemdist_exponent: gamma must be >= 0");
    return std::max(2.0 * delta * alpha / (2.0 * alpha + dim), gamma);
}

/// Optimal excursion scale t^mu of the first p-regime strategy.
inline double optimal_mu(double alpha, double rho, int dim) {
    const auto p = p_exponent(alpha, rho, dim);
    if (p.regime != Regime::First)
        throw std::domain_error("optimal_mu: rho must lie in the first p-regime (" +
                                std::to_string(p_lower_threshold(alpha, dim)) + ", " +
                                std::to_string(p_upper_threshold(alpha, dim)) + "], got regime " +
                                to_string(p.regime));
    return dim == 1 ? alpha * rho / (alpha + 1.0) : alpha * (rho + 1.0) / (2.0 * alpha + dim);
}

/// Minimizing rho of the variational formula in the third and fourth q-regimes.
inline double optimal_rho(double alpha, double delta, int dim) {
    const auto q = q_closed_form(alpha, delta, dim);
    const double d = dim;
    if (q.regime == Regime::Third)
        return dim == 1 ? (2.0 * delta + 1.0) * (alpha + 1.0) / (3.0 * alpha + 1.0)
                        : (2.0 * delta * (2.0 * alpha + d) + d) / (4.0 * alpha + d);
    if (q.regime == Regime::Fourth)
        return dim == 1 ? (2.0 * delta + alpha) / (alpha + 1.0) : (2.0 * delta * d + alpha) / (alpha + d);
    throw std::domain_error("optimal_rho: delta must lie in the third or fourth q-regime, got regime " +
                            to_string(q.regime));
}

/// Decay exponent e in P(tau_r >= t) >= t^{-e}: r C_1 in the third and fourth
/// q-regimes, the explicit second-regime exponent otherwise.
inline double range_tail_exponent(double alpha, double delta, int dim, double r) {
    if (!(r > 0.0)) throw std::domain_error("range_tail_exponent: r must be positive");
    const auto q = q_closed_form(alpha, delta, dim);
    const double d = dim;
    switch (q.regime) {
        case Regime::Second:
            return dim == 1 ? alpha + delta * (alpha - 1.0) + 0.5 * r * (3.0 * alpha + 1.0)
                            : 2.0 * alpha - delta * (2.0 * alpha + d) + 0.5 * r * (4.0 * alpha + d);
        case Regime::Third: return r * (dim == 1 ? (alpha + 1.0) / 2.0 : alpha + d / 2.0);
        case Regime::Fourth: return r * d;
        default:
            throw std::domain_error("range_tail_exponent: delta must lie in the second, third or fourth q-regime, got " +
                                    to_string(q.regime));
    }
}

enum class DiagramKind { P, Q, Displacement };

inline std::string to_string(DiagramKind k) {
    switch (k) {
        case DiagramKind::P: return "P";
        case DiagramKind::Q: return "Q";
        case DiagramKind::Displacement: return "Displacement";
    }
    return "unknown";
}

inline DiagramKind diagram_kind_from_string(const std::string& s) {
    if (s == "P" || s == "p") return DiagramKind::P;
    if (s == "Q" || s == "q") return DiagramKind::Q;
    if (s == "Displacement" || s == "displacement" || s == "D" || s == "d") return DiagramKind::Displacement;
    throw std::invalid_argument("unknown diagram kind: " + s);
}

struct DiagramRow {
    double alpha;
    double x;
    double value;  // NaN for markers
    std::string regime;
};

/// Interior regime boundaries of p or q at fixed alpha, with labels "left/right".
struct RegimeBoundary {
    double x;
    std::string label;
};

inline std::vector<RegimeBoundary> regime_boundaries(DiagramKind kind, double alpha, int dim) {
    std::vector<RegimeBoundary> out;
    if (kind == DiagramKind::P) {
        out.push_back({p_lower_threshold(alpha, dim), "polynomial/first"});
        out.push_back({p_upper_threshold(alpha, dim), "first/second"});
        return out;
    }
    const QThresholds th = q_thresholds(alpha, dim);
    const bool has_second = th.second_hi > th.second_lo;
    if (has_second) {
        out.push_back({th.second_lo, "first/second"});
        out.push_back({th.second_hi, "second/third"});
    } else {
        out.push_back({th.third_lo, "first/third"});
    }
    out.push_back({th.third_hi, "third/fourth"});
    if (std::isfinite(th.fifth_lo)) out.push_back({th.fifth_lo, "fourth/fifth"});
    return out;
}

/// The two case formulas meeting at an interior boundary where the exponent is continuous.
struct BoundaryBranches {
    double x;
    Regime left;
    Regime right;
    double left_value;
    double right_value;
};

/// p: the first/second boundary. q: every interior boundary between nonempty cases.
inline std::vector<BoundaryBranches> boundary_branches(DiagramKind kind, double alpha, int dim) {
    detail::check_alpha_dim(alpha, dim, "boundary_branches");
    std::vector<BoundaryBranches> out;
    if (kind == DiagramKind::P) {
        const double x = p_upper_threshold(alpha, dim);
        out.push_back({x, Regime::First, Regime::Second, p_branch(alpha, x, dim, Regime::First),
                       p_branch(alpha, x, dim, Regime::Second)});
        return out;
    }
    auto add = [&](double x, Regime l, Regime r) {
        out.push_back({x, l, r, q_branch(alpha, x, dim, l), q_branch(alpha, x, dim, r)});
    };
    const QThresholds th = q_thresholds(alpha, dim);
    if (th.second_hi > th.second_lo) {
        add(th.second_lo, Regime::First, Regime::Second);
        add(th.second_hi, Regime::Second, Regime::Third);
    } else {
        add(th.third_lo, Regime::First, Regime::Third);
    }
    add(th.third_hi, Regime::Third, Regime::Fourth);
    if (std::isfinite(th.fifth_lo)) add(th.fifth_lo, Regime::Fourth, Regime::Fifth);
    return out;
}

/// Tabulates p, q or the displacement exponent over alpha_grid x x_grid. For
/// each alpha the interior regime boundaries inside [min x, max x] that are
/// not grid points are added as rows labeled "boundary:left/right".
inline std::vector<DiagramRow> phase_diagram(const std::vector<double>& alpha_grid, const std::vector<double>& x_grid,
                                             DiagramKind kind, int dim = 1, double gamma = 0.0) {
    if (alpha_grid.empty() || x_grid.empty()) throw std::domain_error("phase_diagram: empty grid");
    std::vector<DiagramRow> rows;
    const auto [xmin_it, xmax_it] = std::minmax_element(x_grid.begin(), x_grid.end());
    const double xmin = *xmin_it, xmax = *xmax_it;
    auto eval = [&](double a, double x) -> std::pair<double, std::string> {
        if (kind == DiagramKind::P) {
            const auto r = p_exponent(a, x, dim);
            return {r.value, to_string(r.regime)};
        }
        const auto r = q_closed_form(a, x, dim);
        if (kind == DiagramKind::Q) return {r.value, to_string(r.regime)};
        return {displacement_exponent(a, x, gamma, dim), to_string(r.regime)};
    };
    for (double a : alpha_grid) {
        std::vector<DiagramRow> block;
        for (double x : x_grid) {
            auto [v, label] = eval(a, x);
            block.push_back({a, x, v, std::move(label)});
        }
        for (const auto& b : regime_boundaries(kind, a, dim)) {
            if (b.x < xmin || b.x > xmax) continue;
            if (std::find(x_grid.begin(), x_grid.end(), b.x) != x_grid.end()) continue;
            block.push_back({a, b.x, eval(a, b.x).first, "boundary:" + b.label});
        }
        std::stable_sort(block.begin(), block.end(), [](const DiagramRow& l, const DiagramRow& r) { return l.x < r.x; });
        rows.insert(rows.end(), block.begin(), block.end());
    }
    return rows;
}

}  // namespace scenerywalk
