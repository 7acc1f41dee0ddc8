#include "beamfamily/design.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "beamfamily/errors.hpp"

namespace beamfamily {

namespace {

constexpr double kDegToRad = kPi / 180.0;
constexpr int kMaxCentringSteps = 200;

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = 0.5 * (lo + hi);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    }
    out.back() = hi;
    return out;
}

bool overlaps(const AngleInterval& a, const AngleInterval& b) {
    return a.lo_deg < b.hi_deg && b.lo_deg < a.hi_deg;
}

void check_interval(const AngleInterval& iv, const char* what) {
    if (!(iv.lo_deg >= -90.0 && iv.hi_deg <= 90.0 && iv.lo_deg <= iv.hi_deg)) {
        throw DomainError(std::string(what) + " interval must satisfy -90 <= lo <= hi <= 90");
    }
}

/// Rotates v so its largest-magnitude entry is real positive. Entries tied
/// within 1e-9 relative resolve to the highest index.
CVector fix_gauge(CVector v) {
    double peak = 0.0;
    for (const auto& x : v) peak = std::max(peak, std::abs(x));
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) >= peak * (1.0 - 1e-9)) pivot = i;
    }
    const cplx phase = std::conj(v[pivot]) / std::abs(v[pivot]);
    for (auto& x : v) x *= phase;
    v[pivot] = std::abs(v[pivot]);
    return v;
}

/// Real-linear map x = [Re w; Im w] -> (Re s, Im s) with s = a(theta)^T w,
/// where w^H d(theta) = conj(s).
struct LinearResponse {
    std::vector<double> re_row;
    std::vector<double> im_row;
    double target_re;
    double target_im;
};

LinearResponse make_response(const ArrayGeometry& geometry, double theta_deg, cplx target) {
    const CVector a = steering(geometry, theta_deg);
    const std::size_t m = a.size();
    LinearResponse r{std::vector<double>(2 * m), std::vector<double>(2 * m), target.real(),
                     target.imag()};
    for (std::size_t i = 0; i < m; ++i) {
        r.re_row[i] = a[i].real();
        r.re_row[m + i] = -a[i].imag();
        r.im_row[i] = a[i].imag();
        r.im_row[m + i] = a[i].real();
    }
    return r;
}

/// Log-barrier interior-point solver for
///   min t  s.t.  |s_i - tau_i| <= t (in sector),  |s_k| <= delta (out of sector)
/// over x = [Re w; Im w; t].
class MinimaxBarrier {
public:
    MinimaxBarrier(std::vector<LinearResponse> inner, std::vector<LinearResponse> outer,
                   double delta, int element_count, int max_steps, double gap_tol)
        : inner_(std::move(inner)),
          outer_(std::move(outer)),
          delta_(delta),
          m_(element_count),
          dim_(2 * element_count + 1),
          max_steps_(max_steps),
          gap_tol_(gap_tol) {}

    Eigen::VectorXd solve(Eigen::VectorXd x) {
        const double cones = static_cast<double>(inner_.size() + outer_.size());
        double tau = 1.0;
        while (true) {
            centre(x, tau);
            if (2.0 * cones / tau < gap_tol_) break;
            tau *= 10.0;
        }
        return x;
    }

    bool strictly_feasible(const Eigen::VectorXd& x) const {
        const double t = x(dim_ - 1);
        if (!(t > 0.0)) return false;
        for (const auto& r : inner_) {
            if (!(t * t - residual_sq(r, x) > 0.0)) return false;
        }
        for (const auto& r : outer_) {
            if (!(delta_ * delta_ - residual_sq(r, x) > 0.0)) return false;
        }
        return true;
    }

    int steps_taken() const { return steps_; }

private:
    double residual_sq(const LinearResponse& r, const Eigen::VectorXd& x, bool with_target = true,
                       double* re_out = nullptr, double* im_out = nullptr) const {
        double re = 0.0, im = 0.0;
        for (int i = 0; i < 2 * m_; ++i) {
            re += r.re_row[static_cast<std::size_t>(i)] * x(i);
            im += r.im_row[static_cast<std::size_t>(i)] * x(i);
        }
        if (with_target) {
            re -= r.target_re;
            im -= r.target_im;
        }
        if (re_out) *re_out = re;
        if (im_out) *im_out = im;
        return re * re + im * im;
    }

    double value(const Eigen::VectorXd& x, double tau) const {
        const double t = x(dim_ - 1);
        double f = tau * t;
        for (const auto& r : inner_) f -= std::log(t * t - residual_sq(r, x));
        for (const auto& r : outer_) f -= std::log(delta_ * delta_ - residual_sq(r, x, false));
        return f;
    }

    void accumulate(const LinearResponse& r, const Eigen::VectorXd& x, bool is_inner,
                    Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
        const int n = 2 * m_;
        double re, im;
        const double q = residual_sq(r, x, is_inner, &re, &im);
        const double t = x(dim_ - 1);
        const double g = is_inner ? t * t - q : delta_ * delta_ - q;

        Eigen::VectorXd dg = Eigen::VectorXd::Zero(dim_);
        for (int i = 0; i < n; ++i) {
            dg(i) = -2.0 * (re * r.re_row[static_cast<std::size_t>(i)] +
                            im * r.im_row[static_cast<std::size_t>(i)]);
        }
        if (is_inner) dg(dim_ - 1) = 2.0 * t;

        grad -= dg / g;
        hess += dg * dg.transpose() / (g * g);
        // -hess(g)/g, with hess(g) = -2 (b_re b_re^T + b_im b_im^T) on the
        // weight block and +2 on the t entry for in-sector cones.
        const double k = 2.0 / g;
        for (int i = 0; i < n; ++i) {
            const double bri = r.re_row[static_cast<std::size_t>(i)];
            const double bii = r.im_row[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                hess(i, j) += k * (bri * r.re_row[static_cast<std::size_t>(j)] +
                                   bii * r.im_row[static_cast<std::size_t>(j)]);
            }
        }
        if (is_inner) hess(dim_ - 1, dim_ - 1) -= k;
    }

    /// Newton centering; stops on a small decrement, a failed line search or
    /// after kMaxCentringSteps (the iterate stays strictly feasible).
    void centre(Eigen::VectorXd& x, double tau) {
        for (int local = 0; local < kMaxCentringSteps; ++local) {
            if (++steps_ > max_steps_) {
                std::ostringstream msg;
                msg << "minimax solver did not converge within " << max_steps_
                    << " Newton steps (barrier weight " << tau << ", epigraph t = "
                    << x(dim_ - 1) << ")";
                throw ConvergenceError(msg.str());
            }
            Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim_);
            grad(dim_ - 1) = tau;
            Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim_, dim_);
            for (const auto& r : inner_) accumulate(r, x, true, grad, hess);
            for (const auto& r : outer_) accumulate(r, x, false, grad, hess);

            Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
            Eigen::VectorXd step = -ldlt.solve(grad);
            if (!step.allFinite()) {
                hess.diagonal().array() += 1e-12 * hess.diagonal().cwiseAbs().maxCoeff();
                step = -Eigen::LDLT<Eigen::MatrixXd>(hess).solve(grad);
            }
            const double decrement_sq = -grad.dot(step);
            if (!(decrement_sq > 1e-7)) return;

            const double f0 = value(x, tau);
            double s = 1.0;
            Eigen::VectorXd trial = x + step;
            while (!strictly_feasible(trial) || value(trial, tau) > f0 - 0.25 * s * decrement_sq) {
                s *= 0.5;
                if (s < 1e-10) return;
                trial = x + s * step;
            }
            x = trial;
        }
    }

    std::vector<LinearResponse> inner_;
    std::vector<LinearResponse> outer_;
    double delta_;
    int m_;
    int dim_;
    int max_steps_;
    double gap_tol_;
    int steps_ = 0;
};

}  // namespace

double PhaseProfile::operator()(double theta_deg) const {
    return amplitude * std::sin(theta_deg * kDegToRad) + offset;
}

void DesignSpec::validate() const {
    check_interval(sector, "sector");
    if (!(sector.hi_deg > sector.lo_deg)) throw DomainError("sector must have positive width");
    if (out_sector.empty()) throw DomainError("out-of-sector region is empty");
    for (std::size_t i = 0; i < out_sector.size(); ++i) {
        check_interval(out_sector[i], "out-of-sector");
        if (overlaps(out_sector[i], sector)) {
            throw DomainError("out-of-sector interval overlaps the sector");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (overlaps(out_sector[i], out_sector[j])) {
                throw DomainError("out-of-sector intervals overlap");
            }
        }
    }
    if (!(total_power > 0.0)) throw DomainError("total power must be positive");
    if (!(delta > 0.0)) throw DomainError("sidelobe bound delta must be positive");
    if (insector_grid_count < 1 || outsector_grid_count < 1) {
        throw DomainError("grid point counts must be positive");
    }
    if (quadrature_points < 2) throw DomainError("quadrature needs at least 2 points");
}

DesignSpec symmetric_sector_spec(ArrayGeometry geometry, double half_width_deg,
                                 double transition_deg, double total_power, double delta) {
    const double edge = half_width_deg + transition_deg;
    DesignSpec spec{geometry,
                    {-half_width_deg, half_width_deg},
                    {{-90.0, -edge}, {edge, 90.0}},
                    total_power,
                    delta,
                    41,
                    180,
                    PhaseProfile{},
                    2048};
    spec.validate();
    return spec;
}

std::vector<double> insector_grid(const DesignSpec& spec) {
    return linspace(spec.sector.lo_deg, spec.sector.hi_deg, spec.insector_grid_count);
}

std::vector<double> outsector_grid(const DesignSpec& spec, int density) {
    const int total = spec.outsector_grid_count * density;
    const std::size_t n = spec.out_sector.size();
    double length = 0.0;
    for (const auto& iv : spec.out_sector) length += iv.hi_deg - iv.lo_deg;

    // Largest-remainder split of the point budget proportional to length.
    std::vector<int> counts(n);
    std::vector<std::pair<double, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double share = length > 0.0
                                 ? total * (spec.out_sector[i].hi_deg - spec.out_sector[i].lo_deg) / length
                                 : static_cast<double>(total) / static_cast<double>(n);
        counts[i] = static_cast<int>(std::floor(share));
        assigned += counts[i];
        remainders.emplace_back(share - counts[i], i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int k = 0; assigned < total; ++k, ++assigned) {
        ++counts[remainders[static_cast<std::size_t>(k) % n].second];
    }

    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (counts[i] == 0) continue;
        const auto pts = linspace(spec.out_sector[i].lo_deg, spec.out_sector[i].hi_deg, counts[i]);
        out.insert(out.end(), pts.begin(), pts.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

CMatrix sector_matrix(const DesignSpec& spec) {
    check_interval(spec.sector, "sector");
    if (!(spec.sector.hi_deg > spec.sector.lo_deg)) throw DomainError("sector must have positive width");
    if (spec.quadrature_points < 2) throw DomainError("quadrature needs at least 2 points");
    const std::size_t m = static_cast<std::size_t>(spec.geometry.element_count());
    const int q = spec.quadrature_points;
    const double lo = spec.sector.lo_deg * kDegToRad;
    const double hi = spec.sector.hi_deg * kDegToRad;
    const double h = (hi - lo) / (q - 1);
    const double width = hi - lo;

    // A_mn depends on m - n only; accumulate the lag integrals once.
    CVector lag(m, cplx{0.0, 0.0});
    for (int k = 0; k < q; ++k) {
        const double theta = (k == q - 1) ? hi : lo + k * h;
        const double weight = (k == 0 || k == q - 1) ? 0.5 * h : h;
        const double psi = 2.0 * kPi * spec.geometry.spacing() * std::sin(theta);
        for (std::size_t l = 1; l < m; ++l) {
            lag[l] += weight * std::polar(1.0, psi * static_cast<double>(l));
        }
    }
    // Euler-Maclaurin end correction: plain trapezoid is only O(h^2), which
    // leaves ~1e-7 in the high lags at the default point count.
    const double c = 2.0 * kPi * spec.geometry.spacing();
    for (std::size_t l = 1; l < m; ++l) {
        const double kl = c * static_cast<double>(l);
        auto deriv = [&](double theta) {
            return cplx{0.0, kl * std::cos(theta)} * std::polar(1.0, kl * std::sin(theta));
        };
        lag[l] -= h * h / 12.0 * (deriv(hi) - deriv(lo));
    }
    CMatrix a(m);
    for (std::size_t r = 0; r < m; ++r) {
        a(r, r) = width;
        for (std::size_t c = r + 1; c < m; ++c) {
            a(r, c) = std::conj(lag[c - r]);
            a(c, r) = lag[c - r];
        }
    }
    return a;
}

BeamVector spheroidal_mother(const DesignSpec& spec) {
    const CMatrix a = sector_matrix(spec);
    const EigenDecomposition eig = jacobi_eigh(a);
    const double trace = a.trace().real();
    if (eig.values.size() >= 3) {
        const double gap = eig.values[1] - eig.values[2];
        if (!(gap > 1e-10 * trace)) {
            std::ostringstream msg;
            msg << "second and third sector eigenvalues are not separated (gap " << gap
                << ", trace " << trace << "); the two-eigenvector design is ambiguous";
            throw AmbiguousDesign(msg.str());
        }
    }
    const CVector u1 = fix_gauge(eig.vectors[0]);
    const CVector u2 = fix_gauge(eig.vectors[1]);
    const double scale = std::sqrt(spec.total_power / 2.0);
    CVector w(u1.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = scale * (u1[i] + u2[i]);
    return BeamVector(spec.geometry, std::move(w));
}

double minimax_objective(const BeamVector& w, const DesignSpec& spec) {
    double worst = 0.0;
    for (double theta : insector_grid(spec)) {
        worst = std::max(worst, std::abs(response(w, theta) - std::polar(1.0, -spec.phase(theta))));
    }
    return worst;
}

double max_response(const BeamVector& w, const std::vector<double>& angles) {
    double worst = 0.0;
    for (double theta : angles) worst = std::max(worst, std::abs(response(w, theta)));
    return worst;
}

ConvexDesign convex_mother(const DesignSpec& spec, const ConvexOptions& options) {
    spec.validate();
    if (options.restarts < 1) throw DomainError("convex design needs at least one restart");
    const ArrayGeometry& geo = spec.geometry;
    const int m = geo.element_count();
    const auto inner_angles = insector_grid(spec);
    const auto outer_angles = outsector_grid(spec);

    std::vector<LinearResponse> inner;
    for (double theta : inner_angles) {
        // w^H d = exp(-j phi)  <=>  s = a^T w = exp(+j phi)
        inner.push_back(make_response(geo, theta, std::polar(1.0, spec.phase(theta))));
    }
    std::vector<LinearResponse> outer;
    for (double theta : outer_angles) outer.push_back(make_response(geo, theta, 0.0));

    // Deterministic starting points: zero, the spheroidal design, matched
    // beams across the sector, then seeded random vectors.
    std::vector<CVector> starts;
    starts.emplace_back(static_cast<std::size_t>(m), cplx{0.0, 0.0});
    try {
        starts.push_back(spheroidal_mother(spec).weights());
    } catch (const AmbiguousDesign&) {
    }
    const int matched = std::max(1, options.restarts / 2 - 1);
    for (int k = 0; k < matched && static_cast<int>(starts.size()) < options.restarts; ++k) {
        const double theta = matched == 1 ? 0.5 * (spec.sector.lo_deg + spec.sector.hi_deg)
                                          : spec.sector.lo_deg + (spec.sector.hi_deg - spec.sector.lo_deg) * k / (matched - 1);
        CVector a = steering(geo, theta);
        const cplx target = std::polar(1.0 / m, spec.phase(theta));
        for (auto& x : a) x = std::conj(x) * target;
        starts.push_back(std::move(a));
    }
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    while (static_cast<int>(starts.size()) < options.restarts) {
        CVector v(static_cast<std::size_t>(m));
        for (auto& x : v) x = cplx{normal(rng), normal(rng)};
        starts.push_back(std::move(v));
    }
    starts.resize(static_cast<std::size_t>(options.restarts));

    std::vector<double> objectives;
    std::optional<BeamVector> best;
    double best_objective = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        BeamVector w0(geo, start);
        const double peak = max_response(w0, outer_angles);
        const double shrink = peak > 0.5 * spec.delta ? 0.5 * spec.delta / peak : 1.0;
        w0 = w0.scaled(shrink);
        Eigen::VectorXd x(2 * m + 1);
        for (int i = 0; i < m; ++i) {
            x(i) = w0[static_cast<std::size_t>(i)].real();
            x(m + i) = w0[static_cast<std::size_t>(i)].imag();
        }
        x(2 * m) = 1.2 * minimax_objective(w0, spec) + 0.1;

        MinimaxBarrier solver(inner, outer, spec.delta, m, options.max_newton_steps,
                              options.gap_tolerance);
        const Eigen::VectorXd sol = solver.solve(x);
        CVector w(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) w[static_cast<std::size_t>(i)] = cplx{sol(i), sol(m + i)};
        BeamVector candidate(geo, std::move(w));
        const double obj = minimax_objective(candidate, spec);
        objectives.push_back(obj);
        if (obj < best_objective) {
            best_objective = obj;
            best = std::move(candidate);
        }
    }
    const double sidelobe = max_response(*best, outer_angles);
    return ConvexDesign{*best, best_objective, sidelobe, std::move(objectives)};
}

}  // namespace beamfamily
