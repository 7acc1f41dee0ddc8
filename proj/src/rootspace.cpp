#include "beamfamily/rootspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "beamfamily/errors.hpp"

namespace beamfamily {

namespace {

constexpr int kMaxAberthIterations = 2000;
constexpr int kPolishSteps = 4;
constexpr double kResidualTol = 1e-10;

struct HornerResult {
    cplx value;
    cplx derivative;
};

HornerResult horner(std::span<const cplx> ascending, cplx x) {
    cplx p = ascending.back();
    cplx dp{0.0, 0.0};
    for (std::size_t i = ascending.size() - 1; i-- > 0;) {
        dp = dp * x + p;
        p = p * x + ascending[i];
    }
    return {p, dp};
}

class Polynomial {
public:
    explicit Polynomial(std::span<const cplx> ascending)
        : coeffs_(ascending.begin(), ascending.end()), reversed_(coeffs_.rbegin(), coeffs_.rend()) {}

    std::size_t degree() const { return coeffs_.size() - 1; }

    cplx value(cplx x) const { return horner(coeffs_, x).value; }

    /// p(x) / p'(x); outside the unit disk evaluated through the reversed
    /// polynomial to avoid overflow.
    cplx newton_ratio(cplx x) const {
        if (std::abs(x) <= 1.0) {
            const auto h = horner(coeffs_, x);
            if (h.value == cplx{0.0, 0.0}) return {0.0, 0.0};
            return h.value / h.derivative;
        }
        const cplx y = 1.0 / x;
        const auto h = horner(reversed_, y);
        if (h.value == cplx{0.0, 0.0}) return {0.0, 0.0};
        const cplx log_derivative = (static_cast<double>(degree()) - y * h.derivative / h.value) * y;
        return 1.0 / log_derivative;
    }

    /// |p(x)| / (max|c| * max(1,|x|)^n), the scale-free backward residual.
    double relative_residual(cplx x) const {
        double cmax = 0.0;
        for (const auto& c : coeffs_) cmax = std::max(cmax, std::abs(c));
        const double r = std::abs(x);
        if (r <= 1.0) return std::abs(value(x)) / cmax;
        const cplx y = 1.0 / x;
        return std::abs(horner(reversed_, y).value) / cmax;
    }

private:
    CVector coeffs_;
    CVector reversed_;
};

bool root_less(const cplx& a, const cplx& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
}

}  // namespace

FlipMask::FlipMask(std::uint64_t bits, int root_count) : bits_(bits), root_count_(root_count) {
    if (root_count < 0 || root_count > 64) throw DomainError("flip mask supports at most 64 roots");
    if (root_count < 64 && (bits >> root_count) != 0) {
        throw DomainError("flip mask references a root index beyond the root count");
    }
}

FlipMask FlipMask::all(int root_count) {
    const std::uint64_t bits =
        root_count == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << root_count) - 1);
    return {bits, root_count};
}

FlipMask FlipMask::parse(const std::string& text) {
    if (text.size() > 64) throw ParseError("flip mask longer than 64 bits");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1') {
            bits |= std::uint64_t{1} << i;
        } else if (text[i] != '0') {
            throw ParseError("flip mask must consist of '0' and '1' characters");
        }
    }
    return {bits, static_cast<int>(text.size())};
}

std::string FlipMask::to_string() const {
    std::string s(static_cast<std::size_t>(root_count_), '0');
    for (int i = 0; i < root_count_; ++i) {
        if (contains(i)) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
}

CVector polynomial_roots(std::span<const cplx> coeffs) {
    if (coeffs.empty() || coeffs.back() == cplx{0.0, 0.0}) {
        throw DomainError("polynomial needs a nonzero leading coefficient");
    }
    const std::size_t n = coeffs.size() - 1;
    if (n == 0) return {};
    if (n == 1) return {-coeffs[0] / coeffs[1]};

    const Polynomial poly(coeffs);
    double radius = 1.0;
    if (coeffs[0] != cplx{0.0, 0.0}) {
        radius = std::pow(std::abs(coeffs[0]) / std::abs(coeffs[n]), 1.0 / static_cast<double>(n));
    }

    // Deterministic perturbed circle; the offset keeps starts off the real axis.
    CVector z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        const double r = radius * (1.0 + 0.01 * static_cast<double>(k % 3));
        z[k] = std::polar(r, angle);
    }

    std::vector<bool> converged(n, false);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < kMaxAberthIterations; ++iter) {
        bool all_done = true;
        for (std::size_t k = 0; k < n; ++k) {
            if (converged[k]) continue;
            const cplx ratio = poly.newton_ratio(z[k]);
            cplx repulsion{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k) repulsion += 1.0 / (z[k] - z[j]);
            }
            const cplx step = ratio / (1.0 - ratio * repulsion);
            z[k] -= step;
            if (std::abs(step) <= 4.0 * eps * std::max(std::abs(z[k]), 1e-300)) {
                converged[k] = true;
            } else {
                all_done = false;
            }
        }
        if (all_done) break;
    }

    for (auto& x : z) {
        double best = poly.relative_residual(x);
        for (int s = 0; s < kPolishSteps && best > 0.0; ++s) {
            const cplx candidate = x - poly.newton_ratio(x);
            const double res = poly.relative_residual(candidate);
            if (!(res < best)) break;
            x = candidate;
            best = res;
        }
        if (!(best <= kResidualTol)) {
            std::ostringstream msg;
            msg << "root finder did not converge (relative residual " << best << " at " << x << ")";
            throw ConvergenceError(msg.str());
        }
    }
    std::sort(z.begin(), z.end(), root_less);
    return z;
}

CVector expand_monic(std::span<const cplx> roots) {
    CVector ordered(roots.begin(), roots.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const cplx& a, const cplx& b) { return std::abs(a) > std::abs(b); });
    CVector poly{1.0};
    for (const auto& r : ordered) {
        CVector next(poly.size() + 1, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= r * poly[i];
        }
        poly = std::move(next);
    }
    return poly;
}

RootFactorization factorize(const BeamVector& w) {
    const int m = w.geometry().element_count();
    if (m > kMaxElements) {
        throw DomainError("arrays above " + std::to_string(kMaxElements) +
                          " elements are not supported");
    }
    const double scale = kEndpointEpsilon * w.norm();
    if (!(std::abs(w[0]) > scale) || !(std::abs(w[w.size() - 1]) > scale)) {
        throw DegenerateEndpoints(
            "first or last weight is (numerically) zero: the beam polynomial has a root at 0 or "
            "infinity and the flip map 1/conj(x) is undefined there; trim the zero endpoints "
            "and use a smaller array");
    }
    const cplx lead = w[w.size() - 1];
    return RootFactorization{w.geometry(), polynomial_roots(w.weights()), std::abs(lead),
                             std::arg(lead)};
}

BeamVector flip(const RootFactorization& fact, const FlipMask& mask) {
    const int n = static_cast<int>(fact.roots.size());
    if (mask.root_count() != n) {
        throw DomainError("flip mask covers " + std::to_string(mask.root_count()) +
                          " roots but the factorization has " + std::to_string(n));
    }
    CVector roots(fact.roots);
    double magnitude = fact.leading_magnitude;
    for (int i = 0; i < n; ++i) {
        if (!mask.contains(i)) continue;
        const cplx x = roots[static_cast<std::size_t>(i)];
        if (x == cplx{0.0, 0.0}) throw DegenerateEndpoints("cannot flip a root at zero");
        magnitude *= std::abs(x);
        roots[static_cast<std::size_t>(i)] = 1.0 / std::conj(x);
    }
    CVector weights = expand_monic(roots);
    const cplx lead = std::polar(magnitude, fact.leading_phase);
    for (auto& c : weights) c *= lead;
    return canonicalize(BeamVector(fact.geometry, std::move(weights)));
}

BeamVector canonicalize(const BeamVector& w) {
    const double norm = w.norm();
    if (!(norm > 0.0)) throw DomainError("cannot canonicalize the zero vector");
    const double threshold = 1e-9 * norm;
    std::size_t pivot = 0;
    while (std::abs(w[pivot]) <= threshold) ++pivot;
    const cplx phase = std::conj(w[pivot]) / std::abs(w[pivot]);
    CVector out(w.weights());
    for (auto& x : out) x *= phase;
    out[pivot] = std::abs(w[pivot]);
    return BeamVector(w.geometry(), std::move(out));
}

int unit_circle_root_count(const RootFactorization& fact, double tol) {
    return static_cast<int>(std::count_if(fact.roots.begin(), fact.roots.end(), [tol](const cplx& x) {
        return std::abs(std::abs(x) - 1.0) <= tol;
    }));
}

}  // namespace beamfamily
