#include "beamfamily/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "beamfamily/errors.hpp"

namespace beamfamily {

cplx CMatrix::trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
}

double CMatrix::hermitian_defect() const {
    double d = 0.0;
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t c = 0; c < n_; ++c) {
            d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return d;
}

namespace {

double off_diagonal_norm(const CMatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a.size(); ++c) {
            if (r != c) s += std::norm(a(r, c));
        }
    }
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition jacobi_eigh(const CMatrix& input, double tol, int max_sweeps) {
    const std::size_t n = input.size();
    const double scale = std::max(std::abs(input.trace()), input.frobenius_norm());
    if (input.hermitian_defect() > 1e-10 * std::max(scale, 1.0)) {
        throw DomainError("jacobi_eigh needs a Hermitian matrix");
    }

    CMatrix a = input;
    CMatrix v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v(i, i) = 1.0;
        a(i, i) = a(i, i).real();
    }

    const double target = tol * scale;
    int sweep = 0;
    while (off_diagonal_norm(a) > target) {
        if (++sweep > max_sweeps) {
            throw ConvergenceError("Jacobi eigensolver exceeded the sweep limit");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx g = a(p, q);
                const double mag = std::abs(g);
                if (mag == 0.0) continue;
                // D = diag(1, conj(e)) makes the 2x2 block real; then a real
                // rotation [[c, s], [-s, c]] annihilates it. U = D * G.
                const cplx e = g / mag;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const cplx upq = s;
                const cplx uqp = -s * std::conj(e);
                const cplx uqq = c * std::conj(e);

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p);
                    const cplx akq = a(k, q);
                    a(k, p) = akp * c + akq * uqp;
                    a(k, q) = akp * upq + akq * uqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(uqp) * aqk;
                    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p);
                    const cplx vkq = v(k, q);
                    v(k, p) = vkp * c + vkq * uqp;
                    v(k, q) = vkp * upq + vkq * uqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });
    EigenDecomposition out;
    for (std::size_t idx : order) {
        out.values.push_back(a(idx, idx).real());
        CVector col(n);
        for (std::size_t k = 0; k < n; ++k) col[k] = v(k, idx);
        out.vectors.push_back(std::move(col));
    }
    return out;
}

}  // namespace beamfamily
