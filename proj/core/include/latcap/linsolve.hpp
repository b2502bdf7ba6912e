#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "latcap/errors.hpp"

namespace latcap {

struct CgResult {
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

// Conjugate gradients for SPD operators, optionally in a weighted inner
// product (orbit-reduced kernels are self-adjoint under orbit-size weights).
// matvec(x, y): y = A x.
template <class MatVec>
CgResult conjugate_gradient(MatVec&& matvec, const std::vector<double>& b, std::vector<double>& x,
                            double rel_tol, int max_iter, const std::vector<double>* weight = nullptr) {
    const std::size_t n = b.size();
    x.assign(n, 0.0);
    std::vector<double> r = b, p = b, ap(n);
    auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0;
        if (weight) {
            for (std::size_t i = 0; i < n; ++i) s += (*weight)[i] * u[i] * v[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) s += u[i] * v[i];
        }
        return s;
    };
    double rr = dot(r, r);
    const double b2 = rr;
    if (b2 == 0.0) return {0, 0.0, true};
    const double stop = rel_tol * rel_tol * b2;
    CgResult res;
    for (int it = 0; it < max_iter; ++it) {
        matvec(p, ap);
        double pap = dot(p, ap);
        if (pap <= 0) throw NumericError("CG: operator not positive definite");
        double alpha = rr / pap;
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
        double rr_new = dot(r, r);
        res.iterations = it + 1;
        if (rr_new <= stop) {
            res.residual = std::sqrt(rr_new / b2);
            res.converged = true;
            return res;
        }
        double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    res.residual = std::sqrt(rr / b2);
    return res;
}

}  // namespace latcap
