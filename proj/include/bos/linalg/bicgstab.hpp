#pragma once

#include <bos/linalg/block.hpp>

#include <cmath>
#include <functional>

namespace bos {

struct LinearSolveReport {
    bool converged = false;
    int iterations = 0;
    double relative_residual = 0.0;
};

struct BicgstabOptions {
    double tolerance = 1.0e-3; // relative, on the true residual
    int max_iterations = 200;
};

/// Preconditioned BiCGStab with right preconditioning, so the monitored
/// residual is the true one. On rho breakdown the method restarts once
/// from the current iterate, then reports failure.
inline LinearSolveReport
bicgstab(const std::function<void(const BlockVector&, BlockVector&)>& op,
         const BlockVector& b,
         const std::function<void(const BlockVector&, BlockVector&)>& precond,
         BlockVector& x,
         const BicgstabOptions& opts = {})
{
    const std::size_t n = b.size();
    LinearSolveReport rep;

    const double bnorm = b.two_norm();
    if (bnorm == 0.0) {
        x.set_zero();
        rep.converged = true;
        return rep;
    }

    BlockVector r(n), r0(n), p(n), v(n), s(n), t(n), y(n), z(n), tmp(n);

    op(x, tmp);
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < 3; ++k) {
            r[i][k] = b[i][k] - tmp[i][k];
        }
    }
    r0 = r;

    double rho = 1.0, alpha = 1.0, omega = 1.0;
    p.set_zero();
    v.set_zero();
    bool restarted = false;

    const double breakdown = 1.0e-60;

    for (int it = 0; it < opts.max_iterations; ++it) {
        const double rho_new = dot(r0, r);
        if (std::abs(rho_new) < breakdown * bnorm * bnorm || omega == 0.0) {
            if (restarted) {
                rep.iterations = it;
                rep.relative_residual = r.two_norm() / bnorm;
                return rep; // failure, caller cuts the time step
            }
            restarted = true;
            r0 = r;
            rho = 1.0;
            alpha = 1.0;
            omega = 1.0;
            p.set_zero();
            v.set_zero();
            continue;
        }
        const double beta = (it == 0) ? 0.0 : (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) {
            for (int k = 0; k < 3; ++k) {
                p[i][k] = r[i][k] + beta * (p[i][k] - omega * v[i][k]);
            }
        }
        precond(p, y);
        op(y, v);
        const double r0v = dot(r0, v);
        if (std::abs(r0v) < breakdown) {
            rep.iterations = it;
            rep.relative_residual = r.two_norm() / bnorm;
            return rep;
        }
        alpha = rho / r0v;
        for (std::size_t i = 0; i < n; ++i) {
            for (int k = 0; k < 3; ++k) {
                s[i][k] = r[i][k] - alpha * v[i][k];
            }
        }
        x.axpy(alpha, y);
        if (s.two_norm() / bnorm < opts.tolerance) {
            rep.converged = true;
            rep.iterations = it + 1;
            rep.relative_residual = s.two_norm() / bnorm;
            return rep;
        }
        precond(s, z);
        op(z, t);
        const double tt = dot(t, t);
        if (tt == 0.0) {
            r = s;
            rep.iterations = it + 1;
            rep.relative_residual = r.two_norm() / bnorm;
            rep.converged = rep.relative_residual < opts.tolerance;
            return rep;
        }
        omega = dot(t, s) / tt;
        x.axpy(omega, z);
        for (std::size_t i = 0; i < n; ++i) {
            for (int k = 0; k < 3; ++k) {
                r[i][k] = s[i][k] - omega * t[i][k];
            }
        }
        rep.iterations = it + 1;
        rep.relative_residual = r.two_norm() / bnorm;
        if (rep.relative_residual < opts.tolerance) {
            rep.converged = true;
            return rep;
        }
    }
    return rep;
}

} // namespace bos
