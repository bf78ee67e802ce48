"""Compiled kernels for conditional-sum-of-squares ARMA(1,1) fitting.

The intercept is profiled out: for fixed ``(rho, delta)`` the residuals are
affine in ``gamma`` so the optimal ``gamma`` has a closed form.  The search
runs over ``(atanh rho, atanh delta)`` so any finite point maps into the open
box |rho|, |delta| < 1.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def profile_css(y, rho, delta):
    """Return ``(ssr, gamma)`` minimising the CSS over ``gamma`` with ``e_0 = 0``."""
    ex = 0.0
    e1 = 0.0
    sxx = 0.0
    sx1 = 0.0
    s11 = 0.0
    for t in range(1, y.shape[0]):
        ex = y[t] - rho * y[t - 1] - delta * ex
        e1 = 1.0 - delta * e1
        sxx += ex * ex
        sx1 += ex * e1
        s11 += e1 * e1
    gamma = sx1 / s11
    ssr = sxx - sx1 * gamma
    if ssr < 0.0:
        ssr = 0.0
    return ssr, gamma


@njit(cache=True)
def _obj(y, p):
    return profile_css(y, np.tanh(p[0]), np.tanh(p[1]))[0]


@njit(cache=True)
def nelder_mead(y, x0, step, xtol, ftol, maxiter):
    """Two-dimensional Nelder-Mead on the profiled CSS."""
    sim = np.empty((3, 2))
    fv = np.empty(3)
    for i in range(3):
        sim[i, 0] = x0[0]
        sim[i, 1] = x0[1]
    sim[1, 0] += step
    sim[2, 1] += step
    for i in range(3):
        fv[i] = _obj(y, sim[i])
    nfev = 3
    for _ in range(maxiter):
        order = np.argsort(fv)
        sim = sim[order]
        fv = fv[order]
        spread = 0.0
        for i in range(1, 3):
            for j in range(2):
                d = abs(sim[i, j] - sim[0, j])
                if d > spread:
                    spread = d
        if spread <= xtol and fv[2] - fv[0] <= ftol * (abs(fv[0]) + 1e-300):
            return sim[0].copy(), fv[0], nfev, True
        c = 0.5 * (sim[0] + sim[1])
        xr = 2.0 * c - sim[2]
        fr = _obj(y, xr)
        nfev += 1
        if fr < fv[0]:
            xe = 3.0 * c - 2.0 * sim[2]
            fe = _obj(y, xe)
            nfev += 1
            if fe < fr:
                sim[2] = xe
                fv[2] = fe
            else:
                sim[2] = xr
                fv[2] = fr
            continue
        if fr < fv[1]:
            sim[2] = xr
            fv[2] = fr
            continue
        if fr < fv[2]:
            xc = c + 0.5 * (xr - c)
            fc = _obj(y, xc)
            nfev += 1
            if fc <= fr:
                sim[2] = xc
                fv[2] = fc
                continue
        else:
            xc = c + 0.5 * (sim[2] - c)
            fc = _obj(y, xc)
            nfev += 1
            if fc < fv[2]:
                sim[2] = xc
                fv[2] = fc
                continue
        for i in range(1, 3):
            sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
            fv[i] = _obj(y, sim[i])
            nfev += 1
    best = np.argmin(fv)
    return sim[best].copy(), fv[best], nfev, False


@njit(cache=True)
def multistart(y, starts, step, xtol, ftol, maxiter):
    """Run :func:`nelder_mead` from each row of ``starts``; keep the best converged optimum."""
    best_x = np.zeros(2)
    best_f = np.inf
    best_ok = False
    for k in range(starts.shape[0]):
        x, f, _, ok = nelder_mead(y, starts[k], step, xtol, ftol, maxiter)
        if (ok and not best_ok) or (ok == best_ok and f < best_f):
            best_x = x
            best_f = f
            best_ok = ok
    return best_x, best_f, best_ok
