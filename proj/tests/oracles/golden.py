#!/usr/bin/env python3
"""Independent oracles for the frozen golden values used by the C++ tests.

Every value here is computed by a method that shares no code path with the
C++ implementation: mpmath arbitrary-precision quadrature and root finding,
and Fourier-Galerkin spectral eigensolves with piecewise Gauss-Legendre
quadrature (the C++ side uses finite volumes + Sturm bisection / inverse
iteration). Run it and paste the printed numbers into tests/golden.hpp.
"""
import mpmath as mp
import numpy as np
import scipy.linalg as sla

mp.mp.dps = 40
PI = mp.pi


# --------------------------------------------------------------------------
# closed forms
def Z(u, eta):
    return 2 * eta / PI * (mp.asin(u) + u * mp.sqrt(1 - u * u)) - eta * u


def ledger(delta, sigma=0, lam=1):
    d = mp.mpf(delta)
    A = 2 * d * (1 + d)
    B = d * (5 + d) / (1 - d)
    eta = 1 + d
    ustar = mp.sqrt(1 - PI**2 / 16)
    zt = Z(ustar, eta)
    C1 = (1 + d + mp.sqrt(A)) / (1 - mp.sqrt(B))
    C2 = sigma / (2 * (1 - mp.sqrt(B))) * (zt / mp.sqrt(A) + 1 / (2 * mp.sqrt(B)))
    b = C1 + C2 / lam
    alpha = (1 - d) ** 2 / b
    return dict(A=A, B=B, C1=C1, C2=C2, b=b, alpha=alpha, tau=(3 + 4 * d) / (2 * d), ztilde=zt)


def moser(Cs, p, n, psi, terms=200):
    s = mp.mpf(2) * p / n
    r = (s + 1) / 2
    mu = r * n / (r * n - 2)
    E = s / (s - r)
    A = lambda l: Cs * (l + 1) / (2 * mp.sqrt(l)) * mp.sqrt(psi)
    prod = mp.mpf(1)
    l_prev = mp.mpf(2)
    for j in range(1, terms + 1):
        lj = 2 * mu**j
        prod *= ((2 * A(l_prev - 1)) ** E + 2) ** (2 / lj)
        l_prev = lj
    return prod


def sharp_integral(a, b, eta):
    a, b, eta = mp.mpf(a), mp.mpf(b), mp.mpf(eta)

    def g(x):
        # tanh-sinh nodes crowd x = 1; evaluate with extra guard digits
        with mp.workdps(400):
            x = mp.mpf(x)
            if x >= 1:
                q = a * eta / b
                return mp.inf
            q = 2 * a * Z(x, eta) / (b * (1 - x * x))
            return (1 / mp.sqrt(1 + q) + 1 / mp.sqrt(1 - q)) / mp.sqrt(1 - x * x)

    return mp.quad(g, [0, 0.5, 0.9, 0.99, 1])


# --------------------------------------------------------------------------
# cosine-perturbed torus, f = c (1 + beta cos(2 pi t / L))
def kbar_cos(beta, c=1, L=2 * PI, p=2):
    beta = mp.mpf(beta)
    w = 2 * PI / L
    f = lambda t: c * (1 + beta * mp.cos(w * t))
    fpp = lambda t: -c * beta * w * w * mp.cos(w * t)
    rho0 = lambda t: max(fpp(t) / f(t), 0)
    pts = [0, L / 4, 3 * L / 4, L]
    num = mp.quad(lambda t: rho0(t) ** p * f(t), pts)
    den = mp.quad(f, [0, L])
    return (num / den) ** (mp.mpf(1) / p)


def gl_nodes(segments, per=400):
    x, w = np.polynomial.legendre.leggauss(per)
    T, W = [], []
    for a, b in segments:
        T.append(0.5 * (b - a) * x + 0.5 * (b + a))
        W.append(0.5 * (b - a) * w)
    return np.concatenate(T), np.concatenate(W)


def fourier_basis(t, K, L):
    w = 2 * np.pi / L
    cols, dcols = [np.ones_like(t)], [np.zeros_like(t)]
    for j in range(1, K + 1):
        cols += [np.cos(j * w * t), np.sin(j * w * t)]
        dcols += [-j * w * np.sin(j * w * t), j * w * np.cos(j * w * t)]
    return np.array(cols).T, np.array(dcols).T


def galerkin(beta, k, V=None, K=96, c=1.0, L=2 * np.pi, fiber_scale=1.0, ffun=None):
    """Weak form of -(f u')'/f + k^2 u/f^2 - V u = lam u (n=2), Fourier basis."""
    segs = [(0, L / 4), (L / 4, L / 2), (L / 2, 3 * L / 4), (3 * L / 4, L)]
    t, wq = gl_nodes(segs)
    w = 2 * np.pi / L
    f = fiber_scale * c * (1 + beta * np.cos(w * t)) if ffun is None else ffun(t)
    P, dP = fourier_basis(t, K, L)
    S = (dP * (wq * f)[:, None]).T @ dP + k * k * (P * (wq / f)[:, None]).T @ P
    if V is not None:
        S -= (P * (wq * f * V(t))[:, None]).T @ P
    M = (P * (wq * f)[:, None]).T @ P
    ev, vec = sla.eigh(S, M)
    return ev, vec


def cos_rho0(beta, L=2 * np.pi):
    w = 2 * np.pi / L
    return lambda t: np.maximum(-beta * w * w * np.cos(w * t) / (1 + beta * np.cos(w * t)), 0.0)


def eval_fn(coef, t, K, L):
    P, _ = fourier_basis(np.atleast_1d(t), K, L)
    return P @ coef


def extremes(coef, K, L):
    t = np.linspace(0, L, 200001)
    u = eval_fn(coef, t, K, L)
    from scipy.optimize import minimize_scalar
    i, j = np.argmax(u), np.argmin(u)
    mx = -minimize_scalar(lambda s: -eval_fn(coef, s, K, L)[0], bounds=(t[max(i - 2, 0)], t[min(i + 2, len(t) - 1)]), method='bounded', options={'xatol': 1e-14}).fun
    mn = minimize_scalar(lambda s: eval_fn(coef, s, K, L)[0], bounds=(t[max(j - 2, 0)], t[min(j + 2, len(t) - 1)]), method='bounded', options={'xatol': 1e-14}).fun
    return mx, mn


def main():
    out = {}
    out["z_inv_sqrt2"] = Z(1 / mp.sqrt(2), 1)
    ustar = mp.sqrt(1 - PI**2 / 16)
    out["u_star"] = ustar
    out["z_tilde_1"] = Z(ustar, 1)
    l1 = ledger(0.01)
    out["A_001"], out["B_001"], out["C1_001"], out["alpha_001"] = l1["A"], l1["B"], l1["C1"], l1["alpha"]
    l2 = ledger(0.1, sigma=mp.mpf("0.001"), lam=mp.mpf("0.01"))
    for key in ("tau", "A", "B", "C1", "C2", "b", "alpha", "ztilde"):
        out["ledger01_" + key] = l2[key]
    # delta with alpha(delta, sigma=0) = 0.5
    out["delta_alpha_half"] = mp.findroot(lambda d: ledger(d)["alpha"] - mp.mpf("0.5"), (mp.mpf("0.001"), mp.mpf("0.1")), solver="anderson")
    out["moser_n2p2"] = moser(mp.mpf(1), 2, 2, mp.mpf(1))
    out["moser_n2p2_cs1p2"] = moser(mp.mpf("1.2"), 2, 2, mp.mpf(1))
    out["sharp_05_15_11"] = sharp_integral("0.5", "1.5", "1.1")
    out["sharp_099_11_11"] = sharp_integral("0.99", "1.1", "1.1")
    out["kbar_cos005"] = kbar_cos("0.05")
    Bpn = mp.sqrt(mp.mpf(3) / 2)
    out["term1_n2p2_pi"] = (mp.log(mp.mpf(9) / 8) / (Bpn * PI)) ** 2
    out["K1_001_01"] = mp.sqrt(6 / mp.mpf("0.01") * (2 + 3 / mp.mpf("0.1")))
    out["C3_01"] = (4 / mp.mpf("3.2")) ** (mp.mpf("3.2") / mp.mpf("3.4"))
    for k, v in out.items():
        print(f"{k:>22s} = {mp.nstr(v, 17)}")

    # spectral oracles on the beta=0.05 torus (L = 2 pi, fiber 2 pi)
    K = 96
    L = 2 * np.pi
    ev0, vec0 = galerkin(0.05, 0, K=K)
    ev1, _ = galerkin(0.05, 1, K=K)
    ev0b, _ = galerkin(0.05, 0, K=128)
    ev1b, _ = galerkin(0.05, 1, K=128)
    print(f"{'lam_k0_cos005':>22s} = {ev0[1]:.17g} (K=128: {ev0b[1]:.17g}) next {ev0[2]:.17g}")
    print(f"{'lam_k1_cos005':>22s} = {ev1[0]:.17g} (K=128: {ev1b[0]:.17g})")
    mx, mn = extremes(vec0[:, 1], K, L)
    a = (mx + mn) / (mx - mn)
    print(f"{'a_k0_cos005':>22s} = {abs(a):.17g}")

    # asymmetric profile f = 0.5 (1 + 0.1 cos t + 0.05 sin 2t), k = 0 mode
    fa = lambda t: 0.5 * (1 + 0.1 * np.cos(t) + 0.05 * np.sin(2 * t))
    eva, veca = galerkin(0, 0, K=K, ffun=fa)
    evb, _ = galerkin(0, 1, K=K, ffun=fa)
    mx, mn = extremes(veca[:, 1], K, L)
    print(f"{'lam_asym_k0':>22s} = {eva[1]:.17g} (k=1 ground {evb[0]:.6g})")
    print(f"{'a_asym_k0':>22s} = {abs((mx + mn) / (mx - mn)):.17g}")

    # Schroedinger ground state, V = 2 (tau-1) rho0, tau = 17
    tau = 17.0
    r0 = cos_rho0(0.05)
    V = lambda t: 2 * (tau - 1) * r0(t)
    evs, vecs = galerkin(0.05, 0, V=V, K=K)
    evs2, _ = galerkin(0.05, 0, V=V, K=160)
    sig_t = -evs[0]
    print(f"{'sigma_tilde_cos005':>22s} = {sig_t:.17g} (K=160: {-evs2[0]:.17g})")
    coef = vecs[:, 0]
    segs = [(0, L / 4), (L / 4, L / 2), (L / 2, 3 * L / 4), (3 * L / 4, L)]
    t, wq = gl_nodes(segs)
    f = 1 + 0.05 * np.cos(t)
    wv = eval_fn(coef, t, K, L)
    if wv.mean() < 0:
        coef = -coef
        wv = -wv
    wbar = np.sum(wq * f * wv) / np.sum(wq * f)
    tt = np.linspace(0, L, 400001)
    J = (eval_fn(coef, tt, K, L) / wbar) ** (-1.0 / (tau - 1))
    print(f"{'J_dev_cos005':>22s} = {np.max(np.abs(J - 1)):.17g}")

    # sigma = sigma_tilde / (tau - 1) for beta = 0.02, delta = 0.1 (tau = 17)
    r0 = cos_rho0(0.02)
    V = lambda t: 2 * (tau - 1) * r0(t)
    s96 = -galerkin(0.02, 0, V=V, K=96)[0][0] / (tau - 1)
    s160 = -galerkin(0.02, 0, V=V, K=160)[0][0] / (tau - 1)
    print(f"{'sigma_cos002_d01':>22s} = {s160:.17g} (K=96: {s96:.17g})")


if __name__ == "__main__":
    main()
