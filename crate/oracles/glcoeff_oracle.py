"""Independent oracle for Lambda0, Lambda2, Lambda3 and Dc of the reference problem.

Reuses the momentum-space Nystrom discretization of gap_oracle.py. At Tc the
top Birman-Schwinger eigenvector gives alpha-hat on the momentum nodes, and
(V alpha)^ = K_Tc alpha-hat there. The kernel functions g1, g2 are evaluated
with mpmath at 50 digits to avoid cancellation near E = 0.
"""
import mpmath as mp
import numpy as np
from scipy.optimize import brentq

from gap_oracle import MU, eta, grid, kinv, vs

mp.mp.dps = 50


def g1(z):
    z = mp.mpf(z)
    return -mp.diff(lambda s: mp.tanh(s / 2) / s if s != 0 else mp.mpf(1) / 2, z)


def g2(z):
    z = mp.mpf(z)
    if z == 0:
        return mp.mpf(1) / 4
    return mp.tanh(z / 2) * mp.sech(z / 2) ** 2 / (2 * z)


def g1_over_z(z):
    z = mp.mpf(z)
    if abs(z) < mp.mpf("1e-20"):
        return mp.mpf(1) / 24
    return g1(z) / z


def main():
    p, w = grid(0.005)
    s = np.sqrt(w) * p
    A = s[:, None] * vs(p, p) * s[None, :]
    tc = brentq(lambda t: eta(t, p, w, A) - 1.0, 0.05, 0.5, xtol=1e-15, rtol=1e-15)
    beta = 1.0 / tc
    d = kinv(p * p - MU, tc)
    m = np.sqrt(d)[:, None] * A * np.sqrt(d)[None, :]
    vals, vecs = np.linalg.eigh(m)
    x = np.sqrt(d) * vecs[:, -1]
    x /= np.sqrt(np.sum(x * x) / (2 * np.pi**2))
    alpha_hat = x / s
    v_alpha = alpha_hat / d
    wgt = 4.0 * v_alpha**2
    e = p * p - MU
    meas = w * p * p / (2 * np.pi**2)
    with np.errstate(over="ignore"):
        sech2 = 1.0 / np.cosh(0.5 * beta * e) ** 2
    l2 = beta / 8 * np.sum(meas * wgt * sech2)
    l0 = beta**2 / 16 * sum(
        float(meas[k] * wgt[k] * (g1(beta * e[k]) + mp.mpf(2) / 3 * beta * p[k] ** 2 * g2(beta * e[k])))
        for k in range(len(p))
    )
    l3 = beta**2 / 16 * sum(float(meas[k] * wgt[k] ** 2 * beta * g1_over_z(beta * e[k])) for k in range(len(p)))
    print("Tc      = %.15e" % tc)
    print("Lambda0 = %.15e" % l0)
    print("Lambda2 = %.15e" % l2)
    print("Lambda3 = %.15e" % l3)
    print("Dc      = %.15e" % (2 * l0 / l2))


if __name__ == "__main__":
    main()
