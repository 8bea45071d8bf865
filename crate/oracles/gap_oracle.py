"""Independent momentum-space oracle for the reference gap problem.

V(r) = 2 exp(-r^2), mu = 1. The s-wave projection of V in momentum space is
analytic, so the Birman-Schwinger operator K^{-1/2} V K^{-1/2} is discretized
directly on a momentum grid without any radial grid.
"""
import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

MU = 1.0


def panels(breaks, order=24):
    x, w = leggauss(order)
    nodes, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (b + a))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def grid(t_floor, pmax=13.0, width=0.2):
    pts = {0.0, 1.0, pmax}
    d = 0.2 * t_floor
    while d < 0.5:
        pts.update({1.0 - d, 1.0 + d})
        d *= 1.7
    pts = sorted(pts)
    breaks = [pts[0]]
    for a, b in zip(pts[:-1], pts[1:]):
        n = max(1, int(np.ceil((b - a) / width)))
        breaks.extend(a + (b - a) * np.arange(1, n + 1) / n)
    return panels(np.array(breaks))


def vs(p, q):
    # (2pi)^-3 * 2pi * int_{-1}^{1} Vhat(|p - q|) dx with Vhat(k) = 2 pi^{3/2} e^{-k^2/4}
    pq = np.outer(p, q)
    base = np.exp(-((p[:, None] - q[None, :]) ** 2) / 4.0) * (-np.expm1(-pq)) * 2.0 / pq
    return 2.0 * np.pi ** 1.5 * base / (2.0 * np.pi) ** 2


def kinv(x, t):
    return np.where(x == 0.0, 0.5 / t, np.tanh(x / (2 * t)) / np.where(x == 0.0, 1.0, x))


def eta(t, p, w, A):
    d = np.sqrt(kinv(p * p - MU, t))
    m = d[:, None] * A * d[None, :]
    return np.linalg.eigvalsh(m)[-1]


def main():
    p, w = grid(0.005)
    s = np.sqrt(w) * p
    A = s[:, None] * vs(p, p) * s[None, :]
    print("nodes", len(p))
    print("eta(0.01) = %.15f" % eta(0.01, p, w, A))
    tc = brentq(lambda t: eta(t, p, w, A) - 1.0, 0.05, 0.5, xtol=1e-15, rtol=1e-15)
    print("Tc = %.15f" % tc)


if __name__ == "__main__":
    main()
