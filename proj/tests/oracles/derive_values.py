"""Independent numpy computations of the constants frozen into the unit tests.

Run with `python3 tests/oracles/derive_values.py`; every block prints the
values pasted into the matching test file. Nothing here shares code with the
C++ library: PMFs come from explicit complement determinants, OPE kernels
from a weighted QR of raw monomials, harmonic kernels from a non-symmetric
eigensolve of D^-1 W, and USVT from numpy.linalg.eigh.
"""
import itertools
import math

import numpy as np

np.set_printoptions(precision=17)


def fmt(values):
    return ", ".join(repr(float(v)) for v in np.ravel(values))


def pmf_block():
    k = np.array([[2.0, 0.5, 0.2], [0.5, 1.5, 0.3], [0.2, 0.3, 1.0]])
    n = 3
    out = []
    for mask in range(1 << n):
        comp = np.diag([0.0 if mask >> i & 1 else 1.0 for i in range(n)])
        out.append(abs(np.linalg.det(k / n - comp)))
    print("pmf3:", fmt(out))


def graded(d, m):
    out = []
    deg = 0
    while len(out) < m:
        level = sorted(b for b in itertools.product(range(deg + 1), repeat=d) if sum(b) == deg)
        out.extend(level)
        deg += 1
    return out[:m]


def ope_kernel(points, m):
    n, d = points.shape
    cols = [np.prod([points[:, k] ** b[k] for k in range(d)], axis=0) for b in graded(d, m)]
    v = np.stack(cols, axis=1) / math.sqrt(n)  # weights 1/n
    q, _ = np.linalg.qr(v)
    p = q * math.sqrt(n)
    return p @ p.T


def ope_block():
    print("graded(2,6):", graded(2, 6))
    print("graded(3,5):", graded(3, 5))
    x1 = np.array([[-1.0], [-0.5], [0.0], [0.5], [1.0]])
    print("ope d=1 n=5 m=3:", fmt(ope_kernel(x1, 3)))
    x2 = np.array([[0.1, -0.3], [0.7, 0.2], [-0.4, 0.9], [-0.8, -0.6], [0.3, 0.5], [0.0, -0.9]])
    print("ope d=2 n=6 m=4:", fmt(ope_kernel(x2, 4)))


def fibonacci_sphere(n):
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(1.0 - z * z)
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def harmonic_block():
    x = fibonacci_sphere(10)
    n = len(x)
    h1, h2 = 0.9, 1.1
    d2 = ((x[:, None, :] - x[None, :, :]) ** 2).sum(-1)
    w = np.exp(-d2 / (4 * h1 * h1))
    deg = w.sum(1)
    wn = w / np.outer(deg, deg)
    dd = wn.sum(1)
    lap = (np.eye(n) - wn / dd[:, None]) / (h1 * h1)
    vals, vecs = np.linalg.eig(lap)
    order = np.argsort(vals.real)
    vals, vecs = vals.real[order], vecs.real[:, order]
    print("laplacian eigenvalues:", fmt(vals[:5]))
    dens = (np.sqrt(d2) / h2 <= 1.0).sum(1) / math.pi / (n * h2 * h2)
    print("density:", fmt(dens))
    omega = 1.0 / (n * dens)
    for m in (1, 3):
        u = vecs[:, :m]
        q, _ = np.linalg.qr(np.sqrt(omega)[:, None] * u)
        v = q / np.sqrt(omega)[:, None]
        k = (v / np.sqrt(dens)[:, None]) @ (v / np.sqrt(dens)[:, None]).T
        lmax = np.linalg.eigvalsh(k).max()
        k = k / max(1.0, lmax / n)
        print(f"harmonic m={m} gap={vals[m] - vals[m - 1]:.3g}:", fmt(k))


def usvt_block():
    a = np.array([
        [0, 1, 1, 0, 1, 1],
        [1, 0, 1, 1, 0, 1],
        [1, 1, 0, 1, 1, 0],
        [0, 1, 1, 0, 1, 1],
        [1, 0, 1, 1, 0, 1],
        [1, 1, 0, 1, 1, 0],
    ], dtype=float)
    n = 6
    alpha, c, rho = 1.0, 0.8, 0.5
    gamma = rho * (alpha * n) ** 0.75
    lam, u = np.linalg.eigh(a)
    keep = lam >= gamma
    at = (u[:, keep] * (lam[keep] / alpha)) @ u[:, keep].T
    shift = max(c - np.trace(at) / n, 0.0)
    ab = at + shift * np.eye(n)
    lmax = np.linalg.eigvalsh(ab).max()
    cp = min(n / lmax, 1.0 / (1.0 + (alpha * n) ** -0.25))
    print("usvt gamma, rank, shift, scale:", gamma, int(keep.sum()), shift, cp)
    print("usvt kernel:", fmt(cp * ab))


def bounds_block():
    a = np.array([[2.0, 0.3, -0.1, 0.4], [0.3, 1.0, 0.2, 0.0], [-0.1, 0.2, 1.5, 0.1], [0.4, 0.0, 0.1, 0.8]])
    b = a + np.array([[0.1, 0.0, 0.05, 0.0], [0.0, -0.2, 0.0, 0.1], [0.05, 0.0, 0.0, 0.0], [0.0, 0.1, 0.0, 0.3]])
    n = 4
    for r in (1, 2, 3):
        diffs = [np.linalg.det(a[np.ix_(s, s)]) - np.linalg.det(b[np.ix_(s, s)])
                 for s in itertools.combinations(range(n), r)]
        ma, mb, mab = abs(a).max(), abs(b).max(), abs(a - b).max()
        rhs_max = math.factorial(r) * sum(ma ** (j - 1) * mab * mb ** (r - j) for j in range(1, r + 1))
        big = max(np.linalg.norm(a), np.linalg.norm(b), np.trace(a), np.trace(b))
        gap = max(np.linalg.norm(a - b), abs(np.trace(a) - np.trace(b)))
        rhs_frob = r * math.factorial(r) * big ** (r - 1) * gap
        print(f"r={r} max: {max(abs(np.array(diffs)))!r} {rhs_max!r} "
              f"frob: {abs(sum(diffs))!r} {sum(abs(np.array(diffs)))!r} {rhs_frob!r}")


def linear_statistic_block():
    k = np.array([[2.0, 0.5, 0.2, 0.1], [0.5, 1.5, 0.3, 0.0], [0.2, 0.3, 1.0, 0.2], [0.1, 0.0, 0.2, 1.2]])
    pts = np.array([[0.0, 1.0], [1.0, 0.0], [0.5, -0.5], [-1.0, 0.25]])
    n = 4
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            phi = pts[i, 0] * pts[j, 1] + 1.0
            total += phi * np.linalg.det(k[np.ix_([i, j], [i, j])]) / n ** 2
    print("expected pair statistic:", repr(total))


if __name__ == "__main__":
    pmf_block()
    ope_block()
    harmonic_block()
    usvt_block()
    bounds_block()
    linear_statistic_block()
