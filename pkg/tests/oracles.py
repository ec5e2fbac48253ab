"""Independent reference computations used by the tests.

None of these share code with the package: eigenvalues come from
Chebyshev collocation in extended precision, roots from a companion
matrix, and determinants from mpmath exponentials without any scaling.
"""

import mpmath as mp
import numpy as np


def collocation_eigenvalues(zeta, n_points=36, dps=60):
    """Eigenvalues lam (ascending) of phi'''' - zeta phi'''''' = lam^2 phi by Chebyshev collocation.

    The six boundary conditions replace nothing: boundary values at three
    nodes next to each end are eliminated through a Schur complement, which
    leaves a standard eigenproblem on the interior nodes. Double precision is
    not enough for sixth derivatives on this grid, hence mpmath.
    """
    N = n_points
    with mp.workdps(dps):
        z = mp.mpf(zeta)
        t = [mp.cos(mp.pi * j / N) for j in range(N + 1)]
        c = [(2 if j in (0, N) else 1) * (-1) ** j for j in range(N + 1)]
        D = mp.matrix(N + 1, N + 1)
        for i in range(N + 1):
            for j in range(N + 1):
                if i != j:
                    D[i, j] = c[i] / c[j] / (t[i] - t[j])
            D[i, i] = -sum(D[i, j] for j in range(N + 1) if j != i)
        # map [-1, 1] onto [0, 1]: x = (1 + t)/2, so node 0 is x = 1 and node N is x = 0
        D = 2 * D
        P = [mp.eye(N + 1)]
        for _ in range(6):
            P.append(P[-1] * D)
        A = P[4] - z * P[6]
        bpts = [N, N - 1, N - 2, 0, 1, 2]
        bcs = mp.matrix(6, N + 1)
        for j in range(N + 1):
            bcs[0, j] = P[0][N, j]
            bcs[1, j] = P[1][N, j]
            bcs[2, j] = P[2][N, j]
            bcs[3, j] = P[2][0, j] - z * P[4][0, j]
            bcs[4, j] = z * P[5][0, j] - P[3][0, j]
            bcs[5, j] = z * P[3][0, j]
        interior = [j for j in range(N + 1) if j not in bpts]
        Bb = mp.matrix([[bcs[r, j] for j in bpts] for r in range(6)])
        Bi = mp.matrix([[bcs[r, j] for j in interior] for r in range(6)])
        S = mp.inverse(Bb) * Bi
        m = len(interior)
        K = mp.matrix(m, m)
        for a, i in enumerate(interior):
            for b, j in enumerate(interior):
                K[a, b] = A[i, j] - sum(A[i, bpts[r]] * S[r, b] for r in range(6))
        ev = mp.eig(K, left=False, right=False)
        lam2 = sorted(float(mp.re(e)) for e in ev if abs(mp.im(e)) < 1e-10 * abs(e) and mp.re(e) > 0)
    return np.sqrt(lam2)


def companion_roots(zeta, lam):
    """All six roots of zeta s^6 - s^4 + lam^2 from the companion matrix."""
    return np.roots([zeta, 0.0, -1.0, 0.0, 0.0, 0.0, lam * lam])


def raw_determinant(zeta, lam, exponents, dps=50):
    """det of the unscaled boundary matrix for exp(sigma_j x), in extended precision."""
    with mp.workdps(dps):
        z = mp.mpf(zeta)
        M = mp.matrix(6, 6)
        for j, s in enumerate(exponents):
            s = mp.mpc(s.real, s.imag)
            e1 = mp.exp(s)
            M[0, j] = 1
            M[1, j] = s
            M[2, j] = s**2
            M[3, j] = (s**2 - z * s**4) * e1
            M[4, j] = (z * s**5 - s**3) * e1
            M[5, j] = z * s**3 * e1
        return complex(mp.det(M))


def brute_force_eigenvalues(zeta, lam_max, step):
    """Sign changes of Im(det) of the raw matrix on a uniform lambda grid (low modes only)."""
    lams = np.arange(step, lam_max, step)
    crit = 2.0 / (np.sqrt(27.0) * zeta)
    vals = []
    for lam in lams:
        r = companion_roots(zeta, lam)
        r1 = r[np.argsort(np.abs(r.real))][:2]
        s1 = r1[np.argmax(r1.imag)]
        rest = [x for x in r if abs(x - s1) > 1e-9 and abs(x + s1) > 1e-9]
        rest = sorted(rest, key=lambda x: (round(x.real, 9) < 0, -x.imag))
        # order: s1, -s1, then the remaining four grouped as +/- pairs
        pos = [x for x in rest if x.real > 0]
        exps = [s1, -s1, pos[0], -pos[0], pos[1], -pos[1]]
        d = raw_determinant(zeta, lam, exps)
        vals.append(np.sign(lam - crit) * d.imag)
    vals = np.array(vals)
    idx = np.where(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    return lams[idx], lams[idx + 1]
