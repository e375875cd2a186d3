"""Independent reference computations the tests freeze expected values against."""

import itertools

import numpy as np
from scipy.optimize import linprog, minimize


def kron_ref(a, b):
    """Kronecker product by the index formula, no library calls."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for s in range(rb):
                for t in range(cb):
                    out[i * rb + s, j * cb + t] = a[i, j] * b[s, t]
    return out


def partial_trace_ref(x, m, n, which):
    """Trace out one factor by summing matrix entries directly."""
    if which == "B":
        out = np.zeros((m, m), dtype=complex)
        for i in range(m):
            for j in range(m):
                out[i, j] = sum(x[i * n + s, j * n + s] for s in range(n))
    else:
        out = np.zeros((n, n), dtype=complex)
        for s in range(n):
            for t in range(n):
                out[s, t] = sum(x[i * n + s, i * n + t] for i in range(m))
    return out


def partial_transpose_ref(x, m, n):
    """Transpose the second factor entry by entry."""
    out = np.zeros_like(np.asarray(x, dtype=complex))
    for i in range(m):
        for j in range(m):
            for s in range(n):
                for t in range(n):
                    out[i * n + t, j * n + s] = x[i * n + s, j * n + t]
    return out


def realign_ref(x, m, n):
    """Reshuffle x[(i,k),(j,l)] into out[(i,j),(k,l)] with explicit loops."""
    out = np.zeros((m * m, n * n), dtype=complex)
    for i in range(m):
        for j in range(m):
            for s in range(n):
                for t in range(n):
                    out[i * m + j, s * n + t] = x[i * n + s, j * n + t]
    return out


def k2_norm_ref(y, k):
    """Root of the sum of the k largest squared singular values."""
    sig = np.linalg.svd(y, compute_uv=False)
    return float(np.sqrt(np.sum(sig[:k] ** 2)))


def ascent_k2_dual(x, k, restarts=200, seed=0):
    """Best-of-restarts block ascent of |<X,Y>| / ||Y||_(k,2).

    Y is kept factored as U diag(tau) V*.  The frame block has the closed
    Procrustes maximizer (align U, V with the singular frames of X), and
    the tau block is solved over the defining constraint set, one ball per
    k-subset of indices, with SLSQP.  Each restart varies the tau start.
    The returned value is evaluated on the explicit final Y, so it is a
    certified lower bound on the dual norm whatever the solver did.
    """
    m, n = x.shape
    p = min(m, n)
    ux, sx, vxh = np.linalg.svd(x, full_matrices=False)

    def subset_jac(t, idx):
        j = np.zeros_like(t)
        j[idx] = -2.0 * t[idx]
        return j

    cons = [{"type": "ineq",
             "fun": (lambda t, idx=list(s): 1.0 - np.sum(t[idx] ** 2)),
             "jac": (lambda t, idx=list(s): subset_jac(t, idx))}
            for s in itertools.combinations(range(p), k)]

    def topk2(t):
        return float(np.sqrt(np.sum(np.sort(np.abs(t))[::-1][:k] ** 2)))

    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(restarts):
        t0 = np.abs(rng.standard_normal(p))
        t0 /= max(topk2(t0), 1e-12)
        res = minimize(lambda t: -(sx @ t), t0, jac=lambda t: -sx,
                       method="SLSQP", bounds=[(0.0, None)] * p,
                       constraints=cons,
                       options={"maxiter": 300, "ftol": 1e-14})
        tau = np.clip(res.x, 0.0, None)
        y = (ux * tau) @ vxh
        h = k2_norm_ref(y, k)
        if h > 1e-12:
            val = abs(np.vdot(x, y)) / h
            if val > best:
                best = float(val)
    return best


def atomic_lp_dual(x, k, budget=1200, seed=0):
    """Upper bound on the (k,2) dual norm by a restricted atomic program.

    Minimizes the coefficient sum over decompositions of x into sampled
    unit-Frobenius rank<=k atoms.  The pool always contains the chunks of
    x's own singular expansion, so the program is feasible and the value
    can only sit above the true minimum over all decompositions.
    """
    m, n = x.shape
    u, s, vh = np.linalg.svd(x)
    keep = s > 1e-13 * max(s[0], 1e-300)
    rank = int(np.sum(keep))
    atoms = []
    for start in range(0, rank, k):
        stop = min(start + k, rank)
        chunk = (u[:, start:stop] * s[start:stop]) @ vh[start:stop, :]
        atoms.append(chunk / np.linalg.norm(chunk))
    rng = np.random.default_rng(seed)
    while len(atoms) < budget:
        a = rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))
        b = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
        g = a @ b
        atoms.append(g / np.linalg.norm(g))
    cols = np.stack([a.ravel() for a in atoms], axis=1)
    a_eq = np.vstack([cols.real, cols.imag])
    b_eq = np.concatenate([x.ravel().real, x.ravel().imag])
    res = linprog(np.ones(len(atoms)), A_eq=a_eq, b_eq=b_eq,
                  bounds=(0, None), method="highs")
    if res.status != 0:
        raise RuntimeError("atomic reference program infeasible")
    return float(res.fun)


def product_overlap_grid(v, n, steps=240):
    """Grid search of max |<a x b|v>| over product states, 2 x n only.

    For a fixed left vector the best right vector is closed form, so only
    the left Bloch angles are gridded.
    """
    mat = np.asarray(v, dtype=complex).reshape(2, n)
    theta = np.linspace(0.0, np.pi / 2, steps)
    phi = np.linspace(0.0, 2 * np.pi, steps, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    amps = np.stack([np.cos(tt), np.sin(tt) * np.exp(1j * pp)], axis=-1)
    rows = amps.conj() @ mat
    return float(np.max(np.linalg.norm(rows, axis=-1)))
