"""Exact integer linear algebra on small matrices.

Matrices are numpy arrays with ``dtype=object`` holding Python ints, so every
operation is arbitrary precision and exact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def as_int_matrix(a) -> np.ndarray:
    a = np.array(a, dtype=object)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return np.vectorize(int, otypes=[object])(a) if a.size else a


def identity(n: int) -> np.ndarray:
    return as_int_matrix([[int(i == j) for j in range(n)] for i in range(n)])


def standard_J(g: int) -> np.ndarray:
    """The block matrix ``[[0, -I], [I, 0]]``."""
    j = as_int_matrix([[0] * (2 * g) for _ in range(2 * g)])
    for k in range(g):
        j[k, g + k] = -1
        j[g + k, k] = 1
    return j


def equal(a, b) -> bool:
    a, b = np.asarray(a, dtype=object), np.asarray(b, dtype=object)
    return a.shape == b.shape and all(int(x) == int(y) for x, y in zip(a.flat, b.flat))


def det(a) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [[int(v) for v in row] for row in np.asarray(a, dtype=object)]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_rational(a, b) -> list[list[Fraction]]:
    """Solve ``a x = b`` exactly over the rationals (``a`` square, invertible)."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    n = a.shape[0]
    m = [[Fraction(int(v)) for v in a[i]] + [Fraction(int(v)) for v in b[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular integer matrix")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [vr - f * vc for vr, vc in zip(m[r], m[col])]
    return [row[n:] for row in m]


def solve_integer(a, b) -> np.ndarray | None:
    """Exact solution of ``a x = b`` if it is integral, else ``None``."""
    sol = solve_rational(a, b)
    if any(v.denominator != 1 for row in sol for v in row):
        return None
    return as_int_matrix([[int(v) for v in row] for row in sol])


def inverse(a) -> np.ndarray:
    """Inverse of a unimodular matrix; raises ``ValueError`` if not unimodular."""
    n = np.asarray(a).shape[0]
    inv = solve_integer(a, identity(n))
    if inv is None:
        raise ValueError("matrix is not unimodular")
    return inv


def smith_normal_form(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(D, U, V)`` with ``U @ a @ V == D`` diagonal, ``U``, ``V`` unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    d = as_int_matrix(a).copy()
    rows, cols = d.shape
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        d[[i, j], :] = d[[j, i], :]
        u[[i, j], :] = u[[j, i], :]

    def swap_cols(i, j):
        d[:, [i, j]] = d[:, [j, i]]
        v[:, [i, j]] = v[:, [j, i]]

    for t in range(min(rows, cols)):
        nz = [(abs(d[i, j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i, j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, rows):
                if d[i, t] != 0:
                    q = d[i, t] // d[t, t]
                    d[i, :] = d[i, :] - q * d[t, :]
                    u[i, :] = u[i, :] - q * u[t, :]
                    if d[i, t] != 0:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, cols):
                if d[t, j] != 0:
                    q = d[t, j] // d[t, t]
                    d[:, j] = d[:, j] - q * d[:, t]
                    v[:, j] = v[:, j] - q * v[:, t]
                    if d[t, j] != 0:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # divisibility: pivot must divide the remaining block
            bad = [(i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i, j] % d[t, t]]
            if bad:
                i, _ = bad[0]
                d[t, :] = d[t, :] + d[i, :]
                u[t, :] = u[t, :] + u[i, :]
                continue
            break
        if d[t, t] < 0:
            d[t, :] = -d[t, :]
            u[t, :] = -u[t, :]
    return d, u, v


def integer_kernel(a) -> tuple[np.ndarray, np.ndarray]:
    """``(kernel, rest)``: kernel columns span ``{x in Z^n : a x = 0}`` and are saturated;
    together with ``rest`` they form a unimodular basis of ``Z^n``."""
    d, _, v = smith_normal_form(a)
    rank = sum(1 for k in range(min(d.shape)) if d[k, k] != 0)
    return v[:, rank:], v[:, :rank]


def symplectic_reduce(form) -> np.ndarray:
    """Basis change ``P`` with ``P.T @ form @ P == standard_J(g)`` for a unimodular alternating form.

    Columns of ``P`` are the new basis vectors in the old coordinates.
    """
    g_mat = as_int_matrix(form).copy()
    n = g_mat.shape[0]
    if n % 2 or not equal(g_mat.T, -g_mat):
        raise ValueError("form is not alternating of even size")
    t = identity(n)

    def col_op(j, k, q):
        # e_j <- e_j - q e_k
        t[:, j] = t[:, j] - q * t[:, k]
        g_mat[:, j] = g_mat[:, j] - q * g_mat[:, k]
        g_mat[j, :] = g_mat[j, :] - q * g_mat[k, :]

    def swap(j, k):
        t[:, [j, k]] = t[:, [k, j]]
        g_mat[:, [j, k]] = g_mat[:, [k, j]]
        g_mat[[j, k], :] = g_mat[[k, j], :]

    def negate(j):
        t[:, j] = -t[:, j]
        g_mat[:, j] = -g_mat[:, j]
        g_mat[j, :] = -g_mat[j, :]

    pairs = []
    for s in range(0, n, 2):
        # Euclid on row s over columns s+1.. to concentrate a unit in column s+1
        while True:
            nz = [j for j in range(s + 1, n) if g_mat[s, j] != 0]
            if not nz:
                raise ValueError("form is degenerate")
            jmin = min(nz, key=lambda j: abs(g_mat[s, j]))
            if jmin != s + 1:
                swap(s + 1, jmin)
            others = [j for j in range(s + 2, n) if g_mat[s, j] != 0]
            if not others:
                break
            for j in others:
                col_op(j, s + 1, g_mat[s, j] // g_mat[s, s + 1])
        if abs(g_mat[s, s + 1]) != 1:
            raise ValueError("form is not unimodular")
        if g_mat[s, s + 1] == -1:
            negate(s + 1)
        for j in range(s + 2, n):
            q = g_mat[j, s + 1]
            if q:
                col_op(j, s, q)
            q = g_mat[j, s]
            if q:
                col_op(j, s + 1, -q)
        pairs.append((s, s + 1))
    # pair (e, f) has <e, f> = 1; the J convention wants alpha.beta = -1
    alphas = [t[:, f] for _, f in pairs]
    betas = [t[:, e] for e, _ in pairs]
    p = as_int_matrix(np.column_stack(alphas + betas))
    assert equal(p.T @ as_int_matrix(form) @ p, standard_J(n // 2))
    return p


def complete_lagrangian(u: np.ndarray, rest: np.ndarray) -> np.ndarray:
    """Extend the isotropic primitive columns ``u`` to a basis ``[u | w]`` in standard form.

    ``rest`` holds columns completing ``u`` to a unimodular basis of ``Z^{2g}``;
    the form is ``standard_J``. Returns ``P = [u | w]`` with ``P.T J P == J``.
    """
    g = u.shape[1]
    j = standard_J(g)
    b = u.T @ j @ rest
    if abs(det(b)) != 1:
        raise ValueError("sublattice is not a primitive Lagrangian")
    w = rest @ (-inverse(b))
    c = w.T @ j @ w
    x = as_int_matrix([[0] * g for _ in range(g)])
    for i in range(g):
        for k in range(i + 1, g):
            x[i, k] = -c[i, k]
    w = w + u @ x
    p = as_int_matrix(np.column_stack([u, w]))
    if not equal(p.T @ j @ p, j):
        raise ValueError("symplectic completion failed")
    return p
