"""Integer lattice helpers: Hermite normal form, coset representatives and
kernels of integer linear functionals."""

from __future__ import annotations

from itertools import product

from ..errors import DomainError


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hnf(rows) -> list[list[int]]:
    """Upper triangular row Hermite normal form of a full-rank lattice.

    ``rows`` generate a sublattice of ``Z^n`` of rank ``n``.  The result has
    ``n`` rows, positive diagonal, and entries above the diagonal reduced into
    ``[0, H[j][j])``.
    """
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        raise DomainError("empty generating set")
    n = len(rows[0])
    out = []
    work = [r for r in rows if any(r)]
    for col in range(n):
        pivot = None
        rest = []
        for r in work:
            if r[col] == 0:
                rest.append(r)
                continue
            if pivot is None:
                pivot = r
                continue
            g, s, t = xgcd(pivot[col], r[col])
            a, b = pivot[col] // g, r[col] // g
            new_pivot = [s * x + t * y for x, y in zip(pivot, r)]
            other = [b * x - a * y for x, y in zip(pivot, r)]
            pivot = new_pivot
            if any(other):
                rest.append(other)
        if pivot is None:
            raise DomainError("generators do not span a full-rank lattice")
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        out.append(pivot)
        work = rest
    for i in range(n):
        for j in range(i):
            f = out[j][i] // out[i][i]
            if f:
                out[j] = [x - f * y for x, y in zip(out[j], out[i])]
    return out


def reduce_mod(v, H) -> list[int]:
    """Canonical representative of ``v`` modulo the lattice with HNF ``H``."""
    v = list(map(int, v))
    for i, row in enumerate(H):
        f = v[i] // row[i]
        if f:
            v = [x - f * y for x, y in zip(v, row)]
    return v


def coset_reps(H):
    """All canonical representatives of ``Z^n / L`` in lexicographic order."""
    return (list(t) for t in product(*(range(row[i]) for i, row in enumerate(H))))


def determinant(H) -> int:
    d = 1
    for i, row in enumerate(H):
        d *= row[i]
    return d


def functional_basis(f) -> tuple[int, list[list[int]], list[list[int]]]:
    """Unimodular change of basis adapted to the functional ``x -> f . x``.

    Returns ``(g, U, Uinv)`` where ``g = gcd(f) > 0``, ``U`` is a unimodular
    matrix (given by its columns) with ``f . U[0] = g`` and ``f . U[m] = 0`` for
    ``m > 0``, and ``Uinv`` is the inverse matrix given by rows, so that the
    coordinates of ``x`` in the basis ``U`` are ``Uinv @ x``.
    """
    n = len(f)
    f = list(map(int, f))
    cols = [[int(i == j) for i in range(n)] for j in range(n)]
    inv_rows = [[int(i == j) for j in range(n)] for i in range(n)]
    # column operations on f, mirrored as row operations on the inverse
    for j in range(1, n):
        a, b = f[0], f[j]
        if b == 0:
            continue
        g, s, t = xgcd(a, b)
        p, q = a // g, b // g
        # new col0 = s*col0 + t*colj, new colj = -q*col0 + p*colj (det 1)
        c0, cj = cols[0], cols[j]
        cols[0] = [s * x + t * y for x, y in zip(c0, cj)]
        cols[j] = [-q * x + p * y for x, y in zip(c0, cj)]
        r0, rj = inv_rows[0], inv_rows[j]
        inv_rows[0] = [p * x + q * y for x, y in zip(r0, rj)]
        inv_rows[j] = [-t * x + s * y for x, y in zip(r0, rj)]
        f[0], f[j] = g, 0
    g = f[0]
    if g == 0:
        raise DomainError("zero functional")
    if g < 0:
        g = -g
        cols[0] = [-x for x in cols[0]]
        inv_rows[0] = [-x for x in inv_rows[0]]
    return g, cols, inv_rows


def apply_rows(rows, v) -> list[int]:
    return [sum(a * b for a, b in zip(r, v)) for r in rows]


def combine(cols, coeffs) -> list[int]:
    n = len(cols[0])
    return [sum(c * col[i] for c, col in zip(coeffs, cols)) for i in range(n)]
