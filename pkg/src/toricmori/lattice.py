"""Exact integer and rational linear algebra.

Matrices are plain nested sequences (rows first).  Integer matrices hold
Python ``int``; rational ones hold ``fractions.Fraction``.  Nothing here ever
touches floating point.
"""

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd


def as_fraction_vector(v):
    return tuple(Fraction(x) for x in v)


def as_int_vector(v):
    out = []
    for x in v:
        q = Fraction(x)
        if q.denominator != 1:
            raise ValueError(f"non-integral entry {q} in {tuple(v)}")
        out.append(q.numerator)
    return tuple(out)


def gcd_list(values):
    return reduce(gcd, (abs(int(x)) for x in values), 0)


def lcm(a, b):
    a, b = abs(a), abs(b)
    if a == 0 or b == 0:
        return 0
    return a // gcd(a, b) * b


def lcm_list(values):
    return reduce(lcm, values, 1)


def primitive(v):
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    q = as_fraction_vector(v)
    den = lcm_list([x.denominator for x in q])
    ints = [int(x * den) for x in q]
    g = gcd_list(ints)
    if g == 0:
        raise ValueError("the zero vector has no primitive generator")
    return tuple(x // g for x in ints)


def is_primitive(v):
    return gcd_list(v) == 1


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def transpose(A):
    return [list(col) for col in zip(*A)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A, v):
    return tuple(dot(row, v) for row in A)


def vec_mat(v, A):
    """Row vector times matrix."""
    if not A:
        return ()
    return tuple(sum(v[i] * A[i][j] for i in range(len(A))) for j in range(len(A[0])))


def rref(A):
    """Reduced row echelon form over Q.  Returns (rows, pivot_columns)."""
    M = [[Fraction(x) for x in row] for row in A]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(A):
    if not A or not len(A[0]):
        return 0
    return len(rref(A)[1])


def nullspace(A, ncols=None):
    """Basis of {x : A x = 0} as primitive integer vectors (deterministic)."""
    if not A:
        n = ncols if ncols is not None else 0
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    R, pivots = rref(A)
    n = len(A[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(primitive(x))
    return basis


def solve(A, b):
    """One rational solution of A x = b (free variables zero), or None."""
    n = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    if not aug:
        return tuple(Fraction(0) for _ in range(n))
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return tuple(x)


def det(A):
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d *= M[c][c]
        for i in range(c + 1, n):
            if M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def inverse(A):
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


# ---------------------------------------------------------------------------
# Integer normal forms


def smith_normal_form(M):
    """Smith normal form of an integer matrix.

    Returns ``(S, U, V)`` with ``U * M * V == S``, ``U`` and ``V`` unimodular,
    and ``S`` diagonal with nonnegative entries ``d_1 | d_2 | ...``.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in A:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return A, U, V


def elementary_divisors(M):
    S, _, _ = smith_normal_form(M)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]


def hermite_normal_form(M):
    """Row-style Hermite normal form of an integer matrix.

    Returns ``(H, U)`` with ``U * M == H``, ``U`` unimodular, the nonzero rows
    of ``H`` in echelon form with positive pivots and entries above each pivot
    reduced into ``[0, pivot)``.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            rows = [(abs(A[i][c]), i) for i in range(r, m) if A[i][c]]
            if not rows:
                break
            _, p = min(rows)
            A[r], A[p] = A[p], A[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    done = done and A[i][c] == 0
            if done:
                break
        if r < m and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-x for x in A[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
            r += 1
    return A, U


def lattice_basis(generators):
    """Basis (HNF rows) of the lattice generated by rational vectors."""
    gens = [as_fraction_vector(g) for g in generators]
    den = lcm_list([x.denominator for g in gens for x in g])
    H, _ = hermite_normal_form([[int(x * den) for x in g] for g in gens])
    return [tuple(Fraction(x, den) for x in row) for row in H if any(row)]


def lattice_index(vectors):
    """Index of the lattice spanned by integer vectors in its saturation."""
    divs = elementary_divisors([list(v) for v in vectors])
    out = 1
    for d in divs:
        out *= d
    return out


def saturation_quotient(vectors, n):
    """Projection Z^n -> Z^(n-k) whose kernel is the saturation of span(vectors).

    Returns the n x (n-k) integer matrix ``P``; a row vector ``x`` maps to
    ``x * P``.  The map is surjective onto Z^(n-k).
    """
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return identity(n)
    A = vecs
    S, _, V = smith_normal_form(A)
    k = sum(1 for i in range(min(len(S), n)) if S[i][i])
    return [row[k:] for row in V]


def integer_solve(A, b):
    """Rational solution of ``A x = b`` together with its integrality defect.

    Returns ``(x, m)`` where ``x`` solves the system over Q and ``m`` is the
    least positive integer such that ``A y = m b`` has an integer solution,
    or ``None`` if the system has no rational solution.  ``A`` is integral,
    ``b`` rational.
    """
    rows = len(A)
    ncols = len(A[0]) if rows else 0
    if rows == 0:
        return tuple(Fraction(0) for _ in range(ncols)), 1
    S, U, V = smith_normal_form(A)
    c = mat_vec(U, [Fraction(x) for x in b])
    y = [Fraction(0)] * ncols
    m = 1
    for i in range(rows):
        d = S[i][i] if i < ncols else 0
        if d == 0:
            if c[i] != 0:
                return None
            continue
        y[i] = c[i] / d
        m = lcm(m, y[i].denominator)
    x = mat_vec(V, y)
    return x, m


def unit_preimage(nu):
    """Integer vector x with <nu, x> = 1 for a primitive integer vector nu."""
    nu = [int(a) for a in nu]
    n = len(nu)
    # extended gcd accumulated coordinate by coordinate
    g, x = 0, [0] * n
    for i, a in enumerate(nu):
        if a == 0:
            continue
        if g == 0:
            g = abs(a)
            x = [0] * n
            x[i] = 1 if a > 0 else -1
            continue
        s, t, g2 = _ext_gcd(g, a)
        x = [s * xi for xi in x]
        x[i] += t
        g = g2
    if g != 1:
        raise ValueError(f"{tuple(nu)} is not primitive")
    return tuple(x)


def _ext_gcd(a, b):
    """(s, t, g) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_s, old_t, old_r


def independent_subsets(vectors, size):
    """Index subsets of the given size whose vectors are linearly independent."""
    for combo in combinations(range(len(vectors)), size):
        if rank([vectors[i] for i in combo]) == size:
            yield combo
