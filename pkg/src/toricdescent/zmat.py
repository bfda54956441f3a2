"""Exact integer matrix kernel: Smith normal form with certificates, Bareiss
determinants, characteristic polynomials, unimodular inverses.

All matrices are lists of lists of Python ints.  Everything here is exact;
sizes are tiny (at most ~10x10), so clarity beats asymptotics.
"""

from fractions import Fraction


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_copy(A):
    return [row[:] for row in A]


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    assert all(len(row) == k for row in A)
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_vec(A, v):
    assert all(len(row) == len(v) for row in A)
    return [sum(row[j] * v[j] for j in range(len(v))) for row in A]


def mat_transpose(A):
    return [list(col) for col in zip(*A)]


def mat_eq(A, B):
    return A == B


def mat_pow(A, k):
    n = len(A)
    out = identity(n)
    base = mat_copy(A)
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def det(A):
    """Determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = mat_copy(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def charpoly(A):
    """Coefficients (low degree first, monic) of det(x*I - A).

    Computed by evaluating the determinant at n+1 integer points and
    interpolating exactly; avoids polynomial-entry elimination.
    """
    n = len(A)
    if n == 0:
        return [1]
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        M = [[(x if i == j else 0) - A[i][j] for j in range(n)] for i in range(n)]
        ys.append(det(M))
    # Lagrange interpolation over Q; result must be an integer polynomial.
    coeffs = [Fraction(0)] * (n + 1)
    for i, xi in enumerate(xs):
        # basis polynomial prod_{j != i} (x - xj) / (xi - xj)
        basis = [Fraction(1)]
        denom = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            denom *= (xi - xj)
            new = [Fraction(0)] * (len(basis) + 1)
            for t, c in enumerate(basis):
                new[t] -= c * xj
                new[t + 1] += c
            basis = new
        scale = Fraction(ys[i], denom)
        for t, c in enumerate(basis):
            coeffs[t] += c * scale
    out = []
    for c in coeffs:
        assert c.denominator == 1
        out.append(int(c))
    assert out[-1] == 1
    return out


def poly_eval_int(coeffs, x):
    """Evaluate an integer polynomial (coefficients low to high) at integer x."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def mat_inverse_unimodular(A):
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] for i in range(n)]
    inv = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        scale = M[col][col]
        M[col] = [v / scale for v in M[col]]
        inv[col] = [v / scale for v in inv[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
                inv[r] = [a - f * b for a, b in zip(inv[r], inv[col])]
    out = []
    for row in inv:
        orow = []
        for v in row:
            if v.denominator != 1:
                raise ValueError("matrix is not unimodular")
            orow.append(int(v))
        out.append(orow)
    return out


def smith_normal_form(A):
    """Return (U, D, V) with U*A*V = D, U and V unimodular, D diagonal with
    d_1 | d_2 | ... | d_r and all diagonal entries nonnegative."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = mat_copy(A)
    U = identity(rows)
    V = identity(cols)

    def row_op(i, j, q):  # row_i -= q * row_j
        D[i] = [a - q * b for a, b in zip(D[i], D[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(rows):
            D[r][i] -= q * D[r][j]
        for r in range(cols):
            V[r][i] -= q * V[r][j]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(rows):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        for r in range(cols):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    t = 0
    while t < min(rows, cols):
        # locate smallest nonzero entry in trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if D[i][j] != 0 and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if D[i][t] != 0:
                    q = D[i][t] // D[t][t]
                    row_op(i, t, q)
                    if D[i][t] != 0:  # remainder smaller than pivot: promote it
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if D[t][j] != 0:
                    q = D[t][j] // D[t][t]
                    col_op(j, t, q)
                    if D[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        # pivot must divide the whole trailing block
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if D[i][j] % D[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # fold offending row into pivot row, redo
            continue
        t += 1

    for i in range(min(rows, cols)):
        if D[i][i] < 0:
            D[i] = [-v for v in D[i]]
            U[i] = [-v for v in U[i]]
    return U, D, V


def snf_diagonal(A):
    U, D, V = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def invariant_factors(A):
    """Nontrivial invariant factors (entries > 1) of the cokernel Z^rows / A Z^cols."""
    diag = snf_diagonal(A)
    return [d for d in diag if d > 1]


def solve_mod(A, b, n):
    """One solution x of A x = b (mod n), or None.  A is rows x cols."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    assert len(b) == rows and n >= 1
    if n == 1:
        return [0] * cols
    U, D, V = smith_normal_form(A)
    c = [v % n for v in mat_vec(U, b)]
    y = [0] * cols
    for i in range(rows):
        d = D[i][i] % n if i < min(rows, cols) else 0
        ci = c[i] if i < rows else 0
        if i >= cols:
            if ci % n != 0:
                return None
            continue
        g = gcd(d, n)
        if ci % g != 0:
            return None
        # solve d * y = ci mod n
        dd, cc, nn = d // g, ci // g, n // g
        y[i] = (cc * pow(dd, -1, nn)) % nn if nn > 1 else 0
    x = mat_vec(V, y)
    return [v % n for v in x]


def gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def gcd_list(values):
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def lcm(a, b):
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)


def factorize(n):
    """Prime factorization by trial division; n is small here."""
    assert n >= 1
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def poly_mul_int(a, b):
    """Product of integer polynomials (coefficients low degree first)."""
    out = [0] * (len(a) + len(b) - 1)
    for i, av in enumerate(a):
        if av:
            for j, bv in enumerate(b):
                out[i + j] += av * bv
    return out


def poly_divexact_int(a, b):
    """Exact quotient of integer polynomials; asserts zero remainder."""
    r = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(r) - 1, len(b) - 2, -1):
        assert r[i] % b[-1] == 0
        c = r[i] // b[-1]
        out[i - len(b) + 1] = c
        for j in range(len(b)):
            r[i - len(b) + 1 + j] -= c * b[j]
    assert not any(r)
    return out


def group_invariants(orders):
    """Invariant factors d_1 | d_2 | ... of a direct sum of cyclic groups
    of the given orders (order 1 summands are dropped)."""
    primary = {}
    for n in orders:
        assert n >= 1
        for p, e in factorize(n).items():
            primary.setdefault(p, []).append(e)
    if not primary:
        return []
    width = max(len(v) for v in primary.values())
    for p in primary:
        primary[p].sort(reverse=True)
        primary[p] += [0] * (width - len(primary[p]))
    factors = []
    for slot in range(width):
        d = 1
        for p, exps in primary.items():
            d *= p ** exps[slot]
        if d > 1:
            factors.append(d)
    factors.sort()
    return factors
