"""Character lattices with Frobenius action: orders, mu-group structure, and
rational points of principally decomposable tori over finite fields.

Conventions.  Characters are integer column vectors in Z^g; the Frobenius
generator acts by the matrix F, so sigma(chi) = F @ chi and F[i][j] is the
coefficient of basis vector i in the image of basis vector j.  A rational
point is a Galois-equivariant homomorphism from the lattice to the units of
the algebraic closure; equivariance pins e(F v) = e(v)^q.
"""

from fractions import Fraction

from . import zmat
from .finite_field import element_of_order, make_field
from .zmat import charpoly, factorize, gcd, mat_vec, poly_eval_int, smith_normal_form

FROBENIUS_ORDER_BOUND = 64
ENUMERATION_LIMIT = 10 ** 6


class TorusError(Exception):
    pass


class NotPrincipal(TorusError):
    pass


class EnumerationLimitExceeded(TorusError):
    pass


class CharacterLattice:
    """Free Z-module of rank g with a finite-order Frobenius matrix."""

    def __init__(self, frobenius, label=""):
        F = [list(map(int, row)) for row in frobenius]
        g = len(F)
        if any(len(row) != g for row in F):
            raise TorusError("frobenius matrix must be square")
        if abs(zmat.det(F)) != 1:
            raise TorusError("frobenius matrix must have determinant +-1")
        self.rank = g
        self.frobenius = F
        self.label = label
        self.order = self._frobenius_order()

    def _frobenius_order(self):
        ident = zmat.identity(self.rank)
        power = self.frobenius
        for k in range(1, FROBENIUS_ORDER_BOUND + 1):
            if power == ident:
                return k
            power = zmat.mat_mul(power, self.frobenius)
        raise TorusError(
            f"frobenius order exceeds the bound {FROBENIUS_ORDER_BOUND}")

    def apply(self, chi):
        return mat_vec(self.frobenius, list(chi))

    def char_poly(self):
        return frobenius_char_poly(self)

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"CharacterLattice(rank={self.rank}{tag})"


def frobenius_char_poly(lattice):
    """Characteristic polynomial of the Frobenius matrix, coefficients low
    degree first, monic; basis independent."""
    return charpoly(lattice.frobenius)


def torus_order(lattice, q):
    """Number of rational points over GF(q): the char poly evaluated at q."""
    value = poly_eval_int(frobenius_char_poly(lattice), q)
    assert value > 0
    return value


class PrincipalComponent:
    """One principal summand: a generator chi whose sigma-orbit is a Z-basis
    of its span."""

    def __init__(self, generator, orbit, char_poly):
        self.generator = tuple(int(v) for v in generator)
        self.orbit = [tuple(int(v) for v in vec) for vec in orbit]
        self.char_poly = list(char_poly)
        self.rank = len(orbit)

    def order_over(self, q):
        value = poly_eval_int(self.char_poly, q)
        assert value > 0
        return value

    def __repr__(self):
        return f"PrincipalComponent(generator={self.generator}, rank={self.rank})"


def principal_component(lattice, chi):
    """Build the principal component generated by chi.

    Raises NotPrincipal when the sigma-orbit of chi fails to be a Z-basis of
    the Z[Frobenius]-span (non-integer linear recurrence).
    """
    chi = [int(v) for v in chi]
    orbit = [chi]
    cur = chi
    while True:
        cur = lattice.apply(cur)
        rec = _solve_rational(orbit, cur)
        if rec is not None:
            for c in rec:
                if c.denominator != 1:
                    raise NotPrincipal(
                        "orbit spans the module only with non-integer coefficients")
            coeffs = [int(c) for c in rec]
            # char poly of the restriction: x^k - c_{k-1} x^(k-1) - ... - c_0
            fx = [-c for c in coeffs] + [1]
            return PrincipalComponent(chi, orbit, fx)
        orbit.append(cur)
        if len(orbit) > lattice.rank:
            raise NotPrincipal("orbit rank exceeds lattice rank")


def _solve_rational(basis_vectors, target):
    """Express target as a rational combination of the vectors, or None."""
    rows = len(target)
    cols = len(basis_vectors)
    M = [[Fraction(basis_vectors[j][i]) for j in range(cols)] for i in range(rows)]
    b = [Fraction(v) for v in target]
    piv = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        b[r], b[pr] = b[pr], b[r]
        scale = M[r][c]
        M[r] = [v / scale for v in M[r]]
        b[r] = b[r] / scale
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * v for a, v in zip(M[i], M[r])]
                b[i] = b[i] - f * b[r]
        piv.append(c)
        r += 1
    for i in range(r, rows):
        if b[i] != 0:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        sol[c] = b[i]
    return sol


class PrincipalDecomposition:
    """A verified principal decomposition of a character lattice."""

    def __init__(self, lattice, components, certificate):
        self.lattice = lattice
        self.components = components
        self.certificate = certificate

    def orders_over(self, q):
        return [c.order_over(q) for c in self.components]


def verify_principal_decomposition(lattice, generators):
    """Check that the sigma-orbits of the generators jointly form a Z-basis.

    Returns (ok, certificate_matrix); the certificate has the orbit vectors as
    columns and ok means |det| = 1.
    """
    columns = []
    comps = []
    for chi in generators:
        comp = principal_component(lattice, chi)
        comps.append(comp)
        columns.extend(comp.orbit)
    if len(columns) != lattice.rank:
        return False, [list(col) for col in columns]
    cert = [[columns[j][i] for j in range(len(columns))] for i in range(lattice.rank)]
    ok = abs(zmat.det(cert)) == 1
    return ok, cert


def principal_decomposition(lattice, generators):
    ok, cert = verify_principal_decomposition(lattice, generators)
    if not ok:
        raise NotPrincipal("orbits of the generators do not form a Z-basis")
    comps = [principal_component(lattice, chi) for chi in generators]
    return PrincipalDecomposition(lattice, comps, cert)


class MuGroup:
    """The cyclic group of f_i(q)-th roots of unity attached to a principal
    component, realized in its smallest host field."""

    def __init__(self, order, host, generator):
        self.order = order
        self.host = host
        self.generator = generator

    def contains(self, x):
        return x ** self.order == self.host.one()

    def __repr__(self):
        return f"MuGroup(order={self.order}, host={self.host})"


def _prime_power(q):
    fac = factorize(q)
    if len(fac) != 1:
        raise TorusError(f"{q} is not a prime power")
    [(p, a)] = fac.items()
    return p, a


def multiplicative_order_mod(q, n):
    """Multiplicative order of q modulo n (requires gcd(q, n) = 1)."""
    assert n >= 1
    if n == 1:
        return 1
    assert gcd(q, n) == 1
    s = 1
    cur = q % n
    while cur != 1:
        cur = (cur * q) % n
        s += 1
    return s


def mu_group(component, q):
    """MuGroup of order f_i(q) with an explicit generator in GF(q^s), where
    s is the multiplicative order of q modulo f_i(q)."""
    n = component.order_over(q)
    p, a = _prime_power(q)
    s = multiplicative_order_mod(q, n)
    host = make_field(p, a * s)
    return MuGroup(n, host, element_of_order(host, n))


class RationalPoints:
    """All Galois-equivariant homomorphisms from the lattice to the units of
    the algebraic closure, over GF(q).

    Points are stored as discrete-log vectors a with respect to a primitive
    root zeta of the host field GF(q^s): the hom sends basis character e_j to
    zeta^(a_j).  The group law is componentwise addition mod q^s - 1.
    """

    def __init__(self, lattice, q, host, zeta, points, invariants):
        self.lattice = lattice
        self.q = q
        self.host = host
        self.zeta = zeta
        self.modulus = host.q - 1
        self.points = points
        self.invariants = invariants

    def __len__(self):
        return len(self.points)

    def value(self, point, char_vector):
        """Evaluate the character (integer vector) at the point."""
        e = sum(int(c) * int(a) for c, a in zip(char_vector, point)) % self.modulus
        return self.zeta ** e

    def add(self, x, y):
        return tuple((a + b) % self.modulus for a, b in zip(x, y))

    def neg(self, x):
        return tuple((-a) % self.modulus for a in x)

    def identity(self):
        return tuple(0 for _ in range(self.lattice.rank))


def enumerate_rational_points(lattice, q, limit=ENUMERATION_LIMIT):
    """Enumerate the rational points by solving the equivariance congruence
    (F^T - q I) a = 0 mod (q^s - 1), s the order of Frobenius."""
    order = torus_order(lattice, q)
    if order > limit:
        raise EnumerationLimitExceeded(f"torus has {order} points, limit {limit}")
    p, a = _prime_power(q)
    s = lattice.order
    host = make_field(p, a * s)
    n = host.q - 1
    zeta = element_of_order(host, n)
    g = lattice.rank
    F = lattice.frobenius
    A = [[F[j][i] - (q if i == j else 0) for j in range(g)] for i in range(g)]
    U, D, V = smith_normal_form(A)
    steps = []
    for i in range(g):
        di = D[i][i]
        gi = gcd(di, n)
        steps.append((n // gi if gi else 1, gi))
    count = 1
    for _, gi in steps:
        count *= max(gi, 1)
    assert count == order, (count, order)
    points = []
    idx = [0] * g
    while True:
        b = [steps[i][0] * idx[i] % n for i in range(g)]
        avec = tuple(v % n for v in mat_vec(V, b))
        points.append(avec)
        k = g - 1
        while k >= 0:
            idx[k] += 1
            if idx[k] < max(steps[k][1], 1):
                break
            idx[k] = 0
            k -= 1
        if k < 0:
            break
    invariants = zmat.group_invariants([max(gi, 1) for _, gi in steps])
    return RationalPoints(lattice, q, host, zeta, points, invariants)


def split_lattice(rank, label="split"):
    return CharacterLattice(zmat.identity(rank), label=label)


def norm_lattice(degree, label="norm"):
    """Character lattice of the Weil restriction of the multiplicative group
    from the degree-g extension: cyclic permutation action."""
    F = [[0] * degree for _ in range(degree)]
    for j in range(degree):
        F[(j + 1) % degree][j] = 1
    return CharacterLattice(F, label=label)
