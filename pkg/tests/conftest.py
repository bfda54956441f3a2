"""Shared builders for randomized test instances."""

import random

from toricdescent import descent, families
from toricdescent.descent import SpecializedDivisor
from toricdescent.finite_field import INF, Poly, embed, _cached_field


def random_hyperelliptic(k, d, rng):
    """A random valid two-line input with monic degree-d g."""
    while True:
        g = Poly(k, [k.from_int(rng.randrange(k.q)) for _ in range(d)] + [k.one()])
        e = rng.randrange(0, 2 * d + 1)
        h = Poly(k, [k.from_int(rng.randrange(k.q)) for _ in range(e)]
                 + [k.from_int(rng.randrange(1, k.q))])
        try:
            return families.validate_hyperelliptic(k, g, h)
        except families.FamilyError:
            continue


def random_genus4(k, rng, r=2):
    while True:
        vec = [k.from_int(rng.randrange(k.q)) for _ in families.MONOMIALS]
        try:
            return families.validate_genus4(k, families.CubicForm.from_vector(k, vec), r=r)
        except families.FamilyError:
            continue


def random_stable_divisor(fiber, r, rng, max_orbits=3):
    """Galois-stable node-avoiding divisor with multidegree in r*Z^v."""
    E = fiber.E
    k = fiber.k
    pts = []
    for comp in range(fiber.graph.num_vertices):
        nodes = {c.to_int() for c in fiber.component_node_coords(comp)
                 if c is not INF}
        for _ in range(rng.randrange(0, max_orbits)):
            t = rng.choice([1, 2])
            if E.m % (k.m * t):
                continue
            sub = _cached_field(k.p, k.m * t)
            x0 = embed(sub, E)(sub.from_int(rng.randrange(sub.q)))
            orbit = {x0.to_int()}
            cur = x0
            for _ in range(t * k.m):
                cur = cur.frob(1)
                orbit.add(cur.to_int())
            if any(v in nodes for v in orbit):
                continue
            mult = rng.choice([-2, -1, 1, 2])
            pts.extend((comp, E.from_int(v), mult) for v in orbit)
    div = SpecializedDivisor(fiber, pts)
    fix = []
    for comp, dcomp in enumerate(div.multidegree):
        rem = (-dcomp) % r
        if rem:
            fix.append((comp, fiber.standard_point(comp), rem))
    div = div + SpecializedDivisor(fiber, fix)
    assert div.is_galois_stable()
    return div


def rng_for(name):
    # string hashes are salted per process; crc32 keeps seeds reproducible
    import zlib
    return random.Random(zlib.crc32(name.encode()))
