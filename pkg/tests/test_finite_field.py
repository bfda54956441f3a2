import pytest

from conftest import rng_for
from toricdescent.finite_field import (
    FieldError, NotASubfield, NotPrime, Poly, SizeLimitExceeded,
    ZeroElement, ZeroPolynomial, coprimality_check, discrete_log,
    element_of_order, embed, extension, factor, make_field, norm_to_subfield,
    poly_from_int, power_residue, roots_in_extension)


def brute_irreducible(p, m):
    """Reference modulus search: enumerate monic degree-m polynomials in
    encoding order and root/factor-test them by brute force."""
    k = make_field(p)
    n = 0
    while True:
        cand = Poly(k, [((n // p ** i) % p) for i in range(m)] + [1])
        n += 1
        if cand.coeffs[0].is_zero():
            continue
        # brute irreducibility for m = 2, 3: no roots is enough; for higher m
        # check divisibility by all lower-degree monics
        reducible = False
        for enc in range(p, p ** m):
            div = poly_from_int(k, enc)
            if 0 < div.degree < m and div.lead() == k.one() and (cand % div).is_zero():
                reducible = True
                break
        if not reducible:
            return tuple(c.to_int() for c in cand.coeffs)


def test_make_field_smallest_modulus():
    assert make_field(5, 1).modulus == (0, 1)
    assert make_field(3, 2).modulus == brute_irreducible(3, 2) == (1, 0, 1)
    assert make_field(2, 3).modulus == brute_irreducible(2, 3)
    assert make_field(7, 2).modulus == brute_irreducible(7, 2)


def test_make_field_rejects_bad_input():
    with pytest.raises(NotPrime):
        make_field(4, 1)
    with pytest.raises(SizeLimitExceeded):
        make_field(2, 25)
    assert make_field(2, 25, limit=None).q == 2 ** 25


def test_norm_of_generator_generates_subfield():
    K9 = make_field(3, 2)
    g = K9.from_coeffs([1, 1])  # multiplicative generator of GF(9)
    assert g.multiplicative_order() == 8
    K3 = make_field(3)
    assert norm_to_subfield(g, 1) == K3(-1)
    assert norm_to_subfield(K9.one(), 1) == K3.one()
    assert norm_to_subfield(K9.zero(), 1) == K3.zero()


def test_norm_multiplicative_and_lands_in_subfield():
    rng = rng_for("norm-mult")
    K = make_field(3, 4)
    for _ in range(60):
        a = K.from_int(rng.randrange(K.q))
        b = K.from_int(rng.randrange(K.q))
        e = embed(make_field(3, 2), K)
        na = e(norm_to_subfield(a, 2))
        nb = e(norm_to_subfield(b, 2))
        nab = e(norm_to_subfield(a * b, 2))
        assert nab == na * nb
        assert na ** (3 ** 2) == na  # fixed by the subfield Frobenius


def test_power_residue_matches_enumeration():
    for p, m in [(2, 1), (3, 1), (5, 1), (7, 1), (3, 2), (2, 4), (7, 2)]:
        K = make_field(p, m)
        for r in range(1, 7):
            actual = {x.to_int() for x in K.elements()
                      if not x.is_zero() and power_residue(x, r)}
            expected = {(y ** r).to_int() for y in K.elements() if not y.is_zero()}
            assert actual == expected, (p, m, r)


def test_power_residue_examples():
    K7 = make_field(7)
    assert not power_residue(K7(3), 2)
    assert {x for x in range(1, 7) if power_residue(K7(x), 2)} == {1, 2, 4}
    K5 = make_field(5)
    assert all(power_residue(K5(x), 3) for x in range(1, 5))
    assert power_residue(K7(6), 3)
    assert {x for x in range(1, 7) if power_residue(K7(x), 3)} == {1, 6}
    with pytest.raises(ZeroElement):
        power_residue(K7.zero(), 2)


def test_factor_examples():
    K5 = make_field(5)
    x3_minus_x = Poly(K5, [0, -1, 0, 1])
    fac = factor(x3_minus_x)
    assert [( [c.to_int() for c in f.coeffs], m) for f, m in fac] == \
        [([0, 1], 1), ([1, 1], 1), ([4, 1], 1)]
    cubic = Poly(K5, [1, 1, 0, 1])
    assert [v.to_int() for v in (cubic(K5(t)) for t in range(5))] == [1, 3, 1, 1, 4]
    assert factor(cubic) == [(cubic, 1)]
    sq = factor(Poly(K5, [1, 0, 1]))
    assert [[c.to_int() for c in f.coeffs] for f, _ in sq] == [[2, 1], [3, 1]]
    with pytest.raises(ZeroPolynomial):
        factor(Poly(K5, []))


def test_factor_remultiplies():
    rng = rng_for("factor-remultiply")
    for p, m in [(2, 1), (3, 1), (5, 1), (7, 1), (3, 2)]:
        K = make_field(p, m)
        for _ in range(500):
            f = poly_from_int(K, rng.randrange(K.q, K.q ** 9))
            prod = Poly(K, [f.lead()])
            for g, mult in factor(f):
                assert g.lead() == K.one()
                for _ in range(mult):
                    prod = prod * g
            assert prod == f


def test_roots_in_extension():
    K3 = make_field(3)
    f = Poly(K3, [1, 0, 1])
    rs = roots_in_extension(f, 2)
    assert len(rs) == 2
    assert rs[0].frob(1) == rs[1]  # Galois conjugates
    assert all((r * r + 1).is_zero() for r in rs)
    assert roots_in_extension(f, 1) == []
    K7 = make_field(7)
    assert [r.to_int() for r in roots_in_extension(Poly(K7, [-1, 1]), 1)] == [1]


def test_roots_in_extension_counts_multiplicity():
    rng = rng_for("roots-mult")
    K = make_field(5)
    for _ in range(40):
        f = poly_from_int(K, rng.randrange(K.q, K.q ** 6))
        degs = [g.degree for g, _ in factor(f)]
        s = 1
        for d in degs:
            from toricdescent.zmat import lcm
            s = lcm(s, d)
        rs = roots_in_extension(f, s)
        assert len(rs) == f.degree


def test_coprimality():
    K7 = make_field(7)
    assert coprimality_check(Poly(K7, [0, -1, 0, 1]), Poly(K7, [-1, 0, 3]))
    assert not coprimality_check(Poly(K7, [0, -1, 0, 1]), Poly(K7, [0, 1]))
    assert coprimality_check(Poly(K7, [0, -1, 0, 1]), Poly(K7, [1]))


def test_unit_group_order_exhaustive():
    for p, m in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (5, 2), (7, 2), (2, 4)]:
        K = make_field(p, m)
        if K.q > 49:
            continue
        for x in K.elements():
            if not x.is_zero():
                assert x ** (K.q - 1) == K.one()


def test_embedding_is_field_homomorphism():
    rng = rng_for("embedding-hom")
    sub = make_field(3, 2)
    big = extension(sub, 3)
    e = embed(sub, big)
    for _ in range(50):
        a = sub.from_int(rng.randrange(sub.q))
        b = sub.from_int(rng.randrange(sub.q))
        assert e(a + b) == e(a) + e(b)
        assert e(a * b) == e(a) * e(b)
        assert e.section(e(a)) == a
    with pytest.raises(NotASubfield):
        e.section(big.gen())
    with pytest.raises(NotASubfield):
        embed(make_field(3, 2), make_field(3, 3))


def test_discrete_log_and_element_of_order():
    E = extension(make_field(7), 4)
    for n in (2, 3, 6, 16, 25, 400):
        assert (E.q - 1) % n == 0
        eta = element_of_order(E, n)
        assert eta ** n == E.one()
        from toricdescent.zmat import factorize
        for prm in factorize(n):
            assert eta ** (n // prm) != E.one()
        rng = rng_for(f"dlog-{n}")
        for _ in range(10):
            a = rng.randrange(n)
            assert discrete_log(eta ** a, eta, n) == a


def test_field_arithmetic_basics():
    K = make_field(3, 2)
    x = K.gen()
    assert (x * x).to_int() == K(-1).to_int()  # modulus x^2 + 1
    assert (x / x) == K.one()
    with pytest.raises(ZeroElement):
        K.zero().inverse()
    with pytest.raises(FieldError):
        K.one() + make_field(5).one()
