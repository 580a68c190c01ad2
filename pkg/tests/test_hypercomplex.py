import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbkit.hypercomplex import (
    CLOSED_SUBALGEBRA,
    ODD_POWER_CLOSED,
    Bicomplex,
    Discus,
    Hyperbolic,
    IdempotentPair,
    Tricomplex,
    UnitIndex,
    _mul_recursive,
    from_idempotent,
    hyp_T,
    hyp_diamond,
    hyp_pow,
    hyp_star,
    in_discus,
    iteration_span_units,
    mul_batch,
    norm3,
    norm_sq_batch,
    parse_unit,
    span_closure_kind,
    tc_add,
    tc_mul,
    tc_pow,
    to_complex4,
    to_idempotent,
    unit_product,
)

U = UnitIndex


def t(**coeffs):
    c = [0.0] * 8
    for label, v in coeffs.items():
        c[parse_unit(label.lstrip("u"))] = float(v)
    return Tricomplex(tuple(c))


coeff = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)
tricomplexes = st.tuples(*[coeff] * 8).map(Tricomplex)


# --- unit product table --------------------------------------------------------


def test_unit_product_anchors():
    assert unit_product(U.I1, U.I2) == (1, U.J1)
    assert unit_product(U.ONE, U.J3) == (1, U.J3)
    assert unit_product(U.I4, U.I4) == (-1, U.ONE)


def test_unit_product_commutative_all_64():
    for a in U:
        for b in U:
            assert unit_product(a, b) == unit_product(b, a)


def test_unit_product_identity_row():
    for b in U:
        assert unit_product(U.ONE, b) == (1, b)


def test_i_units_square_to_minus_one_j_units_to_one():
    for a in (U.I1, U.I2, U.I3, U.I4):
        assert unit_product(a, a) == (-1, U.ONE)
    for a in (U.J1, U.J2, U.J3):
        assert unit_product(a, a) == (1, U.ONE)


# --- add / mul / pow ------------------------------------------------------------


def test_add_examples(rng):
    eta = Tricomplex(tuple(rng.uniform(-2, 2, 8)))
    assert tc_add(Tricomplex.zero(), eta) == eta
    assert tc_add(t(u1=1, i1=1), t(i1=1, j3=1)) == t(u1=1, i1=2, j3=1)
    assert tc_add(eta, -eta) == Tricomplex.zero()


def test_mul_examples():
    i1, i2 = Tricomplex.unit(U.I1), Tricomplex.unit(U.I2)
    assert tc_mul(i1, i2) == Tricomplex.unit(U.J1)
    gamma = t(u1=0.5, j3=0.5)
    gamma_bar = t(u1=0.5, j3=-0.5)
    assert tc_mul(gamma, gamma) == gamma
    # Zero divisor: the two idempotents annihilate each other.
    assert tc_mul(gamma, gamma_bar) == Tricomplex.zero()


def test_pow_examples():
    j1, i3 = Tricomplex.unit(U.J1), Tricomplex.unit(U.I3)
    assert tc_pow(t(i1=0.3, j2=-1.2), 0) == Tricomplex.one()
    assert tc_pow(j1, 3) == j1
    assert tc_pow(i3, 3) == -i3
    with pytest.raises(ValueError):
        tc_pow(j1, -1)


@settings(max_examples=150, deadline=None)
@given(tricomplexes, tricomplexes, tricomplexes)
def test_ring_axioms(a, b, c):
    s2 = max(1.0, norm3(a) * norm3(b))
    assert norm3(tc_mul(a, b) - tc_mul(b, a)) <= 1e-12 * s2
    s3 = max(1.0, norm3(a) * norm3(b) * norm3(c))
    assert norm3(tc_mul(tc_mul(a, b), c) - tc_mul(a, tc_mul(b, c))) <= 1e-12 * s3
    sd = max(1.0, norm3(a) * (norm3(b) + norm3(c)))
    assert norm3(tc_mul(a, b + c) - (tc_mul(a, b) + tc_mul(a, c))) <= 1e-12 * sd


@settings(max_examples=150, deadline=None)
@given(tricomplexes, tricomplexes)
def test_mul_matches_pair_recursion_oracle(a, b):
    scale = max(1.0, norm3(a) * norm3(b))
    assert norm3(tc_mul(a, b) - _mul_recursive(a, b)) <= 1e-12 * scale


def test_pow_matches_idempotent_componentwise(rng):
    for m in range(17):
        a = Tricomplex(tuple(rng.uniform(-1.2, 1.2, 8)))
        pa = to_idempotent(a)
        ref = from_idempotent(IdempotentPair(pa.u1 ** m, pa.u2 ** m))
        got = tc_pow(a, m)
        assert norm3(got - ref) <= 1e-12 * max(1.0, norm3(got))


# --- idempotent representation -----------------------------------------------


def test_to_idempotent_anchors():
    p = to_idempotent(Tricomplex.unit(U.I3))
    assert p.u1.z == (0, 0, -1, 0) and p.u2.z == (0, 0, 1, 0)
    p = to_idempotent(Tricomplex.one())
    assert p.u1.z == (1, 0, 0, 0) and p.u2.z == (1, 0, 0, 0)
    p = to_idempotent(Tricomplex.unit(U.J3))
    assert p.u1.z == (1, 0, 0, 0) and p.u2.z == (-1, 0, 0, 0)
    # gamma3 itself maps to (1, 0).
    p = to_idempotent(t(u1=0.5, j3=0.5))
    assert p.u1.z == (1, 0, 0, 0) and p.u2.z == (0, 0, 0, 0)


def test_from_idempotent_anchors():
    one = Bicomplex.real(1.0)
    assert from_idempotent(IdempotentPair(one, one)) == Tricomplex.one()
    i2 = Bicomplex((0, 0, 1, 0))
    assert from_idempotent(IdempotentPair(-i2, i2)) == Tricomplex.unit(U.I3)
    z = Bicomplex.zero()
    assert from_idempotent(IdempotentPair(z, z)) == Tricomplex.zero()


@settings(max_examples=150, deadline=None)
@given(tricomplexes)
def test_idempotent_round_trip(a):
    assert norm3(from_idempotent(to_idempotent(a)) - a) <= 4e-16 * max(1.0, norm3(a))


@settings(max_examples=150, deadline=None)
@given(tricomplexes, tricomplexes)
def test_idempotent_multiplicativity(a, b):
    pa, pb = to_idempotent(a), to_idempotent(b)
    pab = to_idempotent(tc_mul(a, b))
    scale = max(1.0, norm3(a) * norm3(b))
    assert (pa.u1 * pb.u1 - pab.u1).norm() <= 1e-12 * scale
    assert (pa.u2 * pb.u2 - pab.u2).norm() <= 1e-12 * scale


# --- norm and discus -----------------------------------------------------------


def test_norm_examples():
    assert norm3(Tricomplex.zero()) == 0.0
    assert norm3(t(u1=1, i1=1, i2=1, j1=1)) == 2.0


@settings(max_examples=150, deadline=None)
@given(tricomplexes)
def test_norm_matches_component_form(a):
    p = to_idempotent(a)
    lhs = norm3(a) ** 2
    rhs = (p.u1.norm_sq() + p.u2.norm_sq()) / 2.0
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, lhs)


def test_discus_membership():
    r = math.sqrt(2.0)
    d = Discus(Tricomplex.zero(), r, r)
    assert in_discus(Tricomplex.zero(), d, closed=True)
    assert not in_discus(Tricomplex.real(3.0), d, closed=True)
    # Point with both component norms exactly on the radius.
    boundary = Discus(Tricomplex.zero(), 1.0, 1.0)
    eta = Tricomplex.real(1.0)
    assert in_discus(eta, boundary, closed=True)
    assert not in_discus(eta, boundary, closed=False)


def test_discus_validation():
    with pytest.raises(ValueError):
        Discus(Tricomplex.zero(), 2.0, 1.0)
    with pytest.raises(ValueError):
        Discus(Tricomplex.zero(), 0.0, 1.0)


# --- hyperbolic plane ------------------------------------------------------------


def test_hyperbolic_products():
    one = Hyperbolic(1.0, 0.0)
    z = Hyperbolic(0.7, -0.3)
    assert hyp_diamond(one, z) == z
    a, b = Hyperbolic(2.0, 3.0), Hyperbolic(-1.0, 4.0)
    assert hyp_diamond(a, b) == Hyperbolic(2 * -1 + 3 * 4, 3 * -1 + 2 * 4)
    assert hyp_star(a, b) == Hyperbolic(-2.0, 12.0)


def test_hyperbolic_T_homomorphism_anchor():
    j = Hyperbolic(0.0, 1.0)
    assert hyp_T(j) == (-1.0, 1.0)
    jj = hyp_diamond(j, j)
    assert (jj.u, jj.v) == (1.0, 0.0)
    assert hyp_T(jj) == (1.0, 1.0)
    ta = hyp_T(j)
    assert (ta[0] * ta[0], ta[1] * ta[1]) == hyp_T(jj)


def test_hyperbolic_T_isomorphism_exact_on_integers():
    vals = range(-3, 4)
    for ua in vals:
        for va in vals:
            a = Hyperbolic(float(ua), float(va))
            for ub in vals:
                for vb in vals:
                    b = Hyperbolic(float(ub), float(vb))
                    ta, tb = hyp_T(a), hyp_T(b)
                    assert hyp_T(hyp_diamond(a, b)) == (ta[0] * tb[0], ta[1] * tb[1])


def test_hyp_pow_chain():
    z = Hyperbolic(0.5, 0.25)
    assert hyp_pow(z, 0) == Hyperbolic(1.0, 0.0)
    assert hyp_pow(z, 3) == hyp_diamond(hyp_diamond(z, z), z)


def test_hyperbolic_embeds_into_tricomplex():
    z = Hyperbolic(0.25, -0.5)
    for ju in (U.J1, U.J2, U.J3):
        emb = z.to_tricomplex(ju)
        sq = tc_mul(emb, emb)
        zz = hyp_diamond(z, z)
        assert sq == zz.to_tricomplex(ju)
    with pytest.raises(ValueError):
        z.to_tricomplex(U.I1)


# --- span structure ---------------------------------------------------------------


def test_span_closure_kinds():
    assert span_closure_kind((U.ONE, U.I1, U.I2)) == CLOSED_SUBALGEBRA
    assert span_closure_kind((U.I1, U.I2, U.J1)) == CLOSED_SUBALGEBRA
    # j1 * j2 = -j3, so the all-j triple also spans a closed subalgebra.
    assert span_closure_kind((U.J1, U.J2, U.J3)) == CLOSED_SUBALGEBRA
    assert span_closure_kind((U.I1, U.I2, U.J2)) == ODD_POWER_CLOSED
    assert span_closure_kind((U.I1, U.I2, U.I3)) == ODD_POWER_CLOSED


def test_span_closure_predicts_power_behaviour(rng):
    from itertools import combinations

    for units in combinations(U, 3):
        span = set(iteration_span_units(units))
        eta = Tricomplex.zero()
        for u, v in zip(units, rng.uniform(-2, 2, 3)):
            eta = eta + float(v) * Tricomplex.unit(u)
        kind = span_closure_kind(units)
        saw_even_escape = False
        for m in range(1, 7):
            powm = tc_pow(eta, m)
            outside = math.sqrt(
                sum(v * v for k, v in enumerate(powm.x) if U(k) not in span)
            )
            stays = outside <= 1e-9 * max(1.0, norm3(powm))
            if m % 2 == 1 or kind == CLOSED_SUBALGEBRA:
                assert stays, (units, m)
            elif not stays:
                saw_even_escape = True
        if kind == ODD_POWER_CLOSED:
            assert saw_even_escape, units


def test_iteration_span_units_examples():
    assert iteration_span_units((U.ONE, U.I1, U.I2)) == (U.ONE, U.I1, U.I2, U.J1)
    assert iteration_span_units((U.I1, U.I2, U.J1)) == (U.ONE, U.I1, U.I2, U.J1)
    assert iteration_span_units((U.I1, U.I2, U.I3)) == (U.I1, U.I2, U.I3, U.I4)
    assert iteration_span_units((U.J1, U.J2, U.J3)) == (U.ONE, U.J1, U.J2, U.J3)


# --- serialization and batch helpers -------------------------------------------


def test_bicomplex_embedding_commutes_with_ring_ops(rng):
    for _ in range(200):
        a = Bicomplex(tuple(rng.uniform(-3, 3, 4)))
        b = Bicomplex(tuple(rng.uniform(-3, 3, 4)))
        scale = max(1.0, a.norm() * b.norm())
        assert (a + b).to_tricomplex() == a.to_tricomplex() + b.to_tricomplex()
        emb = tc_mul(a.to_tricomplex(), b.to_tricomplex())
        assert norm3(emb - (a * b).to_tricomplex()) <= 1e-12 * scale


def test_pair_split_round_trips_losslessly(rng):
    from mbkit.hypercomplex import join_pair, split_pair

    for _ in range(100):
        a = Tricomplex(tuple(rng.uniform(-5, 5, 8)))
        assert join_pair(*split_pair(a)) == a
    z1 = Bicomplex(tuple(rng.uniform(-5, 5, 4)))
    z2 = Bicomplex(tuple(rng.uniform(-5, 5, 4)))
    got1, got2 = split_pair(join_pair(z1, z2))
    assert got1 == z1 and got2 == z2


def test_text_round_trip(rng):
    a = Tricomplex(tuple(rng.uniform(-5, 5, 8)))
    assert Tricomplex.from_text(a.to_text()) == a
    assert len(a.to_text().split()) == 8


def test_mul_batch_matches_scalar(rng):
    A = rng.uniform(-3, 3, (8, 40))
    B = rng.uniform(-3, 3, (8, 40))
    C = mul_batch(A, B)
    for k in range(40):
        ref = tc_mul(Tricomplex(tuple(A[:, k])), Tricomplex(tuple(B[:, k])))
        assert np.allclose(C[:, k], ref.x, rtol=0, atol=1e-12)


def test_complex4_components_multiplicative(rng):
    A = rng.uniform(-3, 3, (8, 64))
    B = rng.uniform(-3, 3, (8, 64))
    wa, wb = to_complex4(A), to_complex4(B)
    wab = to_complex4(mul_batch(A, B))
    assert np.max(np.abs(wa * wb - wab)) <= 1e-10
    n2 = (np.abs(wa) ** 2).sum(axis=0) / 4.0
    assert np.max(np.abs(n2 - norm_sq_batch(A))) <= 1e-9
