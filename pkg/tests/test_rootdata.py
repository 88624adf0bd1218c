import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weyl_torsion.poly import Basis, Polynomial, parse_polynomial
from weyl_torsion.rootdata import (
    HypothesisError,
    SignedPermutation,
    act,
    format_weight,
    make_root_datum,
    orbit,
    parse_weight,
    weyl_elements,
)

H = Fraction(1, 2)


def test_b3_fundamental_weights(b3):
    assert b3.fundamental_weight(1) == (1, 0, 0)
    assert b3.fundamental_weight(2) == (1, 1, 0)
    assert b3.fundamental_weight(3) == (H, H, H)


def test_d4_fundamental_weights(d4):
    assert d4.fundamental_weight(3) == (H, H, H, -H)
    assert d4.fundamental_weight(4) == (H, H, H, H)
    assert d4.fundamental_weight(2) == (1, 1, 0, 0)


def test_basis_change_inverse(b3, b4, d4):
    for datum in (b3, b4, d4):
        n = datum.rank
        om, eo = datum.omega_in_e, datum.e_in_omega
        for i in range(n):
            for j in range(n):
                assert sum(om[i][k] * eo[k][j] for k in range(n)) == int(i == j)
        assert all(x.denominator in (1, 2) for row in om for x in row)


def test_rank_bounds():
    with pytest.raises(HypothesisError, match="n≥3"):
        make_root_datum("B", 2)
    with pytest.raises(HypothesisError, match="n≥4"):
        make_root_datum("D", 3)
    with pytest.raises(HypothesisError):
        make_root_datum("C", 3)


def test_weyl_orders(b3, b4, d4):
    for datum, order in ((b3, 48), (b4, 384), (d4, 192)):
        elems = list(weyl_elements(datum))
        assert len(elems) == order == datum.weyl_order
        assert len(set(elems)) == order
        assert SignedPermutation.identity(datum.rank) in elems


def test_enumeration_matches_generated_group(b3, d4):
    # closure of the simple reflections equals the enumeration
    for datum in (b3, d4):
        gens = datum.generators()
        seen = {SignedPermutation.identity(datum.rank)}
        todo = list(seen)
        while todo:
            w = todo.pop()
            for g in gens:
                x = g @ w
                if x not in seen:
                    seen.add(x)
                    todo.append(x)
        assert seen == set(weyl_elements(datum))


def test_enumeration_rank_limit(monkeypatch):
    monkeypatch.setenv("WEYL_TORSION_MAX_RANK", "3")
    with pytest.raises(HypothesisError):
        next(weyl_elements(make_root_datum("B", 4)))


def test_act_examples():
    P = lambda s: parse_polynomial(s, 3)  # noqa: E731
    flip1 = SignedPermutation((0, 1, 2), (-1, 1, 1))
    swap = SignedPermutation((1, 0, 2), (1, 1, 1))
    assert act(flip1, P("e1^2")) == P("e1^2")
    assert act(swap, P("e1^2*e2")) == P("e2^2*e1")
    assert act(flip1, P("e1*e2*e3")) == P("-e1*e2*e3")
    with pytest.raises(ValueError):
        act(flip1, Polynomial.variable(0, 3, Basis.OMEGA))


def test_d_closure(d4):
    elems = list(weyl_elements(d4))
    members = set(elems)
    rng = random.Random(1)
    for _ in range(300):
        a, b = rng.choice(elems), rng.choice(elems)
        assert a @ b in members
        assert a.inverse() in members
    assert all(w.negatives % 2 == 0 for w in elems)


poly3 = st.dictionaries(st.tuples(*[st.integers(0, 3)] * 3), st.integers(-5, 5), max_size=5).map(
    lambda t: Polynomial(t, 3))


@settings(max_examples=60, deadline=None)
@given(st.data(), poly3)
def test_act_is_group_action(data, p):
    elems = list(weyl_elements(make_root_datum("B", 3)))
    w1 = data.draw(st.sampled_from(elems))
    w2 = data.draw(st.sampled_from(elems))
    assert act(w1, act(w2, p)) == act(w1 @ w2, p)
    assert act(w1.inverse(), act(w1, p)) == p


def test_omega_lattice_is_w_stable(b3, b4, d4):
    for datum in (b3, b4, d4):
        for w in datum.generators():
            for j in range(1, datum.rank + 1):
                image = w.apply_vector(datum.fundamental_weight(j))
                assert datum.in_lattice(image)


def test_round_trip_omega3(b3):
    w3 = Polynomial.variable(2, 3, Basis.OMEGA)
    e_form = b3.to_e(w3)
    assert e_form == parse_polynomial("1/2*e1 + 1/2*e2 + 1/2*e3", 3)
    assert b3.to_omega(e_form) == w3


@settings(max_examples=40, deadline=None)
@given(poly3, st.sampled_from(["B", "D"]))
def test_round_trips(p, family):
    n = 3 if family == "B" else 4
    datum = make_root_datum(family, n)
    p = Polynomial({m + (0,) * (n - 3): c for m, c in p.items()}, n, Basis.OMEGA)
    assert datum.to_omega(datum.to_e(p)) == p
    q = Polynomial({m: c for m, c in p.items()}, n, Basis.E)
    assert datum.to_e(datum.to_omega(q)) == q
    assert datum.to_omega(q).is_integral()


def _orbit_by_enumeration(datum, weight):
    return {w.apply_vector(tuple(Fraction(x) for x in weight)) for w in weyl_elements(datum)}


def test_orbit_examples(b3, d4):
    o = orbit(b3, (1, 0, 0))
    assert len(o) == 6
    assert o == _orbit_by_enumeration(b3, (1, 0, 0))
    assert orbit(b3, (0, 0, 0)) == {(0, 0, 0)}
    o3 = orbit(b3, b3.fundamental_weight(3))
    assert len(o3) == 8
    assert all(abs(x) == H for w in o3 for x in w)
    assert orbit(d4, d4.fundamental_weight(4)) == _orbit_by_enumeration(d4, d4.fundamental_weight(4))
    assert len(orbit(d4, d4.fundamental_weight(4))) == 8
    with pytest.raises(ValueError):
        orbit(b3, (H, 0, 0))


def test_weight_text():
    w = parse_weight("1/2,1/2,-1/2")
    assert w == (H, H, -H)
    assert format_weight(w) == "1/2,1/2,-1/2"
