import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftedprimes.characters import primitive_characters, principal_character
from shiftedprimes.damping import OmegaTable
from shiftedprimes.zeros import (
    BranchCertificate,
    ScaleSelectionError,
    ZeroRecord,
    ZeroSchemaError,
    ZeroSet,
    characters_for_zero,
    conjugate_closure,
    explicit_formula_check,
    explicit_formula_sweep,
    load_zero_set,
    lowest_zeros,
    page_bound_check,
    parse_zero_set,
    scale_select,
    synthetic_zero_set,
    zero_heights,
    zeta_zero_set,
)


def _psi(x):
    """Chebyshev psi by a plain trial-division loop."""
    total = 0.0
    for n in range(2, int(x) + 1):
        m, p = n, 2
        while m % p:
            p += 1
        while m % p == 0:
            m //= p
        if m == 1:
            total += math.log(p)
    return total


def test_empty_body_is_grh():
    assert len(parse_zero_set("")) == 0
    assert len(parse_zero_set("  \n")) == 0
    assert len(load_zero_set(None)) == 0


def test_closure_adds_conjugate():
    zs = parse_zero_set(json.dumps({"zeros": [{"beta": 0.98, "gamma": 2.5, "conductor": 5, "real_character": False}]}))
    assert len(zs) == 2
    a, b = zs.zeros
    assert (b.beta, b.gamma, b.conductor) == (0.98, -2.5, 5) and b.from_closure
    assert characters_for_zero(b) == characters_for_zero(a).conj()
    assert parse_zero_set(zs.to_json()).to_dict() == zs.to_dict()


def test_closure_idempotent_when_present():
    z = ZeroRecord(0.9, 1.0, 5, False)
    assert len(conjugate_closure([z, z.conjugate()])) == 2
    # same height, same character: the conjugate pair is still missing
    assert len(synthetic_zero_set([(0.9, 1.0, 5, False), (0.9, -1.0, 5, False)])) == 4
    assert len(synthetic_zero_set([(0.9, 0.0, 5, True)])) == 1


@pytest.mark.parametrize(
    "text,line",
    [
        ('{\n "zeros": [\n  {"beta": 0.9, "gamma": 1}\n ]\n}', 3),
        ('{\n "zeros": [\n  {"beta": 0.9, "gamma": 1, "conductor": 5, "real_character": false},\n  {"beta": 1.5, "gamma": 1, "conductor": 5, "real_character": false}\n ]\n}', 4),
        ('{\n "zeros": [\n  {"beta": 0.9, "gamma": 1, "conductor": 2.5, "real_character": false}\n ]\n}', 3),
        ('{\n "zeros": [\n  {"beta": 0.9, "gamma": 1, "conductor": 4, "real_character": false}\n ]\n}', 3),
        ('{\n "zeros": [\n  {"beta": 0.9, "gamma": 1, "conductor": 5, "real_character": false, "x": 1}\n ]\n}', 3),
        ('{\n "zeros": [\n  {"beta": 0.9, "gamma": 1, "conductor": 5, \n "real_character": false,}\n ]\n}', 4),
        ('{"Q": 2,\n "zeros": [\n  {"beta": 0.9, "gamma": 3, "conductor": 5, "real_character": false}\n ]\n}', 3),
    ],
)
def test_schema_errors_carry_lines(text, line):
    with pytest.raises(ZeroSchemaError) as exc:
        parse_zero_set(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}:")


def test_zeta_table_against_mpmath():
    zs = zeta_zero_set()
    pos = sorted(z.gamma for z in zs if z.gamma > 0)
    assert len(pos) == 30
    for k, g in enumerate(pos, 1):
        assert abs(g - float(mpmath.zetazero(k).imag)) < 1e-8
    assert all(z.beta == 0.5 and z.conductor == 1 for z in zs)
    assert np.allclose(zero_heights(zs), -zero_heights(zs)[::-1])


def test_selection_idempotent_and_monotone():
    zs = synthetic_zero_set([(0.9, 1.0, 5, False), (0.99, 12.0, 7, False), (0.7, 0.0, 5, True), (0.95, 3.0, 20, False)])
    a = zs.selected(10, 0.2)
    assert a.selected(10, 0.2).to_dict() == a.to_dict()
    b = zs.selected(4, 0.2)
    assert {id(z) for z in b} <= {id(z) for z in a}
    assert all(z.sigma <= 0.2 and abs(z.gamma) <= 10 and z.conductor <= 10 for z in a)


@given(st.lists(st.tuples(st.floats(0.6, 0.99), st.floats(-20, 20), st.sampled_from([5, 7, 13])), max_size=5), st.floats(1, 30), st.floats(1, 30))
def test_selection_nested(rows, Q1, Q2):
    zs = synthetic_zero_set([(b, g, q, False) for b, g, q in rows])
    lo, hi = sorted((Q1, Q2))
    small = zs.selected(lo, 0.5).zeros
    big = zs.selected(hi, 0.5).zeros
    assert all(any(z is w for w in big) for z in small)


def test_scale_select_empty():
    T, branch, cert = scale_select(1e3, 0.5, ZeroSet())
    assert branch == "unexceptional" and cert.unexceptional_sum == 0 and T == 1e3


def test_scale_select_exceptional():
    zs = synthetic_zero_set([(1 - 1e-4, 0.0, 5, True)])
    T, branch, cert = scale_select(1e3, 0.5, zs, omega=OmegaTable())
    assert branch == "exceptional" and cert.q1 == 5
    assert math.log(cert.q1) <= cert.kappa * math.log(T)
    assert cert.reference_log2_M == pytest.approx(OmegaTable().log2_M)
    back = BranchCertificate.from_json(cert.to_json())
    assert back.reevaluate() == cert.holds is True


def test_scale_select_conflict():
    zs = synthetic_zero_set([(0.98, 3.0, 5, False), (0.98, 5.0, 7, False)])
    with pytest.raises(ScaleSelectionError) as exc:
        scale_select(1e3, 0.5, zs)
    r = exc.value.residuals
    assert r["unexceptional"] > 0 and r["exceptional"] > 0 and r["exceptional_ok"] is False


def test_scale_select_range_check():
    with pytest.raises(ValueError):
        scale_select(10.0, 0.5, ZeroSet())


def test_explicit_formula_zeta():
    zs = zeta_zero_set()
    rep = explicit_formula_check(principal_character(1), 1000, zs, Q=zs.Q if math.isfinite(zs.Q) else 100)
    assert rep.prime_side.real == pytest.approx(_psi(1000), abs=1e-9)
    assert rep.residual / (1000 / rep.Q) <= 5
    assert rep.zeros_used == 60 and not rep.missing


def test_explicit_formula_degenerate():
    rep = explicit_formula_check(principal_character(1), 10, ZeroSet(), Q=1)
    assert math.isfinite(rep.residual) and rep.missing
    assert rep.residual == pytest.approx(abs(_psi(10) - 10), abs=1e-12)


def test_explicit_formula_more_zeros_help():
    zs = zeta_zero_set()
    rows = explicit_formula_sweep(principal_character(1), range(500, 1500, 7), zs, [7, 15, 30])
    vals = [r for _, r in rows]
    assert vals[0] > vals[1] > vals[2]
    assert len(lowest_zeros(zs, 7)) == 14


def test_explicit_formula_nonprincipal_missing():
    chi = primitive_characters(5)[0]
    rep = explicit_formula_check(chi, 100, zeta_zero_set(), Q=50)
    assert rep.missing and rep.zeros_used == 0


def test_page_bound():
    assert page_bound_check(synthetic_zero_set([(0.9, 0.0, 5, True)]), 0.1).ok
    bad = page_bound_check(synthetic_zero_set([(1 - 1e-9, 0.0, 5, True)]), 0.1)
    assert not bad.ok and bad.rows[0]["bound"] == pytest.approx(0.02)


def test_record_validation():
    with pytest.raises(ValueError):
        ZeroRecord(1.0, 0.0, 5, True)
    with pytest.raises(ValueError):
        ZeroRecord(0.9, 0.0, 5, True, 0)
