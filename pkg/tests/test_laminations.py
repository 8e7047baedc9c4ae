"""Tests for circle geometry, Liouville boxes, and measured laminations."""

import cmath
import math

import numpy as np
import pytest

from chimneylab import domains as dm
from chimneylab import laminations as lam
from chimneylab import sequences as sq


def one_sided(p=2.0, a=0.5):
    return dm.OneSided(sq.make_sequence(sq.Power(p, a)))


def test_liouville_symmetric_box():
    assert lam.liouville_box(1 + 0j, 1j, -1 + 0j, -1j) == pytest.approx(
        math.log(2.0), abs=1e-12
    )
    quarter = [0.0, math.pi / 2, math.pi, 3 * math.pi / 2]
    assert lam.liouville_box(*quarter) == pytest.approx(math.log(2.0), abs=1e-12)


def test_liouville_rotation_invariance():
    rng = np.random.default_rng(3)
    for _ in range(20):
        th = np.sort(rng.uniform(0.0, 2 * math.pi, size=4))
        if np.min(np.diff(th)) < 1e-3:
            continue
        base = lam.liouville_box(*th)
        rot = lam.liouville_box(*(th + rng.uniform(0, 10)))
        assert rot == pytest.approx(base, abs=1e-10)


def test_liouville_matches_direct_cross_ratio():
    th = [0.3, 1.1, 2.9, 5.0]
    z = [cmath.exp(1j * t) for t in th]
    cr = ((z[0] - z[2]) * (z[1] - z[3])) / ((z[0] - z[3]) * (z[1] - z[2]))
    assert lam.liouville_box(*th) == pytest.approx(math.log(cr.real), abs=1e-13)


def test_liouville_rejects_bad_order():
    with pytest.raises(ValueError):
        lam.liouville_box(0.0, 3.0, 1.0, 5.0)


def test_chords_cross_symbolic():
    order = lam.SymbolOrder(("a", "b", "c", "d", "e", "f"))
    assert lam.chords_cross(("a", "c"), ("b", "d"), order)
    assert not lam.chords_cross(("a", "b"), ("c", "d"), order)
    assert not lam.chords_cross(("a", "d"), ("b", "c"), order)  # nested


def test_limit_lamination_structure():
    spec = one_sided()
    built = lam.build_limit_lamination(spec, [1.5], n_max=3)
    assert built.chimney_weight() == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert built.tail == {"weight": pytest.approx(2.0 / 3.0), "n_start": 4}
    syms = {(u.value, v.value) for (u, v), _ in built.atoms}
    assert ("-1", "-i") in syms
    assert ("z_1", "alpha_1") in syms and ("z_1", "beta_1") in syms
    with pytest.raises(ValueError):
        lam.build_limit_lamination(spec, [0.9], n_max=3)  # weight outside [m, M]


def test_lamination_mass_counts_separating_atoms():
    built = lam.build_limit_lamination(one_sided(), [1.5], n_max=3)
    box = lam.GeodesicBox(("z_1", "z_1"), ("alpha_1", "beta_1"))
    assert lam.lamination_mass(built, box) == pytest.approx(4.0 / 3.0, abs=1e-12)
    far = lam.GeodesicBox(("-1", "-1"), ("-i", "-i"))
    assert lam.lamination_mass(built, far) == pytest.approx(1.5, abs=1e-12)


def test_projective_normalization():
    a = lam.build_limit_lamination(one_sided(), [4.0 / 3.0], n_max=3)
    b = lam.build_limit_lamination(one_sided(), [5.0 / 3.0], n_max=3)
    assert not lam.projectively_equal(a, b)
    doubled = lam.MeasuredLamination(
        tuple((g, 2 * w) for g, w in a.atoms),
        {"weight": 2 * a.tail["weight"], "n_start": a.tail["n_start"]},
        a.order,
    )
    assert lam.projectively_equal(a, doubled)
    assert doubled.normalized().chimney_weight() == pytest.approx(2.0 / 3.0)


def test_limit_set_descriptors():
    one = lam.limit_set(one_sided(), n_max=3)
    assert one.dimension == 1
    assert one.free_axes[0].interval == pytest.approx((4.0 / 3.0, 5.0 / 3.0))

    multi = lam.limit_set(dm.MultiK((2.0, 3.0), 0.5), n_max=3)
    assert multi.dimension == 2
    assert multi.free_axes[0].interval == pytest.approx((4.0 / 3.0, 5.0 / 3.0))
    assert multi.free_axes[1].interval == pytest.approx((1.25, 1.75))
    assert multi.advisory["log_ratio_rationally_independent"] is True

    dep = lam.limit_set(dm.MultiK((2.0, 4.0), 0.5), n_max=3)
    assert dep.advisory["log_ratio_rationally_independent"] is False


def test_mod_liouville_residual():
    assert lam.mod_liouville_residual(1.0, math.pi) == pytest.approx(
        -2.0 / math.pi * math.log(4.0), abs=1e-14
    )


def test_serialization_dicts():
    built = lam.build_limit_lamination(one_sided(), [1.5], n_max=2)
    d = lam.lamination_to_dict(built)
    assert d["tail"]["n_start"] == 3
    ls = lam.limit_set(one_sided(), n_max=2)
    d2 = lam.limitset_to_dict(ls)
    assert len(d2["free_axes"]) == 1
