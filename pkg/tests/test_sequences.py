"""Tests for chimney sequence families, exponents, and the modulus profile."""

import json
import math

import numpy as np
import pytest

from chimneylab import sequences as sq


def test_power_log_values():
    seq = sq.make_sequence(sq.Power(2.0, 0.5))
    L = math.log(0.5)
    assert seq.log_b(0) == 0.0
    assert seq.log_a(0) == pytest.approx(L, rel=1e-15)
    assert seq.log_b(1) == pytest.approx(2.0 * L, rel=1e-15)
    assert seq.log_a(1) == pytest.approx(4.0 * L, rel=1e-15)
    assert seq.log_b(2) == pytest.approx(8.0 * L, rel=1e-15)


def test_power_accepts_integer_parameters():
    # integer p must not trigger integer-overflow exponentiation
    seq = sq.make_sequence(sq.Power(2, 0.5))
    la = seq.log_a_array(np.arange(0, 60))
    assert np.all(np.diff(la) < 0)
    assert np.all(np.isfinite(la) | np.isneginf(la))


def test_interlacing_and_validation():
    with pytest.raises(ValueError):
        sq.Explicit((0.0, -1.0), (-2.0, -3.0))  # log_b[0] must be 0
    with pytest.raises(ValueError):
        sq.Explicit((-1.0, -0.5), (0.0, -2.0))  # not interlacing
    good = sq.Explicit((-1.0, -3.0, -5.0), (0.0, -2.0, -4.0))
    seq = sq.make_sequence(good)
    assert seq.log_a(2) == -5.0


def test_exponents_power_hand_values():
    seq = sq.make_sequence(sq.Power(2.0, 0.5))
    e1 = sq.exponents(seq, 1)
    assert e1.m_n == pytest.approx(1.25, abs=1e-14)
    assert e1.M_n == pytest.approx(1.5, abs=1e-14)
    e2 = sq.exponents(seq, 2)
    assert e2.m_n == pytest.approx(1.3125, abs=1e-14)
    assert e2.M_n == pytest.approx(1.625, abs=1e-14)


def test_exponent_window_and_drift():
    seq = sq.make_sequence(sq.Power(2.0, 0.5))
    win = sq.exponent_limits(seq, 10, 40)
    assert win.m_hat == pytest.approx(4.0 / 3.0, abs=1e-6)
    assert win.M_hat == pytest.approx(5.0 / 3.0, abs=1e-6)
    assert win.m_drift < 1e-6 and win.M_drift < 1e-6
    assert win.converged


def test_closed_form_limits():
    assert sq.closed_form_limits(sq.Power(2.0, 0.5)) == pytest.approx(
        (4.0 / 3.0, 5.0 / 3.0), abs=1e-15
    )
    assert sq.closed_form_limits(sq.PowerPair(2.0, 3.0, 0.5)) == pytest.approx(
        (1.4, 1.8), abs=1e-15
    )
    assert sq.closed_form_limits(sq.Factorial()) == (1.5, 1.5)
    assert sq.closed_form_limits(sq.RisingFactorial(1, 1, 2)) == pytest.approx(
        (1.5, 1.5), abs=1e-15
    )


def test_factorial_window_near_common_limit():
    seq = sq.make_sequence(sq.Factorial())
    win = sq.exponent_limits(seq, 10**5, 10**6)
    assert abs(win.m_hat - 1.5) < 0.01
    assert abs(win.M_hat - 1.5) < 0.01


def test_validate_hypotheses_power():
    seq = sq.make_sequence(sq.Power(2.0, 0.5))
    rep = sq.validate_hypotheses(seq, 10)
    assert rep.c_est == pytest.approx(0.5, abs=1e-12)
    assert rep.roots_decreasing
    assert rep.passed


def test_phi_profile_and_inverse():
    p = 2.0
    assert sq.phi(p, 1.0) == pytest.approx(5.0 / 3.0, abs=1e-15)
    assert sq.phi(p, p) == pytest.approx(2.0 - p * p / (p * (p + 1)), abs=1e-15)
    assert sq.phi(p, p * p) == pytest.approx(5.0 / 3.0, abs=1e-15)
    # the two branches of the inverse bracket the kink at alpha = p
    s = 1.5
    a_dec = sq.invert_phi(p, s, "decreasing")
    a_inc = sq.invert_phi(p, s, "increasing")
    assert a_dec == pytest.approx(4.0 / 3.0, abs=1e-14)
    assert a_inc == pytest.approx(8.0 / 3.0, abs=1e-14)
    assert sq.phi(p, a_dec) == pytest.approx(s, abs=1e-12)
    assert sq.phi(p, a_inc) == pytest.approx(s, abs=1e-12)
    with pytest.raises(ValueError):
        sq.invert_phi(p, 2.5)


def test_spec_json_roundtrip():
    for spec in (
        sq.Factorial(),
        sq.RisingFactorial(1, 1, 2),
        sq.Power(2.0, 0.5),
        sq.PowerPair(2.0, 3.0, 0.5),
        sq.Explicit((-1.0, -3.0), (0.0, -2.0)),
    ):
        text = sq.spec_to_json(spec)
        back = sq.spec_from_json(text)
        assert back == spec
        json.loads(text)  # valid JSON


def test_two_form_identity_sampled():
    rng = np.random.default_rng(7)
    for _ in range(50):
        k = int(rng.integers(4, 10))
        gaps = rng.uniform(0.1, 3.0, size=2 * k - 1)
        logs = -np.cumsum(gaps)
        log_b = (0.0,) + tuple(logs[1::2])
        log_a = tuple(logs[0::2])
        seq = sq.make_sequence(sq.Explicit(log_a, log_b))
        for n in range(1, k):
            e = sq.exponents(seq, n)  # raises if the two forms disagree
            assert 1.0 < e.m_n <= e.M_n < 2.0 or e.m_n <= e.M_n
