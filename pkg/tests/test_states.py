"""The named states against their printed amplitude patterns (transcribed by
hand), plus the structural properties every family must satisfy."""

import numpy as np
import pytest

from rvbkit.basis import state_from_amplitudes
from rvbkit.entanglement import e2v, e2v_max
from rvbkit.homogenizer import verify_maximal
from rvbkit.states import FAMILIES, hs_state, named_state, six_a, six_b, six_c

W3 = np.exp(2j * np.pi / 3)
W4 = 1j


def reference(groups):
    entries = {}
    for coeff, plus, minus in groups:
        for bits in plus.split():
            entries[bits] = entries.get(bits, 0) + coeff
        for bits in minus.split():
            entries[bits] = entries.get(bits, 0) - coeff
    n = len(next(iter(entries)))
    return state_from_amplitudes(n, entries)


HS_REF = reference(
    [
        (1, "udud dudu", ""),
        (W3, "uddu duud", ""),
        (W3 ** 2, "uudd dduu", ""),
    ]
)

SIX_A_REF = reference(
    [
        (1, "ududud", "dududu"),
        (W4, "uduudd uddduu duudud", "uddudu duuudd dudduu"),
        (W4 ** 2, "uuddud ududdu dduuud", "uudddu duduud dduudu"),
        (W4 ** 3, "uuuddd dduduu udduud", "uududd duuddu ddduuu"),
    ]
)

SIX_B_REF = reference(
    [
        (1, "ududud", "dududu"),
        (-1, "uduudd uddduu duudud", "uddudu duuudd dudduu"),
        (1, "uuddud ududdu dduuud", "uudddu duduud dduudu"),
        (-1, "uuuddd dduduu udduud", "uududd duuddu ddduuu"),
    ]
)

SIX_C_REF = reference(
    [
        (1, "ududud", "dududu"),
        (W4, "ududdu udduud duudud", "uddudu duuddu duduud"),
        (W4 ** 2, "uuuddd uddduu dduuud", "uudddu duuudd ddduuu"),
        (W4 ** 3, "uuddud uduudd dduduu", "uududd dudduu dduudu"),
    ]
)


@pytest.mark.parametrize(
    "builder,ref",
    [(hs_state, HS_REF), (six_a, SIX_A_REF), (six_b, SIX_B_REF), (six_c, SIX_C_REF)],
    ids=["hs", "six-a", "six-b", "six-c"],
)
def test_families_match_printed_expansions(builder, ref):
    overlap = abs(ref.overlap(builder()))
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_hs_has_six_equal_magnitude_amplitudes():
    st = named_state("hs")
    mags = np.abs(st.amp)
    assert np.count_nonzero(mags > 1e-13) == 6
    assert mags.max() - mags.min() < 1e-12


def test_six_b_signs_match_printed_state():
    st = named_state("six-b")
    ref = SIX_B_REF.gauge_fixed()
    np.testing.assert_allclose(st.amp, ref.amp, atol=1e-12)


@pytest.mark.parametrize("family", FAMILIES)
def test_every_family_is_certified_maximal(family):
    st = named_state(family)
    cert = verify_maximal(st)
    assert cert.valid, cert.residuals


@pytest.mark.parametrize("family,n", [("hs", 4), ("six-a", 6), ("six-b", 6), ("six-c", 6)])
def test_family_e2v(family, n):
    assert e2v(named_state(family)) == pytest.approx(e2v_max(n), abs=1e-10)


def test_conjugate_families_are_independent_states():
    a = named_state("six-a")
    b = named_state("six-a-conj")
    assert abs(a.overlap(b)) < 0.999


def test_five_six_qubit_states_span_rank_five():
    stack = np.stack([named_state(f).amp for f in ("six-a", "six-a-conj", "six-b", "six-c", "six-c-conj")])
    sv = np.linalg.svd(stack, compute_uv=False)
    assert int(np.sum(sv > 1e-8 * sv[0])) == 5


def test_six_b_is_self_conjugate():
    a = named_state("six-b")
    b = named_state("six-b").conj().gauge_fixed()
    assert abs(abs(a.overlap(b)) - 1.0) < 1e-12


def test_unknown_family_rejected():
    with pytest.raises(KeyError):
        named_state("ghz")
