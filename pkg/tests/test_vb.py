from math import comb

import numpy as np
import pytest

from rvbkit.errors import InvalidSize
from rvbkit.ops import s2_total, szsz
from rvbkit.vb import (
    Matching,
    catalan,
    crossing_identity_check,
    enumerate_all_matchings,
    enumerate_rumer,
    independent_count,
    rumer_map,
    vb_amplitudes,
    vb_state,
)


def test_rumer_n4_exact_order():
    assert [m.pairs for m in enumerate_rumer(4)] == [
        ((1, 2), (3, 4)),
        ((1, 4), (2, 3)),
    ]


def test_rumer_n6_contains_paper_covers():
    got = {m.pairs for m in enumerate_rumer(6)}
    assert len(got) == 5
    assert ((1, 2), (3, 6), (4, 5)) in got
    assert ((1, 6), (2, 5), (3, 4)) in got


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
def test_rumer_counts_are_catalan(n):
    ms = enumerate_rumer(n)
    assert len(ms) == catalan(n // 2) == independent_count(n)
    assert all(m.is_noncrossing() for m in ms)
    assert len({m.pairs for m in ms}) == len(ms)


@pytest.mark.parametrize("n,count", [(2, 1), (4, 3), (6, 15), (8, 105)])
def test_all_matching_counts(n, count):
    assert len(enumerate_all_matchings(n)) == count


def test_odd_sizes_rejected():
    with pytest.raises(InvalidSize):
        enumerate_rumer(5)
    with pytest.raises(InvalidSize):
        enumerate_all_matchings(12)  # capped at 10 by (n-1)!! growth


def test_matching_validation():
    with pytest.raises(ValueError):
        Matching.of(4, [(1, 2), (2, 3)])
    m = Matching.of(4, [(3, 4), (2, 1)])
    assert m.pairs == ((1, 2), (3, 4))
    assert Matching.from_dict(m.to_dict()) == m


def test_crossing_detection():
    assert not Matching.of(4, [(1, 3), (2, 4)]).is_noncrossing()
    assert Matching.of(4, [(1, 4), (2, 3)]).is_noncrossing()


def test_vb_state_hand_expansion():
    amp = vb_amplitudes(4, [(1, 2), (3, 4)])
    from rvbkit.basis import sector_basis, bits_to_config

    basis = sector_basis(4)
    expect = {"udud": 1, "uddu": -1, "duud": -1, "dudu": 1, "uudd": 0, "dduu": 0}
    for bits, value in expect.items():
        assert amp[basis.position(bits_to_config(bits))] == value


def test_vb_state_n2_is_bell_singlet():
    st = vb_state(Matching.of(2, [(1, 2)]))
    from rvbkit.basis import bits_to_config, sector_basis

    basis = sector_basis(2)
    np.testing.assert_allclose(abs(st.amp[basis.position(bits_to_config("ud"))]), 1 / np.sqrt(2))
    assert st.amp[basis.position(bits_to_config("ud"))] == pytest.approx(
        -st.amp[basis.position(bits_to_config("du"))]
    )


@pytest.mark.parametrize("n", [4, 6, 8])
def test_every_vb_product_is_total_singlet(n):
    for m in enumerate_rumer(n):
        value, variance = s2_total(vb_state(m))
        assert value == pytest.approx(0.0, abs=1e-12)
        assert variance == pytest.approx(0.0, abs=1e-12)


def test_vb_bonded_vs_unbonded_correlations():
    for m in enumerate_all_matchings(6):
        st = vb_state(m)
        for i in range(1, 7):
            for j in range(i + 1, 7):
                expected = -0.25 if m.bonded(i, j) else 0.0
                assert szsz(st, i, j) == pytest.approx(expected, abs=1e-12)


def test_crossing_identity():
    assert crossing_identity_check()


def test_crossing_states_lie_in_rumer_span():
    rm = rumer_map(6)
    for m in enumerate_all_matchings(6):
        amp = vb_amplitudes(6, m.pairs)
        x, *_ = np.linalg.lstsq(rm.m, amp, rcond=None)
        assert np.linalg.norm(rm.m @ x - amp) <= 1e-10


def test_spin_flip_parity_of_vb_states():
    for n in (4, 6, 8):
        parity = (-1) ** (n // 2)
        from rvbkit.basis import sector_basis

        basis = sector_basis(n)
        perm = basis.flip_permutation()
        for m in enumerate_rumer(n):
            amp = vb_amplitudes(n, m.pairs)
            np.testing.assert_allclose(amp[perm], parity * amp, atol=1e-14)


@pytest.mark.parametrize("n,rank", [(4, 2), (6, 5), (8, 14)])
def test_rumer_map_shapes_and_ranks(n, rank):
    rm = rumer_map(n)
    assert rm.m.shape == (comb(n, n // 2), catalan(n // 2))
    assert rm.rank == rank


def test_rumer_map_n4_matches_coefficient_table():
    # per-configuration coefficients of r1*(12)(34) + r2*(14)(23):
    # udud, dudu -> r1 - r2; uddu, duud -> -r1; uudd, dduu -> +r2
    from rvbkit.basis import bits_to_config, sector_basis

    rm = rumer_map(4)
    basis = sector_basis(4)
    col1 = {b: rm.m[basis.position(bits_to_config(b)), 0].real for b in ("udud", "dudu", "uddu", "duud", "uudd", "dduu")}
    col2 = {b: rm.m[basis.position(bits_to_config(b)), 1].real for b in col1}
    assert col1 == {"udud": 1, "dudu": 1, "uddu": -1, "duud": -1, "uudd": 0, "dduu": 0}
    assert col2 == {"udud": -1, "dudu": -1, "uddu": 0, "duud": 0, "uudd": 1, "dduu": 1}


def test_rumer_map_export():
    d = rumer_map(4).to_dict()
    assert d["n"] == 4 and len(d["matchings"]) == 2
    assert len(d["matrix"]) == 6 and len(d["matrix"][0]) == 2
