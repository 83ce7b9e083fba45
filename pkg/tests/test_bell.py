import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from iswap_purify import bell, gates, reference_tables
from iswap_purify.bell import (BCNOT, BISWAP, BSWAP, LABELS, S, T, BellLabel, BellProduct, BKind,
                               BilateralOp, NOT_PRODUCT, PhasedBell, TableKind)
from iswap_purify.errors import InvalidArgument

labels = st.sampled_from(LABELS)
PHI_P, PHI_M, PSI_P, PSI_M = (BellLabel.PHI_PLUS, BellLabel.PHI_MINUS, BellLabel.PSI_PLUS,
                              BellLabel.PSI_MINUS)


def test_bell_basis_orthonormal():
    m = bell.bell_matrix()
    assert np.allclose(m.conj().T @ m, np.eye(4))


def test_label_bits():
    assert PHI_P.bits == (0, 0) and PSI_M.bits == (1, 1)
    for lab in LABELS:
        assert BellLabel.from_bits(*lab.bits) is lab


@pytest.mark.parametrize("text,lab", [("Phi+", PHI_P), ("Ψ⁻", PSI_M), ("psi+", PSI_P), ("Φ-", PHI_M)])
def test_label_parse(text, lab):
    assert BellLabel.parse(text) is lab


def test_label_parse_rejects_garbage():
    with pytest.raises(InvalidArgument):
        BellLabel.parse("chi+")


@pytest.mark.parametrize("c", [1, -1, 1j, -1j])
def test_phase_text_roundtrip(c):
    assert bell.parse_phase(bell.format_phase(c)) == c


@given(labels, labels, st.sampled_from([1, -1, 1j, -1j]))
def test_classify_two_pair(s, t, ph):
    got = bell.classify_bell_product(bell.two_pair_state(s, t, ph))
    assert isinstance(got, BellProduct)
    assert got.labels == (s, t)
    assert got.phase == pytest.approx(ph)


def test_classify_entangled_across_pairs():
    psi = (bell.two_pair_state(PHI_P, PHI_P) + bell.two_pair_state(PSI_M, PSI_M)) / math.sqrt(2)
    assert bell.classify_bell_product(psi) is NOT_PRODUCT


ops = st.one_of(
    st.builds(lambda k, s, p: BilateralOp(k, (p,), s), st.sampled_from(bell.ROTATION_KINDS),
              st.sampled_from([1, -1]), st.sampled_from([S, T])),
    st.sampled_from([BISWAP, BSWAP, BCNOT, bell.BCPF]),
)


@given(labels, labels, st.lists(ops, max_size=6))
def test_bilateral_ops_keep_bell_products(s, t, seq):
    # every bilateral op in the set is Clifford on the Bell basis
    out = bell.classify_bell_product(bell.apply_sequence(seq, bell.two_pair_state(s, t)))
    assert isinstance(out, BellProduct)
    assert abs(abs(out.phase) - 1) < 1e-9


@given(ops.filter(lambda o: o.kind is not BKind.BISWAP))
def test_inverse(op):
    u = bell.bilateral_unitary(op)
    v = bell.bilateral_unitary(op.inverse())
    assert np.allclose(v @ u, np.eye(16), atol=1e-12)


def test_biswap_has_no_bilateral_inverse():
    with pytest.raises(InvalidArgument):
        BISWAP.inverse()


def test_bcnot_label_rule():
    # amplitude bit flows source -> target, phase bit target -> source
    for s in LABELS:
        for t in LABELS:
            got = bell.classify_bell_product(bell.bilateral_unitary(BCNOT) @ bell.two_pair_state(s, t))
            assert got.labels == bell.bcnot_labels(s, t)
            assert got.phase == pytest.approx(1)


def test_cpf_rule_example():
    r = bell.cpf_rule(PSI_P, PSI_M)
    assert r.labels == (PSI_M, PSI_P)
    assert r.phase == -1


@pytest.mark.parametrize("s", LABELS)
@pytest.mark.parametrize("t", LABELS)
def test_cpf_rule_matches_operator(s, t):
    want = bell.cpf_rule(s, t)
    got = bell.classify_bell_product(bell.bilateral_unitary(bell.BCPF) @ bell.two_pair_state(s, t))
    assert got.labels == want.labels
    assert got.phase == pytest.approx(want.phase, abs=1e-12)


def test_bcnot_replacement_operator():
    m = bell.check_bcnot_replacement()
    assert m.equal and m.residual < 1e-12
    assert m.phase == pytest.approx(1)


def test_biswap_is_two_party_iswap():
    u = bell.bilateral_unitary(BISWAP)
    psi = bell.two_pair_state(PSI_P, PHI_M)
    # A0 A1 B0 B1 register: iSWAP on (A0, A1) and on (B0, B1)
    want = gates.apply(gates.ISWAP, gates.apply(gates.ISWAP, psi, (0, 1), 4), (2, 3), 4)
    assert np.allclose(u @ psi, want)


@pytest.mark.parametrize("axis,sign", bell.ROTATION_ROWS)
def test_rotation_table_rows(axis, sign):
    table = bell.generate_table(TableKind.ROTATIONS)
    row = table.rows[bell.ROTATION_ROWS.index((axis, sign))]
    for lab in LABELS:
        ph, out = reference_tables.ROTATIONS[(axis, sign)][lab]
        got = row.entries[lab.symbol]
        assert isinstance(got, PhasedBell)
        assert got.label is out
        assert got.phase == pytest.approx(ph, abs=1e-12)


def test_replacement_table():
    table = bell.generate_table(TableKind.DEUTSCH_REPLACEMENT)
    assert len(table.rows) == 16
    for row in table.rows:
        want = reference_tables.DEUTSCH_REPLACEMENT[tuple(row.initial)]
        for col in ("i", "ii", "iii", "iv"):
            got = row.entries[col]
            assert got.labels == want[col][1:], (row.initial, col)
            assert got.phase == pytest.approx(want[col][0], abs=1e-12), (row.initial, col)


def test_replacement_last_column_is_bcnot_then_swap():
    table = bell.generate_table(TableKind.DEUTSCH_REPLACEMENT)
    for row in table.rows:
        ns, nt = bell.bcnot_labels(*row.initial)
        assert row.entries["iv"].labels == (nt, ns)


def test_biswap_round_table():
    table = bell.generate_table(TableKind.BENNETT)
    for row in table.rows:
        want = reference_tables.BENNETT[tuple(row.initial)]
        got = row.entries["i"]
        assert got.labels == want["i"][1:]
        assert got.phase == pytest.approx(want["i"][0], abs=1e-12)
        for br in ("ii-a", "ii-b"):
            if br in want:
                assert row.entries[br].labels == want[br][1:], (row.initial, br)


def test_table_json_is_stable():
    a = bell.generate_table(TableKind.BENNETT).to_json()
    b = bell.generate_table("BENNETT").to_json()
    assert a == b
    assert "Phi+" in a


def test_bilateral_op_validation():
    with pytest.raises(InvalidArgument):
        BilateralOp(BKind.BCNOT, (0, 0))
    with pytest.raises(InvalidArgument):
        BilateralOp(BKind.BX, (0,), sign=2)
