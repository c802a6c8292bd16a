import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import charpoly_eigenvalues
from pinonlocal import (
    HermitianOperator,
    UnitVector,
    ValidationError,
    eig_hermitian,
    inner,
    partial_contraction_a,
    partial_contraction_b,
    partial_transpose,
    phi_plus_pt,
    projector,
    tensor,
    trace_norm,
)
from pinonlocal.hermlin import (
    jacobi_eigh,
    matrix_from_literal,
    matrix_to_literal,
    min_eig,
    operator_from_literal,
    operator_to_literal,
    spectral_function,
    spectral_norm,
)

from conftest import random_hermitian

SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
KET0 = UnitVector(np.array([1, 0]))
KET1 = UnitVector(np.array([0, 1]))
PLUS = UnitVector.normalized([1, 1])


def op(m, da=2, db=2):
    return HermitianOperator.from_array(m, da, db)


def qubit(m):
    return HermitianOperator.from_array(m)


# --- eigendecomposition --------------------------------------------------------

def test_eig_identity():
    w, vecs = eig_hermitian(HermitianOperator.identity(2, 2))
    assert np.allclose(w, [1, 1, 1, 1], atol=1e-15)
    assert len(vecs) == 4


def test_eig_phi_plus_pt_against_charpoly():
    h = phi_plus_pt()
    assert np.allclose(h.entries, SWAP / 2, atol=0)
    w, vecs = eig_hermitian(h)
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-14)
    # triple root: polynomial roots only resolve it to about eps^(1/3)
    assert np.allclose(w, charpoly_eigenvalues(h.entries), atol=1e-4)
    psi_minus = np.array([0, 1, -1, 0]) / np.sqrt(2)
    assert abs(abs(np.vdot(vecs[0].amplitudes, psi_minus)) - 1) < 1e-14


def test_eig_diagonal():
    w, vecs = eig_hermitian(qubit(np.diag([3.0, -1.0])))
    assert np.allclose(w, [-1, 3], atol=0)
    assert abs(abs(vecs[0].amplitudes[1]) - 1) < 1e-15


def test_eig_matches_charpoly_random(rng):
    for _ in range(50):
        h = random_hermitian(rng)
        w, _ = eig_hermitian(h)
        assert np.allclose(w, charpoly_eigenvalues(h.entries), atol=1e-8)


def test_eig_reconstruction_and_orthonormality(rng):
    worst = 0.0
    for _ in range(1000):
        h = random_hermitian(rng)
        w, vecs = eig_hermitian(h)
        v = np.column_stack([x.amplitudes for x in vecs])
        scale = max(1.0, spectral_norm(h))
        worst = max(worst, np.max(np.abs(v @ np.diag(w) @ v.conj().T - h.entries)) / scale)
        assert np.max(np.abs(v.conj().T @ v - np.eye(4))) < 1e-12
        assert np.all(np.diff(w) >= 0)
    assert worst < 1e-12


def test_jacobi_complex_phases():
    # entries with every complex phase exercise the phase-stripping rotation
    m = np.array([[2, 1j, -1 + 1j], [-1j, 0, 0.5 - 2j], [-1 - 1j, 0.5 + 2j, -1]])
    w, v = jacobi_eigh(m)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-13)
    assert np.allclose(w, np.linalg.eigvalsh(m), atol=1e-13)


def test_min_eig_and_spectral_function():
    lam, vec = min_eig(phi_plus_pt())
    assert lam == pytest.approx(-0.5, abs=1e-14)
    assert phi_plus_pt().expectation(vec) == pytest.approx(-0.5, abs=1e-14)
    sq = spectral_function(phi_plus_pt(), lambda x: x * x)
    assert sq.allclose(HermitianOperator.identity(2, 2) / 4, 1e-14)


# --- tensor ----------------------------------------------------------------------

def test_tensor_examples():
    i2 = HermitianOperator.identity(2)
    assert tensor(i2, i2).allclose(HermitianOperator.identity(2, 2), 0)
    t = tensor(KET0.projector(), KET1.projector())
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    assert np.array_equal(t.entries, expected)
    assert t.dims == (2, 2)
    pp = tensor(PLUS.projector(), PLUS.projector())
    assert np.allclose(pp.entries, np.full((4, 4), 0.25), atol=1e-15)


def test_tensor_scalar_and_trace(rng):
    a, b = random_hermitian(rng, 2, (2, 1)), random_hermitian(rng, 3, (3, 1))
    # dyadic scalars commute with rounding exactly
    for c in (2.0, 0.5, -4.0, 0.125):
        assert np.array_equal(tensor(a * c, b).entries, (tensor(a, b) * c).entries)
    for c in (0.3, -1.7, np.pi):
        lhs, rhs = tensor(a * c, b).entries, (tensor(a, b) * c).entries
        assert np.allclose(lhs, rhs, rtol=1e-15, atol=1e-15)
    assert tensor(a, b).trace() == pytest.approx(a.trace() * b.trace(), abs=1e-12)
    assert tensor(a, b).dims == (2, 3)


# --- partial transpose ------------------------------------------------------------

def test_partial_transpose_examples(rng):
    a, b = random_hermitian(rng, 2, (2, 1)), random_hermitian(rng, 3, (3, 1))
    pt = partial_transpose(tensor(a, b))
    bt = HermitianOperator.from_array(b.entries.T)
    assert pt.allclose(tensor(a, bt), 1e-15)
    assert partial_transpose(projector("phi+")).allclose(op(SWAP / 2), 1e-15)
    eye = HermitianOperator.identity(2, 3)
    assert np.array_equal(partial_transpose(eye).entries, eye.entries)


def test_partial_transpose_entrywise(rng):
    h = random_hermitian(rng, 6, (2, 3))
    pt = partial_transpose(h).entries
    for i in range(2):
        for j in range(3):
            for k in range(2):
                for l in range(3):
                    assert pt[i * 3 + j, k * 3 + l] == h.entries[i * 3 + l, k * 3 + j]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 2), (1, 4)]))
def test_partial_transpose_involution_and_trace(seed, dims):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, dims[0] * dims[1], dims)
    twice = partial_transpose(partial_transpose(h))
    assert np.array_equal(twice.entries, h.entries)
    assert partial_transpose(h).trace() == pytest.approx(h.trace(), abs=1e-12)


# --- partial contraction -------------------------------------------------------------

def test_partial_contraction_examples(rng):
    for _ in range(5):
        b = UnitVector.normalized(rng.normal(size=2) + 1j * rng.normal(size=2))
        assert partial_contraction_b(HermitianOperator.identity(2, 2), b).allclose(
            HermitianOperator.identity(2), 1e-15
        )
    a_op, b_op = random_hermitian(rng, 2, (2, 1)), random_hermitian(rng, 2, (2, 1))
    b = UnitVector.normalized(rng.normal(size=2) + 1j * rng.normal(size=2))
    got = partial_contraction_b(tensor(a_op, b_op), b)
    assert got.allclose(a_op * b_op.expectation(b), 1e-13)
    assert partial_contraction_b(op(SWAP), KET0).allclose(KET0.projector(), 0)


def test_partial_contraction_expectation(rng):
    h = random_hermitian(rng, 6, (2, 3))
    for _ in range(20):
        a = UnitVector.normalized(rng.normal(size=2) + 1j * rng.normal(size=2))
        b = UnitVector.normalized(rng.normal(size=3) + 1j * rng.normal(size=3))
        direct = h.expectation(a.kron(b))
        assert partial_contraction_b(h, b).expectation(a) == pytest.approx(direct, abs=1e-12)
        assert partial_contraction_a(h, a).expectation(b) == pytest.approx(direct, abs=1e-12)


def test_partial_contraction_wrong_factor():
    with pytest.raises(ValidationError):
        partial_contraction_b(HermitianOperator.identity(2, 2), UnitVector.normalized([1, 0, 0]))


# --- norms and inner products ----------------------------------------------------------

def test_norm_examples():
    assert trace_norm(qubit(np.diag([1.0, -1.0]))) == pytest.approx(2, abs=1e-15)
    assert inner(projector("phi+"), phi_plus_pt()) == pytest.approx(
        np.trace(projector("phi+").entries @ phi_plus_pt().entries).real, abs=0
    )
    assert inner(projector("phi+"), phi_plus_pt()) == pytest.approx(0.5, abs=1e-15)
    assert trace_norm(phi_plus_pt()) == pytest.approx(2, abs=1e-14)


def test_norm_properties(rng):
    for _ in range(100):
        h = random_hermitian(rng)
        g = random_hermitian(rng)
        assert trace_norm(h) >= abs(h.trace()) - 1e-12
        assert trace_norm(h + g) <= trace_norm(h) + trace_norm(g) + 1e-12
        assert inner(h, g) == pytest.approx(inner(g, h), abs=1e-12)
        assert spectral_norm(h) <= trace_norm(h) + 1e-12


# --- algebra and validation --------------------------------------------------------------

def test_algebra(rng):
    h, g = random_hermitian(rng), random_hermitian(rng)
    assert (h + g - g).allclose(h, 1e-14)
    assert (-h).allclose(h * -1, 0)
    assert (h / 2).allclose(h * 0.5, 0)
    assert (h + g).trace() == pytest.approx(h.trace() + g.trace(), abs=1e-12)
    with pytest.raises(ValidationError):
        h + HermitianOperator.identity(4, 1)


def test_rejects_bad_matrices():
    with pytest.raises(ValidationError):
        HermitianOperator.from_array(np.ones((2, 3)))
    with pytest.raises(ValidationError):
        HermitianOperator.from_array(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValidationError):
        HermitianOperator.from_array(np.array([[np.nan, 0], [0, 1]]))
    with pytest.raises(ValidationError):
        HermitianOperator(2, 2, np.eye(3))


def test_near_hermitian_is_symmetrized():
    m = np.array([[1, 1e-13], [0, 1]], dtype=complex)
    h = HermitianOperator.from_array(m)
    assert np.array_equal(h.entries, h.entries.conj().T)
    with pytest.raises(ValueError):
        h.entries[0, 0] = 2


def test_unit_vector_validation():
    with pytest.raises(ValidationError):
        UnitVector(np.array([1.0, 1.0]))
    with pytest.raises(ValidationError):
        UnitVector.normalized([0, 0])
    v = UnitVector.normalized([3, 4j])
    assert abs(np.linalg.norm(v.amplitudes) - 1) < 1e-15
    assert v.projector().trace() == pytest.approx(1, abs=1e-15)


def test_literal_round_trip(rng):
    h = random_hermitian(rng, 6, (3, 2))
    back = operator_from_literal(operator_to_literal(h))
    assert back.dims == (3, 2)
    assert np.array_equal(back.entries, h.entries)
    assert np.array_equal(matrix_from_literal(matrix_to_literal(h.entries)), h.entries)
    with pytest.raises(ValidationError):
        matrix_from_literal([[1, 2]])
    with pytest.raises(ValidationError):
        operator_from_literal({"matrix": [[[1, 0]]]})
