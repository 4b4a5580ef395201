"""Property-based tests of the core linear-algebra invariants."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from entscan import (
    DensityMatrix,
    enumerate_label_subsets,
    generalized_transpose,
    kron,
    singular_values,
    trace_norm,
    vec,
)
from entscan.reshape import complement_labels

finite = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


def complex_matrices(rows, cols):
    return st.tuples(
        arrays(np.float64, (rows, cols), elements=finite),
        arrays(np.float64, (rows, cols), elements=finite),
    ).map(lambda pair: pair[0] + 1j * pair[1])


def state_from(re, im):
    """Turn two real squares into a valid density matrix via G G^dag."""
    g = re + 1j * im
    mat = g @ g.conj().T + 1e-3 * np.eye(g.shape[0])  # keep the trace away from 0
    return mat / mat.trace().real


@settings(max_examples=40, deadline=None)
@given(
    x=complex_matrices(3, 3),
    y=complex_matrices(3, 3),
    z=complex_matrices(3, 3),
)
def test_vec_of_triple_product(x, y, z):
    lhs = vec(x @ y @ z)
    rhs = kron(z.T, x) @ vec(y)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(a=complex_matrices(2, 2), b=complex_matrices(2, 3))
def test_kron_singular_values_multiply(a, b):
    products = np.sort(np.outer(singular_values(a), singular_values(b)).ravel())[::-1]
    direct = singular_values(kron(a, b))
    assert np.max(np.abs(products - direct)) < 1e-10


@settings(max_examples=40, deadline=None)
@given(a=complex_matrices(4, 4), b=complex_matrices(4, 4))
def test_trace_norm_triangle(a, b):
    assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-10


@settings(max_examples=25, deadline=None)
@given(
    re=arrays(np.float64, (6, 6), elements=finite),
    im=arrays(np.float64, (6, 6), elements=finite),
)
def test_complement_subsets_share_singular_spectra(re, im):
    rho = DensityMatrix(state_from(re, im), (2, 3))
    for labels in enumerate_label_subsets(2, dedupe=True):
        s_y = singular_values(generalized_transpose(rho, labels).mat)
        s_c = singular_values(
            generalized_transpose(rho, complement_labels(labels, 2)).mat
        )
        assert np.max(np.abs(s_y - s_c)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(
    re=arrays(np.float64, (4, 4), elements=finite),
    im=arrays(np.float64, (4, 4), elements=finite),
)
def test_hermitian_subsets_norm_at_least_one(re, im):
    rho = DensityMatrix(state_from(re, im), (2, 2))
    for subs in ([0], [1], [0, 1]):
        from entscan import partial_transpose

        assert trace_norm(partial_transpose(rho, subs)) >= 1.0 - 1e-10
