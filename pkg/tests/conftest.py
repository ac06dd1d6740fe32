"""Shared fixtures: the worked two-channel example and friends."""

import pytest

from sfspectrum import MultiChannelSystem, NumericSystem, ParamMatrix, ParamPoly

p = ParamPoly.param


def two_channel_shared_params() -> MultiChannelSystem:
    """Two-channel system whose parameters appear in several locations.

    A = [[p1, p1], [0, p2]], b1 = [0, p2]', b2 = [p3, 0]', c1 = [p4, 0],
    c2 = [p1, p1]; linearly parameterized, binary, not unitary, and known
    to have no structurally fixed spectrum.
    """
    return MultiChannelSystem(
        n=2,
        channels=((1, 1), (1, 1)),
        A=ParamMatrix.from_rows([[p(0), p(0)], [0, p(1)]], 4),
        B_blocks=(
            ParamMatrix.from_rows([[0], [p(1)]], 4),
            ParamMatrix.from_rows([[p(2)], [0]], 4),
        ),
        C_blocks=(
            ParamMatrix.from_rows([[p(3), 0]], 4),
            ParamMatrix.from_rows([[p(0), p(0)]], 4),
        ),
        q=4,
    )


def repeated_diagonal_counterexample() -> MultiChannelSystem:
    """Same shape but A = diag(p1, p1): p1's derivative matrix has rank 2."""
    return MultiChannelSystem(
        n=2,
        channels=((1, 1), (1, 1)),
        A=ParamMatrix.from_rows([[p(0), 0], [0, p(0)]], 4),
        B_blocks=(
            ParamMatrix.from_rows([[0], [p(1)]], 4),
            ParamMatrix.from_rows([[p(2)], [0]], 4),
        ),
        C_blocks=(
            ParamMatrix.from_rows([[p(3), 0]], 4),
            ParamMatrix.from_rows([[p(0), p(0)]], 4),
        ),
        q=4,
    )


def chain_with_fixed_mode() -> NumericSystem:
    """Lower-triangular chain where each channel touches only an end state.

    The closed loop stays lower triangular for every decentralized gain, so
    the middle eigenvalue 2 is fixed; witness subset is channel 1 alone.
    """
    return NumericSystem.build(
        A=[[1, 0, 0], [1, 2, 0], [0, 1, 3]],
        B_blocks=[[[0], [0], [1]], [[1], [0], [0]]],
        C_blocks=[[[0, 0, 1]], [[1, 0, 0]]],
    )


def spectra_match(a, b, tol=1e-6) -> bool:
    """Set-style matching of two eigenvalue collections within tol."""
    if len(a) != len(b):
        return False
    remaining = list(b)
    for z in a:
        best_idx = None
        best = None
        for idx, w in enumerate(remaining):
            d = abs(z - w)
            if best is None or d < best:
                best, best_idx = d, idx
        if best is None or best > tol:
            return False
        remaining.pop(best_idx)
    return True


@pytest.fixture
def worked_system():
    return two_channel_shared_params()


@pytest.fixture
def counterexample_system():
    return repeated_diagonal_counterexample()


@pytest.fixture
def classic_numeric():
    return chain_with_fixed_mode()
