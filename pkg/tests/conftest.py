from __future__ import annotations

import pytest

from cpnets.core import ClassSpec, Completeness, CpNet, Cpt
from cpnets.classes import enumerate_class


SPEC3 = ClassSpec(3, 2, 2)


def _cpt(v, parents, rows):
    return Cpt.from_rows(v, parents, rows)


def net_parity():
    """A unconditional; B flips with A; C prefers c iff A and B agree."""
    return CpNet(
        SPEC3,
        (
            _cpt(0, (), {(): (0, 1)}),
            _cpt(1, (0,), {(0,): (0, 1), (1,): (1, 0)}),
            _cpt(
                2,
                (0, 1),
                {(0, 0): (0, 1), (0, 1): (1, 0), (1, 0): (1, 0), (1, 1): (0, 1)},
            ),
        ),
    )


def net_cyc_consistent():
    """Cyclic dependency graph (B and C depend on each other) yet consistent."""
    return CpNet(
        SPEC3,
        (
            _cpt(0, (), {(): (0, 1)}),
            _cpt(
                1,
                (0, 2),
                {(0, 0): (0, 1), (0, 1): (0, 1), (1, 0): (1, 0), (1, 1): (0, 1)},
            ),
            _cpt(
                2,
                (0, 1),
                {(0, 0): (0, 1), (0, 1): (1, 0), (1, 0): (1, 0), (1, 1): (1, 0)},
            ),
        ),
        allow_cyclic=True,
    )


def net_cyc_inconsistent():
    """Cyclic and inconsistent: its preference graph contains a cycle."""
    return CpNet(
        SPEC3,
        (
            _cpt(0, (), {(): (0, 1)}),
            _cpt(
                1,
                (0, 2),
                {(0, 0): (0, 1), (0, 1): (0, 1), (1, 0): (1, 0), (1, 1): (0, 1)},
            ),
            _cpt(2, (1,), {(0,): (0, 1), (1,): (1, 0)}),
        ),
        allow_cyclic=True,
    )


def net_dense():
    return CpNet(
        SPEC3,
        (
            _cpt(0, (), {(): (0, 1)}),
            _cpt(1, (0,), {(0,): (0, 1), (1,): (1, 0)}),
            _cpt(
                2,
                (0, 1),
                {(0, 0): (0, 1), (0, 1): (0, 1), (1, 0): (0, 1), (1, 1): (1, 0)},
            ),
        ),
    )


def net_fan():
    return CpNet(
        SPEC3,
        (
            _cpt(0, (), {(): (0, 1)}),
            _cpt(1, (0,), {(0,): (0, 1), (1,): (1, 0)}),
            _cpt(2, (0,), {(0,): (0, 1), (1,): (1, 0)}),
        ),
    )


def net_sparse():
    return CpNet(
        SPEC3,
        (
            _cpt(0, (), {(): (0, 1)}),
            _cpt(1, (0,), {(0,): (0, 1), (1,): (1, 0)}),
            _cpt(2, (), {(): (0, 1)}),
        ),
    )


def net_and4():
    spec = ClassSpec(4, 2, 2)
    return CpNet(
        spec,
        (
            _cpt(0, (), {(): (0, 1)}),
            _cpt(1, (0,), {(0,): (0, 1), (1,): (1, 0)}),
            _cpt(
                2,
                (0, 1),
                {(0, 0): (0, 1), (0, 1): (0, 1), (1, 0): (0, 1), (1, 1): (1, 0)},
            ),
            _cpt(3, (), {(): (0, 1)}),
        ),
    )


@pytest.fixture(scope="session")
def parity():
    return net_parity()


@pytest.fixture(scope="session")
def cyc_consistent():
    return net_cyc_consistent()


@pytest.fixture(scope="session")
def cyc_inconsistent():
    return net_cyc_inconsistent()


@pytest.fixture(scope="session")
def dense():
    return net_dense()


@pytest.fixture(scope="session")
def fan():
    return net_fan()


@pytest.fixture(scope="session")
def sparse():
    return net_sparse()


@pytest.fixture(scope="session")
def and4():
    return net_and4()


@pytest.fixture(scope="session")
def cls_3_2_2():
    return enumerate_class(ClassSpec(3, 2, 2))


@pytest.fixture(scope="session")
def cls_3_2_1():
    return enumerate_class(ClassSpec(3, 2, 1))


@pytest.fixture(scope="session")
def cls_3_2_0():
    return enumerate_class(ClassSpec(3, 2, 0))


@pytest.fixture(scope="session")
def cls_2_2_1():
    return enumerate_class(ClassSpec(2, 2, 1))


@pytest.fixture(scope="session")
def cls_2_2_1_inc():
    return enumerate_class(ClassSpec(2, 2, 1, Completeness.ALLOW_INCOMPLETE))


@pytest.fixture(scope="session")
def cls_2_2_0_inc():
    return enumerate_class(ClassSpec(2, 2, 0, Completeness.ALLOW_INCOMPLETE))
