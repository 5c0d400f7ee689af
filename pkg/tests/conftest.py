"""
Shared fixtures: coefficient fields, a seeded generator and small system builders.
"""

from typing import Sequence

import numpy as np
import pytest

from config import Config
from utils.field import FieldCtx, FieldElem
from utils.poly import Poly, PolySystem


@pytest.fixture
def q() -> FieldCtx:
    return FieldCtx.rationals()


@pytest.fixture
def f2() -> FieldCtx:
    return FieldCtx.prime(2)


@pytest.fixture
def f3() -> FieldCtx:
    return FieldCtx.prime(3)


@pytest.fixture
def f5() -> FieldCtx:
    return FieldCtx.prime(5)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(20240917))


@pytest.fixture
def config() -> Config:
    return Config()


@pytest.fixture
def variables():
    """variables(ctx, count) -> [x0, x1, ...] as Poly objects."""
    def build(ctx: FieldCtx, count: int):
        return [Poly.variable(ctx, count, i) for i in range(count)]
    return build


@pytest.fixture
def system():
    """system(ctx, polys, names=None, **metadata) -> PolySystem with x0.. names by default."""
    def build(ctx: FieldCtx, polys: Sequence[Poly], names=None, **metadata) -> PolySystem:
        names = names or [f"x{i}" for i in range(polys[0].num_vars)]
        return PolySystem(ctx, names, polys, {k: str(v) for k, v in metadata.items()})
    return build


@pytest.fixture
def boolsys_point():
    """Point encoding a truth assignment: x0 = 1, true is -1 (or 1 in characteristic 2), false is 1 (or 0)."""
    def build(assignment: Sequence[bool], ctx: FieldCtx) -> Sequence[FieldElem]:
        one = ctx.one()
        if ctx.characteristic == 2:
            return [one] + [one if value else ctx.zero() for value in assignment]
        return [one] + [-one if value else one for value in assignment]
    return build
