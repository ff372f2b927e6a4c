import random
from fractions import Fraction

import pytest

from dfan.malgrange import build_presentation
from dfan.parse import parse_operator, parse_polynomial
from dfan.weyl import DiffOp, RingSignature

IDEALS = {
    "normal_crossing": (2, 2, ["x1", "x2"]),
    "diagonal": (1, 2, ["x1", "x1"]),
    "cusp": (1, 1, ["x1^2"]),
    "line": (1, 1, ["x1"]),
}

_PRES = {}


def presentation(name: str):
    if name not in _PRES:
        n, p, fs = IDEALS[name]
        sig = RingSignature(n, p)
        _PRES[name] = build_presentation([parse_polynomial(f, sig) for f in fs])
    return _PRES[name]


@pytest.fixture(scope="session")
def nc():
    return presentation("normal_crossing")


@pytest.fixture(scope="session")
def diag():
    return presentation("diagonal")


@pytest.fixture(scope="session")
def cusp():
    return presentation("cusp")


@pytest.fixture(scope="session")
def line():
    return presentation("line")


def op(text: str, n: int, p: int, in_d: bool = False) -> DiffOp:
    return parse_operator(text, RingSignature(n, p), in_d=in_d)


def random_op(rng: random.Random, sig: RingSignature, terms: int = 3, top: int = 2, with_z: bool = True) -> DiffOp:
    out = {}
    L = sig.length
    for _ in range(rng.randint(1, terms)):
        e = [rng.randint(0, top) if rng.random() < 0.5 else 0 for _ in range(L)]
        if not with_z:
            e[-1] = 0
        out[tuple(e)] = Fraction(rng.randint(-3, 3), rng.choice([1, 1, 2, 3]))
    return DiffOp(sig, out)


def random_homogeneous(rng: random.Random, sig: RingSignature, degree: int, weight: int, terms: int = 3) -> DiffOp:
    """Random operator, homogeneous for h-degree and for wt(coords) = 1, wt(d) = -1.

    Both gradings together leave finitely many monomials in each piece, which
    makes division by such operators terminate for every order used here.
    """
    m = sig.m
    out = {}
    for _ in range(terms * 4):
        if len(out) >= terms:
            break
        k = rng.randint(0, degree)
        d = degree - k
        c = d + weight
        if c < 0:
            continue
        e = [0] * sig.length
        for _ in range(c):
            e[rng.randrange(m)] += 1
        for _ in range(d):
            e[m + rng.randrange(m)] += 1
        e[-1] = k
        out[tuple(e)] = Fraction(rng.choice([-2, -1, 1, 1, 2, 3]), rng.choice([1, 2]))
    return DiffOp(sig, out)
