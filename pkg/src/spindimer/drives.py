"""Closed-form scalar time functions.

A :class:`Drive` is a finite sum ``sum_j amp_j * f_j(rate_j * t)`` over a
small catalogue of elementary shapes. Drives are immutable, callable at any
real ``t`` and closed under addition and scalar multiplication, which is all
the schedule algebra needs. The same term table is handed to the compiled
integrator so it can evaluate Hamiltonians without calling back into Python.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from numbers import Real


class Shape(IntEnum):
    CONST = 0
    SECH = 1
    COSH = 2
    SIN = 3
    COS = 4
    TANH = 5
    GAUSS = 6


# beyond this argument cosh overflows double precision
_OVERFLOW = 700.0


def _sech(x: float) -> float:
    return 0.0 if abs(x) > _OVERFLOW else 1.0 / math.cosh(x)


_EVAL = {
    Shape.CONST: lambda x: 1.0,
    Shape.SECH: _sech,
    Shape.COSH: math.cosh,
    Shape.SIN: math.sin,
    Shape.COS: math.cos,
    Shape.TANH: math.tanh,
    Shape.GAUSS: lambda x: math.exp(-x * x),
}


@dataclass(frozen=True)
class Term:
    shape: Shape
    amp: float
    rate: float = 0.0

    def __call__(self, t: float) -> float:
        return self.amp * _EVAL[self.shape](self.rate * t)


@dataclass(frozen=True)
class Drive:
    terms: tuple[Term, ...] = ()

    def __call__(self, t: float) -> float:
        return sum(term(t) for term in self.terms)

    def __add__(self, other):
        if isinstance(other, Drive):
            return Drive(self.terms + other.terms)
        if isinstance(other, Real):
            return self + constant(float(other))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        if isinstance(other, (Drive, Real)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, k):
        if not isinstance(k, Real):
            return NotImplemented
        return Drive(tuple(Term(t.shape, t.amp * float(k), t.rate) for t in self.terms))

    __rmul__ = __mul__

    def __truediv__(self, k):
        if not isinstance(k, Real):
            return NotImplemented
        return self * (1.0 / float(k))

    def is_zero(self) -> bool:
        return all(t.amp == 0.0 for t in self.terms)

    def table(self):
        """``(shapes, amps, rates)`` lists for the compiled kernel."""
        return (
            [int(t.shape) for t in self.terms],
            [t.amp for t in self.terms],
            [t.rate for t in self.terms],
        )


ZERO = Drive()


def constant(value: float) -> Drive:
    return Drive((Term(Shape.CONST, float(value)),))


def sech(amp: float, rate: float) -> Drive:
    return Drive((Term(Shape.SECH, float(amp), float(rate)),))


def cosh(amp: float, rate: float) -> Drive:
    return Drive((Term(Shape.COSH, float(amp), float(rate)),))


def sin(amp: float, rate: float) -> Drive:
    return Drive((Term(Shape.SIN, float(amp), float(rate)),))


def cos(amp: float, rate: float) -> Drive:
    return Drive((Term(Shape.COS, float(amp), float(rate)),))


def tanh(amp: float, rate: float) -> Drive:
    return Drive((Term(Shape.TANH, float(amp), float(rate)),))


def gauss(amp: float, rate: float) -> Drive:
    return Drive((Term(Shape.GAUSS, float(amp), float(rate)),))
