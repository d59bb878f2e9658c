"""Multivariate polynomials with integer/rational coefficients.

Monomials are exponent tuples.  The monomial order everywhere is graded
reverse lexicographic; within a fixed degree, descending grevlex equals
ascending lex on the reversed exponent tuple.
"""

from __future__ import annotations

import itertools


def mono_degree(m: tuple) -> int:
    return sum(m)


def mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def grevlex_key(m: tuple):
    # sort() with this key lists monomials of one degree in descending grevlex
    return (-sum(m), tuple(reversed(m)))


def monomials_of_degree(nvars: int, d: int) -> list[tuple]:
    """All degree-d monomials in nvars variables, descending grevlex."""
    if d < 0:
        return []
    if nvars == 0:
        return [()] if d == 0 else []
    monos = []
    for bars in itertools.combinations(range(d + nvars - 1), nvars - 1):
        exps = []
        prev = -1
        for b in bars:
            exps.append(b - prev - 1)
            prev = b
        exps.append(d + nvars - 2 - prev)
        monos.append(tuple(exps))
    monos.sort(key=grevlex_key)
    return monos


class Polynomial:
    """Immutable sparse polynomial: {exponent tuple: coefficient}."""

    __slots__ = ("nvars", "terms", "_key")

    def __init__(self, nvars: int, terms: dict):
        self.nvars = nvars
        self.terms = {m: c for m, c in terms.items() if c != 0}
        self._key = None

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, m: tuple, c=1) -> "Polynomial":
        return cls(len(m), {m: c})

    def key(self):
        """Hashable canonical form, used for caching multiplication matrices."""
        if self._key is None:
            self._key = tuple(sorted(self.terms.items()))
        return self._key

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {mono_degree(m) for m in self.terms}
        return len(degs) <= 1

    def __add__(self, other: "Polynomial") -> "Polynomial":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Polynomial(self.nvars, t)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) - c
        return Polynomial(self.nvars, t)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Polynomial(self.nvars, t)

    def scale(self, c) -> "Polynomial":
        return Polynomial(self.nvars, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.key()))

    def map_coeffs(self, fn) -> "Polynomial":
        return Polynomial(self.nvars, {m: fn(c) for m, c in self.terms.items()})

    def render(self, names: list[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: grevlex_key(t[0])):
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return self.render([f"x{i}" for i in range(self.nvars)])
