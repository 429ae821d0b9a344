r"""Graded exponential generating functions over exact rationals.

A potential like

    G(s, u, v, w) = sum_{d>0} exp(d s) sum_{a,b,c} u^a/a! v^b/b! w^c/c! N_d(a,b,c)

is stored as a sparse table mapping (curve class, exponent multi-index) to the
invariant N itself, never to the expanded EGF coefficient N/(a! b! c!).  The
exp(d s) grading is structural: degree variables (one per divisor class) are
carried by the curve-class key and are never expanded as power series, so a
derivative by a degree variable is a grading-weighted scaling.  Factorial
weights enter only through products (binomial convolution) and through
multiplication by monomials in the exponent variables.

Everything is a `fractions.Fraction`; no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator, Mapping

Rat = Fraction

__all__ = [
    "Rat",
    "VarSpace",
    "SeriesTable",
    "DiffOperator",
    "series_product",
    "partial_derivative",
    "apply_operator",
]


class VariableMismatch(ValueError):
    """Raised when two tables live over different variable sets."""


@dataclass(frozen=True)
class VarSpace:
    """Names of the structural degree variables and of the exponent variables."""

    degree_vars: tuple[str, ...]
    exp_vars: tuple[str, ...]

    def exp_index(self, name: str) -> int:
        return self.exp_vars.index(name)

    def degree_index(self, name: str) -> int:
        return self.degree_vars.index(name)

    def __contains__(self, name: str) -> bool:
        return name in self.degree_vars or name in self.exp_vars


Key = tuple[tuple[int, ...], tuple[int, ...]]  # (curve class, exponent multi-index)


def _as_rat(x) -> Rat:
    if isinstance(x, float):
        raise TypeError("floats are not allowed in exact tables")
    return Fraction(x)


class SeriesTable:
    """Sparse graded EGF table; immutable by convention (ops return new tables).

    `dmax` bounds the total degree |curve class| of trusted strata; entries
    beyond it are never stored, absent entries within it are exactly zero.
    """

    __slots__ = ("space", "dmax", "entries")

    def __init__(self, space: VarSpace, dmax: int, entries: Mapping[Key, Rat] | None = None):
        self.space = space
        self.dmax = dmax
        table: dict[Key, Rat] = {}
        if entries:
            for (deg, mono), val in entries.items():
                v = _as_rat(val)
                if v == 0:
                    continue
                if len(deg) != len(space.degree_vars) or len(mono) != len(space.exp_vars):
                    raise ValueError(f"key {(deg, mono)} does not fit variable space {space}")
                if any(x < 0 for x in deg) or any(x < 0 for x in mono):
                    raise ValueError(f"negative key component in {(deg, mono)}")
                if sum(deg) <= dmax:
                    table[(tuple(deg), tuple(mono))] = v
        self.entries = table

    # -- basic protocol ----------------------------------------------------

    def __iter__(self) -> Iterator[tuple[Key, Rat]]:
        return iter(sorted(self.entries.items()))

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesTable):
            return NotImplemented
        return self.space == other.space and self.entries == other.entries

    def __hash__(self):
        raise TypeError("SeriesTable is not hashable")

    def __repr__(self) -> str:
        return f"SeriesTable({self.space}, dmax={self.dmax}, {len(self.entries)} entries)"

    def is_zero(self) -> bool:
        return not self.entries

    def coeff(self, degrees: Iterable[int], exponents: Iterable[int]) -> Rat:
        return self.entries.get((tuple(degrees), tuple(exponents)), Fraction(0))

    def _check_same_space(self, other: "SeriesTable") -> None:
        if self.space != other.space:
            raise VariableMismatch(f"{self.space} vs {other.space}")

    # -- linear structure --------------------------------------------------

    def __add__(self, other: "SeriesTable") -> "SeriesTable":
        self._check_same_space(other)
        dmax = min(self.dmax, other.dmax)
        out = dict(self.entries)
        for key, val in other.entries.items():
            s = out.get(key, Fraction(0)) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return SeriesTable(self.space, dmax, out)

    def __sub__(self, other: "SeriesTable") -> "SeriesTable":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "SeriesTable":
        c = _as_rat(c)
        if c == 0:
            return SeriesTable(self.space, self.dmax)
        return SeriesTable(self.space, self.dmax, {k: v * c for k, v in self.entries.items()})

    def __mul__(self, other: "SeriesTable") -> "SeriesTable":
        return series_product(self, other)

    # -- calculus ----------------------------------------------------------

    def partial(self, var: str) -> "SeriesTable":
        """EGF partial derivative.

        Degree variable: scale each stratum by the matching partial degree.
        Exponent variable: shift that slot down by one; the stored invariant
        is unchanged (d/dv of v^b/b! is v^{b-1}/(b-1)!).
        """
        sp = self.space
        out: dict[Key, Rat] = {}
        if var in sp.degree_vars:
            i = sp.degree_index(var)
            for (deg, mono), val in self.entries.items():
                if deg[i]:
                    out[(deg, mono)] = val * deg[i]
        elif var in sp.exp_vars:
            i = sp.exp_index(var)
            for (deg, mono), val in self.entries.items():
                if mono[i]:
                    m = list(mono)
                    m[i] -= 1
                    out[(deg, tuple(m))] = val
        else:
            raise KeyError(f"unknown variable {var!r} in {sp}")
        return SeriesTable(sp, self.dmax, out)

    def times_monomial(self, powers: Mapping[str, int], coef=1) -> "SeriesTable":
        """Multiply by coef * prod(var^k); raises exponent slots with the EGF factor.

        Multiplying v^b/b! by v gives (b+1) * v^{b+1}/(b+1)!, so the stored
        invariant picks up (m+1)...(m+k) per slot.
        """
        coef = _as_rat(coef)
        if coef == 0:
            return SeriesTable(self.space, self.dmax)
        sp = self.space
        shift = [0] * len(sp.exp_vars)
        for name, k in powers.items():
            if k < 0:
                raise ValueError("monomial powers must be non-negative")
            shift[sp.exp_index(name)] += k
        out: dict[Key, Rat] = {}
        for (deg, mono), val in self.entries.items():
            fac = coef
            new = list(mono)
            for i, k in enumerate(shift):
                if k:
                    new[i] += k
                    fac *= factorial(new[i]) // factorial(mono[i])
            key = (deg, tuple(new))
            s = out.get(key, Fraction(0)) + val * fac
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return SeriesTable(sp, self.dmax, out)

    def truncate(self, dmax: int) -> "SeriesTable":
        return SeriesTable(self.space, dmax, {k: v for k, v in self.entries.items() if sum(k[0]) <= dmax})

    def filter_keys(self, keep) -> "SeriesTable":
        return SeriesTable(self.space, self.dmax, {k: v for k, v in self.entries.items() if keep(*k)})

    def substitute(
        self,
        new_space: VarSpace,
        exp_map: Mapping[str, list[tuple[Rat, str]]],
        degree_map: Mapping[str, str] | None = None,
    ) -> "SeriesTable":
        """Linear change of exponent variables, e.g. x -> u + 2v.

        Each old exponent variable maps to a list of (coefficient, new name);
        an empty list sets it to zero.  Degree variables may only be renamed.
        Works on plain coefficients (value / m!) and restores factorials at
        the end, which is exactly the EGF composition rule.
        """
        degree_map = degree_map or {}
        old_sp = self.space
        if len(new_space.degree_vars) != len(old_sp.degree_vars):
            raise VariableMismatch("degree variables may only be renamed")
        for old in old_sp.degree_vars:
            target = degree_map.get(old, old)
            if target not in new_space.degree_vars:
                raise VariableMismatch(f"no target degree variable for {old!r}")
        perm = [new_space.degree_index(degree_map.get(old, old)) for old in old_sp.degree_vars]
        targets: list[list[tuple[Rat, int]]] = []
        for old in old_sp.exp_vars:
            if old not in exp_map:
                raise KeyError(f"assignment must cover every exponent variable; missing {old!r}")
            targets.append([(_as_rat(c), new_space.exp_index(n)) for c, n in exp_map[old]])

        nexp = len(new_space.exp_vars)
        out: dict[Key, Rat] = {}
        for (deg, mono), val in self.entries.items():
            ndeg = [0] * len(new_space.degree_vars)
            for i, d in enumerate(deg):
                ndeg[perm[i]] += d
            plain = val
            for m in mono:
                plain /= factorial(m)
            # expand slot by slot: (sum_j c_j z_j)^m distributes multinomially
            acc: dict[tuple[int, ...], Rat] = {tuple([0] * nexp): plain}
            for i, m in enumerate(mono):
                if m == 0:
                    continue
                tgt = targets[i]
                if not tgt:
                    acc = {}
                    break
                nxt: dict[tuple[int, ...], Rat] = {}
                for split in _compositions(m, len(tgt)):
                    w = Fraction(_multinomial(m, split))
                    term = Fraction(1)
                    bump = [0] * nexp
                    for (c, j), k in zip(tgt, split):
                        if k:
                            term *= c**k
                            bump[j] += k
                    if term == 0:
                        continue
                    for base, pv in acc.items():
                        key = tuple(b + e for b, e in zip(base, bump))
                        s = nxt.get(key, Fraction(0)) + pv * w * term
                        if s:
                            nxt[key] = s
                        else:
                            nxt.pop(key, None)
                acc = nxt
            for nmono, pv in acc.items():
                v = pv
                for m in nmono:
                    v *= factorial(m)
                key = (tuple(ndeg), nmono)
                s = out.get(key, Fraction(0)) + v
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return SeriesTable(new_space, self.dmax, out)

    # -- canonical text form -------------------------------------------------

    def to_text(self) -> str:
        head = "vars " + ",".join(self.space.degree_vars) + ";" + ",".join(self.space.exp_vars)
        lines = [head, f"dmax {self.dmax}"]
        for (deg, mono), val in sorted(self.entries.items()):
            lines.append(
                ",".join(map(str, deg)) + ";" + ",".join(map(str, mono)) + ";" + format_rat(val)
            )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SeriesTable":
        lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln and not ln.startswith("#")]
        if not lines or not lines[0].startswith("vars "):
            raise ValueError("missing 'vars' header")
        degs, exps = lines[0][5:].split(";")
        space = VarSpace(tuple(x for x in degs.split(",") if x), tuple(x for x in exps.split(",") if x))
        if not lines[1].startswith("dmax "):
            raise ValueError("missing 'dmax' header")
        dmax = int(lines[1][5:])
        entries: dict[Key, Rat] = {}
        for ln in lines[2:]:
            d, m, v = ln.split(";")
            key = (
                tuple(int(x) for x in d.split(",") if x),
                tuple(int(x) for x in m.split(",") if x),
            )
            entries[key] = parse_rat(v)
        return cls(space, dmax, entries)


def format_rat(x: Rat) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Rat:
    return Fraction(s)


def _compositions(m: int, parts: int):
    """All ways to write m as an ordered sum of `parts` non-negative integers."""
    if parts == 1:
        yield (m,)
        return
    for first in range(m + 1):
        for rest in _compositions(m - first, parts - 1):
            yield (first,) + rest


def _multinomial(m: int, split: tuple[int, ...]) -> int:
    out = 1
    rem = m
    for k in split:
        out *= comb(rem, k)
        rem -= k
    return out


def series_product(f: SeriesTable, g: SeriesTable) -> SeriesTable:
    """EGF product: curve classes add, exponent slots convolve binomially."""
    f._check_same_space(g)
    sp = f.space
    dmax = min(f.dmax, g.dmax)
    # group by total degree so over-bound pairs are skipped early
    by_deg_g: dict[int, list[tuple[Key, Rat]]] = {}
    for key, val in g.entries.items():
        by_deg_g.setdefault(sum(key[0]), []).append((key, val))
    out: dict[Key, Rat] = {}
    for (deg1, m1), v1 in f.entries.items():
        room = dmax - sum(deg1)
        if room < 0:
            continue
        for tot2, items in by_deg_g.items():
            if tot2 > room:
                continue
            for (deg2, m2), v2 in items:
                w = v1 * v2
                for a, b in zip(m1, m2):
                    if a and b:
                        w *= comb(a + b, a)
                key = (tuple(x + y for x, y in zip(deg1, deg2)), tuple(a + b for a, b in zip(m1, m2)))
                s = out.get(key, Fraction(0)) + w
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
    return SeriesTable(sp, dmax, out)


def partial_derivative(f: SeriesTable, var: str) -> SeriesTable:
    return f.partial(var)


@dataclass(frozen=True)
class DiffOperator:
    """Linear differential operator: sum of coef * monomial * d/d(var) terms.

    Monomials are over the exponent variables, e.g. the plane-curve line and
    point operators  L = d/ds + 2v d/du,  P = 2v d/ds + (2v^2+2w) d/du.
    """

    terms: tuple[tuple[Rat, tuple[tuple[str, int], ...], str], ...]

    @classmethod
    def build(cls, terms: Iterable[tuple[Rat | int, Mapping[str, int], str]]) -> "DiffOperator":
        packed = []
        for coef, mono, var in terms:
            packed.append((_as_rat(coef), tuple(sorted(mono.items())), var))
        return cls(tuple(packed))

    def __call__(self, f: SeriesTable) -> SeriesTable:
        out = SeriesTable(f.space, f.dmax)
        for coef, mono, var in self.terms:
            out = out + f.partial(var).times_monomial(dict(mono), coef)
        return out


def apply_operator(f: SeriesTable, op: DiffOperator) -> SeriesTable:
    return op(f)
