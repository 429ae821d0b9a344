"""Seed-table ingestion: externally supplied invariants (genus-1 counts and
genus-2 virtual numbers) that the recursions consume but do not produce."""

from __future__ import annotations

from fractions import Fraction
from importlib import resources
from pathlib import Path

from .geometry import TargetGeometry
from .gw import GWKey, parse_seed_records
from .planecurves import P2_SPACE
from .series import Rat, SeriesTable, parse_rat

__all__ = [
    "packaged_seed_text",
    "load_gw_seeds",
    "load_genus1_seeds",
    "load_virtual2",
    "default_gw_seeds",
    "default_genus1_seed_name",
]

_PACKAGED = {
    "p2-genus1": "p2_genus1_gw.seeds",
    "p1xp1-genus1": "p1xp1_genus1_gw.seeds",
    "gr24-genus0-d1": "gr24_genus0_d1.seeds",
}


def packaged_seed_text(name: str) -> str:
    fname = _PACKAGED[name]
    return resources.files("charnum.data").joinpath(fname).read_text()


def load_gw_seeds(text: str, geom: TargetGeometry) -> dict[GWKey, Rat]:
    return parse_seed_records(text, geom)


def default_gw_seeds(geom: TargetGeometry) -> dict[GWKey, Rat]:
    """Minimal genus-0 seeds per built-in target.

    Projective spaces: the single line through two points.  The quadric: one
    rule of each ruling through a point.  Gr(2,4): the packaged degree-1 set.
    """
    name = geom.name
    if name.startswith("p") and name[1:].isdigit():
        r = int(name[1:])
        if r == 1:
            return {((1,), ()): Fraction(1)}
        return {((1,), (r, r)): Fraction(1)}
    if name == "p1xp1":
        return {((1, 0), (3,)): Fraction(1), ((0, 1), (3,)): Fraction(1)}
    if name == "gr24":
        return load_gw_seeds(packaged_seed_text("gr24-genus0-d1"), geom)
    raise ValueError(f"no default seeds for target {name!r}")


def default_genus1_seed_name(geom: TargetGeometry) -> str | None:
    return {"p2": "p2-genus1", "p1xp1": "p1xp1-genus1"}.get(geom.name)


def load_genus1_seeds(text: str, geom: TargetGeometry) -> dict[tuple, Rat]:
    """Genus-1 point-only seeds as {curve class: value}.

    Each record must sit in the unique psi-free stratum of its class (all
    insertions the point class, in the gated number).
    """
    point = max(range(geom.rank), key=geom.codim)
    out: dict[tuple, Rat] = {}
    for (beta, key), val in parse_seed_records(text, geom).items():
        if any(i != point for i in key):
            raise ValueError(f"genus-1 seed at beta={beta} must carry only point insertions")
        expect = geom.vdim(1, beta, 0) // (geom.codim(point) - 1)
        if len(key) != expect:
            raise ValueError(
                f"genus-1 seed at beta={beta} has {len(key)} point insertions, expected {expect}"
            )
        out[tuple(beta)] = val
    return out


def load_virtual2(text: str, dmax: int) -> SeriesTable:
    """Genus-2 virtual characteristic numbers of the plane: d;a,b,c;p/q."""
    entries = {}
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        d, mono, v = ln.split(";")
        a, b, c = (int(x) for x in mono.split(","))
        entries[((int(d),), (a, b, c))] = parse_rat(v)
    return SeriesTable(P2_SPACE, dmax, entries)


def read_seed_file(path: str | Path) -> str:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(str(p))
    return p.read_text()
