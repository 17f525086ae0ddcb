"""Loaders for the packaged verification data.

All tables ship as line-oriented text: '#' starts a comment, blank lines are
skipped, and columns are separated by '|'.  The conservation-law file uses
small [Tn] blocks of 'key: value' lines instead, because its entries span
several long expressions.  A --data-dir override may point at a directory
holding files with the same names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..grammar import parse
from ..kernel import Expr

__all__ = [
    "DataError",
    "load_catalog",
    "load_brackets",
    "load_subalgebras",
    "load_table",
    "load_conservation",
    "CatalogRow",
    "BracketCell",
    "TableRow",
    "ConservationRow",
]


class DataError(ValueError):
    pass


def _read(name: str, data_dir: str | Path | None) -> str:
    if data_dir is not None:
        p = Path(data_dir) / name
        if not p.exists():
            raise DataError(f"missing data file: {p}")
        return p.read_text()
    ref = resources.files(__package__) / name
    if not ref.is_file():
        raise DataError(f"missing packaged data file: {name}")
    return ref.read_text()


def _rows(text: str) -> list[list[str]]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        out.append([c.strip() for c in line.split("|")])
    return out


@dataclass(frozen=True)
class CatalogRow:
    index: int
    xi_t: Expr
    xi_x: Expr
    xi_y: Expr
    kind: str
    psi: Expr


def load_catalog(data_dir=None) -> list[CatalogRow]:
    rows = []
    for cols in _rows(_read("catalog.txt", data_dir)):
        if len(cols) != 6:
            raise DataError(f"catalog.txt: expected 6 columns, got {cols}")
        idx, xt, xx, xy, kind, psi = cols
        rows.append(CatalogRow(int(idx), parse(xt), parse(xx), parse(xy), kind, parse(psi)))
    if [r.index for r in rows] != list(range(1, 11)):
        raise DataError("catalog.txt must list X1..X10 in order")
    return rows


@dataclass(frozen=True)
class BracketCell:
    i: int
    j: int
    combo: str  # "0" or a combination of X1..X10


def load_brackets(data_dir=None) -> tuple[tuple[int, ...], list[BracketCell]]:
    """Returns (flip index set, cells).  The flip set records the generator
    orientation the bracket table is written in, relative to catalog.txt."""
    flips: tuple[int, ...] = ()
    cells = []
    for cols in _rows(_read("brackets.txt", data_dir)):
        if cols[0].startswith("flip:"):
            flips = tuple(int(k) for k in cols[0].split(":")[1].split())
            continue
        if len(cols) != 2:
            raise DataError(f"brackets.txt: bad line {cols}")
        ij, combo = cols
        i, j = (int(k) for k in ij.split())
        cells.append(BracketCell(i, j, combo))
    if len(cells) != 100:
        raise DataError(f"brackets.txt: expected 100 cells, got {len(cells)}")
    return flips, cells


def load_subalgebras(data_dir=None) -> list[tuple[str, tuple[int, ...], str | None]]:
    out = []
    for cols in _rows(_read("subalgebras.txt", data_dir)):
        if len(cols) not in (2, 3):
            raise DataError(f"subalgebras.txt: bad line {cols}")
        name, gens = cols[0], cols[1]
        note = cols[2] if len(cols) == 3 else None
        indices = []
        for tok in gens.split():
            m = re.fullmatch(r"X_?([0-9]+)", tok)
            if m is None:
                raise DataError(f"subalgebras.txt: bad generator token {tok!r}")
            indices.append(int(m.group(1)))
        out.append((name, tuple(indices), note))
    return out


@dataclass(frozen=True)
class TableRow:
    row_id: str
    potentials: tuple[str, ...]      # one or more admitted potential forms
    generators: tuple[str, ...]      # generator combinations, or a subalgebra name (grid)
    printed_u_coeff: str | None      # e.g. "1/2*psi" on sCKV rows
    invariants: tuple[str, ...]
    noether: str | None              # "yes" / "no"
    conservation: str | None         # "T1".."T10"
    alt_potentials: tuple[str, ...]  # dual-reading variants, empty if none
    alt_generators: tuple[str, ...]
    note: str | None

    @property
    def has_alt(self) -> bool:
        return bool(self.alt_potentials or self.alt_generators)


def load_table(table_id: str, data_dir=None) -> list[TableRow]:
    name = {"3": "table3.txt", "4": "table4.txt",
            "grid": "table_grid.txt", "grid1": "table_grid1.txt"}.get(table_id)
    if name is None:
        raise DataError(f"unknown table id {table_id!r}")

    def col(cols, k):
        v = cols[k].strip() if len(cols) > k else ""
        return v if v and v != "-" else None

    rows = []
    for n, cols in enumerate(_rows(_read(name, data_dir)), start=1):
        fields = {"pot": cols[0], "gen": cols[1], "ucoeff": None, "inv": None,
                  "noether": None, "claw": None, "alt_pot": None,
                  "alt_gen": None, "note": None}
        if table_id == "3":
            if len(cols) != 6:
                raise DataError(f"table3.txt row {n}: expected 6 columns")
            fields["ucoeff"], fields["inv"], fields["noether"], fields["claw"] = cols[2:]
        elif table_id == "4":
            fields["noether"] = "yes"
            fields["alt_pot"], fields["note"] = col(cols, 2), col(cols, 3)
        elif table_id == "grid1":
            fields["alt_pot"], fields["alt_gen"], fields["note"] = (
                col(cols, 2), col(cols, 3), col(cols, 4))

        def split(v):
            return tuple(s.strip() for s in v.split(";") if s.strip()) if v else ()
        rows.append(TableRow(
            row_id=f"{table_id}.{n}",
            potentials=split(fields["pot"]),
            generators=split(fields["gen"]),
            printed_u_coeff=None if fields["ucoeff"] in (None, "-") else fields["ucoeff"],
            invariants=split(fields["inv"]),
            noether=fields["noether"],
            conservation=None if fields["claw"] in (None, "-") else fields["claw"],
            alt_potentials=split(fields["alt_pot"]),
            alt_generators=split(fields["alt_gen"]),
            note=fields["note"],
        ))
    return rows


@dataclass(frozen=True)
class ConservationRow:
    label: str
    generator: str
    potential: str
    components: tuple[str, str, str]
    alt_components: dict[str, str]
    note: str | None


def load_conservation(data_dir=None) -> list[ConservationRow]:
    text = _read("conservation.txt", data_dir)
    blocks: list[dict[str, str]] = []
    cur: dict[str, str] | None = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = re.fullmatch(r"\[(T[0-9]+)\]", line)
        if m:
            cur = {"label": m.group(1)}
            blocks.append(cur)
            continue
        if cur is None or ":" not in line:
            raise DataError(f"conservation.txt: stray line {line!r}")
        key, value = line.split(":", 1)
        cur[key.strip()] = value.strip()
    rows = []
    for b in blocks:
        try:
            comps = (b["Tt"], b["Tx"], b["Ty"])
        except KeyError as err:
            raise DataError(f"conservation.txt: {b.get('label')} missing {err}") from None
        alts = {k[4:]: v for k, v in b.items() if k.startswith("alt_")}
        rows.append(ConservationRow(
            label=b["label"],
            generator=b.get("generator", ""),
            potential=b["potential"],
            components=comps,
            alt_components=alts,
            note=b.get("note"),
        ))
    return rows
