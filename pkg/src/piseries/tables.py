"""Row model and parser for the 1/pi series data files.

A file is line oriented: comments start with '#', each record has ten
whitespace-separated columns (id case d x y kind A B C ref) plus
optional key=value extras.  x and y accept the power notation used in
the source tables (e.g. 1/52^2, -8/7^2, 64^2/7^2).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .cases import SeriesCase, case_from_tag
from .constexpr import ConstExpr, parse_const

_POW = re.compile(r"^(-?)(\d+)(?:\^(\d+))?(?:/(\d+)(?:\^(\d+))?)?$")


def parse_rational(s: str) -> Fraction:
    m = _POW.match(s.strip())
    if not m:
        raise ValueError(f"bad rational {s!r}")
    sign, num, ne, den, de = m.groups()
    v = Fraction(int(num) ** (int(ne) if ne else 1))
    if den:
        v /= Fraction(int(den) ** (int(de) if de else 1))
    return -v if sign == "-" else v


@dataclass
class TableRow:
    id: str
    case: SeriesCase
    discs: tuple
    x: Fraction
    y: Fraction
    kind: str                    # "n" or "m"
    A: int
    B: int
    C: ConstExpr
    ref: str = "-"
    alt_x: Fraction | None = None
    alt_y: Fraction | None = None
    alt_C: ConstExpr | None = None
    options: dict = field(default_factory=dict)

    def has_alternate(self) -> bool:
        return (self.alt_x, self.alt_y, self.alt_C) != (None, None, None)

    def alternate(self) -> "TableRow":
        """The row with every documented alternate value substituted."""
        import dataclasses
        return dataclasses.replace(
            self,
            x=self.alt_x if self.alt_x is not None else self.x,
            y=self.alt_y if self.alt_y is not None else self.y,
            C=self.alt_C if self.alt_C is not None else self.C,
            alt_x=None, alt_y=None, alt_C=None)

    def convergence_ratio(self, y=None) -> float:
        """|x| * growth * rho(y)^1: certified per-term ratio (sharp rho)."""
        from .series_eval import inner_growth_rate
        yy = self.y if y is None else y
        r = abs(float(self.x)) * self.case.growth_bound()
        return r * inner_growth_rate(yy)


def parse_tables(text: str) -> list[TableRow]:
    rows = []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 10:
            raise ValueError(f"line {ln}: expected 10 columns, got {len(parts)}")
        rid, case_tag, d, x, y, kind, A, B, C, ref = parts[:10]
        opts = {}
        for extra in parts[10:]:
            if "=" not in extra:
                raise ValueError(f"line {ln}: bad extra field {extra!r}")
            k, v = extra.split("=", 1)
            opts[k] = v
        if kind not in ("n", "m"):
            raise ValueError(f"line {ln}: kind must be n or m")
        try:
            row = TableRow(
                id=rid,
                case=case_from_tag(case_tag),
                discs=tuple(int(t) for t in d.split(",")),
                x=parse_rational(x),
                y=parse_rational(y),
                kind=kind,
                A=int(A),
                B=int(B),
                C=parse_const(C),
                ref=ref,
                alt_x=parse_rational(opts["alt_x"]) if "alt_x" in opts else None,
                alt_y=parse_rational(opts["alt_y"]) if "alt_y" in opts else None,
                alt_C=parse_const(opts["alt_C"]) if "alt_C" in opts else None,
                options=opts,
            )
        except (ValueError, KeyError) as exc:
            raise ValueError(f"line {ln}: {exc}") from exc
        rows.append(row)
    return rows


def load_builtin(which: str = "all") -> list[TableRow]:
    """Packaged data: "sporadic", "hypergeometric", or "all"."""
    names = {
        "sporadic": ["sporadic.tables"],
        "hypergeometric": ["hypergeometric.tables"],
        "all": ["sporadic.tables", "hypergeometric.tables"],
    }[which]
    rows = []
    for name in names:
        text = resources.files("piseries").joinpath("data").joinpath(name).read_text()
        rows.extend(parse_tables(text))
    return rows


def load_path(path) -> list[TableRow]:
    with open(path, encoding="utf-8") as fh:
        return parse_tables(fh.read())
