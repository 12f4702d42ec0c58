"""
Table service for handling EAQECC parameter enumeration, golden files and emitters
"""
import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from codes.eaqecc import EnumeratedTuple, enumeration_family, mds_summary_table, theorem_q22_enumerate
from codes.families import FAMILY_ALIASES, FAMILY_NUMBERS
from dependencies.config import Settings

logger = logging.getLogger(__name__)

TUPLE_COLUMNS = ["q", "family", "h", "n", "k_logical", "d", "c", "mds", "shape_id", "witnessed"]
SUMMARY_COLUMNS = ["family", "q", "h", "n", "t", "branch", "d_min", "d_max", "c_formula", "c_values"]

GOLDEN_FILES = {
    (8, None, 1): "table2_q8_family1.csv",
    (11, 3, 2): "table3_q11_h3_family2.csv",
    (9, 2, 3): "table4_q9_h2_family3.csv",
}


@dataclass(frozen=True)
class GoldenRow:
    block: str
    k: int
    l: int
    shape: int
    i: int
    length: int
    offset: int
    d: int
    c_min: int
    c_max: int
    c_min_derivable: int
    c_max_derivable: int

    def keys(self, low: int, high: int) -> set[tuple[int, int, int, int]]:
        return {(self.length, self.offset + c, self.d, c) for c in range(low, high + 1)}

    @property
    def printed(self) -> set[tuple[int, int, int, int]]:
        return self.keys(self.c_min, self.c_max)

    @property
    def derivable(self) -> set[tuple[int, int, int, int]]:
        return self.keys(self.c_min_derivable, self.c_max_derivable)


@dataclass
class GoldenDiff:
    """Golden rows compared against an enumeration"""

    rows: int = 0
    missing: set = field(default_factory=set)
    errata_present: set = field(default_factory=set)
    errata_absent: set = field(default_factory=set)
    not_mds: set = field(default_factory=set)

    @property
    def ok(self) -> bool:
        return not self.missing and not self.errata_present and not self.not_mds

    def as_dict(self) -> dict:
        return {
            "rows": self.rows,
            "ok": self.ok,
            "missing": sorted(self.missing),
            "errata_present": sorted(self.errata_present),
            "errata_absent": sorted(self.errata_absent),
            "not_mds": sorted(self.not_mds),
        }


def family_number(family) -> int:
    return FAMILY_NUMBERS[FAMILY_ALIASES[str(family)]]


def render_csv(columns: list[str], rows: Iterable[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def render_json(rows: list[dict]) -> str:
    return json.dumps(rows, sort_keys=True, indent=2) + "\n"


class TableService:
    """Service for EAQECC table operations"""

    def __init__(self, settings: Settings):
        self.settings = settings

    def enumerate(self, q: int, family, h: Optional[int] = None, t_bound: str = "ceil") -> list[EnumeratedTuple]:
        """Enumerate every parameter shape for a family"""
        return theorem_q22_enumerate(q, family, h, t_bound)

    def tuple_rows(
        self,
        tuples: list[EnumeratedTuple],
        q: int,
        family,
        h: Optional[int] = None,
        witnessed: Optional[set] = None,
    ) -> list[dict]:
        number = family_number(family)
        witnessed = witnessed or set()
        return [
            {
                "q": q,
                "family": number,
                "h": "" if h is None else h,
                "n": t.params.n,
                "k_logical": t.params.k_logical,
                "d": t.params.d,
                "c": t.params.c,
                "mds": t.params.mds,
                "shape_id": t.shape,
                "witnessed": "true" if t.params.key in witnessed else "false",
            }
            for t in tuples
        ]

    def summary_rows(self, q: int, family, h: Optional[int] = None, tuples=None) -> list[dict]:
        spec = enumeration_family(q, family, h)
        rows = mds_summary_table(q, family, h, enumerated=tuples)
        return [
            {
                "family": spec.number,
                "q": q,
                "h": "" if h is None else h,
                "n": spec.n,
                "t": row.t,
                "branch": row.branch,
                "d_min": row.d_low,
                "d_max": row.d_high,
                "c_formula": row.c_formula,
                "c_values": " ".join(str(c) for c in row.c_values),
            }
            for row in rows
        ]

    def golden_path(self, q: int, family, h: Optional[int] = None) -> Optional[Path]:
        number = family_number(family)
        name = GOLDEN_FILES.get((q, None if number == 1 else h, number))
        if name is None:
            return None
        return Path(self.settings.golden_dir) / name

    @staticmethod
    def load_golden(path: Path) -> list[GoldenRow]:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            return [
                GoldenRow(block=row.pop("block"), **{key: int(value) for key, value in row.items()})
                for row in reader
            ]

    def golden_diff(self, tuples: list[EnumeratedTuple], rows: list[GoldenRow]) -> GoldenDiff:
        """Derivable golden tuples must be enumerated; printed-only tuples must not be"""
        enumerated = {t.params.key: t for t in tuples}
        diff = GoldenDiff(rows=len(rows))
        for row in rows:
            for key in row.derivable:
                if key not in enumerated:
                    diff.missing.add(key)
                elif not enumerated[key].params.is_mds:
                    diff.not_mds.add(key)
            for key in row.printed - row.derivable:
                (diff.errata_present if key in enumerated else diff.errata_absent).add(key)
        if diff.missing:
            logger.warning("Golden diff: %d derivable tuples missing", len(diff.missing))
        return diff

    def reference_rows(self) -> list[dict]:
        """Known MDS EAQECC families from the literature, as shipped"""
        path = Path(self.settings.reference_dir) / "known_mds_eaqeccs.csv"
        with open(path, newline="", encoding="utf-8") as handle:
            return list(csv.DictReader(handle))
