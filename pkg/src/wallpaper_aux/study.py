"""Symmetry-vs-auxeticity tables over literature datasets.

Records keep the raw reported ratios; the averaging convention for
anisotropic systems is applied only when a table is built.  Means are
computed exactly (each reported decimal is read as a rational), so a
golden comparison against a printed value never depends on float
rounding.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import ParseError, SymbolError, UnknownGroup
from .orbifold import WallpaperGroup, features
from .poset import RotationCategory, rotation_category

CSV_FIELDS = ("id", "source", "group", "nu_xz", "nu_zx")
DEFAULT_DECIMALS = 4


def exact(x: float) -> Fraction:
    """The decimal a float was written as, as an exact rational."""
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class SystemRecord:
    id: str
    source: str
    group: WallpaperGroup
    nu_xz: float
    nu_zx: float | None = None
    note: str | None = None

    @property
    def anisotropic(self) -> bool:
        return self.nu_zx is not None and self.nu_zx != self.nu_xz


@dataclass(frozen=True)
class Dataset:
    records: tuple[SystemRecord, ...]
    provenance: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __add__(self, other: "Dataset") -> "Dataset":
        prov = "+".join(p for p in (self.provenance, other.provenance) if p)
        return Dataset(self.records + other.records, prov)


def effective_ratio_exact(rec: SystemRecord) -> Fraction:
    if rec.nu_zx is None:
        return exact(rec.nu_xz)
    return (exact(rec.nu_xz) + exact(rec.nu_zx)) / 2


def effective_ratio(rec: SystemRecord) -> float:
    return float(effective_ratio_exact(rec))


def _parse_group(text: str, row: int) -> WallpaperGroup:
    try:
        return WallpaperGroup.from_symbol(text)
    except SymbolError as exc:
        raise UnknownGroup(f"unknown wallpaper group {text!r} ({exc})", row) from exc


def _parse_float(text, name: str, row: int, optional: bool = False):
    if text is None or (isinstance(text, str) and text.strip() == ""):
        if optional:
            return None
        raise ParseError(f"missing {name}", row)
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ParseError(f"{name} {text!r} is not a number", row) from None


def _record(raw: dict, row: int) -> SystemRecord:
    for key in ("id", "group", "nu_xz"):
        if key not in raw or raw[key] is None:
            raise ParseError(f"missing field {key!r}", row)
    return SystemRecord(
        id=str(raw["id"]).strip(),
        source=str(raw.get("source") or "").strip(),
        group=_parse_group(str(raw["group"]).strip(), row),
        nu_xz=_parse_float(raw["nu_xz"], "nu_xz", row),
        nu_zx=_parse_float(raw.get("nu_zx"), "nu_zx", row, optional=True),
        note=(raw.get("note") or None),
    )


def parse_csv(text: str, provenance: str = "") -> Dataset:
    reader = csv.DictReader(text.splitlines())
    if reader.fieldnames is None:
        raise ParseError("empty file", 1)
    missing = [f for f in CSV_FIELDS if f not in reader.fieldnames]
    if missing:
        raise ParseError(f"header lacks {', '.join(missing)}", 1)
    # header is row 1; data rows follow
    records = tuple(_record(raw, i) for i, raw in enumerate(reader, start=2))
    return Dataset(records, provenance)


def parse_json(text: str, provenance: str = "") -> Dataset:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
    if isinstance(data, dict):
        provenance = data.get("provenance", provenance)
        data = data.get("records", [])
    if not isinstance(data, list):
        raise ParseError("expected a list of records")
    return Dataset(tuple(_record(raw, i) for i, raw in enumerate(data, start=1)), provenance)


def load_dataset(path) -> Dataset:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        return parse_json(text, path.stem)
    return parse_csv(text, path.stem)


def dataset_to_csv(ds: Dataset) -> str:
    lines = [",".join(CSV_FIELDS)]
    for r in ds:
        zx = "" if r.nu_zx is None else repr(r.nu_zx)
        lines.append(f"{r.id},{r.source},{r.group.value},{r.nu_xz!r},{zx}")
    return "\n".join(lines) + "\n"


BUNDLED = ("korner", "comparative")


def bundled_path(name: str):
    return resources.files("wallpaper_aux") / "data" / name


def bundled_dataset(name: str) -> Dataset:
    if name not in BUNDLED:
        raise KeyError(f"no bundled dataset {name!r}; choose from {BUNDLED}")
    return parse_csv(bundled_path(f"{name}.csv").read_text(), name)


# aggregation


@dataclass(frozen=True)
class Bucket:
    label: str
    exact_values: tuple[Fraction, ...]

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.exact_values)

    @property
    def n(self) -> int:
        return len(self.exact_values)

    @property
    def exact_mean(self) -> Fraction:
        return sum(self.exact_values, Fraction(0)) / len(self.exact_values)

    @property
    def mean(self) -> float:
        return float(self.exact_mean)


@dataclass(frozen=True)
class AggregateReport:
    name: str
    title: str
    buckets: tuple[Bucket, ...] = ()
    decimals: int = DEFAULT_DECIMALS

    def __getitem__(self, label: str) -> Bucket:
        for b in self.buckets:
            if b.label == label:
                return b
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return any(b.label == label for b in self.buckets)

    @property
    def labels(self) -> list[str]:
        return [b.label for b in self.buckets]

    @property
    def means(self) -> dict[str, float]:
        return {b.label: b.mean for b in self.buckets}


def _partition(ds: Dataset, key, order) -> tuple[Bucket, ...]:
    groups: dict = {}
    for rec in ds:
        groups.setdefault(key(rec), []).append(effective_ratio_exact(rec))
    return tuple(Bucket(_label(k), tuple(groups[k])) for k in order if k in groups)


def _label(k) -> str:
    return k.value if hasattr(k, "value") else str(k)


ACHIRAL, CHIRAL = "achiral", "chiral"
SOME_OFF, ALL_ON = "some centers off mirrors", "all centers on mirrors"


def chirality_table(ds: Dataset) -> AggregateReport:
    buckets = _partition(ds, lambda r: features(r.group).chirality.value, (ACHIRAL, CHIRAL))
    return AggregateReport("chirality", "With reflection (achiral) vs without reflection (chiral)",
                           buckets)


def rotation_table(ds: Dataset) -> AggregateReport:
    buckets = _partition(ds, lambda r: rotation_category(r.group), list(RotationCategory))
    return AggregateReport("rotation", "Highest rotation order", buckets)


def per_group_table(ds: Dataset) -> AggregateReport:
    buckets = _partition(ds, lambda r: r.group, list(WallpaperGroup))
    return AggregateReport("per_group", "Per wallpaper group", buckets)


def center_placement_table(ds: Dataset) -> AggregateReport:
    """Achiral records only: cone points present vs every centre on a mirror."""
    achiral = Dataset(tuple(r for r in ds if features(r.group).has_reflection), ds.provenance)
    buckets = _partition(
        achiral,
        lambda r: SOME_OFF if features(r.group).has_cone_points else ALL_ON,
        (SOME_OFF, ALL_ON),
    )
    return AggregateReport("center_placement", "Rotation-centre placement (achiral systems)",
                           buckets)


@dataclass(frozen=True)
class Frequency:
    counts: dict = field(default_factory=dict)  # WallpaperGroup -> int, all 17 present
    by_category: dict = field(default_factory=dict)  # RotationCategory -> int
    by_order: dict = field(default_factory=dict)  # highest rotation order -> int

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def modal_groups(self) -> list[WallpaperGroup]:
        top = max(self.counts.values(), default=0)
        return [g for g, c in self.counts.items() if c == top and top > 0]

    def nonzero(self) -> list[tuple[WallpaperGroup, int]]:
        return [(g, c) for g, c in self.counts.items() if c]


def frequency_histogram(*datasets: Dataset) -> Frequency:
    counts = {g: 0 for g in WallpaperGroup}
    by_cat = {c: 0 for c in RotationCategory}
    by_order = {n: 0 for n in (1, 2, 3, 4, 6)}
    for ds in datasets:
        for rec in ds:
            counts[rec.group] += 1
            by_cat[rotation_category(rec.group)] += 1
            by_order[features(rec.group).highest_rotation_order] += 1
    return Frequency(counts, by_cat, by_order)


TABLES = {
    "chirality": chirality_table,
    "rotation": rotation_table,
    "per_group": per_group_table,
    "center_placement": center_placement_table,
}


def all_tables(ds: Dataset) -> dict[str, AggregateReport]:
    return {name: fn(ds) for name, fn in TABLES.items()}


def format_value(x, decimals: int = DEFAULT_DECIMALS) -> str:
    """Round half away from zero to ``decimals`` places, dropping trailing zeros."""
    d = Decimal(x.numerator) / Decimal(x.denominator) if isinstance(x, Fraction) else Decimal(repr(x))
    q = d.quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP)
    s = format(q, "f")
    if "." in s:
        s = s.rstrip("0")
        if s.endswith("."):
            s += "0"
    if s in ("-0", "-0.0"):
        s = s[1:]
    return s


# golden verification


@dataclass(frozen=True)
class CheckResult:
    id: str
    ok: bool
    computed: str
    printed: str
    detail: str = ""


def within_printed(value: Fraction, printed: str) -> bool:
    """|value - printed| <= half a unit in the printed last decimal (inclusive)."""
    p = Decimal(printed)
    places = -p.as_tuple().exponent
    half = Fraction(1, 2 * 10**places)
    return abs(value - Fraction(p)) <= half


def load_expected(path=None) -> dict:
    if path is None:
        return json.loads(bundled_path("expected_s5.json").read_text())
    return json.loads(Path(path).read_text())


def _frequency_check(cid: str, freq: Frequency, check: dict) -> CheckResult:
    if "modal_group" in check:
        modal = "/".join(g.value for g in freq.modal_groups)
        return CheckResult(cid, modal == check["modal_group"], modal, check["modal_group"])
    hi, lo = int(check["more_common_order"]), int(check["than_order"])
    a, b = freq.by_order[hi], freq.by_order[lo]
    return CheckResult(cid, a > b, f"{a} vs {b}", f"{hi}-fold > {lo}-fold")


def verify(datasets: dict[str, Dataset], expected: dict) -> list[CheckResult]:
    results = []
    for check in expected["checks"]:
        cid = check["id"]
        names = check["dataset"].split("+")
        missing = [n for n in names if n not in datasets]
        if missing:
            results.append(CheckResult(cid, False, "", "", f"dataset {missing[0]!r} not supplied"))
            continue
        ds = datasets[names[0]]
        for n in names[1:]:
            ds = ds + datasets[n]
        if check["table"] == "frequency":
            results.append(_frequency_check(cid, frequency_histogram(ds), check))
            continue
        report = TABLES[check["table"]](ds)
        if check["bucket"] not in report:
            results.append(CheckResult(cid, False, "", check["mean"], "bucket is empty"))
            continue
        bucket = report[check["bucket"]]
        ok = within_printed(bucket.exact_mean, check["mean"])
        detail = ""
        if "values" in check:
            want = sorted(Fraction(Decimal(v)) for v in check["values"])
            if sorted(bucket.exact_values) != want:
                ok = False
                detail = "member values differ"
        results.append(CheckResult(cid, ok, format_value(bucket.exact_mean), check["mean"], detail))
    return results
