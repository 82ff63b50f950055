"""Command-line entry point: ``wallpaper-aux <command> ...``.

Exit codes: 0 success, 1 domain or I/O error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, poset, study
from .cells import bundled_cell, bundled_cell_names
from .errors import WallpaperAuxError
from .homogenize import effective_tensor, load_cell, poisson, poisson_sweep
from .orbifold import WallpaperGroup, as_group, euler_cost, features, symbol_of
from .pattern import classify_inventory, detect_symmetries
from .pattern_io import load_pattern
from .report import FORMATS, emit_report


class UsageError(Exception):
    pass


def _emit(args, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _group_info(g: WallpaperGroup) -> dict:
    f = features(g)
    return {
        "symbol": g.value,
        "unicode": g.unicode,
        "euler_cost": str(euler_cost(symbol_of(g))),
        "highest_rotation_order": f.highest_rotation_order,
        "has_reflection": f.has_reflection,
        "has_cross_cap": f.has_cross_cap,
        "has_cone_points": f.has_cone_points,
        "has_corner_points": f.has_corner_points,
        "chirality": f.chirality.value,
        "rotation_category": poset.rotation_category(g).value,
        "poset_class": poset.class_of(g).label,
    }


def cmd_groups(args) -> int:
    if args.action == "list":
        groups = list(WallpaperGroup)
        _emit(args, [g.value for g in groups], "\n".join(g.value for g in groups))
        return 0
    if not args.group:
        raise UsageError("groups show needs a group symbol")
    info = _group_info(as_group(args.group))
    _emit(args, info, "\n".join(f"{k}: {v}" for k, v in info.items()))
    return 0


def cmd_classify(args) -> int:
    pat = load_pattern(args.pattern)
    inv = detect_symmetries(pat)
    group = classify_inventory(inv)
    if args.json:
        payload = {"group": group.value}
        if args.inventory:
            payload["inventory"] = inv.to_dict()
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(group.value)
        if args.inventory:
            print(json.dumps(inv.to_dict(), indent=2, sort_keys=True))
    return 0


def cmd_poset(args) -> int:
    if args.action == "leq":
        h, g = as_group(args.h), as_group(args.g)
        ans = poset.leq(h, g)
        _emit(args, {"h": h.value, "g": g.value, "leq": ans}, "true" if ans else "false")
    elif args.action == "category":
        g = as_group(args.group)
        cat = poset.rotation_category(g)
        _emit(args, {"group": g.value, "category": cat.value}, cat.value)
    elif args.action == "dot":
        dot = poset.to_dot()
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            path = out / "poset.dot"
            path.write_text(dot)
            _emit(args, {"written": [str(path)]}, str(path))
        else:
            _emit(args, {"dot": dot}, dot.rstrip("\n"))
    else:
        rep = poset.poset_axioms_check()
        payload = {k: v for k, v in rep.__dict__.items()}
        payload["ok"] = rep.ok
        text = "\n".join(f"{k}: {v}" for k, v in payload.items())
        _emit(args, json.loads(json.dumps(payload, default=str)), text)
        return 0 if rep.ok else 1
    return 0


def _load_any_cell(name: str):
    p = Path(name)
    if not p.exists() and name in bundled_cell_names():
        return bundled_cell(name)
    return load_cell(p)


def _fmt_matrix(M: np.ndarray) -> str:
    return "\n".join("  " + " ".join(f"{x: .10e}" for x in row) for row in M)


def cmd_homogenize(args) -> int:
    cell = _load_any_cell(args.cell)
    eff = effective_tensor(cell)
    rep = poisson(eff)
    sweep = poisson_sweep(eff, args.theta_sweep) if args.theta_sweep else []
    if args.json:
        payload = {"cell": cell.name, **eff.to_dict(), "poisson": rep.to_dict()}
        if sweep:
            payload["sweep"] = [{"theta_deg": t, "nu": v} for t, v in sweep]
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    lines = [f"cell: {cell.name}", "C (Voigt xx, zz, xz):", _fmt_matrix(eff.C),
             "S:", _fmt_matrix(eff.S)]
    lines += [f"{k}: {v}" for k, v in rep.to_dict().items()]
    if sweep:
        lines.append("theta_deg,nu")
        lines += [f"{t:.6g},{v:.10g}" for t, v in sweep]
    print("\n".join(lines))
    return 0


def _load_dataset_arg(name: str) -> study.Dataset:
    p = Path(name)
    if not p.exists() and name in study.BUNDLED:
        return study.bundled_dataset(name)
    return study.load_dataset(p)


def cmd_study(args) -> int:
    if args.action == "run":
        if not args.datasets:
            raise UsageError("study run needs at least one dataset")
        if not args.out:
            raise UsageError("study run needs --out DIR")
        datasets = [_load_dataset_arg(d) for d in args.datasets]
        names = _unique_names(datasets)
        tables = {n: study.all_tables(ds) for n, ds in zip(names, datasets)}
        freq = study.frequency_histogram(*datasets)
        written = emit_report(tables, freq, args.out, args.format or FORMATS)
        _emit(args, {"written": [str(p) for p in written]}, "\n".join(str(p) for p in written))
        return 0

    datasets = {
        "korner": _load_dataset_arg(args.korner or "korner"),
        "comparative": _load_dataset_arg(args.comparative or "comparative"),
    }
    results = study.verify(datasets, study.load_expected(args.expected))
    failed = [r for r in results if not r.ok]
    if args.json:
        payload = {
            "passed": len(results) - len(failed),
            "total": len(results),
            "checks": [r.__dict__ for r in results],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for r in results:
            tag = "PASS" if r.ok else "FAIL"
            extra = f" ({r.detail})" if r.detail else ""
            print(f"{tag} {r.id}: computed {r.computed}, printed {r.printed}{extra}")
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _unique_names(datasets) -> list[str]:
    names, seen = [], {}
    for ds in datasets:
        base = ds.provenance or "dataset"
        seen[base] = seen.get(base, 0) + 1
        names.append(base if seen[base] == 1 else f"{base}_{seen[base]}")
    return names


class _Sub(argparse.ArgumentParser):
    # each parser gets its own --json flag; a shared parent action would
    # let subcommand defaults clobber a flag given before the subcommand
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                          help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wallpaper-aux",
        description="Wallpaper-group classification, symmetry poset and Poisson's ratio tools.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Sub)

    g = sub.add_parser("groups", help="list or describe the 17 groups")
    g.add_argument("action", choices=["list", "show"])
    g.add_argument("group", nargs="?")
    g.set_defaults(func=cmd_groups)

    c = sub.add_parser("classify", help="classify a pattern file")
    c.add_argument("pattern")
    c.add_argument("--inventory", action="store_true", help="also print the symmetry inventory")
    c.set_defaults(func=cmd_classify)

    p = sub.add_parser("poset", help="symmetry partial order queries")
    psub = p.add_subparsers(dest="action", required=True, parser_class=_Sub)
    leq = psub.add_parser("leq", help="is H at most as symmetric as G")
    leq.add_argument("h")
    leq.add_argument("g")
    cat = psub.add_parser("category", help="rotation category of a group")
    cat.add_argument("group")
    dot = psub.add_parser("dot", help="Hasse diagram in DOT format")
    dot.add_argument("--out", help="directory for poset.dot (stdout if omitted)")
    psub.add_parser("check", help="verify the partial-order axioms")
    p.set_defaults(func=cmd_poset)

    h = sub.add_parser("homogenize", help="effective elasticity of a cell")
    h.add_argument("cell", help="cell JSON file or bundled cell name")
    h.add_argument("--theta-sweep", type=int, default=0, metavar="N",
                   help="also sample nu(theta) at N angles over [0, 180)")
    h.set_defaults(func=cmd_homogenize)

    s = sub.add_parser("study", help="symmetry vs Poisson's ratio tables")
    ssub = s.add_subparsers(dest="action", required=True, parser_class=_Sub)
    run = ssub.add_parser("run", help="build tables and write reports")
    run.add_argument("datasets", nargs="+", help="CSV/JSON files or bundled names")
    run.add_argument("--out", required=True)
    run.add_argument("--format", action="append", choices=FORMATS,
                     help="repeatable; default writes every format")
    ver = ssub.add_parser("verify", help="compare with the printed values")
    ver.add_argument("--korner", help="replacement for the bundled korner dataset")
    ver.add_argument("--comparative", help="replacement for the bundled comparative dataset")
    ver.add_argument("--expected", help="replacement golden file")
    s.set_defaults(func=cmd_study)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "homogenize" and args.theta_sweep < 0:
        print("wallpaper-aux: --theta-sweep must be non-negative", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wallpaper-aux: {exc}", file=sys.stderr)
        return 2
    except (WallpaperAuxError, OSError, ValueError, KeyError, ArithmeticError) as exc:
        msg = str(exc.args[0]) if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"wallpaper-aux: error: {msg}", file=sys.stderr)
        if args.json:
            print(json.dumps({"error": {"type": type(exc).__name__, "message": msg}}, indent=2))
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
