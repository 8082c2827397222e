"""Command-line front end: ``k3tower {cone,orbits,tower,fermat}``.

Reports are JSON (default) or CSV. Failures print a JSON error object and
exit with 2 (configuration), 3 (size guard) or 4 (internal inconsistency).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import __version__, kernels
from .errors import ConfigError, K3TowerError
from .fermat import supersingular_certificate
from .fricke import SimilitudeMatrix, cone_size, default_generators, degenerate_cone
from .orbits import ActionSpec, is_transitive
from .projective import SIZE_GUARD
from .tower import BranchSpec, tower_report
from .zmod import Level

MAX_SAFE_INT = 2**53 - 1


def _json_safe(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > MAX_SAFE_INT else obj
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def _parse_matrix(raw: Any, where: str) -> SimilitudeMatrix:
    if (
        not isinstance(raw, list)
        or len(raw) != 3
        or any(not isinstance(r, list) or len(r) != 3 for r in raw)
        or any(not isinstance(x, int) or isinstance(x, bool) for r in raw for x in r)
    ):
        raise ConfigError(f"{where}: expected a 3x3 integer matrix, got {raw!r}")
    try:
        return SimilitudeMatrix(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def load_generators(path: str) -> tuple[int | None, int | None, list[SimilitudeMatrix]]:
    """Read ``{"ell", "n", "generators": [3x3, ...]}``; every matrix must be a similitude of Q."""
    doc = _read_json(path)
    if not isinstance(doc, dict) or "generators" not in doc:
        raise ConfigError(f"{path}: expected an object with a 'generators' list")
    gens = doc["generators"]
    if not isinstance(gens, list) or not gens:
        raise ConfigError(f"{path}: 'generators' must be a non-empty list")
    mats = [_parse_matrix(g, f"{path} generator {i}") for i, g in enumerate(gens)]
    ell, n = doc.get("ell"), doc.get("n")
    for name, val in (("ell", ell), ("n", n)):
        if val is not None and (not isinstance(val, int) or isinstance(val, bool)):
            raise ConfigError(f"{path}: '{name}' must be an integer")
    return ell, n, mats


def load_branches(path: str) -> list[BranchSpec]:
    doc = _read_json(path)
    if not isinstance(doc, list) or not doc:
        raise ConfigError(f"{path}: expected a non-empty list of branch points")
    out = []
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict) or "kind" not in entry:
            raise ConfigError(f"{path} branch {i}: expected an object with a 'kind'")
        kind = entry["kind"]
        if kind not in ("MUM", "involution", "custom"):
            raise ConfigError(f"{path} branch {i}: unknown kind {kind!r}")
        matrix = entry.get("matrix")
        M = None if matrix is None else _parse_matrix(matrix, f"{path} branch {i}")
        out.append(BranchSpec.make(str(entry.get("label", f"branch{i}")), kind, M))
    return out


def _resolve(cli_value: int | None, file_value: int | None, name: str) -> int:
    if cli_value is not None and file_value is not None and cli_value != file_value:
        raise ConfigError(f"--{name} {cli_value} disagrees with {name} = {file_value} in the generator file")
    value = cli_value if cli_value is not None else file_value
    if value is None:
        raise ConfigError(f"--{name} is required")
    return value


# --- commands --------------------------------------------------------------


def cmd_cone(args: argparse.Namespace) -> tuple[dict, dict, list[dict]]:
    level = Level(args.ell, args.n)
    pts = degenerate_cone(level, args.method, args.limit)
    expected = cone_size(level)
    config = {"command": "cone", "ell": args.ell, "n": args.n, "method": args.method}
    result = {
        "ell": args.ell,
        "n": args.n,
        "size": len(pts),
        "expected_size": expected,
        "size_check": len(pts) == expected,
        "points": [list(p.coords) for p in pts],
    }
    rows = [{"alpha": a, "beta": b, "gamma": c} for a, b, c in result["points"]]
    return config, result, rows


def cmd_orbits(args: argparse.Namespace) -> tuple[dict, dict, list[dict]]:
    file_ell = file_n = None
    if args.generators:
        file_ell, file_n, gens = load_generators(args.generators)
        source = args.generators
    else:
        gens = default_generators().as_list()
        source = "default"
    ell = _resolve(args.ell, file_ell, "ell")
    n = _resolve(args.n, file_n, "n")
    level = Level(ell, n)
    cone = degenerate_cone(level)
    action = ActionSpec(level, tuple(gens), tuple(cone))
    verdict = is_transitive(action)
    dec = verdict.decomposition
    config = {"command": "orbits", "ell": ell, "n": n, "generators": source}
    result = {
        "ell": ell,
        "n": n,
        "generators": [[list(r) for r in g.rows] for g in gens],
        "points": len(cone),
        "orbit_count": len(dec),
        "orbit_sizes": dec.sizes,
        "transitive": verdict.transitive,
        "witness": None if verdict.witness is None else [list(p.coords) for p in verdict.witness],
        "orbits": [[list(p.coords) for p in orbit] for orbit in dec.orbits],
    }
    rows = [
        {"orbit": k, "alpha": p.coords[0], "beta": p.coords[1], "gamma": p.coords[2]}
        for k, orbit in enumerate(dec.orbits)
        for p in orbit
    ]
    return config, result, rows


def cmd_tower(args: argparse.Namespace) -> tuple[dict, dict, list[dict]]:
    branches = load_branches(args.branches) if args.branches else None
    report = tower_report(args.ell, args.p, args.n_max, branches, m_max=args.m_max)
    config = {
        "command": "tower",
        "ell": args.ell,
        "p": args.p,
        "n_max": args.n_max,
        "m_max": args.m_max,
        "branches": args.branches or "default",
    }
    result = report.as_dict()
    columns = (
        "n", "degree", "R0", "R", "genus_exact", "genus_paper_bound", "genus_safe_bound",
        "exceeds_paper_bound", "n_points_lower", "ratio_lower", "ratio_lower_infinite",
    )
    rows = [{k: lv[k] for k in columns} for lv in result["levels"]]
    return config, result, rows


def cmd_fermat(args: argparse.Namespace) -> tuple[dict, dict, list[dict]]:
    cert = supersingular_certificate(args.p, args.m_max)
    config = {"command": "fermat", "p": args.p, "m_max": args.m_max}
    result = cert.as_dict()
    result["count"] = cert.per_m[0].count
    rows = [
        {k: c[k] for k in ("m", "q", "count", "affine_nonzero", "epsilon")}
        for c in result["per_m"]
    ]
    return config, result, rows


COMMANDS = {"cone": cmd_cone, "orbits": cmd_orbits, "tower": cmd_tower, "fermat": cmd_fermat}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k3tower", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock timing for byte-stable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cone", parents=[common], help="list the degenerate cone D_n")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("hensel", "brute"), default="hensel")
    p.add_argument("--limit", type=int, default=SIZE_GUARD, help="size guard on ell^(3n) for --method brute")

    p = sub.add_parser("orbits", parents=[common], help="orbits of the monodromy generators on D_n")
    p.add_argument("--ell", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--generators", help="JSON file with ell, n and 3x3 integer generator matrices")

    p = sub.add_parser("tower", parents=[common], help="degrees, genera and classification of the tower")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--m-max", type=int, default=1)
    p.add_argument("--branches", help="JSON list of branch points {label, kind, matrix}")

    p = sub.add_parser("fermat", parents=[common], help="point counts of the Fermat quartic over F_{p^2m}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m-max", type=int, default=1)
    return parser


def _render(doc: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_json_safe(doc), indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        config, result, rows = COMMANDS[args.command](args)
    except K3TowerError as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        sys.stdout.write(json.dumps(err) + "\n")
        return exc.exit_code or 1
    config = {**config, "format": args.format, "backend": kernels.BACKEND}
    doc = {"tool": "k3tower", "version": __version__, "config": config, **result}
    if not args.no_timing:
        doc["timing"] = {"wall_seconds": round(time.perf_counter() - start, 6)}
    text = _render(doc, rows, args.format)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
