"""Command-line runner for the bundled and user-written scenarios.

A scenario is a small JSON file pairing a named analytic case with a
connection block and parameter overrides.  The runner evaluates the case's
checks, prints one PASS/FAIL line per check, and writes the numeric
artifacts (CSV tables plus a summary) under an output directory.  Output
is deterministic for a fixed seed: identical bytes on repeated runs.

Exit codes: 0 when every check passes, 1 when any check fails, and 2 for
configuration problems (the message names the offending key).
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ScenarioError
from .library import CASES, KIND_MEDIA, ConnSpec

SCHEMA_VERSION = 1
FLOAT_FORMAT = "%.17g"

_TOP_KEYS = {"schema", "name", "kind", "medium", "case", "connection",
             "params"}
_REQUIRED_KEYS = ("schema", "name", "kind", "medium", "case", "connection")


@dataclass
class Scenario:
    """A validated scenario file, ready to run."""

    name: str
    kind: str
    medium: str
    case: str
    conn_spec: ConnSpec
    params: dict


def load_scenario(raw) -> Scenario:
    """Validate a decoded scenario object against the schema and registry.

    Raises ScenarioError naming the offending key on any mismatch.
    """
    if not isinstance(raw, dict):
        raise ScenarioError("scenario: top level must be an object")
    for key in _REQUIRED_KEYS:
        if key not in raw:
            raise ScenarioError(f"{key}: required key is missing")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ScenarioError(f"{sorted(unknown)[0]}: unknown key")
    if raw["schema"] != SCHEMA_VERSION:
        raise ScenarioError(
            f"schema: expected {SCHEMA_VERSION}, got {raw['schema']!r}"
        )
    name = raw["name"]
    if not isinstance(name, str) or not name:
        raise ScenarioError("name: must be a non-empty string")
    kind = raw["kind"]
    if kind not in KIND_MEDIA:
        raise ScenarioError(
            f"kind: unknown value {kind!r}, expected one of "
            f"{sorted(KIND_MEDIA)}"
        )
    medium = raw["medium"]
    if medium not in KIND_MEDIA[kind]:
        raise ScenarioError(
            f"medium: {medium!r} is not valid for kind {kind!r}, expected "
            f"one of {sorted(KIND_MEDIA[kind])}"
        )
    case = raw["case"]
    if case not in CASES:
        raise ScenarioError(
            f"case: unknown case {case!r}, expected one of {sorted(CASES)}"
        )
    spec = CASES[case]
    if spec.kind != kind or spec.medium != medium:
        raise ScenarioError(
            f"kind: case {case!r} is registered as "
            f"{spec.kind}/{spec.medium}, not {kind}/{medium}"
        )
    conn_spec = ConnSpec.from_dict(raw["connection"])
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ScenarioError("params: must be an object")
    for key in params:
        if key not in spec.defaults:
            raise ScenarioError(
                f"params.{key}: unknown key (case {case!r} accepts "
                f"{sorted(spec.defaults)})"
            )
    return Scenario(name=name, kind=kind, medium=medium, case=case,
                    conn_spec=conn_spec, params=params)


def load_scenario_file(path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"scenario: cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario: {path} is not valid JSON ({exc})")
    return load_scenario(raw)


def bundled_scenarios() -> dict:
    """Name -> packaged path for every scenario JSON shipped in-repo."""
    root = resources.files("torsor") / "scenarios"
    out = {}
    for entry in root.iterdir():
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = entry
    return dict(sorted(out.items()))


def _table_csv(table) -> str:
    lines = [table.header]
    for row in np.atleast_2d(table.rows):
        lines.append(",".join(FLOAT_FORMAT % v for v in row))
    return "\n".join(lines) + "\n"


def run_scenario_obj(scn, out_root, seed=0, tolerance_scale=1.0,
                     stream=None):
    """Run one validated scenario: evaluate, report, write artifacts.

    Returns True when every check passed.  All artifact writing happens
    after the checks are evaluated, so a crash mid-evaluation leaves no
    partial output directory behind.
    """
    stream = stream or sys.stdout
    spec = CASES[scn.case]
    params = dict(spec.defaults)
    params.update(scn.params)
    rng = np.random.default_rng(seed)
    result = spec.build(params, rng, scn.conn_spec)

    all_pass = True
    check_rows = []
    for check in result.checks:
        ok = check.passed(tolerance_scale)
        all_pass = all_pass and ok
        tol = check.tol * tolerance_scale
        stream.write(
            f"{'PASS' if ok else 'FAIL'} {scn.name}: {check.name}: "
            f"max residual {check.value:.6g} (tol {tol:.6g})\n"
        )
        check_rows.append({
            "name": check.name,
            "passed": bool(ok),
            "tolerance": tol,
            "value": float(check.value),
        })

    out_dir = os.path.join(out_root, scn.name)
    os.makedirs(out_dir, exist_ok=True)
    table_files = []
    for table in result.tables:
        fname = f"{table.name}.csv"
        with open(os.path.join(out_dir, fname), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(_table_csv(table))
        table_files.append(fname)
    summary = {
        "case": scn.case,
        "checks": check_rows,
        "kind": scn.kind,
        "medium": scn.medium,
        "name": scn.name,
        "passed": bool(all_pass),
        "schema": SCHEMA_VERSION,
        "seed": int(seed),
        "tables": table_files,
        "tolerance_scale": float(tolerance_scale),
    }
    with open(os.path.join(out_dir, "summary.json"), "w",
              encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return all_pass


def _resolve_run_target(target):
    """A run target is a scenario file path or a bundled scenario name."""
    if os.path.exists(target):
        return load_scenario_file(target)
    bundle = bundled_scenarios()
    if target in bundle:
        return load_scenario(json.loads(bundle[target].read_text()))
    raise ScenarioError(
        f"scenario: {target!r} is neither a file nor a bundled scenario "
        f"name (run 'list' to see the bundle)"
    )


def cmd_run(args, stream=None) -> int:
    stream = stream or sys.stdout
    out_root = args.out_dir or os.environ.get("TORSOR_OUT_DIR", ".")
    ok = True
    for target in args.scenario:
        scn = _resolve_run_target(target)
        ok = run_scenario_obj(
            scn, out_root, seed=args.seed,
            tolerance_scale=args.tolerance_scale, stream=stream,
        ) and ok
    return 0 if ok else 1


def cmd_list(args, stream=None) -> int:
    stream = stream or sys.stdout
    for name, path in bundled_scenarios().items():
        scn = load_scenario(json.loads(path.read_text()))
        summary = CASES[scn.case].summary.split(".")[0]
        stream.write(f"{name:28s} {scn.kind}/{scn.medium}: {summary}.\n")
    return 0


def cmd_describe(args, stream=None) -> int:
    stream = stream or sys.stdout
    bundle = bundled_scenarios()
    if args.name not in bundle:
        raise ScenarioError(
            f"scenario: no bundled scenario named {args.name!r} "
            f"(run 'list' to see the bundle)"
        )
    raw = json.loads(bundle[args.name].read_text())
    scn = load_scenario(raw)
    spec = CASES[scn.case]
    stream.write(f"{scn.name} ({scn.kind}, medium {scn.medium})\n")
    stream.write(f"  case: {scn.case}\n")
    stream.write(f"  {spec.summary}\n")
    stream.write(f"  connection: {json.dumps(raw['connection'], sort_keys=True)}\n")
    params = dict(spec.defaults)
    params.update(scn.params)
    stream.write(f"  parameters: {json.dumps(params, sort_keys=True)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torsor",
        description="Run balance-law scenarios and write their artifacts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser(
        "run", help="run scenario files or bundled scenario names")
    run.add_argument("scenario", nargs="+",
                     help="scenario JSON path or bundled name")
    run.add_argument("--out-dir", default=None,
                     help="output root (default: $TORSOR_OUT_DIR or '.')")
    run.add_argument("--tolerance-scale", type=float, default=1.0,
                     help="multiply every pass tolerance by this factor")
    run.add_argument("--seed", type=int, default=0,
                     help="seed for randomized probe points")
    run.set_defaults(fn=cmd_run)

    lst = sub.add_parser("list", help="list the bundled scenarios")
    lst.set_defaults(fn=cmd_list)

    desc = sub.add_parser("describe",
                          help="show one bundled scenario in detail")
    desc.add_argument("name", help="bundled scenario name")
    desc.set_defaults(fn=cmd_describe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
