"""Batch verification driver.

    wabid --command classify --a 1/3 --b 5/2 --radius 6 --margin 2
    wabid --config run.cfg --format machine --out report.jsonl

Config files are flat ``key = value`` text, one key per line, ``#`` starts
a comment.  Keys: command, a, b, point (repeatable, ``a, b``), radius,
margin, k_min, k_max, format, out, golden.  Command-line flags override.

The machine format is JSON lines with a fixed field order: a header, one
line per result block, a summary, then ``timing`` lines.  Only the
non-timing lines are compared against golden files.

Exit status is 0 exactly when every block passes.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .bider import classify, delta_generator, delta_system_solve, solve_biderivations
from .linalg import in_span
from .linmap import (
    CANONICAL_PARAMS,
    canonical_derivation,
    expected_derivation_dimension,
    in_solution_space,
    solve_derivations,
)
from .postlie import triviality_sweep
from .scalar import ScalarParseError, parse_scalar
from .wab import Params, jacobi_violations

log = logging.getLogger("wabid")

SCHEMA_VERSION = "1"
COMMANDS = ("jacobi", "derivations", "biderivations", "classify", "postlie", "full")
FORMATS = ("text", "machine")
WORKERS_ENV = "WABID_WORKERS"

DEFAULT_GRID = [
    ("0", "0"),
    ("1", "0"),
    ("1/2", "0"),
    ("0", "1"),
    ("2", "1"),
    ("1/2", "1"),
    ("0", "-1"),
    ("2", "-1"),
    ("1/2", "-1"),
    ("0", "2"),
    ("3", "2"),
    ("1/3", "5/2"),
    ("1/2", "3"),
]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "full"
    params_grid: list[Params] = field(default_factory=lambda: [Params(a, b) for a, b in DEFAULT_GRID])
    radius: int = 6
    interior_margin: int = 2
    k_min: int = -4
    k_max: int = 4
    output_path: str | None = None
    format: str = "text"
    golden_path: str | None = None

    @property
    def k_range(self) -> range:
        return range(self.k_min, self.k_max + 1)

    def validate(self) -> RunConfig:
        if self.command not in COMMANDS:
            raise ConfigError(f"field 'command': unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"field 'format': unknown format {self.format!r}")
        if self.interior_margin < 0:
            raise ConfigError("field 'margin': must be non-negative")
        if self.radius < self.interior_margin + 2:
            raise ConfigError(
                f"field 'radius': radius {self.radius} < margin {self.interior_margin} + 2"
            )
        if self.k_min > self.k_max:
            raise ConfigError("field 'k_min': k_min > k_max")
        if not self.params_grid:
            raise ConfigError("field 'point': empty parameter grid")
        return self


def _int_field(name: str, text: str, where: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{where}field {name!r}: not an integer: {text!r}") from None


def _scalar_field(name: str, text: str, where: str):
    try:
        return parse_scalar(text)
    except ScalarParseError as exc:
        raise ConfigError(f"{where}field {name!r}: {exc}") from None


def parse_config(source: str) -> RunConfig:
    """Parse flat key-value config text into a validated RunConfig."""
    cfg = RunConfig()
    a = b = None
    points: list[Params] = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {lineno}: "
        if "=" not in line:
            raise ConfigError(f"{where}expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "command":
            cfg.command = value
        elif key == "a":
            a = _scalar_field("a", value, where)
        elif key == "b":
            b = _scalar_field("b", value, where)
        elif key == "point":
            parts = [p.strip() for p in value.split(",")]
            if len(parts) != 2:
                raise ConfigError(f"{where}field 'point': expected 'a, b'")
            points.append(Params(_scalar_field("point", parts[0], where), _scalar_field("point", parts[1], where)))
        elif key == "radius":
            cfg.radius = _int_field(key, value, where)
        elif key in ("margin", "interior_margin"):
            cfg.interior_margin = _int_field("margin", value, where)
        elif key == "k_min":
            cfg.k_min = _int_field(key, value, where)
        elif key == "k_max":
            cfg.k_max = _int_field(key, value, where)
        elif key == "format":
            cfg.format = value
        elif key == "out":
            cfg.output_path = value
        elif key == "golden":
            cfg.golden_path = value
        else:
            raise ConfigError(f"{where}unknown key {key!r}")
    if (a is None) != (b is None):
        raise ConfigError("fields 'a' and 'b' must be given together")
    if a is not None:
        points.insert(0, Params(a, b))
    if points:
        cfg.params_grid = points
    return cfg.validate()


# -- suites ---------------------------------------------------------------------------


@dataclass
class Block:
    command: str
    params: str
    verdict: str
    data: dict
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def run_jacobi(params: Params, cfg: RunConfig) -> Block:
    bad = jacobi_violations(params, cfg.radius)
    n = (2 * (2 * cfg.radius + 1)) ** 3
    data = {"radius": cfg.radius, "triples": n, "violations": len(bad)}
    if bad:
        data["first"] = [str(v) for v in bad[0]]
    return Block("jacobi", str(params), _verdict(not bad), data)


def run_derivations(params: Params, cfg: RunConfig) -> Block:
    norm, shift = params.normalized()
    rows = []
    ok = True
    for k in cfg.k_range:
        rep = solve_derivations(norm, k, cfg.radius, cfg.interior_margin)
        want = expected_derivation_dimension(norm, k)
        good = want == rep.certified_dimension
        ok &= good
        rows.append({"k": k, "raw": rep.raw_dimension, "certified": rep.certified_dimension, "expected": want})
    members = {}
    if 0 in cfg.k_range:
        rep0 = solve_derivations(norm, 0, cfg.radius, cfg.interior_margin)
        names = ["D1"] + [w for w, ab in CANONICAL_PARAMS.items() if norm == Params(*ab)]
        for w in names:
            inside = in_solution_space(rep0, canonical_derivation(w, cfg.radius))
            members[w] = inside
            ok &= inside
    data = {"normalized": str(norm), "shift": shift, "table": rows, "canonical": members}
    return Block("derivations", str(params), _verdict(ok), data)


def run_biderivations(params: Params, cfg: RunConfig, command: str = "biderivations") -> Block:
    if command == "classify":
        verdict = classify(params, cfg.k_range, cfg.radius, cfg.interior_margin)
        reports, ok = verdict.reports, verdict.passed
    else:
        reports = [solve_biderivations(params, k, cfg.radius, cfg.interior_margin) for k in cfg.k_range]
        ok = all(r.family_residual == 0 for r in reports)
    rows = [
        {
            "k": r.degree_shift,
            "raw": r.raw_dimension,
            "certified": r.certified_dimension,
            "predicted": r.predicted_dimension,
            "families": [str(s) for s in r.predicted],
            "residual": r.family_residual,
        }
        for r in reports
    ]
    return Block(command, str(params), _verdict(ok), {"table": rows})


def run_postlie(params: Params, cfg: RunConfig) -> Block:
    v = triviality_sweep(params, cfg.k_range, cfg.radius, cfg.interior_margin)
    dirs = [
        {
            "k": d.degree_shift,
            "index": d.index,
            "axiom": d.witness.axiom if d.witness else None,
            "args": [str(x) for x in d.witness.args] if d.witness else None,
            "residual": str(d.witness.residual) if d.witness else None,
        }
        for d in v.directions
    ]
    data = {
        "directions": dirs,
        "commutative_dimension": v.commutative_dimension,
        "leibniz_rank": v.leibniz_rank,
        "quadratic_terms_vanish": v.quadratic_terms_vanish,
        "errors": v.errors,
    }
    return Block("postlie", str(params), _verdict(v.passed), data)


def run_delta(cfg: RunConfig) -> Block:
    ns = delta_system_solve(cfg.radius, cfg.interior_margin)
    gen = {j: c for j, c in delta_generator(ns).items() if j in set(ns.interior)}
    ok = ns.certified_dimension == 1 and in_span(gen, ns.restricted())
    data = {"raw": ns.raw_dimension, "certified": ns.certified_dimension, "generator_is_delta": ok}
    return Block("delta", "-", _verdict(ok), data)


_SUITES = {
    "jacobi": run_jacobi,
    "derivations": run_derivations,
    "biderivations": lambda p, c: run_biderivations(p, c, "biderivations"),
    "classify": lambda p, c: run_biderivations(p, c, "classify"),
    "postlie": run_postlie,
}


def _commands_for(command: str) -> list[str]:
    if command == "full":
        return ["jacobi", "derivations", "classify", "postlie"]
    return [command]


def _run_point(args) -> list[Block]:
    params, cfg = args
    blocks = []
    for name in _commands_for(cfg.command):
        t0 = time.perf_counter()
        try:
            blk = _SUITES[name](params, cfg)
        except Exception as exc:  # solver failures become FAIL blocks
            blk = Block(name, str(params), "FAIL", {"error": f"{type(exc).__name__}: {exc}"})
        blk.seconds = time.perf_counter() - t0
        blocks.append(blk)
    return blocks


# -- reports ----------------------------------------------------------------------------


@dataclass
class Report:
    config: RunConfig
    blocks: list[Block]
    schema_version: str = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(b.passed for b in self.blocks)

    def header(self) -> dict:
        c = self.config
        return {
            "kind": "header",
            "schema_version": self.schema_version,
            "command": c.command,
            "radius": c.radius,
            "margin": c.interior_margin,
            "k_min": c.k_min,
            "k_max": c.k_max,
            "grid": [[str(p.a), str(p.b)] for p in c.params_grid],
        }

    def comparable_lines(self) -> list[str]:
        lines = [json.dumps(self.header())]
        for b in self.blocks:
            lines.append(
                json.dumps({"kind": "block", "command": b.command, "params": b.params, "verdict": b.verdict, "data": b.data})
            )
        failed = sum(not b.passed for b in self.blocks)
        lines.append(
            json.dumps({"kind": "summary", "verdict": _verdict(self.passed), "blocks": len(self.blocks), "failed": failed})
        )
        return lines

    def timing_lines(self) -> list[str]:
        return [
            json.dumps({"kind": "timing", "command": b.command, "params": b.params, "seconds": round(b.seconds, 4)})
            for b in self.blocks
        ]

    def machine(self) -> str:
        return "\n".join(self.comparable_lines() + self.timing_lines()) + "\n"

    def text(self) -> str:
        c = self.config
        out = [
            f"wabid report (schema {self.schema_version})",
            f"command={c.command} radius={c.radius} margin={c.interior_margin} k=[{c.k_min},{c.k_max}]",
            "",
        ]
        for b in self.blocks:
            out.append(f"[{b.verdict}] {b.command} {b.params}  ({b.seconds:.2f}s)")
            out.extend("    " + line for line in _describe(b))
        failed = sum(not b.passed for b in self.blocks)
        out.append("")
        out.append(f"{_verdict(self.passed)}: {len(self.blocks) - failed}/{len(self.blocks)} blocks passed")
        return "\n".join(out) + "\n"

    def render(self) -> str:
        return self.machine() if self.config.format == "machine" else self.text()


def _describe(b: Block) -> list[str]:
    d = b.data
    if "error" in d:
        return [d["error"]]
    if b.command == "jacobi":
        return [f"{d['violations']} nonzero Jacobi sums among {d['triples']} triples"]
    if b.command == "derivations":
        lines = [f"normalized to {d['normalized']} (shift {d['shift']})"]
        lines.append("k: " + " ".join(f"{r['k']}:{r['certified']}/{r['expected']}" for r in d["table"]))
        if d["canonical"]:
            lines.append("canonical: " + ", ".join(f"{w}={'in' if v else 'OUT'}" for w, v in d["canonical"].items()))
        return lines
    if b.command in ("biderivations", "classify"):
        return [
            f"k={r['k']:+d} raw={r['raw']} certified={r['certified']} predicted={r['predicted']} "
            f"residual={r['residual']} {' + '.join(r['families'])}".rstrip()
            for r in d["table"]
        ]
    if b.command == "postlie":
        lines = [
            f"k={x['k']:+d}#{x['index']}: {x['axiom']}({', '.join(x['args'] or [])})" for x in d["directions"]
        ]
        lines.append(
            f"commutative combinations={d['commutative_dimension']} leibniz rank={d['leibniz_rank']} "
            f"quadratic terms vanish={d['quadratic_terms_vanish']}"
        )
        return lines
    if b.command == "delta":
        return [f"raw={d['raw']} certified={d['certified']} generator is delta: {d['generator_is_delta']}"]
    if b.command == "golden":
        return [d.get("message", "")]
    return []


def comparable_payload(text: str) -> list[str]:
    """Non-timing lines of a machine-format report."""
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if json.loads(line).get("kind") == "timing":
            continue
        out.append(line)
    return out


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run(config: RunConfig) -> tuple[Report, int]:
    """Execute the configured suites; exit code 0 iff every verdict is PASS."""
    config.validate()
    jobs = [(p, config) for p in config.params_grid]
    workers = _workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point, jobs))
    else:
        results = [_run_point(j) for j in jobs]
    blocks = [b for res in results for b in res]
    if config.command == "full":
        t0 = time.perf_counter()
        try:
            blk = run_delta(config)
        except Exception as exc:
            blk = Block("delta", "-", "FAIL", {"error": f"{type(exc).__name__}: {exc}"})
        blk.seconds = time.perf_counter() - t0
        blocks.append(blk)
    report = Report(config, blocks)
    if config.golden_path:
        report.blocks.append(_golden_block(report, config.golden_path))
    return report, (0 if report.passed else 1)


def _golden_block(report: Report, path: str) -> Block:
    try:
        expected = comparable_payload(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        return Block("golden", path, "FAIL", {"message": f"cannot read golden file: {exc}"})
    actual = report.comparable_lines()
    if expected == actual:
        return Block("golden", path, "PASS", {"message": "matches golden payload"})
    first = next((i for i, (e, a) in enumerate(zip(expected, actual)) if e != a), min(len(expected), len(actual)))
    return Block("golden", path, "FAIL", {"message": f"payload differs from golden at line {first + 1}"})


# -- entry point -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wabid", description="Verify derivations, biderivations and post-Lie structures of W(a,b).")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--command", choices=COMMANDS)
    p.add_argument("--a", help="parameter a, e.g. 1/3 or 1/2+1/3i")
    p.add_argument("--b", help="parameter b")
    p.add_argument("--radius", type=int)
    p.add_argument("--margin", type=int)
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--golden", help="machine-format report whose comparable payload must match")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.config:
        cfg = parse_config(Path(ns.config).read_text(encoding="utf-8"))
    else:
        cfg = RunConfig()
    updates = {}
    if ns.command:
        updates["command"] = ns.command
    if (ns.a is None) != (ns.b is None):
        raise ConfigError("--a and --b must be given together")
    if ns.a is not None:
        updates["params_grid"] = [Params(_scalar_field("a", ns.a, ""), _scalar_field("b", ns.b, ""))]
    for attr, key in (("radius", "radius"), ("margin", "interior_margin"), ("k_min", "k_min"), ("k_max", "k_max")):
        if getattr(ns, attr) is not None:
            updates[key] = getattr(ns, attr)
    if ns.format:
        updates["format"] = ns.format
    if ns.out:
        updates["output_path"] = ns.out
    if ns.golden:
        updates["golden_path"] = ns.golden
    return replace(cfg, **updates).validate()


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = config_from_args(ns)
    except (ConfigError, OSError) as exc:
        print(f"wabid: {exc}", file=sys.stderr)
        return 2
    report, code = run(cfg)
    text = report.render()
    if cfg.output_path:
        try:
            Path(cfg.output_path).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"wabid: cannot write report: {exc}", file=sys.stderr)
            return 2
        log.info("report written to %s", cfg.output_path)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
