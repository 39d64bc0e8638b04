"""Run registered checks for one tuple or a grid and render deterministic reports."""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

from . import __version__
from .exact_poly import GradedPoly
from .pipeline import (
    ASSUMPTIONS,
    CHECK_NAMES,
    CHECKS,
    CheckParams,
    CheckResult,
    InvalidParams,
    default_grid,
)

GRID_ENV = "CHOWKERNEL_GRID"

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    checks: tuple[str, ...] = CHECK_NAMES
    format: str = "text"
    fail_fast: bool = False
    timing: bool = True

    def __post_init__(self):
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise InvalidParams(f"unknown check(s) {unknown}; choose from {list(CHECK_NAMES)}")
        if self.format not in ("text", "json"):
            raise InvalidParams(f"format must be text or json, got {self.format!r}")
        # registry order, no duplicates
        object.__setattr__(self, "checks", tuple(c for c in CHECK_NAMES if c in self.checks))


def serialize(value: Any) -> Any:
    """JSON-safe form of a check value; rationals become ``"p/q"`` strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, GradedPoly):
        return str(value)
    if isinstance(value, dict):
        return {str(k): serialize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [serialize(v) for v in value]
    return str(value)


def _show(value: Any) -> str:
    s = serialize(value)
    if isinstance(s, str) and s.endswith("/1"):
        return s[:-2]
    if isinstance(s, dict):
        return "{" + ", ".join(f"{k}: {_show(v)}" for k, v in value.items()) + "}"
    return str(s)


def params_echo(p: CheckParams) -> dict[str, Any]:
    return {
        "n": p.n,
        "r": p.r,
        "degrees": list(p.degrees),
        "d": p.d,
        "deg_Y": serialize(p.deg_Y),
        "deg_X": serialize(p.deg_X),
        "w": p.w,
    }


def result_dict(c: CheckResult) -> dict[str, Any]:
    return {
        "name": c.name,
        "expected": serialize(c.expected),
        "computed": serialize(c.computed),
        "pass": c.passed,
        "paper_anchor": c.anchor,
    }


@dataclass
class Report:
    params: CheckParams | None
    results: list[CheckResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    error: str | None = None
    source: str = ""
    elapsed_ms: float = 0.0
    tool_version: str = __version__

    @property
    def n_pass(self) -> int:
        return sum(c.passed for c in self.results)

    @property
    def n_fail(self) -> int:
        return sum(not c.passed for c in self.results)

    @property
    def exit_status(self) -> int:
        if self.error is not None:
            return EXIT_INVALID
        return EXIT_OK if self.n_fail == 0 else EXIT_FAIL

    def body(self) -> dict[str, Any]:
        out: dict[str, Any] = {"version": self.tool_version}
        if self.error is not None:
            out["params"] = None
            out["input"] = self.source
            out["error"] = self.error
        else:
            out["params"] = params_echo(self.params)
        out["results"] = [result_dict(c) for c in self.results]
        out["summary"] = {"pass": self.n_pass, "fail": self.n_fail}
        out["warnings"] = list(self.warnings)
        out["assumptions"] = list(ASSUMPTIONS) if self.error is None else []
        return out

    def to_json(self, timing: bool = True) -> str:
        out = self.body()
        if timing:
            out["footer"] = {"elapsed_ms": round(self.elapsed_ms, 3)}
        return json.dumps(out, indent=2)

    def text_lines(self) -> list[str]:
        if self.error is not None:
            return [f"INVALID {self.source}: {self.error}"]
        p = self.params
        lines = [f"{p.label()}  deg_Y={_show(p.deg_Y)} deg_X={_show(p.deg_X)}"]
        lines += [f"  warning: {w}" for w in self.warnings]
        for c in self.results:
            tag = "PASS" if c.passed else "FAIL"
            lines.append(
                f"  {tag} {c.name}: computed {_show(c.computed)}, expected {_show(c.expected)}"
                f"  [{c.anchor}]"
            )
        lines.append(f"  summary: {self.n_pass} pass, {self.n_fail} fail")
        return lines

    def to_text(self, timing: bool = True) -> str:
        lines = [f"chowkernel {self.tool_version}"] + self.text_lines()
        if self.error is None:
            lines.append("assumptions: " + "; ".join(ASSUMPTIONS))
        if timing:
            lines.append(f"elapsed: {self.elapsed_ms:.1f} ms")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str, timing: bool = True) -> str:
        return self.to_json(timing) + "\n" if fmt == "json" else self.to_text(timing)


def run(params: CheckParams, config: RunConfig = RunConfig()) -> Report:
    """Run the configured checks on one tuple."""
    start = time.perf_counter()
    report = Report(params, warnings=params.warnings())
    for name in config.checks:
        report.results.extend(CHECKS[name].run(params))
        if config.fail_fast and report.n_fail:
            break
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report


# -- grids -------------------------------------------------------------------

@dataclass(frozen=True)
class GridEntry:
    """One line of a grid file, kept even when its parameters are invalid."""

    source: str
    n: int
    r: int
    degrees: tuple[int, ...]
    d: int | None = None
    w: int | None = None

    def sort_key(self):
        return (self.n, self.r, self.degrees, self.d or -1, -1 if self.w is None else self.w)

    def build(self) -> CheckParams:
        return CheckParams.create(self.n, self.r, self.degrees, self.d, self.w)


class GridFormatError(ValueError):
    pass


def parse_grid_line(line: str) -> GridEntry | None:
    """Parse ``n r d1,d2,... [d=D] [w=W]``; blank lines and ``#`` comments give None."""
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    tokens = text.split()
    if len(tokens) < 3:
        raise GridFormatError(f"expected 'n r d1,d2,... [d=D] [w=W]', got {text!r}")
    try:
        n, r = int(tokens[0]), int(tokens[1])
        degrees = tuple(int(x) for x in tokens[2].split(",") if x)
        opts: dict[str, int] = {}
        for tok in tokens[3:]:
            key, sep, val = tok.partition("=")
            if not sep or key not in ("d", "w") or key in opts:
                raise GridFormatError(f"unexpected token {tok!r} in {text!r}")
            opts[key] = int(val)
    except ValueError as exc:
        if isinstance(exc, GridFormatError):
            raise
        raise GridFormatError(f"non-integer value in {text!r}") from exc
    return GridEntry(text, n, r, degrees, opts.get("d"), opts.get("w"))


def parse_grid(text: str) -> list[GridEntry]:
    entries = [e for e in map(parse_grid_line, text.splitlines()) if e is not None]
    if not entries:
        raise GridFormatError("grid is empty")
    return entries


def default_grid_entries() -> list[GridEntry]:
    return [
        GridEntry(f"{p.n} {p.r} {','.join(map(str, p.degrees))}", p.n, p.r, p.degrees)
        for p in default_grid()
    ]


def load_grid(path: str | None = None) -> list[GridEntry]:
    """Grid from ``path``, else from the file named by ``CHOWKERNEL_GRID``, else the default."""
    path = path or os.environ.get(GRID_ENV)
    if not path:
        return default_grid_entries()
    with open(path, encoding="utf-8") as fh:
        return parse_grid(fh.read())


@dataclass
class SweepReport:
    reports: list[Report]
    elapsed_ms: float = 0.0
    tool_version: str = __version__

    @property
    def n_invalid(self) -> int:
        return sum(r.error is not None for r in self.reports)

    @property
    def exit_status(self) -> int:
        if self.n_invalid:
            return EXIT_INVALID
        return EXIT_OK if all(r.n_fail == 0 for r in self.reports) else EXIT_FAIL

    def summary(self) -> dict[str, int]:
        return {
            "pass": sum(r.n_pass for r in self.reports),
            "fail": sum(r.n_fail for r in self.reports),
            "invalid": self.n_invalid,
            "tuples": len(self.reports),
        }

    def body(self) -> dict[str, Any]:
        bodies = []
        for r in self.reports:
            b = r.body()
            del b["version"]
            bodies.append(b)
        return {"version": self.tool_version, "grid": bodies, "summary": self.summary()}

    def to_json(self, timing: bool = True) -> str:
        out = self.body()
        if timing:
            out["footer"] = {"elapsed_ms": round(self.elapsed_ms, 3)}
        return json.dumps(out, indent=2)

    def to_text(self, timing: bool = True) -> str:
        lines = [f"chowkernel {self.tool_version} sweep over {len(self.reports)} tuple(s)"]
        for r in self.reports:
            lines += r.text_lines()
        s = self.summary()
        lines.append(f"summary: {s['pass']} pass, {s['fail']} fail, {s['invalid']} invalid")
        lines.append("assumptions: " + "; ".join(ASSUMPTIONS))
        if timing:
            lines.append(f"elapsed: {self.elapsed_ms:.1f} ms")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str, timing: bool = True) -> str:
        return self.to_json(timing) + "\n" if fmt == "json" else self.to_text(timing)


def sweep(grid: Sequence[GridEntry | CheckParams], config: RunConfig = RunConfig()) -> SweepReport:
    """Run every configured check on each tuple, in tuple order.

    Invalid tuples are recorded and skipped; with ``fail_fast`` the sweep
    stops at the first invalid or failing tuple.
    """
    if not grid:
        raise GridFormatError("grid is empty")
    start = time.perf_counter()
    entries = [_as_entry(g) for g in grid]
    reports = []
    for entry in sorted(entries, key=GridEntry.sort_key):
        try:
            params = entry.build()
        except InvalidParams as exc:
            reports.append(Report(None, error=str(exc), source=entry.source))
        else:
            reports.append(run(params, config))
        if config.fail_fast and reports[-1].exit_status != EXIT_OK:
            break
    return SweepReport(reports, (time.perf_counter() - start) * 1000)


def _as_entry(g: GridEntry | CheckParams) -> GridEntry:
    if isinstance(g, GridEntry):
        return g
    return GridEntry(g.label(), g.n, g.r, g.degrees, g.d, g.w)


def explain(name: str) -> str:
    if name not in CHECKS:
        raise InvalidParams(f"unknown check {name!r}; choose from {list(CHECK_NAMES)}")
    check = CHECKS[name]
    return f"{name}\n  anchor:  {check.anchor}\n  formula: {check.formula}\n"


__all__: Iterable[str] = (
    "RunConfig", "Report", "SweepReport", "GridEntry", "run", "sweep", "explain",
    "load_grid", "parse_grid", "serialize",
)
