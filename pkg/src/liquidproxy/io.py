"""JSON input formats.

Incomplete profile::

    {"n": 3, "issues": ["p", "q", "r"], "gamma": "(p&q)->r",
     "opinions": [["1", "0", "*"], ...]}

Proxy profile: the same envelope, each entry ``{"v": 0|1}`` or ``{"d": agent}``.
Default profile: each entry ``{"v": 0|1, "d": agent}`` (agent may be itself).
Agents are 0-based indices. Delegation structure for the BDP::

    {"n": 3, "issues": ["p"], "trustees": {"p": [1, 2, 2]}}

``trustees`` may also be a list of per-issue lists in issue order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .default import DefaultEntry
from .logic import Constraint, FormulaSyntaxError
from .proxy import Delegate


class SchemaError(ValueError):
    """Input does not match the expected JSON layout; ``location`` points at the offending field."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass
class LoadedProfile:
    kind: str  # "incomplete" | "proxy" | "default"
    n: int
    issues: list[str]
    gamma: Constraint
    opinions: tuple


_VALUE = {"1": 1, "0": 0, "*": None, 1: 1, 0: 0, None: None}


def load_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SchemaError(str(path), "file not found") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def _issues(doc: dict, where: str) -> list[str]:
    issues = doc.get("issues")
    if not isinstance(issues, list) or not issues:
        raise SchemaError(f"{where}.issues", "expected a non-empty list of issue labels")
    if len(set(map(str, issues))) != len(issues):
        raise SchemaError(f"{where}.issues", "duplicate issue labels")
    return [str(x) for x in issues]


def parse_gamma(text: str | None, issues: list[str], where: str = "gamma") -> Constraint:
    try:
        return Constraint.parse(text or "T", labels=issues)
    except FormulaSyntaxError as exc:
        raise SchemaError(where, str(exc)) from None


def _entry_kind(e) -> str:
    if isinstance(e, dict):
        return "default" if {"v", "d"} <= e.keys() else "proxy"
    return "incomplete"


def _parse_entry(kind: str, e, i: int, n: int, loc: str):
    if kind == "incomplete":
        if isinstance(e, bool) or e not in _VALUE:
            raise SchemaError(loc, f"expected \"1\", \"0\" or \"*\", got {e!r}")
        return _VALUE[e]
    if not isinstance(e, dict):
        raise SchemaError(loc, f"expected an object, got {e!r}")
    if kind == "default":
        v, d = e.get("v"), e.get("d")
        if v not in (0, 1, "0", "1") or not isinstance(d, int) or not 0 <= d < n:
            raise SchemaError(loc, f"expected {{\"v\": 0|1, \"d\": agent}}, got {e!r}")
        return DefaultEntry(int(v), d)
    if set(e) == {"v"} and e["v"] in (0, 1, "0", "1"):
        return int(e["v"])
    if set(e) == {"d"} and isinstance(e["d"], int):
        d = e["d"]
        if not 0 <= d < n:
            raise SchemaError(loc, f"unknown agent {d}")
        if d == i:
            raise SchemaError(loc, "self-delegation is not a proxy opinion")
        return Delegate(d)
    raise SchemaError(loc, f"expected {{\"v\": 0|1}} or {{\"d\": agent}}, got {e!r}")


def parse_profile(doc: Any, where: str = "profile", gamma_text: str | None = None,
                  kind: str | None = None) -> LoadedProfile:
    if not isinstance(doc, dict):
        raise SchemaError(where, "expected a JSON object")
    issues = _issues(doc, where)
    ops = doc.get("opinions")
    if not isinstance(ops, list) or not ops:
        raise SchemaError(f"{where}.opinions", "expected a non-empty list of opinions")
    n = doc.get("n", len(ops))
    if n != len(ops):
        raise SchemaError(f"{where}.n", f"n={n} but {len(ops)} opinions given")
    kind = kind or doc.get("kind") or _entry_kind(ops[0][0] if ops[0] else None)
    if kind not in ("incomplete", "proxy", "default"):
        raise SchemaError(f"{where}.kind", f"unknown profile kind {kind!r}")
    rows = []
    for i, op in enumerate(ops):
        if not isinstance(op, list) or len(op) != len(issues):
            raise SchemaError(f"{where}.opinions[{i}]", f"expected {len(issues)} entries")
        rows.append(tuple(_parse_entry(kind, e, i, n, f"{where}.opinions[{i}][{p}]")
                          for p, e in enumerate(op)))
    gamma = parse_gamma(gamma_text if gamma_text is not None else doc.get("gamma"), issues,
                        f"{where}.gamma")
    return LoadedProfile(kind, n, issues, gamma, tuple(rows))


def parse_trustees(doc: Any, where: str = "graph") -> tuple[list[str], list[list[int]]]:
    if not isinstance(doc, dict):
        raise SchemaError(where, "expected a JSON object")
    issues = _issues(doc, where)
    tr = doc.get("trustees")
    if isinstance(tr, dict):
        missing = [p for p in issues if p not in tr]
        if missing:
            raise SchemaError(f"{where}.trustees", f"missing issues {missing}")
        maps = [tr[p] for p in issues]
    elif isinstance(tr, list) and len(tr) == len(issues):
        maps = tr
    else:
        raise SchemaError(f"{where}.trustees", "expected one trustee list per issue")
    n = doc.get("n", len(maps[0]))
    for p, r in enumerate(maps):
        if not isinstance(r, list) or len(r) != n or not all(isinstance(j, int) and 0 <= j < n for j in r):
            raise SchemaError(f"{where}.trustees[{issues[p]}]", f"expected {n} agent indices in 0..{n - 1}")
    return issues, maps


def opinion_to_json(op) -> list[str]:
    return ["*" if v is None else str(v) for v in op]


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"
