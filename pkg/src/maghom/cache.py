"""On-disk cache of homology tables, keyed by the labelled graph hash."""

from __future__ import annotations

import json
import os
import time
from pathlib import Path

from filelock import FileLock

from . import __version__
from .graph import Graph
from .homology import BigradedGroup, Cell

SCHEMA = "maghom/result-1"


def cache_dir() -> Path:
    env = os.environ.get("MAGHOM_CACHE_DIR")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "maghom"


def table_to_cells(table: BigradedGroup) -> list[dict]:
    return [
        {"k": k, "l": l, "rank": c.rank,
         "torsion": None if c.torsion is None else list(c.torsion), "method": c.method}
        for (k, l), c in sorted(table.cells.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    ]


def cells_to_table(lmax: int, cells: list[dict]) -> BigradedGroup:
    out = {}
    for c in cells:
        tors = None if c["torsion"] is None else tuple(c["torsion"])
        out[(c["k"], c["l"])] = Cell(c["rank"], tors, c["method"])
    return BigradedGroup(lmax, out)


def _compatible(record: dict, lmax: int, torsion: bool, method: str) -> bool:
    if record["lmax"] < lmax:
        return False
    opts = record["options"]
    if torsion and not opts["torsion"]:
        return False
    cells = [c for c in record["cells"] if c["l"] <= lmax]
    if any(c["rank"] is None for c in cells):
        return False
    if torsion and any(c["torsion"] is None for c in cells):
        return False
    if method == "exact" and any(c["method"] == "modular" for c in cells):
        return False
    return True


class ResultCache:
    def __init__(self, directory: Path | str | None = None):
        self.directory = Path(directory) if directory else cache_dir()

    def _paths(self, g: Graph):
        h = g.structural_hash
        return self.directory / f"{h}.json", self.directory / f"{h}.lock"

    def _read(self, path: Path) -> list[dict]:
        if not path.exists():
            return []
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return []
        return [r for r in data.get("records", []) if r.get("schema") == SCHEMA]

    def get(self, g: Graph, lmax: int, torsion: bool, method: str) -> BigradedGroup | None:
        path, lock = self._paths(g)
        if not path.exists():
            return None
        self.directory.mkdir(parents=True, exist_ok=True)
        with FileLock(str(lock)):
            records = self._read(path)
        for r in records:
            if r["graph"] == {"n": g.n, "edges": [list(e) for e in g.edges]} and _compatible(
                    r, lmax, torsion, method):
                return cells_to_table(r["lmax"], r["cells"]).truncate(lmax)
        return None

    def put(self, g: Graph, table: BigradedGroup, torsion: bool, method: str) -> None:
        if not table.is_complete():
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        path, lock = self._paths(g)
        record = {
            "schema": SCHEMA,
            "tool_version": __version__,
            "graph": {"n": g.n, "edges": [list(e) for e in g.edges]},
            "graph_hash": g.structural_hash,
            "lmax": table.lmax,
            "options": {"torsion": torsion, "method": method},
            "cells": table_to_cells(table),
            "created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        with FileLock(str(lock)):
            records = [r for r in self._read(path)
                       if not (r["lmax"] <= table.lmax and r["options"] == record["options"])]
            records.append(record)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps({"records": records}, indent=1), encoding="utf-8")
            os.replace(tmp, path)
