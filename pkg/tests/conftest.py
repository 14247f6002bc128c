from __future__ import annotations

import os
from collections import defaultdict
from pathlib import Path

import pytest

from pclique.graph import degree_permute
from pclique.instances import load_instance

HERE = Path(__file__).parent


def dimacs_dirs() -> list[Path]:
    dirs = []
    if os.environ.get("PCLIQUE_DIMACS_DIR"):
        dirs.append(Path(os.environ["PCLIQUE_DIMACS_DIR"]))
    dirs.append(HERE / "data" / "dimacs")
    return dirs


class InstanceMissing(LookupError):
    pass


_GRAPHS: dict = {}


def named_instance(name: str):
    """Degree-ordered instance from a .clq file if present, else from its construction."""
    if name not in _GRAPHS:
        try:
            g = load_instance(name, dimacs_dirs())
        except KeyError:
            where = ", ".join(str(d) for d in dimacs_dirs())
            _GRAPHS[name] = InstanceMissing(
                f"instance file not found: {name}.clq (searched {where}; set PCLIQUE_DIMACS_DIR)")
        else:
            _GRAPHS[name] = degree_permute(g)[0]
    g = _GRAPHS[name]
    if isinstance(g, InstanceMissing):
        raise g
    return g


class CriterionLog:
    """Collects per-part outcomes; one summary line per criterion is printed at the end."""

    def __init__(self):
        self.parts: dict[str, list[tuple[str, bool, str]]] = defaultdict(list)

    def __call__(self, criterion: str, part: str, ok: bool, detail: str = "") -> bool:
        self.parts[criterion].append((part, ok, detail))
        print(f"[criterion {criterion}] {'PASS' if ok else 'FAIL'} {part}: {detail}")
        return ok

    def lines(self) -> list[str]:
        out = []
        for crit in sorted(self.parts, key=lambda c: (len(c), c)):
            parts = self.parts[crit]
            bad = [p for p, ok, _ in parts if not ok]
            verdict = "PASS" if not bad else "FAIL"
            tail = f" (failing: {', '.join(bad)})" if bad else ""
            out.append(f"criterion {crit}: {verdict} {len(parts) - len(bad)}/{len(parts)} parts{tail}")
        return out


LOG = CriterionLog()


@pytest.fixture
def criterion():
    return LOG


def pytest_terminal_summary(terminalreporter):
    if LOG.parts:
        terminalreporter.section("acceptance criteria")
        for line in LOG.lines():
            terminalreporter.write_line(line)
