"""Structured run reports: deterministic text/JSON rendering and figures.

The text form is tab-delimited, one line per check, so it greps and diffs
cleanly; the JSON form is canonical (sorted keys, fixed separators).  Both
are byte-stable across runs on identical inputs.  Figures are optional
PNG bar charts rendered next to the delimited output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import FAIL, HYPOTHESIS_NOT_MET, PASS, AxiomReport, CheckResult, Witness

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_HYPOTHESIS = 4
EXIT_PROPERTY = 5


def _fmt_vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def witness_text(w: Optional[Witness]) -> str:
    if w is None:
        return ""
    parts = []
    if w.indices:
        parts.append(f"at {tuple(w.indices)}")
    if w.lhs or w.rhs:
        parts.append(f"lhs={_fmt_vec(w.lhs)} rhs={_fmt_vec(w.rhs)}")
    if w.detail:
        parts.append(w.detail)
    return "; ".join(parts)


@dataclass(frozen=True)
class ReportEntry:
    section: str
    name: str
    status: str
    detail: str = ""
    witness: str = ""


@dataclass
class Report:
    tool_version: str
    command: str
    input_digest: str
    entries: list[ReportEntry] = field(default_factory=list)

    def add(self, section: str, name: str, status: str, detail: str = "",
            witness: str = ""):
        self.entries.append(ReportEntry(section, name, status, detail, witness))

    def add_axiom_report(self, section: str, rep: AxiomReport, prefix: str = ""):
        for r in rep.results:
            detail = r.note or f"checked={r.checked} failures={r.failures}"
            self.add(section, prefix + r.name, r.status, detail, witness_text(r.witness))

    def add_result(self, section: str, r: CheckResult, prefix: str = ""):
        detail = r.note or f"checked={r.checked} failures={r.failures}"
        self.add(section, prefix + r.name, r.status, detail, witness_text(r.witness))

    @property
    def ok(self) -> bool:
        return all(e.status in (PASS, "info") for e in self.entries)

    def exit_code(self) -> int:
        statuses = {e.status for e in self.entries}
        if FAIL in statuses or "error" in statuses:
            return EXIT_PROPERTY
        if HYPOTHESIS_NOT_MET in statuses:
            return EXIT_HYPOTHESIS
        return EXIT_OK

    def to_text(self) -> str:
        lines = [
            f"# colorlie {self.tool_version}",
            f"# command\t{self.command}",
            f"# input-digest\t{self.input_digest}",
            "section\tname\tstatus\tdetail\twitness",
        ]
        for e in self.entries:
            lines.append(
                "\t".join((e.section, e.name, e.status, e.detail, e.witness))
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        data = {
            "tool_version": self.tool_version,
            "command": self.command,
            "input_digest": self.input_digest,
            "entries": [
                {
                    "section": e.section,
                    "name": e.name,
                    "status": e.status,
                    "detail": e.detail,
                    "witness": e.witness,
                }
                for e in self.entries
            ],
        }
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        return self.to_text()


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------


def render_operator_dims_figure(path: str, dims: dict[str, int]):
    """Bar chart of solved operator-space dimensions, one bar per query."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = sorted(dims)
    values = [dims[k] for k in labels]
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(labels)), 3.2))
    ax.bar(range(len(labels)), values, color="#4878b0")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("dimension")
    ax.set_title("solved operator spaces")
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)


def render_sequence_figure(path: str, derived: Sequence[int], central: Sequence[int]):
    """Derived and descending central sequence dimensions per level."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    xs = range(len(derived))
    width = 0.38
    ax.bar([x - width / 2 for x in xs], derived, width, label="derived", color="#4878b0")
    ax.bar([x + width / 2 for x in xs], central, width, label="central", color="#b04848")
    ax.set_xticks(list(xs))
    ax.set_xlabel("level")
    ax.set_ylabel("dimension")
    ax.set_title("sequence dimensions")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
