"""Post-mapping consolidation: ordered INSERT-WHERE tasks run to fixpoint.

Task documents are plain update text; a document may hold several INSERT
operations separated by ``;``. Insertions go to the consolidated graph so the
per-source graphs keep their provenance.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .ingest.records import WarningLog
from .query import Query, QuerySyntaxError, evaluate_insert, parse_update
from .rdf.store import GraphStore
from .rdf.terms import Iri
from .vocab import Vocabulary

MAX_ROUNDS = 64


class TaskError(ValueError):
    pass


@dataclass
class ConsolidationTask:
    task_id: str
    operations: list[Query]
    graph: Iri
    description: str = ""


@dataclass
class TaskReport:
    rows: list[tuple[str, int]] = field(default_factory=list)

    def add(self, task_id: str, inserted: int) -> None:
        for i, (tid, n) in enumerate(self.rows):
            if tid == task_id:
                self.rows[i] = (tid, n + inserted)
                return
        self.rows.append((task_id, inserted))

    @property
    def total(self) -> int:
        return sum(n for _, n in self.rows)

    def counts(self) -> dict[str, int]:
        return dict(self.rows)

    def render(self) -> str:
        return "".join(f"TASK {tid} inserted={n}\n" for tid, n in self.rows)


def compile_task(text: str, task_id: str, vocab: Vocabulary, graph: Iri | None = None) -> ConsolidationTask:
    """Parse and lint a task document; unknown ontology terms are compile errors."""
    try:
        operations = parse_update(text, vocab.prefixes)
    except QuerySyntaxError as exc:
        raise TaskError(f"task {task_id}: {exc}") from None
    for op in operations:
        if op.warnings:
            raise TaskError(f"task {task_id}: {op.warnings[0]}")
        unknown = vocab.unknown_terms(op.iris())
        if unknown:
            raise TaskError(f"task {task_id}: unknown term <{unknown[0]}>")
    description = ""
    for line in text.splitlines():
        if line.startswith("#"):
            description = line.lstrip("# ").strip()
            break
    return ConsolidationTask(task_id, operations, graph or vocab.consolidated_graph, description)


def task_id_from_path(path: Path) -> str:
    """``C1_subclass.rq`` -> ``C1``."""
    return re.split(r"[_\-.]", path.name, maxsplit=1)[0]


def load_tasks(paths, vocab: Vocabulary) -> list[ConsolidationTask]:
    tasks = []
    seen = set()
    for p in paths:
        p = Path(p)
        tid = task_id_from_path(p)
        if tid in seen:
            raise TaskError(f"duplicate task id {tid}")
        seen.add(tid)
        tasks.append(compile_task(p.read_text(encoding="utf-8"), tid, vocab))
    return tasks


def bundled_task_paths() -> list[Path]:
    root = resources.files("ccskg") / "data" / "tasks"
    return sorted((Path(str(p)) for p in root.iterdir() if p.name.endswith(".rq")), key=lambda p: p.name)


def bundled_tasks(vocab: Vocabulary) -> list[ConsolidationTask]:
    return load_tasks(bundled_task_paths(), vocab)


def run_task(store: GraphStore, task: ConsolidationTask, log: WarningLog | None = None) -> int:
    """Apply a task until it stops producing quads; returns the number inserted."""
    total = 0
    for _ in range(MAX_ROUNDS):
        inserted = sum(evaluate_insert(store, op, task.graph, log, source=task.task_id) for op in task.operations)
        total += inserted
        if inserted == 0:
            return total
    raise TaskError(f"task {task.task_id} did not reach a fixpoint in {MAX_ROUNDS} rounds")


def run_all(store: GraphStore, tasks: list[ConsolidationTask], log: WarningLog | None = None) -> TaskReport:
    """Run tasks in order, repeating the sequence until no task inserts anything.

    A later task can create facts an earlier one consumes (C4 types datasets
    that C1 must then lift), so a single pass is not a fixpoint.
    """
    report = TaskReport()
    for task in tasks:
        report.add(task.task_id, 0)
    for _ in range(MAX_ROUNDS):
        changed = 0
        for task in tasks:
            n = run_task(store, task, log)
            report.add(task.task_id, n)
            changed += n
        if changed == 0:
            return report
    raise TaskError(f"consolidation did not reach a fixpoint in {MAX_ROUNDS} rounds")
