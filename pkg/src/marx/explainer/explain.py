"""Failure localization, repair, and language rendering for infeasible
queries.

Each round locates the first failing item (one past the best conformance
level), characterizes the abstract states where that item's task does get
completed with an exact Boolean cover, picks the cover term closest to the
query, renders clauses from the term's positive literals, and repairs the
query accordingly. Rounds repeat until the repaired query is feasible.
Tasks never seen to complete are reported and removed instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..abstraction import Mmdp
from ..checker import annotate, check_feasible
from ..errors import RepairDiverged
from ..naming import Naming
from ..querylang import QueryItem, TemporalQuery, render_query
from .qm import DEFAULT_VAR_CAP, Implicant, minimal_dnf


@dataclass(frozen=True)
class PrecedenceClause:
    """``task`` (by ``coalition``) must complete before ``before_task``."""

    task: str
    coalition: frozenset[int]
    before_task: str


@dataclass(frozen=True)
class CoalitionClause:
    """``task`` was queried for ``queried`` but needs ``required``."""

    task: str
    queried: frozenset[int]
    required: frozenset[int]


@dataclass(frozen=True)
class NeverObservedClause:
    """``task`` never completed in any sampled execution."""

    task: str


ExplanationClause = PrecedenceClause | CoalitionClause | NeverObservedClause


def render_clause(clause: ExplanationClause, naming: Naming) -> str:
    """Deterministic sentence for a clause payload."""
    group = naming.group_noun
    if isinstance(clause, PrecedenceClause):
        return (f"The {group} cannot {naming.infinitive(clause.before_task)} "
                f"because {naming.gerund(clause.task)} must be completed "
                f"before {naming.gerund(clause.before_task)}.")
    if isinstance(clause, CoalitionClause):
        helpers = clause.required - clause.queried
        if helpers and clause.queried <= clause.required:
            verb = "needs" if len(clause.queried) == 1 else "need"
            return (f"The {group} cannot {naming.infinitive(clause.task)} "
                    f"because {naming.coalition_names(clause.queried)} {verb} "
                    f"{naming.coalition_names(helpers)} to help "
                    f"{naming.infinitive(clause.task)}.")
        return (f"The {group} cannot {naming.infinitive(clause.task)} "
                f"because {naming.gerund(clause.task)} must be completed by "
                f"{naming.coalition_names(clause.required)} instead of "
                f"{naming.coalition_names(clause.queried)}.")
    if isinstance(clause, NeverObservedClause):
        return (f"The {group} never {naming.infinitive(clause.task)} "
                f"in any observed execution.")
    raise TypeError(f"unknown clause {clause!r}")


def clause_to_dict(clause: ExplanationClause, naming: Naming) -> dict:
    if isinstance(clause, PrecedenceClause):
        payload = {"task": clause.task, "coalition": sorted(clause.coalition),
                   "beforeTask": clause.before_task}
        kind = "precedence"
    elif isinstance(clause, CoalitionClause):
        payload = {"task": clause.task, "queried": sorted(clause.queried),
                   "required": sorted(clause.required)}
        kind = "coalition"
    else:
        payload = {"task": clause.task}
        kind = "never_observed"
    return {"kind": kind, "payload": payload,
            "text": render_clause(clause, naming)}


@dataclass
class FailureEntry:
    index: int                      # 0-based position in the query below
    item: QueryItem
    query_text: str                 # the query this failure was found in
    clauses: list[ExplanationClause]
    removed: bool = False
    flagged: bool = False

    def to_dict(self, naming: Naming) -> dict:
        return {
            "index": self.index,
            "task": self.item.task,
            "coalition": sorted(self.item.coalition),
            "query": self.query_text,
            "clauses": [clause_to_dict(c, naming) for c in self.clauses],
            "removed": self.removed,
            "flagged": self.flagged,
        }


@dataclass
class ExplanationReport:
    failures: list[FailureEntry]
    final_query: TemporalQuery
    final_feasible: bool
    naming: Naming = field(default_factory=Naming)

    @property
    def flagged(self) -> bool:
        return any(f.flagged for f in self.failures)

    def sentences(self) -> list[str]:
        return [render_clause(c, self.naming)
                for f in self.failures for c in f.clauses]

    def to_dict(self) -> dict:
        return {
            "failures": [f.to_dict(self.naming) for f in self.failures],
            "finalQuery": render_query(self.final_query),
            "finalFeasible": self.final_feasible,
            "flagged": self.flagged,
        }


# -- term analysis -----------------------------------------------------------


def target_states(mmdp: Mmdp, task: str) -> set[int]:
    """States entered by a sampled edge that completes ``task`` (by any
    coalition, not only the queried one)."""
    out: set[int] = set()
    for (src, _action), targets in mmdp.transitions.items():
        for dst in targets:
            if dst == src:
                continue
            if any(ev.task == task for ev in mmdp.edge_events(src, dst)):
                out.add(dst)
    return out


def _positive_groups(term: Implicant, tasks: tuple[str, ...]) -> dict[str, frozenset[int]]:
    """Positive literals grouped by task: task -> implied coalition."""
    grouped: dict[str, set[int]] = {}
    num_tasks = len(tasks)
    for v in term.positive_vars():
        grouped.setdefault(tasks[v % num_tasks], set()).add(v // num_tasks + 1)
    return {t: frozenset(agents) for t, agents in grouped.items()}


def _filtered_groups(term: Implicant, query: TemporalQuery, failed_index: int,
                     tasks: tuple[str, ...]) -> dict[str, frozenset[int]]:
    """Positive groups minus tasks already pinned by earlier query items."""
    established = {query.items[k].task for k in range(failed_index)}
    return {t: c for t, c in _positive_groups(term, tasks).items()
            if t not in established}


def select_term(terms: list[Implicant], query: TemporalQuery,
                failed_index: int, mmdp: Mmdp) -> Implicant:
    """Pick the cover term closest to the query: +1 for each positive
    literal naming a queried agent of its task, -1 for each naming an
    unqueried agent; ties go to the smallest encoding."""
    del failed_index  # closeness is scored against the whole query
    tasks = mmdp.tasks
    num_tasks = len(tasks)

    def score(term: Implicant) -> int:
        total = 0
        for v in term.positive_vars():
            task = tasks[v % num_tasks]
            agent = v // num_tasks + 1
            pos = query.task_position(task)
            if pos is None:
                continue
            total += 1 if agent in query.items[pos].coalition else -1
        return total

    return min(terms, key=lambda t: (-score(t), t.encoded()))


def translate(term: Implicant, query: TemporalQuery, failed_index: int,
              mmdp: Mmdp) -> list[ExplanationClause]:
    """Clauses for one failure, from the term's positive literals.

    Tasks pinned by earlier query items are dropped. A remaining coalition
    for the failed task that differs from the queried one yields a
    coalition clause; every other remaining task yields a precedence
    clause. An exact match yields no clauses (handled by the caller).
    """
    item = query.items[failed_index]
    groups = _filtered_groups(term, query, failed_index, mmdp.tasks)
    clauses: list[ExplanationClause] = []
    for task in mmdp.tasks:  # deterministic task-list order
        if task == item.task or task not in groups:
            continue
        clauses.append(PrecedenceClause(task, groups[task], item.task))
    required = groups.get(item.task)
    if required is not None and required != item.coalition:
        clauses.append(CoalitionClause(item.task, item.coalition, required))
    return clauses


def repair_query(query: TemporalQuery, failed_index: int, term: Implicant,
                 mmdp: Mmdp) -> TemporalQuery:
    """Minimal edit implied by the term: fix the failed item's coalition,
    and move or insert the term's other tasks immediately before it (in
    task-list order). Items before the failed index are untouched."""
    item = query.items[failed_index]
    groups = _filtered_groups(term, query, failed_index, mmdp.tasks)
    preceding = [(task, groups[task]) for task in mmdp.tasks
                 if task in groups and task != item.task]
    preceding_tasks = {task for task, _ in preceding}
    new_items = list(query.items[:failed_index])
    new_items.extend(QueryItem(task, coalition) for task, coalition in preceding)
    new_items.append(QueryItem(item.task, groups.get(item.task, item.coalition)))
    new_items.extend(it for it in query.items[failed_index + 1:]
                     if it.task not in preceding_tasks)
    return TemporalQuery(tuple(new_items))


def _without(query: TemporalQuery, index: int) -> TemporalQuery:
    return TemporalQuery(query.items[:index] + query.items[index + 1:])


def explain(mmdp: Mmdp, query: TemporalQuery,
            var_cap: int | None = None) -> ExplanationReport:
    """Repair loop over all failures of an infeasible query.

    Repair is deterministic given the abstraction and the query, so a
    repaired query seen before means no term-derived edit can fix the
    current item; it is then removed with a flagged entry, which keeps the
    loop strictly progressing. The iteration cap turns any remaining defect
    into a RepairDiverged instead of a hang.
    """
    cap = var_cap if var_cap is not None else DEFAULT_VAR_CAP
    num_vars = mmdp.num_agents * len(mmdp.tasks)
    max_rounds = max(1, len(mmdp.tasks) * (len(query.items) + 1))
    failures: list[FailureEntry] = []
    current = query
    seen = {render_query(current)}
    for _ in range(max_rounds):
        if check_feasible(mmdp, current).feasible:
            return ExplanationReport(failures, current, True, mmdp.naming)
        umax, _node_u = annotate(mmdp, current)
        index = umax  # first unmatched item
        item = current.items[index]
        targets = target_states(mmdp, item.task)
        if not targets:
            failures.append(FailureEntry(
                index, item, render_query(current),
                [NeverObservedClause(item.task)], removed=True))
            current = _without(current, index)
        else:
            on_set = {mmdp.states[sid].progress.mask for sid in targets}
            terms = minimal_dnf(on_set, num_vars, var_cap=cap)
            term = select_term(terms, current, index, mmdp)
            clauses = translate(term, current, index, mmdp)
            repaired = repair_query(current, index, term, mmdp)
            if clauses and render_query(repaired) not in seen:
                failures.append(FailureEntry(
                    index, item, render_query(current), clauses))
                current = repaired
            else:
                # The term implies no further edit (or the edit cycles):
                # the block is an ordering the sampled policy never takes.
                if not clauses and index > 0:
                    clauses = [PrecedenceClause(
                        item.task, item.coalition,
                        current.items[index - 1].task)]
                elif not clauses:
                    clauses = [NeverObservedClause(item.task)]
                failures.append(FailureEntry(
                    index, item, render_query(current), clauses,
                    removed=True, flagged=True))
                current = _without(current, index)
        seen.add(render_query(current))
    raise RepairDiverged(
        f"no feasible repair after {max_rounds} rounds; last query "
        f"{render_query(current)!r}")
