"""Exact two-level Boolean minimization.

Quine-McCluskey prime generation over an explicit ON-set (the OFF-set is
the full complement; there are no don't-cares), followed by an exact
minimum prime cover. Petrick-style exactness is obtained with
branch-and-bound set cover seeded by essential primes; among all
minimum-cardinality covers the lexicographically smallest (by the
implicants' '0'/'1'/'-' encodings) is returned, so output order is fully
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import TooManyVariables

DEFAULT_VAR_CAP = 24


@dataclass(frozen=True)
class Implicant:
    """Product term: ``care`` marks bound variables, ``bits`` their values."""

    num_vars: int
    bits: int
    care: int

    def covers(self, assignment: int) -> bool:
        return (assignment & self.care) == self.bits

    def literals(self) -> list[tuple[int, bool]]:
        """(variable index, polarity) for every bound variable."""
        out = []
        for v in range(self.num_vars):
            if self.care >> v & 1:
                out.append((v, bool(self.bits >> v & 1)))
        return out

    def positive_vars(self) -> list[int]:
        return [v for v, pol in self.literals() if pol]

    def encoded(self) -> str:
        """Canonical text form, index 0 leftmost: '1', '0', or '-' (free)."""
        return "".join(
            ("1" if self.bits >> v & 1 else "0") if self.care >> v & 1 else "-"
            for v in range(self.num_vars))

    @classmethod
    def from_encoded(cls, text: str) -> "Implicant":
        bits = care = 0
        for v, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << v
                care |= 1 << v
            elif ch == "0":
                care |= 1 << v
            elif ch != "-":
                raise ValueError(f"bad literal {ch!r}")
        return cls(len(text), bits, care)


def _normalize_on_set(on_set, num_vars: int) -> set[int]:
    full = (1 << num_vars) - 1
    out: set[int] = set()
    for item in on_set:
        if isinstance(item, int):
            mask = item
        else:  # sequence of booleans, index = variable
            mask = 0
            for v, bit in enumerate(item):
                if bit:
                    mask |= 1 << v
        if mask & ~full:
            raise ValueError(f"assignment {mask:#x} exceeds {num_vars} variables")
        out.add(mask)
    return out


def prime_implicants(on_set, num_vars: int) -> list[Implicant]:
    """All maximal cubes lying entirely inside the ON-set."""
    minterms = _normalize_on_set(on_set, num_vars)
    level = {(m, (1 << num_vars) - 1) for m in minterms}
    primes: set[tuple[int, int]] = set()
    while level:
        merged: set[tuple[int, int]] = set()
        used: set[tuple[int, int]] = set()
        by_group: dict[tuple[int, int], list[int]] = {}
        for bits, care in level:
            by_group.setdefault((care, bin(bits).count("1")), []).append(bits)
        for (care, ones), group in by_group.items():
            partners = by_group.get((care, ones + 1), [])
            group_set = set(partners)
            for bits in group:
                for v in range(num_vars):
                    if not care >> v & 1 or bits >> v & 1:
                        continue
                    other = bits | 1 << v
                    if other in group_set:
                        merged.add((bits, care & ~(1 << v)))
                        used.add((bits, care))
                        used.add((other, care))
        primes |= level - used
        level = merged
    return sorted(
        (Implicant(num_vars, b, c) for b, c in primes),
        key=lambda imp: imp.encoded())


class _CoverProblem:
    """Exact minimum set cover over bitmask rows (classic mincov).

    Columns are prime indices in encoding order; rows are ON minterms
    packed into an int. Reductions (essential columns, dominated rows,
    dominated columns) run before branch-and-bound with an
    independent-rows lower bound.
    """

    def __init__(self, cover_masks: list[int]):
        self.cover = cover_masks

    def _essentials(self, uncovered: int, allowed: list[int]):
        forced: list[int] = []
        while uncovered:
            hit = False
            remaining = uncovered
            row = 0
            while remaining:
                if remaining & 1:
                    cands = [c for c in allowed if self.cover[c] >> row & 1]
                    if not cands:
                        return None  # uncoverable
                    if len(cands) == 1:
                        forced.append(cands[0])
                        uncovered &= ~self.cover[cands[0]]
                        hit = True
                        break
                remaining >>= 1
                row += 1
            if not hit:
                break
        return forced, uncovered

    def _lower_bound(self, uncovered: int, allowed: list[int]) -> int:
        # rows no two of which share a column each need their own column
        bound = 0
        blocked = 0
        remaining = uncovered
        row = 0
        while remaining:
            if remaining & 1 and not blocked >> row & 1:
                bound += 1
                for c in allowed:
                    if self.cover[c] >> row & 1:
                        blocked |= self.cover[c]
            remaining >>= 1
            row += 1
        return bound

    def _drop_dominated_columns(self, uncovered: int,
                                allowed: list[int]) -> list[int]:
        live = [(c, self.cover[c] & uncovered) for c in allowed]
        live = [(c, m) for c, m in live if m]
        kept: list[int] = []
        for i, (c, m) in enumerate(live):
            dominated = False
            for j, (c2, m2) in enumerate(live):
                if i == j or m & ~m2:
                    continue
                if m2 != m or j < i:
                    dominated = True
                    break
            if not dominated:
                kept.append(c)
        return kept

    def search(self, uncovered: int, allowed: list[int], budget: int,
               reduce_columns: bool = True, first: bool = False):
        """Smallest cover of ``uncovered`` using ``allowed`` columns, or
        None if none fits within ``budget`` columns. With ``first`` any
        fitting cover is returned as soon as found."""
        if budget < 0:
            return None
        if not uncovered:
            return []
        reduced = self._essentials(uncovered, allowed)
        if reduced is None:
            return None
        forced, uncovered = reduced
        if len(forced) > budget:
            return None
        if not uncovered:
            return forced
        allowed = [c for c in allowed if self.cover[c] & uncovered]
        if reduce_columns and len(allowed) > 1:
            allowed = self._drop_dominated_columns(uncovered, allowed)
        budget -= len(forced)
        lower = self._lower_bound(uncovered, allowed)
        if lower > budget:
            return None
        # branch on the hardest row, best columns first
        cands = None
        remaining = uncovered
        row = 0
        while remaining:
            if remaining & 1:
                row_cands = [c for c in allowed if self.cover[c] >> row & 1]
                if cands is None or len(row_cands) < len(cands):
                    cands = row_cands
            remaining >>= 1
            row += 1
        cands.sort(key=lambda c: -bin(self.cover[c] & uncovered).count("1"))
        best = None
        for c in cands:
            sub_budget = (budget if best is None else len(best) - len(forced) - 1) - 1
            sub = self.search(uncovered & ~self.cover[c], allowed, sub_budget,
                              reduce_columns=False, first=first)
            if sub is not None:
                candidate = forced + [c] + sub
                if first:
                    return candidate
                if best is None or len(candidate) < len(best):
                    best = candidate
                    if len(best) - len(forced) <= lower:
                        break
        return best

    def min_size(self, uncovered: int, budget: int) -> int | None:
        found = self.search(uncovered, list(range(len(self.cover))), budget)
        return None if found is None else len(found)

    def coverable(self, uncovered: int, min_col: int, budget: int) -> bool:
        allowed = [c for c in range(min_col, len(self.cover))
                   if self.cover[c] & uncovered]
        return self.search(uncovered, allowed, budget, first=True) is not None

    def lex_min_cover(self, num_rows: int) -> list[int]:
        """Lexicographically smallest (by column index) minimum cover."""
        full = (1 << num_rows) - 1
        k_min = self.min_size(full, len(self.cover))
        if k_min is None:
            raise ValueError("ON-set not coverable by its primes")
        picked: list[int] = []
        uncovered = full
        start = 0
        budget = k_min
        while uncovered:
            for c in range(start, len(self.cover)):
                if not self.cover[c] & uncovered:
                    continue
                if self.coverable(uncovered & ~self.cover[c], c + 1,
                                  budget - 1):
                    picked.append(c)
                    uncovered &= ~self.cover[c]
                    start = c + 1
                    budget -= 1
                    break
            else:  # pragma: no cover - k_min guarantees a completion
                raise AssertionError("minimum cover construction failed")
        return picked


def minimal_dnf(on_set, num_vars: int,
                var_cap: int = DEFAULT_VAR_CAP) -> list[Implicant]:
    """Minimum-cardinality prime cover of the ON-set's characteristic function.

    The OFF-set is implicitly everything else over ``num_vars`` variables.
    Among minimum covers the lexicographically smallest by implicant
    encoding is returned. Raises TooManyVariables above ``var_cap`` rather
    than approximating.
    """
    if num_vars > var_cap:
        raise TooManyVariables(
            f"{num_vars} variables exceeds the cap of {var_cap}")
    minterms = _normalize_on_set(on_set, num_vars)
    if not minterms:
        raise ValueError("ON-set must be non-empty")
    primes = prime_implicants(minterms, num_vars)
    ordered = sorted(minterms)
    row_of = {m: j for j, m in enumerate(ordered)}
    cover_masks = []
    for p in primes:
        mask = 0
        for m in ordered:
            if p.covers(m):
                mask |= 1 << row_of[m]
        cover_masks.append(mask)
    problem = _CoverProblem(cover_masks)
    picked = problem.lex_min_cover(len(ordered))
    return [primes[c] for c in sorted(picked)]
