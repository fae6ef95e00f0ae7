"""Bounded reachability search over reduction graphs.

Used by the simulation checkers: given a source term and a candidate
reduct, find a chain of single steps connecting them.  A two-phase
strategy keeps the common case cheap: a first pass follows only a small
set of "fast" moves (head steps and trailing eta collapses, which is
where translated reducts actually live), and only if that pass comes up
empty do we fall back to exhaustive breadth-first search.  Terms compare
by alpha-equivalence, so the visited set deduplicates alpha-variants.
"""

from __future__ import annotations

from collections import deque
from typing import Callable

from .syntax import Term


class DepthCapExceeded(Exception):
    """The search gave up with unexplored states remaining.

    Raised only when the answer is genuinely unknown: either the depth
    cap or the state budget was hit while the frontier was still live.
    An exhausted graph yields a definite answer instead.
    """


Moves = Callable[[Term], list[Term]]


def default_search_budget(n: int) -> int:
    """State budget for exhaustive search, scaled down for big images.

    Successor enumeration costs roughly quadratic time in the term size,
    so the budget shrinks with the square of the size: small images get
    a definite answer, large ones give up quickly.
    """
    return max(64, min(20000, 500_000 // max(1, n * n)))


def _backtrack(parent: dict[Term, Term | None], goal: Term) -> list[Term]:
    chain = [goal]
    cur: Term | None = goal
    while True:
        cur = parent[cur]
        if cur is None:
            break
        chain.append(cur)
    chain.reverse()
    return chain


def _bfs(start: Term, goal: Term, moves: Moves, cap: int,
         budget: int) -> tuple[list[Term] | None, bool]:
    """Breadth-first search; returns (chain or None, hit_a_limit)."""
    parent: dict[Term, Term | None] = {start: None}
    frontier: deque[tuple[Term, int]] = deque([(start, 0)])
    limited = False
    while frontier:
        t, d = frontier.popleft()
        if d >= cap:
            limited = True
            continue
        for t2 in moves(t):
            if t2 in parent:
                continue
            parent[t2] = t
            if t2 == goal:
                return _backtrack(parent, goal), limited
            if len(parent) > budget:
                return None, True
            frontier.append((t2, d + 1))
    return None, limited


def find_chain(start: Term, goal: Term, fast_moves: Moves, all_moves: Moves,
               cap: int, budget: int = 20000) -> list[Term] | None:
    """Find a step chain from start to goal, or None if there is none.

    The returned list includes both endpoints; a zero-length reduction
    (start alpha-equal to goal) returns [start].  Raises
    DepthCapExceeded when neither phase could settle the question.
    """
    if start == goal:
        return [start]
    chain, _ = _bfs(start, goal, fast_moves, cap, budget)
    if chain is not None:
        return chain
    chain, limited = _bfs(start, goal, all_moves, cap, budget)
    if chain is not None:
        return chain
    if limited:
        raise DepthCapExceeded(
            f"no chain within depth {cap} and budget {budget}")
    return None
