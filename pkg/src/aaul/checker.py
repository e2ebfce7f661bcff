"""Model checking, including the arbitrary-update modalities.

[*]f quantifies over every update whose clause formulas are quantifier
free. On a finite model that range collapses to a finite one: a
quantifier-free formula can only define a union of bisimulation blocks, so
the arrow set an update keeps is a union of arrow blocks (see bisim), and
every such union is realizable by clauses built from characteristic
formulas. The checker therefore enumerates the 2^k unions of the k arrow
blocks, in lexicographic order over the sorted index tuples. k is capped by
Budget.max_arrow_blocks; hitting a cap raises BudgetExceededError rather
than guessing.

`brute_force_arb_oracle` answers the same question along a deliberately
different path for differential testing: per-state recursion with no
memoization and no early exits, materializing each union as concrete clause
text that is parsed back and applied as an ordinary update.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bisim import ArrowBlock, Partition, arrow_blocks, characteristic_formulas, coarsest_partition
from .errors import BudgetExceededError
from .kripke import KripkeModel
from .syntax import (
    And,
    ArbBox,
    ArbDiamond,
    Atom,
    BOT,
    Bot,
    Box,
    Clause,
    Diamond,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    Update,
    UpdateBox,
    UpdateDiamond,
    desugar,
    parse_update,
    print_formula,
)
from .updates import apply_update


@dataclass(frozen=True)
class Budget:
    """Caps on the work one check may do. Exceeding a cap raises, never approximates."""

    max_arrow_blocks: int = 20
    max_recursion_depth: int = 64

    def __post_init__(self):
        if self.max_arrow_blocks < 1 or self.max_recursion_depth < 1:
            raise ValueError("budget caps must be positive")


DEFAULT_BUDGET = Budget()


def _lex_subsets(n: int, start: int = 0):
    """All subsets of range(n) as sorted tuples, in lexicographic order:
    (), (0,), (0,1), (0,1,2), ..., (0,2), ..., (1,), (1,2), ...
    """
    yield ()
    for i in range(start, n):
        for rest in _lex_subsets(n, i + 1):
            yield (i,) + rest


def _induced_submodel(m: KripkeModel, blocks: tuple[ArrowBlock, ...], chosen: tuple[int, ...]) -> KripkeModel:
    arrows: dict[str, set] = {a: set() for a in m.agents}
    for i in chosen:
        arrows[blocks[i].agent] |= blocks[i].arrows
    return m.with_arrows({a: frozenset(s) for a, s in arrows.items()})


def _materialize_update(
    m: KripkeModel,
    part: Partition,
    blocks: tuple[ArrowBlock, ...],
    chosen: tuple[int, ...],
) -> Update:
    """An update literal that keeps exactly the chosen blocks' arrows.

    The empty union becomes a single never-matching clause, since updates
    need at least one clause.
    """
    if not chosen:
        agent = m.agents[0] if m.agents else "a"
        return Update((Clause(BOT, agent, BOT),))
    chars = characteristic_formulas(m, part)
    return Update(
        tuple(
            Clause(chars[blocks[i].source_block], blocks[i].agent, chars[blocks[i].target_block])
            for i in chosen
        )
    )


def _checked_blocks(m: KripkeModel, budget: Budget) -> tuple[Partition, tuple[ArrowBlock, ...]]:
    part = coarsest_partition(m)
    blocks = arrow_blocks(m, part)
    if len(blocks) > budget.max_arrow_blocks:
        raise BudgetExceededError(
            f"{len(blocks)} arrow blocks exceed the cap of {budget.max_arrow_blocks}",
            kind="arrow_blocks",
        )
    return part, blocks


class _Evaluator:
    """Truth-set evaluation of core formulas, memoized per (model, subformula).

    Formulas are memo-keyed by identity, not structure: structural hashing
    of characteristic formulas would cost more than it saves. The evaluator
    pins every memoized formula so ids cannot be recycled underneath it.
    One evaluator serves one public call; nothing leaks across calls.
    """

    def __init__(self, budget: Budget):
        self.budget = budget
        self.memo: dict = {}
        self.pinned: list = []

    def truth_set(self, m: KripkeModel, f: Formula, depth: int) -> frozenset[str]:
        if depth > self.budget.max_recursion_depth:
            raise BudgetExceededError(
                f"recursion deeper than {self.budget.max_recursion_depth}",
                kind="recursion",
            )
        key = (m.fingerprint, id(f))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = self._compute(m, f, depth)
        self.memo[key] = out
        self.pinned.append(f)
        return out

    def _compute(self, m: KripkeModel, f: Formula, depth: int) -> frozenset[str]:
        if isinstance(f, Top):
            return frozenset(m.states)
        if isinstance(f, Atom):
            # undeclared propositions are false everywhere
            return m.valuation.get(f.name, frozenset())
        if isinstance(f, Not):
            return frozenset(m.states) - self.truth_set(m, f.body, depth + 1)
        if isinstance(f, And):
            return self.truth_set(m, f.left, depth + 1) & self.truth_set(m, f.right, depth + 1)
        if isinstance(f, Box):
            body = self.truth_set(m, f.body, depth + 1)
            failing = {s for s, t in m.arrow_set(f.agent) if t not in body}
            return frozenset(m.states) - failing
        if isinstance(f, UpdateBox):
            def ev(mm, ww, ff, _d=depth + 1):
                return ww in self.truth_set(mm, ff, _d)

            updated = apply_update(m, f.update, ev)
            return self.truth_set(updated, f.body, depth + 1)
        if isinstance(f, ArbBox):
            if isinstance(f.body, Top):
                return frozenset(m.states)
            part, blocks = _checked_blocks(m, self.budget)
            out = set(m.states)
            for chosen in _lex_subsets(len(blocks)):
                sub = _induced_submodel(m, blocks, chosen)
                out &= self.truth_set(sub, f.body, depth + 1)
                if not out:
                    break
            return frozenset(out)
        raise TypeError(f"not a core formula: {f!r}")


def truth_set(m: KripkeModel, f: Formula, budget: Budget = DEFAULT_BUDGET) -> frozenset[str]:
    """The states of m where f holds."""
    return _Evaluator(budget).truth_set(m, desugar(f), 0)


def satisfies(m: KripkeModel, state: str, f: Formula, budget: Budget = DEFAULT_BUDGET) -> bool:
    m.state_index(state)
    return state in truth_set(m, f, budget)


def witness_update(m: KripkeModel, state: str, f: Formula, budget: Budget = DEFAULT_BUDGET):
    """For f = <*>body: the first union (in enumeration order) whose induced
    model satisfies body at state, materialized as a concrete update; None if
    no union works. Applying the result and checking body reproduces True.
    """
    if not isinstance(f, ArbDiamond):
        raise TypeError("witness_update expects a <*> formula")
    m.state_index(state)
    part, blocks = _checked_blocks(m, budget)
    ev = _Evaluator(budget)
    body = desugar(f.body)
    for chosen in _lex_subsets(len(blocks)):
        sub = _induced_submodel(m, blocks, chosen)
        if state in ev.truth_set(sub, body, 0):
            return _materialize_update(m, part, blocks, chosen)
    return None


class _Oracle:
    """Per-state recursive evaluation of the full (sugared) language.

    Used as the slow reference in differential tests. Boolean connectives
    evaluate both sides, modalities visit every successor, and quantified
    modalities materialize every union through clause text, reparse it and
    apply it as a plain update. No memoization anywhere.
    """

    def __init__(self, budget: Budget):
        self.budget = budget

    def holds(self, m: KripkeModel, w: str, f: Formula, depth: int) -> bool:
        if depth > self.budget.max_recursion_depth:
            raise BudgetExceededError(
                f"recursion deeper than {self.budget.max_recursion_depth}",
                kind="recursion",
            )
        if isinstance(f, Atom):
            return w in m.valuation.get(f.name, frozenset())
        if isinstance(f, Top):
            return True
        if isinstance(f, Bot):
            return False
        if isinstance(f, Not):
            return not self.holds(m, w, f.body, depth + 1)
        if isinstance(f, (And, Or, Implies, Iff)):
            left = self.holds(m, w, f.left, depth + 1)
            right = self.holds(m, w, f.right, depth + 1)
            if isinstance(f, And):
                return left and right
            if isinstance(f, Or):
                return left or right
            if isinstance(f, Implies):
                return (not left) or right
            return left == right
        if isinstance(f, Box):
            results = [self.holds(m, v, f.body, depth + 1) for v in m.successors(f.agent, w)]
            return all(results)
        if isinstance(f, Diamond):
            results = [self.holds(m, v, f.body, depth + 1) for v in m.successors(f.agent, w)]
            return any(results)
        if isinstance(f, (UpdateBox, UpdateDiamond)):
            # applying an update is deterministic, so [U] and <U> coincide
            updated = apply_update(m, f.update, self._eval(depth + 1))
            return self.holds(updated, w, f.body, depth + 1)
        if isinstance(f, (ArbBox, ArbDiamond)):
            results = []
            for updated in self._all_updated_models(m, depth):
                results.append(self.holds(updated, w, f.body, depth + 1))
            if isinstance(f, ArbBox):
                return all(results)
            return any(results)
        raise TypeError(f"not a formula: {f!r}")

    def _eval(self, depth: int):
        return lambda mm, ww, ff: self.holds(mm, ww, ff, depth)

    def _all_updated_models(self, m: KripkeModel, depth: int):
        part, blocks = _checked_blocks(m, self.budget)
        chars = characteristic_formulas(m, part)
        clause_text = [
            f"({print_formula(chars[b.source_block])},{b.agent},{print_formula(chars[b.target_block])})"
            for b in blocks
        ]
        fallback_agent = m.agents[0] if m.agents else "a"
        for chosen in _lex_subsets(len(blocks)):
            if chosen:
                text = "{" + ",".join(clause_text[i] for i in chosen) + "}"
            else:
                text = "{(false," + fallback_agent + ",false)}"
            update = parse_update(text)
            yield apply_update(m, update, self._eval(depth + 1))


def brute_force_arb_oracle(m: KripkeModel, state: str, f: Formula, budget: Budget = DEFAULT_BUDGET) -> bool:
    m.state_index(state)
    return _Oracle(budget).holds(m, state, f, 0)
