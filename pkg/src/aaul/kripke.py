"""Finite pointed Kripke models over named agents and propositions.

Models are immutable. Declared order of states, agents and propositions is
part of the model's identity: two models that differ only in declaration
order compare unequal and serialize to different (but each deterministic)
text. That keeps save/load a strict round trip and makes every iteration
order in the package reproducible.

Text format, one declaration per line, `#` starts a comment:

    states: w v
    agent a: w->v v->v
    val p: v
    point: w

Every declared agent and proposition gets a line on save, even when empty.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ModelFormatError, UnknownAgentError, UnknownStateError

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_ARROW_RE = re.compile(r"([A-Za-z0-9_]+)->([A-Za-z0-9_]+)\Z")


def _check_names(kind: str, names) -> tuple[str, ...]:
    names = tuple(names)
    seen = set()
    for n in names:
        if not isinstance(n, str) or not _NAME_RE.match(n):
            raise ValueError(f"bad {kind} name {n!r}: use [A-Za-z0-9_]+")
        if n in seen:
            raise ValueError(f"duplicate {kind} name {n!r}")
        seen.add(n)
    return names


@dataclass(frozen=True)
class KripkeModel:
    states: tuple[str, ...]
    agents: tuple[str, ...]
    props: tuple[str, ...]
    arrows: Mapping[str, frozenset[tuple[str, str]]]
    valuation: Mapping[str, frozenset[str]]
    point: str | None = None
    _fingerprint: tuple = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        states = _check_names("state", self.states)
        agents = _check_names("agent", self.agents)
        props = _check_names("proposition", self.props)
        if not states:
            raise ValueError("a model needs at least one state")
        state_set = set(states)

        for a in self.arrows:
            if a not in agents:
                raise ValueError(f"arrows given for undeclared agent {a!r}")
        arrows = {}
        for a in agents:
            pairs = frozenset(tuple(p) for p in self.arrows.get(a, ()))
            for s, t in pairs:
                if s not in state_set or t not in state_set:
                    raise ValueError(f"arrow {s}->{t} for agent {a!r} leaves declared states")
            arrows[a] = pairs

        for p in self.valuation:
            if p not in props:
                raise ValueError(f"valuation given for undeclared proposition {p!r}")
        valuation = {}
        for p in props:
            holds = frozenset(self.valuation.get(p, ()))
            bad = holds - state_set
            if bad:
                raise ValueError(f"valuation of {p!r} mentions unknown state {sorted(bad)[0]!r}")
            valuation[p] = holds

        if self.point is not None and self.point not in state_set:
            raise ValueError(f"point {self.point!r} is not a declared state")

        index = {s: i for i, s in enumerate(states)}
        fingerprint = (
            states,
            agents,
            props,
            tuple(
                tuple(sorted(arrows[a], key=lambda st: (index[st[0]], index[st[1]])))
                for a in agents
            ),
            tuple(tuple(sorted(valuation[p], key=index.get)) for p in props),
            self.point,
        )
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "props", props)
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "_fingerprint", fingerprint)
        object.__setattr__(self, "_index", index)

    def __hash__(self):
        return hash(self._fingerprint)

    @property
    def fingerprint(self) -> tuple:
        """Canonical hashable form; equal models have equal fingerprints."""
        return self._fingerprint

    def state_index(self, state: str) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise UnknownStateError(f"unknown state {state!r}") from None

    def arrow_set(self, agent: str) -> frozenset[tuple[str, str]]:
        try:
            return self.arrows[agent]
        except KeyError:
            raise UnknownAgentError(f"unknown agent {agent!r}") from None

    def successors(self, agent: str, state: str) -> tuple[str, ...]:
        """Targets of the agent's arrows out of state, in declared state order."""
        pairs = self.arrow_set(agent)
        self.state_index(state)
        return tuple(sorted((t for s, t in pairs if s == state), key=self._index.get))

    def props_at(self, state: str) -> tuple[str, ...]:
        self.state_index(state)
        return tuple(p for p in self.props if state in self.valuation[p])

    def with_arrows(self, arrows: Mapping[str, frozenset[tuple[str, str]]]) -> "KripkeModel":
        return KripkeModel(self.states, self.agents, self.props, arrows, self.valuation, self.point)

    def with_point(self, point: str | None) -> "KripkeModel":
        return KripkeModel(self.states, self.agents, self.props, self.arrows, self.valuation, point)


def load_model(text: str) -> KripkeModel:
    states = None
    agents: list[str] = []
    props: list[str] = []
    arrows: dict[str, list[tuple[str, str]]] = {}
    valuation: dict[str, list[str]] = {}
    point = None
    point_seen = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ModelFormatError(f"expected 'keyword:' in {line!r}", lineno)
        keyword = head.split()
        body = rest.split()

        if keyword == ["states"]:
            if states is not None:
                raise ModelFormatError("duplicate states line", lineno)
            states = body
            seen = set()
            for s in states:
                if s in seen:
                    raise ModelFormatError(f"duplicate state name {s!r}", lineno)
                seen.add(s)
        elif len(keyword) == 2 and keyword[0] == "agent":
            name = keyword[1]
            if name in arrows:
                raise ModelFormatError(f"duplicate agent line for {name!r}", lineno)
            agents.append(name)
            arrows[name] = []
            for tok in body:
                m = _ARROW_RE.match(tok)
                if m is None:
                    raise ModelFormatError(f"expected 'source->target', found {tok!r}", lineno)
                arrows[name].append((m.group(1), m.group(2)))
        elif len(keyword) == 2 and keyword[0] == "val":
            name = keyword[1]
            if name in valuation:
                raise ModelFormatError(f"duplicate val line for {name!r}", lineno)
            props.append(name)
            valuation[name] = body
        elif keyword == ["point"]:
            if point_seen:
                raise ModelFormatError("duplicate point line", lineno)
            if len(body) != 1:
                raise ModelFormatError("point line needs exactly one state", lineno)
            point = body[0]
            point_seen = True
        else:
            raise ModelFormatError(f"unknown declaration {head.strip()!r}", lineno)

    if states is None:
        raise ModelFormatError("missing states line", max(1, text.count("\n") + 1))
    try:
        return KripkeModel(tuple(states), tuple(agents), tuple(props), arrows, valuation, point)
    except ValueError as e:
        raise ModelFormatError(str(e), max(1, text.count("\n") + 1)) from None


def save_model(m: KripkeModel) -> str:
    """Deterministic text form; load_model(save_model(m)) == m."""
    index = m.state_index
    lines = ["states: " + " ".join(m.states)]
    for a in m.agents:
        pairs = sorted(m.arrows[a], key=lambda st: (index(st[0]), index(st[1])))
        lines.append(f"agent {a}:" + "".join(f" {s}->{t}" for s, t in pairs))
    for p in m.props:
        holds = sorted(m.valuation[p], key=index)
        lines.append(f"val {p}:" + "".join(f" {s}" for s in holds))
    if m.point is not None:
        lines.append(f"point: {m.point}")
    return "\n".join(lines) + "\n"


def export_dot(m: KripkeModel) -> str:
    """Graphviz digraph: one node per state (point doubled), one edge per arrow."""
    index = m.state_index
    lines = ["digraph model {"]
    for s in m.states:
        label = s
        props = m.props_at(s)
        if props:
            label += "\\n" + " ".join(props)
        shape = "doublecircle" if s == m.point else "circle"
        lines.append(f'  {s} [label="{label}", shape={shape}];')
    for a in m.agents:
        pairs = sorted(m.arrows[a], key=lambda st: (index(st[0]), index(st[1])))
        for s, t in pairs:
            lines.append(f'  {s} -> {t} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
