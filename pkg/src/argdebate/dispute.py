"""Dispute trees, proponent strategies and the winning-strategy checks.

Infinite dispute trees are never built. A strategy's subtree is summarised by
a reachability pass over ``(argument, label)`` pairs, and infinite branches
show up as cycles in that finite graph.
"""

import enum
from dataclasses import dataclass, field
from types import MappingProxyType

from .errors import FrameworkError, ResourceExceeded


class PlayerLabel(enum.Enum):
    P = "P"
    O = "O"

    def other(self):
        return PlayerLabel.O if self is PlayerLabel.P else PlayerLabel.P


class WinningKind(enum.Enum):
    GROUNDED = "grounded"
    ADMISSIBLE = "admissible"
    IDEAL = "ideal"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for kind in cls:
            if key in (kind.value, kind.value + "ws", kind.name.lower()):
                return kind
        raise ValueError(f"unknown winning-strategy kind {value!r}")


@dataclass(frozen=True)
class DisputeNode:
    argument: str
    label: PlayerLabel
    depth: int
    children: tuple = ()
    # True when the node sits at the depth limit but still has children
    truncated: bool = False

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


class ProponentStrategy:
    """Partial map from opponent arguments to one of their attackers."""

    def __init__(self, af, choice=None):
        choice = dict(choice or {})
        for x, y in choice.items():
            af.check_argument(x)
            if not af.attacks_pair(y, x):
                raise FrameworkError(f"strategy maps {x!r} to {y!r}, which does not attack it")
        self.choice = MappingProxyType(choice)

    def __getitem__(self, x):
        return self.choice[x]

    def get(self, x, default=None):
        return self.choice.get(x, default)

    def __contains__(self, x):
        return x in self.choice

    def __len__(self):
        return len(self.choice)

    def __eq__(self, other):
        if isinstance(other, ProponentStrategy):
            return dict(self.choice) == dict(other.choice)
        if isinstance(other, dict):
            return dict(self.choice) == other
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.choice.items()))

    def items(self):
        return sorted(self.choice.items())

    def __repr__(self):
        body = ", ".join(f"{x} -> {y}" for x, y in self.items())
        return f"ProponentStrategy({{{body}}})"


def _as_choice(sigma):
    if sigma is None:
        return {}
    if isinstance(sigma, ProponentStrategy):
        return sigma.choice
    return sigma


@dataclass(frozen=True)
class StrategySubtree:
    root: str
    pro_args: frozenset
    opp_args: frozenset
    undefended_opp: frozenset
    has_infinite_branch: bool
    edges: dict = field(default_factory=dict, repr=False, compare=False)


def expand_dispute_tree(af, a, max_depth, sigma=None):
    """The dispute tree induced by ``a``, cut at ``max_depth``.

    With ``sigma`` given, each opponent node keeps only the reply chosen by
    the strategy (none if undefined), giving the truncation of the strategy's
    subtree instead of the full tree.
    """
    af.check_argument(a)
    if max_depth < 0:
        raise ValueError("max_depth must be nonnegative")
    choice = _as_choice(sigma)

    def children_of(x, label):
        if label is PlayerLabel.O and sigma is not None:
            return (choice[x],) if x in choice else ()
        return af.sorted_attackers(x)

    def build(x, label, depth):
        nxt = children_of(x, label)
        if depth == max_depth:
            return DisputeNode(x, label, depth, (), truncated=bool(nxt))
        kids = tuple(build(y, label.other(), depth + 1) for y in nxt)
        return DisputeNode(x, label, depth, kids)

    return build(a, PlayerLabel.P, 0)


def render_outline(node):
    """Indented ``P: x`` / ``O: y`` outline of a (truncated) tree."""
    lines = []
    for n in node.walk():
        suffix = " ..." if n.truncated else ""
        lines.append("  " * n.depth + f"{n.label.value}: {n.argument}{suffix}")
    return "\n".join(lines) + "\n"


def apply_strategy(af, a, sigma):
    """Summarise the subtree obtained by the proponent playing ``sigma`` from ``a``."""
    af.check_argument(a)
    choice = _as_choice(sigma)
    root = (a, PlayerLabel.P)
    edges = {}
    stack = [root]
    while stack:
        node = stack.pop()
        if node in edges:
            continue
        x, label = node
        if label is PlayerLabel.P:
            succ = tuple((y, PlayerLabel.O) for y in af.sorted_attackers(x))
        else:
            succ = ((choice[x], PlayerLabel.P),) if x in choice else ()
        edges[node] = succ
        stack.extend(s for s in succ if s not in edges)

    pro = frozenset(x for x, lab in edges if lab is PlayerLabel.P)
    opp = frozenset(x for x, lab in edges if lab is PlayerLabel.O)
    undefended = frozenset(x for (x, lab), succ in edges.items()
                           if lab is PlayerLabel.O and not succ)
    return StrategySubtree(a, pro, opp, undefended, _has_cycle(edges, root), edges)


def _has_cycle(edges, root):
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {n: WHITE for n in edges}
    stack = [(root, iter(edges[root]))]
    colour[root] = GREY
    while stack:
        node, it = stack[-1]
        for nxt in it:
            if colour[nxt] == GREY:
                return True
            if colour[nxt] == WHITE:
                colour[nxt] = GREY
                stack.append((nxt, iter(edges[nxt])))
                break
        else:
            colour[node] = BLACK
            stack.pop()
    return False


def is_winning(af, a, sigma, kind, _cache=None):
    kind = WinningKind.parse(kind)
    sub = apply_strategy(af, a, sigma)
    if sub.undefended_opp:
        return False
    if kind is WinningKind.GROUNDED:
        return not sub.has_infinite_branch
    if sub.pro_args & sub.opp_args:
        return False
    if kind is WinningKind.ADMISSIBLE:
        return True
    cache = {} if _cache is None else _cache
    return not any(_credulous(af, b, cache) for b in sub.opp_args)


def _credulous(af, b, cache):
    if b not in cache:
        cache[b] = exists_winning(af, b, WinningKind.ADMISSIBLE) is not None
    return cache[b]


#: Default cap on the number of partial strategies visited by exists_winning.
MAX_SEARCH_NODES = 200_000


def exists_winning(af, a, kind, max_nodes=MAX_SEARCH_NODES):
    """First winning strategy in a fixed depth-first order, or ``None``.

    The search only assigns replies to opponent arguments reachable in the
    current subtree: the least undecided opponent argument (by name) is
    decided next, trying its attackers by name. Any failure that can only
    persist as the strategy grows prunes the branch, so ``None`` is
    definitive.
    """
    kind = WinningKind.parse(kind)
    af.check_argument(a)
    cred_cache = {}
    visited = 0

    def dead(sub):
        if kind is WinningKind.GROUNDED:
            return sub.has_infinite_branch
        if sub.pro_args & sub.opp_args:
            return True
        if kind is WinningKind.IDEAL:
            return any(_credulous(af, b, cred_cache) for b in sub.opp_args)
        return False

    def search(choice):
        nonlocal visited
        visited += 1
        if visited > max_nodes:
            raise ResourceExceeded(f"strategy search exceeded {max_nodes} nodes")
        sub = apply_strategy(af, a, choice)
        if dead(sub):
            return None
        if not sub.undefended_opp:
            return choice
        x = min(sub.undefended_opp)
        for y in af.sorted_attackers(x):
            found = search({**choice, x: y})
            if found is not None:
                return found
        return None

    found = search({})
    return None if found is None else ProponentStrategy(af, found)
