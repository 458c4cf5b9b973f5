"""Model checking strategy-logic formulas on debate interpreted systems.

Strategies are positional: a table from the agent's decision points to one
enabled action. At a decision point of its mover, the pair (own local state,
environment state) determines the global state, so tables are keyed by
state index.

Strategy quantifiers are decided by depth-first search over *partial*
tables. The body is evaluated in three-valued logic under the current
partial tables: a play stops at the first undefined entry, and temporal
operators are decided from the prefix when they can be. A definite answer
depends only on entries that were read, so it holds for every completion.
When the answer is still open because of the quantifier's own table, the
search branches on the missing entry in canonical action order. The search
thus covers the whole positional strategy space while only visiting the
parts that matter.
"""

import itertools
import math
import time
from collections import deque
from dataclasses import dataclass, field
import enum
from types import MappingProxyType

from . import logic
from .dispute import ProponentStrategy
from .errors import CheckTimeout, IncompleteAssignment, ResourceExceeded
from .interpreted import AGENTS, AgentId, build
from .logic import (Atom, Exists, Globally, Next, Not, Or, Top, Until,
                    normalize, free_agents)

_CACHE_LIMIT = 500_000


class VerdictResult(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    TIMEOUT = "timeout"
    RESOURCE = "resource"

    @property
    def definite(self):
        return self in (VerdictResult.TRUE, VerdictResult.FALSE)


@dataclass(frozen=True)
class Budget:
    timeout: float = None
    max_strategies: int = None


@dataclass(frozen=True)
class PositionalStrategy:
    """An agent's choice of enabled action at each of its decision points."""

    agent: AgentId
    table: MappingProxyType

    def __init__(self, agent, table):
        object.__setattr__(self, "agent", AgentId.parse(agent))
        object.__setattr__(self, "table", MappingProxyType(dict(table)))

    def action(self, s):
        return self.table[s]

    def by_local_state(self, system):
        """The same table keyed by ``(own local state, environment state)``."""
        out = {}
        for s, act in self.table.items():
            g = system.global_state(s)
            own = g.l_pro if self.agent is AgentId.PRO else g.l_opp
            out[(own, g.l_env)] = act
        return out

    def __len__(self):
        return len(self.table)


@dataclass(frozen=True)
class Lasso:
    prefix: tuple
    cycle_start: int

    def successor_position(self, k):
        return k + 1 if k + 1 < len(self.prefix) else self.cycle_start


@dataclass
class Verdict:
    result: VerdictResult
    witness: PositionalStrategy = None
    reach_seconds: float = 0.0
    check_seconds: float = 0.0
    strategies: int = 0
    states_visited: int = 0
    engine: str = "sl"
    message: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def value(self):
        """``True``/``False`` for definite verdicts, otherwise ``None``."""
        if self.result is VerdictResult.TRUE:
            return True
        if self.result is VerdictResult.FALSE:
            return False
        return None

    def line(self):
        return (f"result={self.result.value} reach_s={self.reach_seconds:.6f} "
                f"mc_s={self.check_seconds:.6f}")


class Assignment(dict):
    """Map from strategy variables to positional strategies."""

    def __setitem__(self, var, strategy):
        if var.agent is not strategy.agent:
            raise ValueError(f"variable {var} is typed {var.agent.value}, strategy is for {strategy.agent.value}")
        super().__setitem__(var, strategy)

    def update(self, *args, **kwargs):
        for k, v in dict(*args, **kwargs).items():
            self[k] = v

    def is_complete(self):
        return {v.agent for v in self} >= set(AGENTS)


# ---------------------------------------------------------------------------
# evaluator


class _Unknown:
    """Truth value not fixed by the partial tables read so far.

    ``frame``/``state`` name one undefined entry whose choice would help; the
    quantifier owning ``frame`` branches on it.
    """

    __slots__ = ("frame", "state")

    def __init__(self, frame, state):
        self.frame = frame
        self.state = state


class _Pending(_Unknown):
    """Unknown result of a quantifier search, with the own partial tables
    whose outcome still depends on enclosing quantifiers."""

    __slots__ = ("leaves",)

    def __init__(self, frame, state, leaves):
        super().__init__(frame, state)
        self.leaves = leaves


def _deeper(u, v):
    return u if u.frame.depth >= v.frame.depth else v


class _Frame:
    __slots__ = ("agent", "table", "version", "lazy", "depth", "parent")

    def __init__(self, agent, table, version, lazy, depth=0, parent=None):
        self.agent = agent
        self.table = table  # state -> index into system.moves(state)
        self.version = version
        self.lazy = lazy
        self.depth = depth
        # frame whose table this one extends by a single entry
        self.parent = parent


class _Evaluator:
    """Three-valued evaluation over partial strategy tables.

    A definite answer computed under partial tables holds for every
    completion of them, since it only depends on entries actually read.
    """

    def __init__(self, system, budget=None, lazy=True):
        self.system = system
        self.budget = budget or Budget()
        self.lazy = lazy
        self.deadline = None
        if self.budget.timeout is not None:
            self.deadline = time.monotonic() + self.budget.timeout
        self.bind = {agent: None for agent in AGENTS}
        self.cache = {}
        self.lasso_cache = {}
        self.free = {}
        self.atom_key = {}
        self.versions = itertools.count(1)
        self.depth = 0
        self.strategies = 0
        self.states_visited = 0
        self.witnesses = {}
        # agents that never move contribute nothing to cache keys
        self.movers = tuple(a for a in AGENTS if system.decision_points(a))

    # -- bookkeeping --------------------------------------------------------

    def prepare(self, f):
        for node in logic.walk(f):
            key = id(node)
            if key in self.free:
                continue
            if isinstance(node, Atom):
                self.atom_key[key] = (AgentId.parse(node.owner), node.argument)
            if isinstance(node, (Exists, Next, Globally, Until)):
                fa = free_agents(node)
                self.free[key] = tuple(a for a in self.movers if a in fa)

    def _check_deadline(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise CheckTimeout(f"deadline of {self.budget.timeout} s passed")

    def _tick(self):
        self.strategies += 1
        limit = self.budget.max_strategies
        if limit is not None and self.strategies > limit:
            raise ResourceExceeded(f"more than {limit} strategies enumerated")
        self._check_deadline()

    def _key(self, node, s):
        return (id(node), s) + tuple(
            None if self.bind[a] is None else self.bind[a].version for a in self.free[id(node)])

    def _inherited(self, node, key):
        """Reuse a result computed under a smaller table of the innermost
        free agent: definite values carry over to every extension, and an
        unfinished quantifier search can resume from its pending leaves."""
        free = self.free[id(node)]
        if not free or any(self.bind[a] is None for a in free):
            # unbound agents only occur under eval_formula; _lasso reports them
            return None
        pos, frame = max(enumerate(self.bind[a] for a in free), key=lambda p: p[1].depth)
        frame = frame.parent
        if frame is None:
            return None
        probe = list(key)
        while frame is not None:
            probe[2 + pos] = frame.version
            hit = self.cache.get(tuple(probe))
            if hit is True or hit is False or isinstance(hit, _Pending):
                return hit
            frame = frame.parent
        return None

    def _remember(self, key, value):
        if len(self.cache) >= _CACHE_LIMIT:
            self.cache.clear()
        self.cache[key] = value

    # -- evaluation ----------------------------------------------------------

    def eval(self, node, s):
        """``True``, ``False`` or an :class:`_Unknown`."""
        t = type(node)
        if t is Or:
            left = self.eval(node.left, s)
            if left is True:
                return True
            right = self.eval(node.right, s)
            if right is True or left is False:
                return right
            if right is False:
                return left
            return _deeper(left, right)
        if t is Not:
            v = self.eval(node.sub, s)
            if v is True:
                return False
            if v is False:
                return True
            return v
        if t is Atom:
            return self.system.atom_of[s] == self.atom_key[id(node)]
        if t is Top:
            return True
        key = self._key(node, s)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        inherited = self._inherited(node, key)
        if inherited is True or inherited is False:
            self._remember(key, inherited)
            return inherited
        if t is Exists:
            value = self._exists(node, s, inherited)
        elif t is Next:
            value = self._next(node, s)
        elif t is Globally:
            value = self._globally(node, s)
        elif t is Until:
            value = self._until(node, s)
        else:
            raise TypeError(f"unnormalised node {node!r}; call normalize() first")
        self._remember(key, value)
        return value

    def _next(self, node, s):
        path, cycle, need = self._lasso(s)
        if len(path) > 1:
            return self.eval(node.sub, path[1])
        if need is not None:
            return need
        return self.eval(node.sub, path[cycle])

    def _globally(self, node, s):
        path, _, need = self._lasso(s)
        pending = need
        for u in path:
            v = self.eval(node.sub, u)
            if v is False:
                return False
            if v is not True:
                pending = v if pending is None else _deeper(pending, v)
        return True if pending is None else pending

    def _until(self, node, s):
        # value along the path: ψ somewhere, with φ at every earlier position
        path, _, need = self._lasso(s)
        pending = None
        for u in path:
            right = self.eval(node.right, u)
            if right is True:
                return True if pending is None else pending
            if right is not False:
                pending = right if pending is None else _deeper(pending, right)
            left = self.eval(node.left, u)
            if left is False:
                return False if pending is None else pending
            if left is not True:
                pending = left if pending is None else _deeper(pending, left)
        if need is not None:
            return need if pending is None else _deeper(pending, need)
        return False if pending is None else pending

    def _lasso(self, s):
        """The play from ``s``: ``(path, cycle_start, None)`` when complete,
        or ``(prefix, None, unknown)`` when it reaches an undefined entry."""
        for agent in AGENTS:
            if self.bind[agent] is None:
                raise IncompleteAssignment(f"temporal operator evaluated with no strategy bound for {agent.value}")
        key = (s,) + tuple(self.bind[a].version for a in self.movers)
        hit = self.lasso_cache.get(key)
        if hit is not None:
            return hit
        system = self.system
        path = []
        pos = {}
        cur = s
        need = None
        while cur not in pos:
            pos[cur] = len(path)
            path.append(cur)
            mover = system.mover[cur]
            if mover is None:
                continue
            frame = self.bind[mover]
            k = frame.table.get(cur)
            if k is None:
                if not frame.lazy:
                    raise IncompleteAssignment(f"strategy for {mover.value} is undefined at state {cur}")
                need = _Unknown(frame, cur)
                break
            cur = system.moves(cur)[k][1]
        self.states_visited += len(path)
        if len(self.lasso_cache) >= _CACHE_LIMIT:
            self.lasso_cache.clear()
        self._check_deadline()
        hit = (tuple(path), None if need else pos[cur], need)
        self.lasso_cache[key] = hit
        return hit

    def bind_fixed(self, agent, table):
        self.bind[agent] = _Frame(agent, dict(table), next(self.versions), lazy=False)

    def _exists(self, node, s, inherited=None):
        agent = node.var.agent
        saved = self.bind[agent]
        self.depth += 1
        try:
            if not self.system.decision_points(agent):
                # a single (empty) strategy
                self._tick()
                self.bind[agent] = _Frame(agent, {}, next(self.versions), False, self.depth)
                value = self.eval(node.body, s)
                if value is True:
                    self.witnesses[id(node)] = {}
                return value
            if not self.lazy:
                return self._exists_exhaustive(node, s, agent)
            leaves = inherited.leaves if isinstance(inherited, _Pending) else None
            return self._exists_lazy(node, s, agent, leaves)
        finally:
            self.bind[agent] = saved
            self.depth -= 1

    def _exists_lazy(self, node, s, agent, leaves=None):
        moves = self.system.moves
        stack = [(table, None) for table in reversed(leaves)] if leaves else [({}, None)]
        pending = []
        unknown = None
        while stack:
            table, parent = stack.pop()
            self._tick()
            frame = _Frame(agent, table, next(self.versions), True, self.depth, parent)
            self.bind[agent] = frame
            value = self.eval(node.body, s)
            if value is True:
                self.witnesses[id(node)] = table
                return True
            if value is False:
                continue
            if value.frame is frame:
                for k in reversed(range(len(moves(value.state)))):
                    stack.append(({**table, value.state: k}, frame))
            else:
                # open until an enclosing quantifier fixes more entries;
                # keep looking for a definite witness meanwhile
                pending.append(table)
                if unknown is None:
                    unknown = value
        if unknown is None:
            return False
        return _Pending(unknown.frame, unknown.state, pending)

    def _exists_exhaustive(self, node, s, agent):
        unknown = None
        for table in _tables(self.system, agent):
            self._tick()
            self.bind[agent] = _Frame(agent, table, next(self.versions), False, self.depth)
            value = self.eval(node.body, s)
            if value is True:
                self.witnesses[id(node)] = table
                return True
            if value is not False and unknown is None:
                unknown = value
        return False if unknown is None else unknown


def _tables(system, agent):
    points = system.decision_points(agent)
    ranges = [range(len(system.moves(s))) for s in points]
    for combo in itertools.product(*ranges):
        yield dict(zip(points, combo))


def _to_actions(system, table):
    return {s: system.moves(s)[k][0] for s, k in table.items()}


def _to_indices(system, strategy):
    out = {}
    for s, act in strategy.table.items():
        for k, (a, _) in enumerate(system.moves(s)):
            if a == act:
                out[s] = k
                break
        else:
            raise ValueError(f"action {act} is not enabled at state {s}")
    return out


# ---------------------------------------------------------------------------
# public API


def strategy_count(system, agent):
    """Number of positional strategies of ``agent`` (product of branching)."""
    return math.prod(len(system.moves(s)) for s in system.decision_points(agent))


def enumerate_strategies(system, agent, limit=None):
    """All positional strategies of ``agent`` in lexicographic order.

    Decision points are ordered by state index and actions by canonical
    order. Generated lazily; passing ``limit`` raises
    :class:`ResourceExceeded` once more than ``limit`` have been requested.
    """
    agent = AgentId.parse(agent)
    for count, table in enumerate(_tables(system, agent), start=1):
        if limit is not None and count > limit:
            raise ResourceExceeded(f"more than {limit} strategies for {agent.value}")
        yield PositionalStrategy(agent, _to_actions(system, table))


def _bind_assignment(ev, chi):
    seen = {}
    for var, strategy in (chi or {}).items():
        if var.agent in seen and seen[var.agent] != var:
            raise ValueError(f"assignment binds two variables for {var.agent.value}")
        seen[var.agent] = var
        ev.bind_fixed(var.agent, _to_indices(ev.system, strategy))


def eval_formula(system, chi, s, f):
    """Truth of ``f`` at state ``s`` under assignment ``chi``."""
    f = normalize(f)
    ev = _Evaluator(system)
    ev.prepare(f)
    _bind_assignment(ev, chi)
    value = ev.eval(f, system.index_of(s))
    assert isinstance(value, bool)
    return value


def play(system, chi, s):
    """The unique run from ``s`` under the complete assignment ``chi``,
    cut at the first repeated state."""
    ev = _Evaluator(system)
    _bind_assignment(ev, chi)
    path, cycle, _ = ev._lasso(system.index_of(s))
    return Lasso(path, cycle)


def check(system, f, budget=None, lazy=True):
    """Decide whether the sentence ``f`` holds at the initial state.

    ``lazy=False`` replaces the partial-table search with plain enumeration
    of complete strategy tables; it is only practical on tiny systems and
    exists for cross-checking.
    """
    f = normalize(f)
    if not logic.is_sentence(f):
        raise ValueError("formula is not a sentence: some temporal operator lacks a strategy for every agent")
    ev = _Evaluator(system, budget, lazy=lazy)
    ev.prepare(f)
    start = time.perf_counter()
    witness = None
    message = ""
    try:
        value = ev.eval(f, system.initial)
        # nothing is bound outside a sentence, so the answer is definite
        assert isinstance(value, bool)
        result = VerdictResult.TRUE if value else VerdictResult.FALSE
        if value and isinstance(f, Exists):
            # entries never read are irrelevant; fill them with the first action
            table = {s: 0 for s in system.decision_points(f.var.agent)}
            table.update(ev.witnesses.get(id(f), {}))
            witness = PositionalStrategy(f.var.agent, _to_actions(system, table))
    except CheckTimeout as exc:
        result, message = VerdictResult.TIMEOUT, str(exc)
    except (ResourceExceeded, MemoryError) as exc:
        result, message = VerdictResult.RESOURCE, str(exc) or "out of memory"
    finally:
        ev.cache.clear()
        ev.lasso_cache.clear()
    return Verdict(result, witness, system.build_seconds, time.perf_counter() - start,
                   ev.strategies, ev.states_visited, "sl", message)


# ---------------------------------------------------------------------------
# fixpoint engine for the grounded formula


def steady_pro_states(system):
    """States satisfying some ``<<>> G Pro_x``, by greatest fixpoint."""
    out = set()
    for (owner, _), states in system.atoms.items():
        if owner is not AgentId.PRO:
            continue
        z = set(states)
        changed = True
        while changed:
            changed = False
            for s in list(z):
                if any(t not in z for t in system.successors(s)):
                    z.discard(s)
                    changed = True
        out |= z
    return out


def pro_attractor(system, target):
    """Ranks of the states from which Pro can force a visit to ``target``."""
    preds = [[] for _ in system.states()]
    remaining = [0] * system.num_states
    for s in system.states():
        succ = set(system.successors(s))
        remaining[s] = len(succ)
        for t in succ:
            preds[t].append(s)
    rank = {}
    queue = deque()
    for t in sorted(target):
        rank[t] = 0
        queue.append(t)
    while queue:
        t = queue.popleft()
        for s in preds[t]:
            if s in rank:
                continue
            if system.mover[s] is AgentId.PRO:
                rank[s] = rank[t] + 1
                queue.append(s)
            else:
                remaining[s] -= 1
                if remaining[s] == 0:
                    rank[s] = rank[t] + 1
                    queue.append(s)
    return rank


def check_grounded_fixpoint(system, budget=None):
    """Decide the grounded formula by attractor computation."""
    start = time.perf_counter()
    target = steady_pro_states(system)
    terminal_pro = {s for s in system.states()
                    if system.mover[s] is None and system.atom_of[s] is not None
                    and system.atom_of[s][0] is AgentId.PRO}
    if target != terminal_pro:
        raise AssertionError("steady Pro states differ from terminal Pro states")
    rank = pro_attractor(system, target)
    table = {}
    for s in system.decision_points(AgentId.PRO):
        moves = system.moves(s)
        if s in rank:
            best = min((rank[t], k) for k, (_, t) in enumerate(moves) if t in rank)
            table[s] = moves[best[1]][0]
        else:
            table[s] = moves[0][0]
    won = system.initial in rank
    witness = PositionalStrategy(AgentId.PRO, table) if won else None
    return Verdict(VerdictResult.TRUE if won else VerdictResult.FALSE, witness,
                   system.build_seconds, time.perf_counter() - start, 1,
                   system.num_states, "fixpoint",
                   extra={"attractor_size": len(rank), "target_size": len(target)})


# ---------------------------------------------------------------------------
# witness conversion


def reachable_under(system, strategy):
    """States reachable from the initial state when ``strategy``'s agent
    follows it and every other agent moves freely. Returns BFS depths."""
    depth = {system.initial: 0}
    queue = deque([system.initial])
    while queue:
        s = queue.popleft()
        mover = system.mover[s]
        if mover is strategy.agent and s in strategy.table:
            succ = (system.successor(s, strategy.table[s]),)
        else:
            succ = system.successors(s)
        for t in succ:
            if t not in depth:
                depth[t] = depth[s] + 1
                queue.append(t)
    return depth


def to_proponent_strategy(system, strategy):
    """Project a Pro positional strategy onto a dispute-tree strategy.

    Each opponent argument ``y`` gets the reply chosen at one reachable Pro
    decision point whose last argument is ``y``. When the reachable part is
    acyclic, the point with the shortest remaining play is used, so finite
    plays stay finite; otherwise the shallowest point is used.
    """
    depth = reachable_under(system, strategy)
    reach = set(depth)

    def succ(s):
        mover = system.mover[s]
        if mover is AgentId.PRO and s in strategy.table:
            return (system.successor(s, strategy.table[s]),)
        return tuple(t for t in system.successors(s) if t != s)

    height = _heights(reach, succ)
    choice = {}
    best = {}
    for s in sorted(reach):
        if system.mover[s] is not AgentId.PRO or s not in strategy.table:
            continue
        y = system.global_state(s).l_env.last
        key = (height[s], s) if height is not None else (depth[s], s)
        if y not in best or key < best[y]:
            best[y] = key
            choice[y] = strategy.table[s].attacker
    return ProponentStrategy(system.framework, choice)


def _heights(nodes, succ):
    """Longest path length to a sink for an acyclic graph, else ``None``."""
    height = {}
    onstack = set()
    for root in sorted(nodes):
        if root in height:
            continue
        stack = [(root, iter(succ(root)))]
        onstack.add(root)
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt in onstack:
                    return None
                if nxt not in height:
                    onstack.add(nxt)
                    stack.append((nxt, iter(succ(nxt))))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                onstack.discard(node)
                height[node] = 1 + max((height[t] for t in succ(node)), default=-1)
    return height


# ---------------------------------------------------------------------------
# end-to-end


ENGINES = ("sl", "fixpoint")


def decide(af, root, semantics, engine="sl", budget=None, track_seen=False, max_states=None):
    """Build the debate system for ``root`` and check the formula for
    ``semantics`` ("grounded", "admissible" or "ideal").

    Limits hit while building are reported as verdicts too, so callers only
    ever see one of the four outcomes.
    """
    semantics = str(getattr(semantics, "value", semantics)).lower()
    if semantics not in logic.FORMULA_BUILDERS:
        raise ValueError(f"semantics must be one of {sorted(logic.FORMULA_BUILDERS)}, got {semantics!r}")
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {list(ENGINES)}, got {engine!r}")
    if engine == "fixpoint" and semantics != "grounded":
        raise ValueError("the fixpoint engine only decides grounded acceptance")
    budget = budget or Budget()
    start = time.monotonic()
    deadline = None if budget.timeout is None else start + budget.timeout
    kwargs = {} if max_states is None else {"max_states": max_states}
    try:
        system = build(af, root, track_seen=track_seen, deadline=deadline, **kwargs)
    except CheckTimeout as exc:
        return Verdict(VerdictResult.TIMEOUT, reach_seconds=time.monotonic() - start,
                       engine=engine, message=str(exc))
    except ResourceExceeded as exc:
        return Verdict(VerdictResult.RESOURCE, reach_seconds=time.monotonic() - start,
                       engine=engine, message=str(exc))
    if engine == "fixpoint":
        return check_grounded_fixpoint(system, budget)
    if budget.timeout is not None:
        left = max(0.0, budget.timeout - system.build_seconds)
        budget = Budget(left, budget.max_strategies)
    return check(system, logic.FORMULA_BUILDERS[semantics](af), budget)
