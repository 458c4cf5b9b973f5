"""Compile a debate into the three-agent interpreted system and explore it.

States are stored compactly as ``(pro, opp, turn, last, seen)`` integer
tuples: argument indices, ``-1`` for the empty opponent state, ``turn`` 0 for
Pro and 1 for Opp, and ``seen`` a bitmask over the framework's attack list.
"""

import enum
import time
from collections import deque
from dataclasses import dataclass

from .errors import CheckTimeout, ResourceExceeded

#: Default cap on the number of reachable states explored by :func:`build`.
MAX_STATES = 1_000_000

EMPTY = None
PRO_TURN, OPP_TURN = 0, 1


class AgentId(enum.Enum):
    PRO = "Pro"
    OPP = "Opp"
    ENV = "Env"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for agent in cls:
            if agent.value.lower() == key:
                return agent
        raise ValueError(f"unknown agent {value!r}")


AGENTS = (AgentId.PRO, AgentId.OPP, AgentId.ENV)
_TURN_AGENT = {PRO_TURN: AgentId.PRO, OPP_TURN: AgentId.OPP}


@dataclass(frozen=True, order=True)
class Action:
    """``attack(x, y)`` when both ends are set, otherwise ``nothing``."""

    attacker: str = None
    target: str = None

    @property
    def is_nothing(self):
        return self.attacker is None

    def sort_key(self):
        # attacks in name order, nothing last
        return (1, "", "") if self.is_nothing else (0, self.attacker, self.target)

    def __str__(self):
        return "nothing" if self.is_nothing else f"attack({self.attacker},{self.target})"


NOTHING = Action()


@dataclass(frozen=True)
class EnvState:
    turn: AgentId
    last: str
    attacks_seen: frozenset


@dataclass(frozen=True)
class GlobalState:
    l_pro: str
    l_opp: str  # None stands for the distinguished empty state
    l_env: EnvState

    def __str__(self):
        seen = ", ".join(f"({x},{y})" for x, y in sorted(self.l_env.attacks_seen))
        opp = "empty" if self.l_opp is None else self.l_opp
        return f"({self.l_pro}, {opp}, ({self.l_env.turn.value}, {self.l_env.last}, {{{seen}}}))"


def parse_atom(atom):
    """Normalise an atom given as ``"Pro_x"``, ``(agent, x)`` or a formula atom."""
    if hasattr(atom, "owner") and hasattr(atom, "argument"):
        return AgentId.parse(atom.owner), atom.argument
    if isinstance(atom, tuple):
        return AgentId.parse(atom[0]), atom[1]
    text = str(atom)
    owner, sep, arg = text.partition("_")
    if not sep or owner not in ("Pro", "Opp") or not arg:
        raise ValueError(f"malformed atom {atom!r}")
    return AgentId.parse(owner), arg


class InterpretedSystem:
    """The reachable part of the debate system for one framework and root.

    Built by :func:`build`; immutable afterwards. ``track_seen=False`` gives
    the collapsed variant in which the environment's record of seen attacks
    stays empty (see :func:`build`).
    """

    def __init__(self, af, root, codes, moves, track_seen, build_seconds):
        self.framework = af
        self.root = root
        self.track_seen = track_seen
        self.build_seconds = build_seconds
        self._codes = codes
        self._index = {c: i for i, c in enumerate(codes)}
        self._moves = moves
        names = af.args
        self._names = names
        self.initial = 0
        n = len(codes)
        self.mover = [None] * n
        self.atom_of = [None] * n
        for i, (pro, opp, turn, last, _seen) in enumerate(codes):
            if moves[i]:
                self.mover[i] = _TURN_AGENT[turn]
            if turn == OPP_TURN and pro == last:
                self.atom_of[i] = (AgentId.PRO, names[last])
            elif turn == PRO_TURN and opp == last:
                self.atom_of[i] = (AgentId.OPP, names[last])
        atoms = {}
        for i, atom in enumerate(self.atom_of):
            if atom is not None:
                atoms.setdefault(atom, set()).add(i)
        self.atoms = {k: frozenset(v) for k, v in atoms.items()}
        self._decision_points = {
            agent: tuple(i for i in range(n) if self.mover[i] is agent) for agent in AGENTS}

    # -- size and lookup -------------------------------------------------

    def __len__(self):
        return len(self._codes)

    @property
    def num_states(self):
        return len(self._codes)

    @property
    def num_transitions(self):
        return sum(max(1, len(m)) for m in self._moves)

    def states(self):
        return range(len(self._codes))

    def global_state(self, s):
        pro, opp, turn, last, seen = self._codes[s]
        names = self._names
        attacks = self.framework.attacks
        seen_set = frozenset(attacks[b] for b in range(len(attacks)) if seen >> b & 1)
        return GlobalState(
            names[pro],
            None if opp < 0 else names[opp],
            EnvState(_TURN_AGENT[turn], names[last], seen_set),
        )

    def index_of(self, g):
        if isinstance(g, int):
            if not 0 <= g < len(self._codes):
                raise IndexError(f"state index {g} out of range")
            return g
        af = self.framework
        bits = {pair: b for b, pair in enumerate(af.attacks)}
        code = (
            af.index(g.l_pro),
            -1 if g.l_opp is None else af.index(g.l_opp),
            PRO_TURN if g.l_env.turn is AgentId.PRO else OPP_TURN,
            af.index(g.l_env.last),
            sum(1 << bits[p] for p in g.l_env.attacks_seen),
        )
        try:
            return self._index[code]
        except KeyError:
            raise KeyError(f"state {g} is not reachable") from None

    # -- protocol, transitions, valuation --------------------------------

    def decision_points(self, agent):
        """States where ``agent`` has an enabled action other than nothing."""
        return self._decision_points[AgentId.parse(agent)]

    def moves(self, s):
        """``(action, successor)`` pairs of the mover at ``s``, in canonical order."""
        return self._moves[s]

    def successor(self, s, action):
        for act, t in self._moves[s]:
            if act == action:
                return t
        if action.is_nothing and not self._moves[s]:
            return s
        raise ValueError(f"action {action} not enabled at state {s}")

    def successors(self, s):
        moves = self._moves[s]
        return tuple(t for _, t in moves) if moves else (s,)

    def enabled_actions(self, g, agent):
        s = self.index_of(g)
        agent = AgentId.parse(agent)
        if self.mover[s] is agent:
            return tuple(act for act, _ in self._moves[s])
        return (NOTHING,)

    def joint_actions(self, s):
        """``(joint action, successor)`` pairs at ``s``; joint actions are
        ``(pro, opp, env)`` triples."""
        mover = self.mover[s]
        if mover is None:
            return (((NOTHING, NOTHING, NOTHING), s),)
        if mover is AgentId.PRO:
            return tuple(((act, NOTHING, NOTHING), t) for act, t in self._moves[s])
        return tuple(((NOTHING, act, NOTHING), t) for act, t in self._moves[s])

    def transition(self, g, joint):
        s = self.index_of(g)
        for j, t in self.joint_actions(s):
            if j == tuple(joint):
                return t
        raise ValueError(f"joint action {tuple(map(str, joint))} is not protocol-consistent at state {s}")

    def is_terminal(self, g):
        return not self._moves[self.index_of(g)]

    def atom_holds(self, g, atom):
        s = self.index_of(g)
        return self.atom_of[s] == parse_atom(atom)

    def atom_states(self, atom):
        return self.atoms.get(parse_atom(atom), frozenset())

    # -- text dump ---------------------------------------------------------

    def listing(self):
        """Deterministic text dump of states, transitions and atoms."""
        out = [
            f"# root {self.root}; states {self.num_states}; "
            f"transitions {self.num_transitions}; "
            f"attacks_seen {'tracked' if self.track_seen else 'collapsed'}",
            "states",
        ]
        for s in self.states():
            out.append(f"  {s} {self.global_state(s)}")
        out.append("transitions")
        for s in self.states():
            for joint, t in self.joint_actions(s):
                out.append(f"  {s} ({', '.join(map(str, joint))}) {t}")
        out.append("atoms")
        for s in self.states():
            atom = self.atom_of[s]
            if atom is not None:
                out.append(f"  {s} {atom[0].value}_{atom[1]}")
        return "\n".join(out) + "\n"


def build(af, a, track_seen=True, max_states=MAX_STATES, deadline=None):
    """Reachable interpreted system for the debate rooted at ``a``.

    The mover (whoever's turn it is) may play any attack on the last argument;
    if there is none, every agent only has ``nothing`` and the state loops to
    itself. States are numbered in breadth-first order from the initial state
    ``(a, empty, (Opp, a, {}))``.

    With ``track_seen=False`` the environment never records attacks, which
    merges states differing only in that record. Nothing in the protocols,
    the other transition components or the valuation reads it, so the result
    is a functional bisimulation image of the tracked system that stays
    quadratic in the number of attacks.

    ``deadline`` is a :func:`time.monotonic` instant after which exploration
    stops with :class:`CheckTimeout`.
    """
    af.check_argument(a)
    start = time.perf_counter()
    idx = {name: i for i, name in enumerate(af.args)}
    bits = {pair: b for b, pair in enumerate(af.attacks)}
    # per target: tuple of (Action, attacker index, attack bit), attackers by name
    options = []
    for y in af.args:
        options.append(tuple(
            (Action(x, y), idx[x], 1 << bits[(x, y)]) for x in af.sorted_attackers(y)))

    root = idx[a]
    init = (root, -1, OPP_TURN, root, 0)
    codes = [init]
    index = {init: 0}
    moves = []
    queue = deque([init])
    while queue:
        pro, opp, turn, last, seen = code = queue.popleft()
        out = []
        for act, x, bit in options[last]:
            nseen = seen | bit if track_seen else 0
            if turn == PRO_TURN:
                nxt = (x, opp, OPP_TURN, x, nseen)
            else:
                nxt = (pro, x, PRO_TURN, x, nseen)
            t = index.get(nxt)
            if t is None:
                t = len(codes)
                if t >= max_states:
                    raise ResourceExceeded(f"reachable state space exceeds {max_states} states")
                if deadline is not None and t % 4096 == 0 and time.monotonic() > deadline:
                    raise CheckTimeout("deadline passed while exploring the state space")
                index[nxt] = t
                codes.append(nxt)
                queue.append(nxt)
            out.append((act, t))
        moves.append(tuple(out))
        assert index[code] == len(moves) - 1
    return InterpretedSystem(af, a, codes, moves, track_seen, time.perf_counter() - start)


def state_bound(af):
    """Coarse upper bound on the number of tracked reachable states."""
    n = len(af.args)
    return n * (n + 1) * 2 * 2 ** len(af.attacks)
