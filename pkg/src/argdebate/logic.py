"""Strategy-logic formulas over debate atoms.

Core grammar::

    phi ::= true | Pro_x | Opp_x | !phi | phi | phi | X phi | G phi
          | phi U phi | E<v> phi

with sugar ``&``, ``=>``, ``F``, ``A<v>`` (for all) and the coalition
modality ``<<Pro,Opp>>``; ``<<>>`` is the universal path quantifier of CTL and
``<<Pro,Opp,Env>>`` the existential one. :func:`normalize` rewrites sugar into
the core grammar.

Text syntax, loosest binding first: ``=>`` (right associative), ``|``, ``&``,
``U`` (right associative), then the prefix operators ``!``, ``X``, ``G``,
``F``, ``E<v>``, ``A<v>``, ``<<...>>``, each of which takes a single prefix
operand. Quantified variables are typed by agent, written ``E<x:Opp>``; the
names ``p``, ``o`` and ``e`` (or any name starting with those letters) may
omit the type and stand for Pro, Opp and Env.
"""

import re
from dataclasses import dataclass

from .errors import FormulaSyntaxError
from .interpreted import AGENTS, AgentId

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class StrategyVariable:
    name: str
    agent: AgentId

    def __str__(self):
        if self.name[:1] == _CANONICAL[self.agent]:
            return self.name
        return f"{self.name}:{self.agent.value}"


_CANONICAL = {AgentId.PRO: "p", AgentId.OPP: "o", AgentId.ENV: "e"}
_BY_LETTER = {v: k for k, v in _CANONICAL.items()}

P_VAR = StrategyVariable("p", AgentId.PRO)
O_VAR = StrategyVariable("o", AgentId.OPP)
E_VAR = StrategyVariable("e", AgentId.ENV)
CANONICAL_VARS = {AgentId.PRO: P_VAR, AgentId.OPP: O_VAR, AgentId.ENV: E_VAR}


class Formula:
    """Base class of formula nodes."""

    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    owner: str  # "Pro" or "Opp"
    argument: str

    def __post_init__(self):
        if self.owner not in ("Pro", "Opp"):
            raise ValueError(f"atom owner must be Pro or Opp, not {self.owner!r}")


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    sub: Formula


@dataclass(frozen=True)
class Globally(Formula):
    sub: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    sub: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: StrategyVariable
    body: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: StrategyVariable
    body: Formula


@dataclass(frozen=True)
class Coalition(Formula):
    agents: frozenset
    path: Formula

    def __post_init__(self):
        object.__setattr__(self, "agents", frozenset(AgentId.parse(a) for a in self.agents))


TOP = Top()
_TEMPORAL = (Next, Globally, Until, Eventually)


def pro(x):
    return Atom("Pro", x)


def opp(x):
    return Atom("Opp", x)


def children(f):
    if isinstance(f, (Top, Atom)):
        return ()
    if isinstance(f, (Not, Next, Globally, Eventually)):
        return (f.sub,)
    if isinstance(f, (Or, And, Implies, Until)):
        return (f.left, f.right)
    if isinstance(f, (Exists, ForAll)):
        return (f.body,)
    if isinstance(f, Coalition):
        return (f.path,)
    raise TypeError(f"not a formula: {f!r}")


def walk(f):
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def size(f):
    """Number of AST nodes."""
    return sum(1 for _ in walk(f))


def atoms(f):
    return {n for n in walk(f) if isinstance(n, Atom)}


def conjunction(parts):
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjunction(parts):
    parts = list(parts)
    if not parts:
        return Not(TOP)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# ---------------------------------------------------------------------------
# normalisation and free agents


def _coalition_prefix(agents):
    inside = [a for a in AGENTS if a in agents]
    outside = [a for a in AGENTS if a not in agents]
    return [(Exists, CANONICAL_VARS[a]) for a in inside] + [(ForAll, CANONICAL_VARS[a]) for a in outside]


def desugar_coalition(f):
    """Expand a coalition modality one level into explicit quantifiers."""
    body = f.path
    for quant, var in reversed(_coalition_prefix(f.agents)):
        body = quant(var, body)
    return body


def normalize(f):
    """Rewrite sugar into the core grammar (idempotent)."""
    memo = {}

    def norm(node):
        key = id(node)
        hit = memo.get(key)
        if hit is not None and hit[0] is node:
            return hit[1]
        if isinstance(node, (Top, Atom)):
            out = node
        elif isinstance(node, Not):
            out = Not(norm(node.sub))
        elif isinstance(node, Or):
            out = Or(norm(node.left), norm(node.right))
        elif isinstance(node, And):
            out = Not(Or(Not(norm(node.left)), Not(norm(node.right))))
        elif isinstance(node, Implies):
            out = Or(Not(norm(node.left)), norm(node.right))
        elif isinstance(node, Next):
            out = Next(norm(node.sub))
        elif isinstance(node, Globally):
            out = Globally(norm(node.sub))
        elif isinstance(node, Until):
            out = Until(norm(node.left), norm(node.right))
        elif isinstance(node, Eventually):
            out = Until(TOP, norm(node.sub))
        elif isinstance(node, Exists):
            out = Exists(node.var, norm(node.body))
        elif isinstance(node, ForAll):
            out = Not(Exists(node.var, Not(norm(node.body))))
        elif isinstance(node, Coalition):
            out = norm(desugar_coalition(node))
        else:
            raise TypeError(f"not a formula: {node!r}")
        memo[key] = (node, out)
        return out

    return norm(f)


def free_agents(f):
    """Agents whose strategy some temporal operator in ``f`` reads without
    ``f`` itself binding it. A sentence has none."""
    memo = {}

    def free(node):
        key = id(node)
        hit = memo.get(key)
        if hit is not None and hit[0] is node:
            return hit[1]
        if isinstance(node, (Top, Atom)):
            out = frozenset()
        elif isinstance(node, _TEMPORAL):
            out = frozenset(AGENTS).union(*(free(c) for c in children(node)))
        elif isinstance(node, (Exists, ForAll)):
            out = free(node.body) - {node.var.agent}
        elif isinstance(node, Coalition):
            out = free(desugar_coalition(node))
        else:
            out = frozenset().union(*(free(c) for c in children(node)))
        memo[key] = (node, out)
        return out

    return free(f)


def is_sentence(f):
    return not free_agents(f)


# ---------------------------------------------------------------------------
# printing

_PREC = {Implies: 1, Or: 2, And: 3, Until: 4}
_UNARY = 5


def _prec(f):
    return _PREC.get(type(f), _UNARY)


def to_text(f):
    """Canonical text form; :func:`parse_formula` reads it back unchanged."""

    def wrap(node, minimum):
        text = emit(node)
        return f"({text})" if _prec(node) < minimum else text

    def emit(node):
        if isinstance(node, Top):
            return "true"
        if isinstance(node, Atom):
            return f"{node.owner}_{node.argument}"
        if isinstance(node, Not):
            return "!" + wrap(node.sub, _UNARY)
        if isinstance(node, Next):
            return "X " + wrap(node.sub, _UNARY)
        if isinstance(node, Globally):
            return "G " + wrap(node.sub, _UNARY)
        if isinstance(node, Eventually):
            return "F " + wrap(node.sub, _UNARY)
        if isinstance(node, Exists):
            return f"E<{node.var}> " + wrap(node.body, _UNARY)
        if isinstance(node, ForAll):
            return f"A<{node.var}> " + wrap(node.body, _UNARY)
        if isinstance(node, Coalition):
            names = ",".join(a.value for a in AGENTS if a in node.agents)
            return f"<<{names}>> " + wrap(node.path, _UNARY)
        p = _PREC[type(node)]
        sym = {Implies: "=>", Or: "|", And: "&", Until: "U"}[type(node)]
        if isinstance(node, (Implies, Until)):
            return f"{wrap(node.left, p + 1)} {sym} {wrap(node.right, p)}"
        return f"{wrap(node.left, p)} {sym} {wrap(node.right, p + 1)}"

    return emit(f)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<atom>(?:Pro|Opp)_[A-Za-z0-9_]+)
  | (?P<quant>[EA]<\s*(?P<qname>[A-Za-z][A-Za-z0-9_]*)\s*(?::\s*(?P<qagent>[A-Za-z]+)\s*)?>)
  | (?P<coal><<\s*(?P<cagents>[A-Za-z\s,]*)>>)
  | (?P<true>true(?![A-Za-z0-9_]))
  | (?P<kw>[XGFU](?![A-Za-z0-9_]))
  | (?P<op>=>|[!&|()])
""", re.VERBOSE)


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected input {text[pos:pos + 10]!r}", pos)
        kind = next(k for k in ("ws", "atom", "quant", "coal", "true", "kw", "op") if m.group(k))
        if kind != "ws":
            tokens.append((kind, m, pos))
        pos = m.end()
    tokens.append(("eof", None, len(text)))
    return tokens


def _variable(m, pos):
    name = m.group("qname")
    agent_text = m.group("qagent")
    if agent_text is not None:
        try:
            agent = AgentId.parse(agent_text)
        except ValueError:
            raise FormulaSyntaxError(f"unknown agent {agent_text!r}", pos) from None
    elif name[0] in _BY_LETTER:
        agent = _BY_LETTER[name[0]]
    else:
        raise FormulaSyntaxError(f"variable {name!r} needs an agent type, e.g. {name}:Pro", pos)
    return StrategyVariable(name, agent)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def is_op(self, *symbols):
        kind, m, _ = self.peek()
        return kind in ("op", "kw") and m.group(0) in symbols

    def expect_op(self, symbol):
        kind, m, pos = self.take()
        if kind != "op" or m.group(0) != symbol:
            got = "end of input" if kind == "eof" else repr(m.group(0))
            raise FormulaSyntaxError(f"expected {symbol!r}, got {got}", pos)

    def parse(self):
        f = self.implies()
        kind, m, pos = self.peek()
        if kind != "eof":
            raise FormulaSyntaxError(f"unexpected {m.group(0)!r}", pos)
        return f

    def implies(self):
        left = self.disj()
        if self.is_op("=>"):
            self.take()
            return Implies(left, self.implies())
        return left

    def disj(self):
        left = self.conj()
        while self.is_op("|"):
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.until()
        while self.is_op("&"):
            self.take()
            left = And(left, self.until())
        return left

    def until(self):
        left = self.unary()
        if self.is_op("U"):
            self.take()
            return Until(left, self.until())
        return left

    def unary(self):
        kind, m, pos = self.take()
        if kind == "eof":
            raise FormulaSyntaxError("unexpected end of input", pos)
        if kind == "atom":
            return Atom(*m.group(0).split("_", 1))
        if kind == "true":
            return TOP
        if kind == "quant":
            var = _variable(m, pos)
            cls = Exists if m.group(0)[0] == "E" else ForAll
            return cls(var, self.unary())
        if kind == "coal":
            names = [s.strip() for s in m.group("cagents").split(",") if s.strip()]
            try:
                agents = frozenset(AgentId.parse(n) for n in names)
            except ValueError as exc:
                raise FormulaSyntaxError(str(exc), pos) from None
            return Coalition(agents, self.unary())
        text = m.group(0)
        if text == "!":
            return Not(self.unary())
        if text == "X":
            return Next(self.unary())
        if text == "G":
            return Globally(self.unary())
        if text == "F":
            return Eventually(self.unary())
        if text == "(":
            inner = self.implies()
            self.expect_op(")")
            return inner
        raise FormulaSyntaxError(f"unexpected {text!r}", pos)


def parse_formula(text, af=None):
    """Parse the text syntax; with ``af`` given, atoms must name its arguments."""
    f = _Parser(text).parse()
    if af is not None:
        for atom in sorted(atoms(f), key=lambda a: (a.owner, a.argument)):
            if atom.argument not in af:
                raise FormulaSyntaxError(f"atom {atom.owner}_{atom.argument} names an unknown argument")
    return f


# ---------------------------------------------------------------------------
# winning-condition formulas


def grounded_formula(af):
    """<<Pro>> F (Or_i <<>> G Pro_i): Pro can force a state where an unattacked
    argument of its own stays played for ever."""
    steady = disjunction(Coalition(frozenset(), Globally(pro(x))) for x in af.sorted_args())
    return Coalition(frozenset({AgentId.PRO}), Eventually(steady))


def no_opp_steady(af):
    return ForAll(O_VAR, Globally(conjunction(Not(Globally(opp(x))) for x in af.sorted_args())))


def no_double_label(af):
    return conjunction(
        Implies(Exists(O_VAR, Eventually(pro(x))), ForAll(O_VAR, Globally(Not(opp(x)))))
        for x in af.sorted_args())


def opp_defends(af):
    """Body of the nested opponent test: the opponent can keep answering every
    proponent argument without any argument being played by both sides."""
    names = af.sorted_args()
    no_pro_steady = ForAll(P_VAR, Globally(conjunction(Not(Globally(pro(x))) for x in names)))
    no_clash = conjunction(
        Implies(Exists(P_VAR, Eventually(pro(x))), ForAll(P_VAR, Globally(Not(opp(x)))))
        for x in names)
    return And(no_pro_steady, no_clash)


def no_opp_admissible(af):
    some_opp = disjunction(opp(x) for x in af.sorted_args())
    return ForAll(O_VAR, Globally(Implies(some_opp, Not(Exists(O_VAR, opp_defends(af))))))


def admissible_formula(af):
    body = And(no_opp_steady(af), no_double_label(af))
    return Exists(P_VAR, ForAll(E_VAR, body))


def ideal_formula(af):
    body = And(And(no_opp_steady(af), no_double_label(af)), no_opp_admissible(af))
    return Exists(P_VAR, ForAll(E_VAR, body))


FORMULA_BUILDERS = {
    "grounded": grounded_formula,
    "admissible": admissible_formula,
    "ideal": ideal_formula,
}
