"""Abstract argumentation frameworks: model, apx I/O, random generation and
brute-force extension oracles."""

import enum
import random
import re
from dataclasses import dataclass, field

from .errors import ApxParseError, FrameworkError, ResourceExceeded

NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")

#: Default cap on the number of arguments for exhaustive subset enumeration.
MAX_ENUMERATION_ARGS = 20


class SemanticsKind(enum.Enum):
    CONFLICT_FREE = "conflict-free"
    ADMISSIBLE = "admissible"
    COMPLETE = "complete"
    GROUNDED = "grounded"
    PREFERRED = "preferred"
    IDEAL = "ideal"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for kind in cls:
            if kind.value == key or kind.name.lower().replace("_", "-") == key:
                return kind
        raise ValueError(f"unknown semantics {value!r}")


@dataclass(frozen=True, eq=False)
class ArgumentationFramework:
    """An immutable pair of arguments and attacks.

    ``args`` keeps declaration order; ``attacks`` is a tuple of
    ``(attacker, target)`` pairs, also in declaration order.
    """

    args: tuple
    attacks: tuple = ()
    _index: dict = field(init=False, repr=False)
    _attackers: dict = field(init=False, repr=False)
    _targets: dict = field(init=False, repr=False)
    _attack_set: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        args = tuple(self.args)
        attacks = tuple((str(x), str(y)) for x, y in self.attacks)
        index = {}
        for a in args:
            if not isinstance(a, str) or not NAME_RE.match(a):
                raise FrameworkError(f"invalid argument name {a!r}")
            if a in index:
                raise FrameworkError(f"duplicate argument {a!r}")
            index[a] = len(index)
        seen = set()
        deduped = []
        for x, y in attacks:
            for end in (x, y):
                if end not in index:
                    raise FrameworkError(f"attack ({x},{y}) references undeclared argument {end!r}")
            if (x, y) not in seen:
                seen.add((x, y))
                deduped.append((x, y))
        attackers = {a: [] for a in args}
        targets = {a: [] for a in args}
        for x, y in deduped:
            attackers[y].append(x)
            targets[x].append(y)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "attacks", tuple(deduped))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_attackers", {a: tuple(sorted(v)) for a, v in attackers.items()})
        object.__setattr__(self, "_targets", {a: tuple(sorted(v)) for a, v in targets.items()})
        object.__setattr__(self, "_attack_set", frozenset(deduped))

    def __eq__(self, other):
        if not isinstance(other, ArgumentationFramework):
            return NotImplemented
        return self.args == other.args and self._attack_set == other._attack_set

    def __hash__(self):
        return hash((self.args, self._attack_set))

    def __len__(self):
        return len(self.args)

    def __contains__(self, name):
        return name in self._index

    def __repr__(self):
        return f"ArgumentationFramework(args={list(self.args)}, attacks={list(self.attacks)})"

    @property
    def attack_set(self):
        return self._attack_set

    def index(self, name):
        self.check_argument(name)
        return self._index[name]

    def check_argument(self, name):
        if name not in self._index:
            raise FrameworkError(f"unknown argument {name!r}")

    def attacks_pair(self, x, y):
        return (x, y) in self._attack_set

    def attackers(self, x):
        """Attackers of ``x`` as a frozenset."""
        self.check_argument(x)
        return frozenset(self._attackers[x])

    def sorted_attackers(self, x):
        self.check_argument(x)
        return self._attackers[x]

    def targets(self, x):
        self.check_argument(x)
        return frozenset(self._targets[x])

    def sorted_args(self):
        return tuple(sorted(self.args))


# ---------------------------------------------------------------------------
# apx text format

_STATEMENT_RE = re.compile(
    r"\s*(arg|att)\s*\(\s*([A-Za-z0-9_]+)\s*(?:,\s*([A-Za-z0-9_]+)\s*)?\)\s*\.")


def parse_apx(text):
    """Parse ICCMA-style apx text into a framework.

    Statements may share a line; ``%`` starts a comment running to the end of
    the line. Errors carry the 1-based line number.
    """
    args = []
    declared = {}
    attacks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0]
        pos = 0
        while pos < len(line):
            if not line[pos:].strip():
                break
            m = _STATEMENT_RE.match(line, pos)
            if m is None:
                raise ApxParseError(f"malformed statement {line[pos:].strip()!r}", lineno)
            kind, first, second = m.groups()
            if kind == "arg":
                if second is not None:
                    raise ApxParseError("arg() takes exactly one name", lineno)
                if first in declared:
                    raise ApxParseError(f"duplicate declaration of argument {first!r}", lineno)
                declared[first] = lineno
                args.append(first)
            else:
                if second is None:
                    raise ApxParseError("att() takes exactly two names", lineno)
                attacks.append((first, second, lineno))
            pos = m.end()
    for x, y, lineno in attacks:
        for end in (x, y):
            if end not in declared:
                raise ApxParseError(f"undeclared argument {end!r} in attack", lineno)
    return ArgumentationFramework(tuple(args), tuple((x, y) for x, y, _ in attacks))


def emit_apx(af):
    lines = [f"arg({a})." for a in af.args]
    lines.extend(f"att({x},{y})." for x, y in af.attacks)
    return "\n".join(lines) + "\n"


def read_apx(path):
    with open(path, encoding="utf-8") as fh:
        return parse_apx(fh.read())


def write_apx(af, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_apx(af))


# ---------------------------------------------------------------------------
# random generation

def generate_random(n, p, seed):
    """Framework on ``a0 .. a{n-1}`` with each ordered pair ``(x, y)``,
    ``x != y``, attacking independently with probability ``p``."""
    if n < 1:
        raise FrameworkError("n must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise FrameworkError(f"attack probability {p} outside [0, 1]")
    rng = random.Random(seed)
    names = tuple(f"a{i}" for i in range(n))
    attacks = []
    for x in names:
        for y in names:
            if x != y and rng.random() < p:
                attacks.append((x, y))
    return ArgumentationFramework(names, tuple(attacks))


def example1():
    """The seven-argument framework of the running example, with (e, d)."""
    return ArgumentationFramework(
        ("a", "b", "c", "d", "e", "f", "g"),
        (("a", "b"), ("b", "a"), ("b", "b"), ("d", "c"), ("e", "d"),
         ("e", "f"), ("f", "e"), ("f", "d"), ("g", "f")),
    )


# ---------------------------------------------------------------------------
# semantics

def is_conflict_free(af, e):
    return not any(af.attacks_pair(x, y) for x in e for y in e)


def is_acceptable(af, a, e):
    """True iff every attacker of ``a`` is attacked by some member of ``e``."""
    e = frozenset(e)
    return all(any(af.attacks_pair(c, b) for c in e) for b in af.attackers(a))


def characteristic(af, e):
    return frozenset(a for a in af.args if is_acceptable(af, a, e))


def is_admissible(af, e):
    return is_conflict_free(af, e) and all(is_acceptable(af, a, e) for a in e)


def is_complete(af, e):
    return is_admissible(af, e) and characteristic(af, e) <= frozenset(e)


def grounded_extension(af):
    """Least fixed point of the characteristic function, iterated from the empty set."""
    current = frozenset()
    while True:
        nxt = characteristic(af, current)
        if nxt == current:
            return current
        current = nxt


class _Bits:
    """Bitmask view of a framework for subset enumeration."""

    def __init__(self, af):
        self.af = af
        self.names = af.args
        n = len(self.names)
        self.attackers = [0] * n
        self.targets = [0] * n
        for x, y in af.attacks:
            i, j = af.index(x), af.index(y)
            self.attackers[j] |= 1 << i
            self.targets[i] |= 1 << j

    def to_set(self, mask):
        return frozenset(self.names[i] for i in range(len(self.names)) if mask >> i & 1)

    def hit(self, mask):
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= self.targets[i]
            mask >>= 1
            i += 1
        return out

    def conflict_free_masks(self):
        n = len(self.names)
        out = []

        def rec(i, mask, banned):
            if i == n:
                out.append(mask)
                return
            rec(i + 1, mask, banned)
            bit = 1 << i
            if not banned & bit and not self.targets[i] & bit:
                # banned: everything attacking or attacked by the chosen set
                rec(i + 1, mask | bit, banned | self.targets[i] | self.attackers[i])

        rec(0, 0, 0)
        return out

    def admissible(self, mask):
        hit = self.hit(mask)
        i = 0
        m = mask
        while m:
            if m & 1 and self.attackers[i] & ~hit:
                return False
            m >>= 1
            i += 1
        return True

    def acceptable_mask(self, mask):
        hit = self.hit(mask)
        out = 0
        for i, att in enumerate(self.attackers):
            if not att & ~hit:
                out |= 1 << i
        return out


def _check_bound(af, max_args):
    limit = MAX_ENUMERATION_ARGS if max_args is None else max_args
    if len(af.args) > limit:
        raise ResourceExceeded(
            f"exhaustive enumeration over {len(af.args)} arguments exceeds the bound of {limit}")


def _sorted_family(sets):
    return sorted(set(sets), key=lambda s: (len(s), sorted(s)))


def extensions(af, kind, max_args=None):
    """All extensions of ``af`` under ``kind``, as a sorted list of frozensets.

    Uses exhaustive subset enumeration, so frameworks larger than ``max_args``
    (default :data:`MAX_ENUMERATION_ARGS`) are rejected with
    :class:`ResourceExceeded`. Grounded is the exception: it is computed by
    fixpoint and never enumerated.
    """
    kind = SemanticsKind.parse(kind)
    if kind is SemanticsKind.GROUNDED:
        return [grounded_extension(af)]
    _check_bound(af, max_args)
    bits = _Bits(af)
    cf = bits.conflict_free_masks()
    if kind is SemanticsKind.CONFLICT_FREE:
        return _sorted_family(bits.to_set(m) for m in cf)
    adm = [m for m in cf if bits.admissible(m)]
    if kind is SemanticsKind.ADMISSIBLE:
        return _sorted_family(bits.to_set(m) for m in adm)
    if kind is SemanticsKind.COMPLETE:
        return _sorted_family(
            bits.to_set(m) for m in adm if bits.acceptable_mask(m) & ~m == 0)
    preferred = [m for m in adm if not any(o != m and o & m == m for o in adm)]
    if kind is SemanticsKind.PREFERRED:
        return _sorted_family(bits.to_set(m) for m in preferred)
    # ideal: union of the admissible sets inside every preferred extension
    common = ~0
    for m in preferred:
        common &= m
    ideal = 0
    for m in adm:
        if m & common == m:
            ideal |= m
    assert bits.admissible(ideal)
    return [bits.to_set(ideal)]


def ideal_extension(af, max_args=None):
    return extensions(af, SemanticsKind.IDEAL, max_args)[0]


def satisfies(af, e, kind, max_args=None):
    """Evaluate the table criterion for ``kind`` on the candidate set ``e``."""
    kind = SemanticsKind.parse(kind)
    e = frozenset(e)
    for a in e:
        af.check_argument(a)
    if kind is SemanticsKind.CONFLICT_FREE:
        return is_conflict_free(af, e)
    if kind is SemanticsKind.ADMISSIBLE:
        return is_admissible(af, e)
    if kind is SemanticsKind.COMPLETE:
        return is_complete(af, e)
    if kind is SemanticsKind.GROUNDED:
        if not is_complete(af, e):
            return False
        complete = extensions(af, SemanticsKind.COMPLETE, max_args)
        return not any(c < e for c in complete)
    if kind is SemanticsKind.PREFERRED:
        if not is_admissible(af, e):
            return False
        admissible = extensions(af, SemanticsKind.ADMISSIBLE, max_args)
        return not any(e < s for s in admissible)
    # ideal
    if not is_admissible(af, e):
        return False
    return all(e <= p for p in extensions(af, SemanticsKind.PREFERRED, max_args))


def accepted(af, a, kind, max_args=None):
    """Membership oracle.

    Grounded and ideal are skeptical (membership in the unique extension);
    every other semantics is read credulously (membership in some extension).
    """
    kind = SemanticsKind.parse(kind)
    af.check_argument(a)
    if kind is SemanticsKind.GROUNDED:
        return a in grounded_extension(af)
    if kind is SemanticsKind.IDEAL:
        return a in ideal_extension(af, max_args)
    if kind in (SemanticsKind.ADMISSIBLE, SemanticsKind.PREFERRED, SemanticsKind.COMPLETE):
        # credulous acceptance coincides for these three
        kind = SemanticsKind.ADMISSIBLE
    return any(a in e for e in extensions(af, kind, max_args))


def format_set(members):
    """Canonical set syntax: sorted names, braces, comma-space."""
    return "{" + ", ".join(sorted(members)) + "}"

