"""Terms and equations over the quasi-polyadic equality signature.

Concrete syntax::

    term   := sum
    sum    := prod ('+' prod)*
    prod   := unary ('*' unary)*
    unary  := '-' unary | primary
    primary:= '0' | '1' | var | 'd' I I | 'c' I '(' term ')'
            | 's' I I '(' term ')' | 'p' I I '(' term ')' | '(' term ')'

``I`` is a digit, or one of ``i j k l m`` in schemata. ``s`` is the
replacement ``s^i_j``, ``p`` the transposition ``s_ij``. Variables are
``x y z u v w`` with optional trailing digits.

An equation file has one ``[label:] lhs = rhs [| guard, ...]`` per line,
where each guard is ``distinct(a, b, ...)`` over index letters.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .algebra import ComplexAlgebra, Element
from .errors import FormatError, InvalidParameter, ResourceLimit

Index = Union[int, str]
INDEX_LETTERS = "ijklm"
EXHAUSTIVE_MAX_ATOMS = 16
EXHAUSTIVE_MAX_VARS = 2


class TermSyntaxError(FormatError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Diag:
    i: Index
    j: Index


@dataclass(frozen=True)
class Compl:
    arg: "Term"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Cyl:
    i: Index
    arg: "Term"


@dataclass(frozen=True)
class Repl:
    i: Index
    j: Index
    arg: "Term"


@dataclass(frozen=True)
class Swap:
    i: Index
    j: Index
    arg: "Term"


Term = Union[Zero, One, Var, Diag, Compl, Join, Meet, Cyl, Repl, Swap]


# ---------------------------------------------------------------------------
# parsing

_VAR = re.compile(r"[xyzuvw][0-9]*")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise TermSyntaxError(message, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def index(self):
        if self.pos >= len(self.text):
            self.error("expected an index")
        ch = self.text[self.pos]
        if ch.isdigit():
            self.pos += 1
            return int(ch)
        if ch in INDEX_LETTERS:
            self.pos += 1
            return ch
        self.error(f"bad index {ch!r}")

    def term(self):
        left = self.prod()
        while self.peek() == "+":
            self.pos += 1
            left = Join(left, self.prod())
        return left

    def prod(self):
        left = self.unary()
        while self.peek() == "*":
            self.pos += 1
            left = Meet(left, self.unary())
        return left

    def unary(self):
        if self.peek() == "-":
            self.pos += 1
            return Compl(self.unary())
        return self.primary()

    def call(self):
        self.expect("(")
        t = self.term()
        self.expect(")")
        return t

    def primary(self):
        ch = self.peek()
        if ch == "":
            self.error("unexpected end of input")
        if ch == "(":
            return self.call()
        if ch == "0":
            self.pos += 1
            return Zero()
        if ch == "1":
            self.pos += 1
            return One()
        m = _VAR.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return Var(m.group())
        if ch in "cdsp":
            self.pos += 1
            if ch == "c":
                i = self.index()
                return Cyl(i, self.call())
            i = self.index()
            j = self.index()
            if ch == "d":
                return Diag(i, j)
            return (Repl if ch == "s" else Swap)(i, j, self.call())
        self.error(f"unknown symbol {ch!r}")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek() != "":
        p.error("trailing input")
    return t


_PREC = {Join: 1, Meet: 2}


def format_term(t: Term) -> str:
    """Inverse of :func:`parse_term`, with the fewest parentheses."""
    def wrap(u, need):
        s = format_term(u)
        return f"({s})" if _PREC.get(type(u), 3) < need else s

    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Diag):
        return f"d{t.i}{t.j}"
    if isinstance(t, Compl):
        return "-" + wrap(t.arg, 3)
    if isinstance(t, Join):
        return f"{wrap(t.left, 1)} + {wrap(t.right, 2)}"
    if isinstance(t, Meet):
        return f"{wrap(t.left, 2)} * {wrap(t.right, 3)}"
    if isinstance(t, Cyl):
        return f"c{t.i}({format_term(t.arg)})"
    if isinstance(t, Repl):
        return f"s{t.i}{t.j}({format_term(t.arg)})"
    if isinstance(t, Swap):
        return f"p{t.i}{t.j}({format_term(t.arg)})"
    raise TypeError(t)


def _children(t):
    if isinstance(t, (Compl, Cyl, Repl, Swap)):
        return (t.arg,)
    if isinstance(t, (Join, Meet)):
        return (t.left, t.right)
    return ()


def _indices(t):
    if isinstance(t, (Diag, Repl, Swap)):
        return (t.i, t.j)
    if isinstance(t, Cyl):
        return (t.i,)
    return ()


def variables(t: Term) -> set:
    if isinstance(t, Var):
        return {t.name}
    return set().union(*(variables(c) for c in _children(t)))


def placeholders(t: Term) -> set:
    own = {i for i in _indices(t) if isinstance(i, str)}
    return own.union(*(placeholders(c) for c in _children(t)))


def substitute(t: Term, mapping: dict) -> Term:
    """Replace index letters by concrete indices."""
    f = lambda i: mapping.get(i, i) if isinstance(i, str) else i  # noqa: E731
    if isinstance(t, Diag):
        return Diag(f(t.i), f(t.j))
    if isinstance(t, Compl):
        return Compl(substitute(t.arg, mapping))
    if isinstance(t, (Join, Meet)):
        return type(t)(substitute(t.left, mapping), substitute(t.right, mapping))
    if isinstance(t, Cyl):
        return Cyl(f(t.i), substitute(t.arg, mapping))
    if isinstance(t, (Repl, Swap)):
        return type(t)(f(t.i), f(t.j), substitute(t.arg, mapping))
    return t


_FAMILY = {Diag: "diag", Cyl: "cyl", Repl: "repl", Swap: "swap"}


def families(t: Term) -> set:
    own = {_FAMILY[type(t)]} if type(t) in _FAMILY else set()
    return own.union(*(families(c) for c in _children(t)))


def bind(t: Term, a: ComplexAlgebra) -> None:
    """Reject indices outside the algebra's dimension and foreign operators."""
    for i in _indices(t):
        if isinstance(i, str):
            raise InvalidParameter(f"unbound index letter {i!r}")
        if not 0 <= i < a.n:
            raise InvalidParameter(f"index {i} out of range for dimension {a.n}")
    fam = _FAMILY.get(type(t))
    if fam is not None:
        a.structure.require(fam)
    for c in _children(t):
        bind(c, a)


# ---------------------------------------------------------------------------
# evaluation


def eval_bits(t: Term, env: dict, a: ComplexAlgebra, shape: tuple) -> np.ndarray:
    """Evaluate on bit arrays of ``shape`` (``(..., H)``); no binding checks."""
    if isinstance(t, Zero):
        return np.zeros(shape, dtype=bool)
    if isinstance(t, One):
        return np.ones(shape, dtype=bool)
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise InvalidParameter(f"unbound variable {t.name!r}") from None
    if isinstance(t, Diag):
        return np.broadcast_to(a.diag_bits(t.i, t.j), shape)
    if isinstance(t, Compl):
        return ~eval_bits(t.arg, env, a, shape)
    if isinstance(t, Join):
        return eval_bits(t.left, env, a, shape) | eval_bits(t.right, env, a, shape)
    if isinstance(t, Meet):
        return eval_bits(t.left, env, a, shape) & eval_bits(t.right, env, a, shape)
    if isinstance(t, Cyl):
        return a.cyl_bits(t.i, eval_bits(t.arg, env, a, shape))
    if isinstance(t, Repl):
        return a.repl_bits(t.i, t.j, eval_bits(t.arg, env, a, shape))
    if isinstance(t, Swap):
        return a.swap_bits(t.i, t.j, eval_bits(t.arg, env, a, shape))
    raise TypeError(t)


def eval_term(t: Union[Term, str], env: dict, a: ComplexAlgebra) -> Element:
    """Value of ``t`` in ``a`` with variables assigned by ``env`` (name -> Element)."""
    if isinstance(t, str):
        t = parse_term(t)
    bind(t, a)
    missing = variables(t) - set(env)
    if missing:
        raise InvalidParameter(f"unbound variable(s) {sorted(missing)}")
    bits = {name: a._own(x) for name, x in env.items()}
    return Element(a, eval_bits(t, bits, a, (a.size,)))


# ---------------------------------------------------------------------------
# equations


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term
    guards: tuple = ()
    label: Optional[str] = None

    def __str__(self):
        s = f"{format_term(self.lhs)} = {format_term(self.rhs)}"
        if self.guards:
            s += " | " + ", ".join(f"distinct({', '.join(map(str, g))})" for g in self.guards)
        return f"{self.label}: {s}" if self.label else s

    @property
    def variables(self) -> list:
        return sorted(variables(self.lhs) | variables(self.rhs))

    @property
    def placeholders(self) -> list:
        return sorted(placeholders(self.lhs) | placeholders(self.rhs))

    @property
    def families(self) -> set:
        return families(self.lhs) | families(self.rhs)

    def instances(self, n: int) -> list:
        """Ground instances as ``(assignment, Equation)`` pairs, guards applied."""
        letters = self.placeholders
        out = []
        for values in itertools.product(range(n), repeat=len(letters)):
            m = dict(zip(letters, values))
            if all(len({m.get(g, g) for g in guard}) == len(guard) for guard in self.guards):
                ground = Equation(substitute(self.lhs, m), substitute(self.rhs, m), (), self.label)
                out.append((m, ground))
        return out


_LABEL = re.compile(r"\s*([A-Za-z][\w.-]*)\s*:(?!=)")
_GUARD = re.compile(r"distinct\s*\(([^)]*)\)")


def parse_equation(line: str) -> Equation:
    label = None
    m = _LABEL.match(line)
    if m:
        label, line = m.group(1), line[m.end():]
    body, _, guard_text = line.partition("|")
    if body.count("=") != 1:
        raise FormatError(f"equation needs exactly one '=': {line!r}")
    lhs, rhs = body.split("=")
    guards = []
    rest = guard_text.strip()
    while rest:
        g = _GUARD.match(rest)
        if not g:
            raise FormatError(f"guards are limited to distinct(...): {guard_text!r}")
        names = tuple(x.strip() for x in g.group(1).split(","))
        for x in names:
            if not (len(x) == 1 and (x in INDEX_LETTERS or x.isdigit())):
                raise FormatError(f"bad guard argument {x!r}")
        guards.append(tuple(int(x) if x.isdigit() else x for x in names))
        rest = rest[g.end():].strip()
        if rest.startswith(","):
            rest = rest[1:].strip()
    return Equation(parse_term(lhs), parse_term(rhs), tuple(guards), label)


def parse_equations(text: str) -> list:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(parse_equation(line))
        except FormatError as exc:
            raise FormatError(str(exc), lineno) from None
    return out


SUITES = {
    "df": ("cylindric",),
    "ca": ("cylindric", "diagonal"),
    "sc": ("cylindric", "replacement"),
    "qa": ("cylindric", "replacement", "swap"),
    "qea": ("cylindric", "diagonal", "replacement", "swap", "definitional"),
}


def load_suite(name_or_path) -> list:
    """Equation schemata of a built-in suite, or parsed from a file path."""
    if isinstance(name_or_path, str) and name_or_path in SUITES:
        eqs = []
        for part in SUITES[name_or_path]:
            text = resources.files("qeagraph.suites").joinpath(f"{part}.eq").read_text()
            eqs += parse_equations(text)
        return eqs
    path = Path(name_or_path)
    if not path.exists():
        raise InvalidParameter(f"unknown suite {name_or_path!r}")
    return parse_equations(path.read_text())


def expand_suite(schemata: list, n: int) -> list:
    """All ground instances, in schema order."""
    return [(eq, m, ground) for eq in schemata for m, ground in eq.instances(n)]


# ---------------------------------------------------------------------------
# checking


@dataclass(frozen=True)
class Strategy:
    mode: str = "random"
    samples: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("random", "exhaustive"):
            raise InvalidParameter(f"unknown strategy mode {self.mode!r}")
        if self.samples < 1:
            raise InvalidParameter("samples must be positive")


@dataclass
class EquationResult:
    equation: Equation
    passed: bool
    checked: int
    counterexample: Optional[dict] = None

    def __bool__(self):
        return self.passed


def random_elements(rng: np.random.Generator, count: int, size: int) -> np.ndarray:
    """``count`` random subsets of ``range(size)`` as rows of a bool array.

    Each row is uniform given its density, and the density is log-uniform
    between ``1/size`` and ``1/2``, complemented for half the rows. Subsets
    of every scale turn up, including near-singletons and near-tops, which
    plain fair coin flips almost never produce once ``size`` is large.
    """
    if size == 0:
        return np.zeros((count, 0), dtype=bool)
    lo = np.log(1.0 / max(size, 2))
    density = np.exp(rng.uniform(lo, np.log(0.5), size=(count, 1)))
    bits = rng.random((count, size)) < density
    flip = rng.random((count, 1)) < 0.5
    return bits ^ flip


def _first_failure(eq, a, env_bits, shape):
    lhs = eval_bits(eq.lhs, env_bits, a, shape)
    rhs = eval_bits(eq.rhs, env_bits, a, shape)
    bad = np.flatnonzero(np.any(lhs != rhs, axis=-1))
    return int(bad[0]) if len(bad) else None


def _chunks(total, rows):
    for start in range(0, total, rows):
        yield start, min(rows, total - start)


def reverify(eq: Equation, a: ComplexAlgebra, counterexample: dict) -> list:
    """Atoms where the two sides differ under the reported assignment."""
    env = {v: a.element(idx) for v, idx in counterexample["env"].items()}
    lhs = eval_term(eq.lhs, env, a)
    rhs = eval_term(eq.rhs, env, a)
    return np.flatnonzero(lhs.bits != rhs.bits).tolist()


def check_equation(eq: Equation, a: ComplexAlgebra, strat: Strategy = Strategy(),
                   stream: int = 0) -> EquationResult:
    """Test a ground equation on ``a``.

    Random mode draws uniform subsets from a generator seeded by
    ``(strat.seed, stream)``. Exhaustive mode walks every assignment and is
    limited to small algebras. A counterexample is re-evaluated through the
    element API before it is reported.
    """
    if eq.placeholders:
        raise InvalidParameter(f"equation still has index letters {eq.placeholders}; expand first")
    bind(eq.lhs, a)
    bind(eq.rhs, a)
    names = eq.variables
    H = a.size
    # keep each batch around a few million bits
    rows = max(1, (1 << 22) // max(H, 1))
    failure = None
    if strat.mode == "exhaustive":
        if H > EXHAUSTIVE_MAX_ATOMS or len(names) > EXHAUSTIVE_MAX_VARS:
            raise ResourceLimit(
                f"exhaustive mode needs <= {EXHAUSTIVE_MAX_ATOMS} atoms and "
                f"<= {EXHAUSTIVE_MAX_VARS} variables (have {H}, {len(names)})")
        total = 1 << (H * len(names))
        shifts = np.arange(H, dtype=np.int64)
        for start, count in _chunks(total, rows):
            m = np.arange(start, start + count, dtype=np.int64)
            env = {v: ((m[:, None] >> (k * H + shifts)) & 1).astype(bool)
                   for k, v in enumerate(names)}
            bad = _first_failure(eq, a, env, (count, H))
            if bad is not None:
                failure = {v: np.flatnonzero(env[v][bad]).tolist() for v in names}
                break
        checked = total if failure is None else start + bad + 1
    else:
        rng = np.random.default_rng([strat.seed, stream])
        checked = 0
        for start, count in _chunks(strat.samples, rows):
            env = {v: random_elements(rng, count, H) for v in names}
            bad = _first_failure(eq, a, env, (count, H))
            if bad is not None:
                failure = {v: np.flatnonzero(env[v][bad]).tolist() for v in names}
                checked += bad + 1
                break
            checked += count
    if failure is None:
        return EquationResult(eq, True, checked)
    cex = {"env": failure}
    diff = reverify(eq, a, cex)
    if not diff:
        raise AssertionError(f"counterexample for {eq} did not reproduce")
    cex["diff"] = diff
    return EquationResult(eq, False, checked, cex)
