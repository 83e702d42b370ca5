"""Process terms of the finite-state randomized CCS fragment.

Terms are hash-consed: constructing a term that is structurally equal to an
existing live term returns the existing object, so ``==`` is identity and
hashing is O(1).  Shared subterms (for instance after macro expansion of a
definitions file) are therefore stored once, and every traversal below is
memoized per node so that DAG-shaped terms are handled in linear time.

Bound variables are renamed canonically by :func:`validate`.  A binder is named
after the nesting height of its body, which depends only on the subterm itself,
so alpha-equivalent closed terms become the same object.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping
from weakref import WeakValueDictionary

TAU = "tau"


class TermError(ValueError):
    """Base class for ill-formed terms."""


class ParseError(TermError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class UnguardedVariable(TermError):
    def __init__(self, var: str):
        super().__init__(f"variable {var} occurs unguarded in its own body")
        self.var = var


class FreeVariable(TermError):
    def __init__(self, var: str):
        super().__init__(f"free variable or undefined name {var}")
        self.var = var


class ProbabilitySumNotOne(TermError):
    def __init__(self, total: Fraction):
        super().__init__(f"probabilities sum to {total}, not 1")
        self.total = total


class ProbabilityOutOfRange(TermError):
    def __init__(self, p: Fraction):
        super().__init__(f"probability {p} is not in (0, 1)")
        self.p = p


class RecursiveDefinition(TermError):
    def __init__(self, name: str):
        super().__init__(f"definition {name} refers to itself; use mu for recursion")
        self.name = name


# ---------------------------------------------------------------------------
# term nodes

_TABLE: "WeakValueDictionary[tuple, Term]" = WeakValueDictionary()


class Term:
    __slots__ = ("_hash", "free_vars", "height", "__weakref__")

    free_vars: frozenset
    height: int

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {pretty(self)}>"

    def __reduce__(self):
        return (parse, (pretty(self),))


def _intern(cls, key: tuple, free_vars: frozenset, height: int):
    obj = _TABLE.get(key)
    if obj is None:
        obj = object.__new__(cls)
        obj._hash = hash(key)
        obj.free_vars = free_vars
        obj.height = height
        _TABLE[key] = obj
        return obj, True
    return obj, False


class Nil(Term):
    __slots__ = ()

    def __new__(cls):
        obj, _ = _intern(cls, (cls,), frozenset(), 0)
        return obj


class Var(Term):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        obj, fresh = _intern(cls, (cls, name), frozenset((name,)), 0)
        if fresh:
            obj.name = name
        return obj


class NdChoice(Term):
    """Nondeterministic sum of action prefixes."""

    __slots__ = ("branches",)

    def __new__(cls, branches: Iterable[tuple[str, Term]]):
        branches = tuple((str(a), t) for a, t in branches)
        if not branches:
            raise TermError("empty choice")
        fv = frozenset().union(*(t.free_vars for _, t in branches))
        height = max(t.height for _, t in branches)
        obj, fresh = _intern(cls, (cls, branches), fv, height)
        if fresh:
            obj.branches = branches
        return obj


class PChoice(Term):
    """Probabilistic sum of tau prefixes."""

    __slots__ = ("branches",)

    def __new__(cls, branches: Iterable[tuple[Fraction | int | str, Term]]):
        branches = tuple((Fraction(p), t) for p, t in branches)
        if len(branches) < 2:
            raise TermError("a probabilistic choice needs at least two branches")
        fv = frozenset().union(*(t.free_vars for _, t in branches))
        height = max(t.height for _, t in branches)
        obj, fresh = _intern(cls, (cls, branches), fv, height)
        if fresh:
            obj.branches = branches
        return obj


class Fix(Term):
    __slots__ = ("var", "body")

    def __new__(cls, var: str, body: Term):
        obj, fresh = _intern(cls, (cls, var, body), body.free_vars - {var}, body.height + 1)
        if fresh:
            obj.var = var
            obj.body = body
        return obj


NIL = Nil()


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, (NdChoice, PChoice)):
        return tuple(c for _, c in t.branches)
    if isinstance(t, Fix):
        return (t.body,)
    return ()


def _rebuild(t: Term, kids: list[Term]) -> Term:
    if isinstance(t, NdChoice):
        return NdChoice((a, k) for (a, _), k in zip(t.branches, kids))
    if isinstance(t, PChoice):
        return PChoice((p, k) for (p, _), k in zip(t.branches, kids))
    if isinstance(t, Fix):
        return Fix(t.var, kids[0])
    return t


# ---------------------------------------------------------------------------
# canonical naming, substitution, unfolding


def binder_name(height: int) -> str:
    """Canonical name for a binder whose body has the given nesting height."""
    return "XYZW"[height] if height < 4 else f"X{height}"


def canonical(t: Term) -> Term:
    """Rename every bound variable of ``t`` to its canonical name."""
    memo: dict[tuple, Term] = {}

    def go(u: Term, env: Mapping[str, str]) -> Term:
        if not u.free_vars and u.height == 0:
            return u
        key = (u, tuple(sorted((v, env.get(v, v)) for v in u.free_vars)))
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(u, Var):
            out = Var(env.get(u.name, u.name))
        elif isinstance(u, Fix):
            name = binder_name(u.body.height)
            out = Fix(name, go(u.body, {**env, u.var: name}))
        else:
            out = _rebuild(u, [go(k, env) for k in children(u)])
        memo[key] = out
        return out

    return go(t, {})


def substitute(t: Term, var: str, replacement: Term) -> Term:
    """Replace free occurrences of ``var`` by a closed ``replacement``."""
    if replacement.free_vars:
        raise TermError("substitution of an open term is not capture-safe here")
    memo: dict[Term, Term] = {}

    def go(u: Term) -> Term:
        if var not in u.free_vars:
            return u
        hit = memo.get(u)
        if hit is not None:
            return hit
        if isinstance(u, Var):
            out = replacement
        else:
            out = _rebuild(u, [go(k) for k in children(u)])
        memo[u] = out
        return out

    return go(t)


def unfold(t: Fix) -> Term:
    """One unfolding ``T{mu X.T / X}`` of a closed recursive term."""
    if not isinstance(t, Fix):
        raise TermError("only a recursive term can be unfolded")
    return canonical(substitute(t.body, t.var, t))


def head_normal(t: Term) -> Term:
    """Unfold leading binders until the head is 0 or a choice."""
    while isinstance(t, Fix):
        t = substitute(t.body, t.var, t)
    if isinstance(t, Var):
        raise FreeVariable(t.name)
    return t


# ---------------------------------------------------------------------------
# validation


def _unguarded(t: Term, memo: dict) -> frozenset:
    hit = memo.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Var):
        out = frozenset((t.name,))
    elif isinstance(t, Fix):
        out = _unguarded(t.body, memo) - {t.var}
    else:
        out = frozenset()
    memo[t] = out
    return out


def validate(t: Term) -> Term:
    """Check that ``t`` is a process and return its canonical form."""
    if t.free_vars:
        raise FreeVariable(sorted(t.free_vars)[0])
    seen: set[Term] = set()
    ung: dict = {}
    stack = [t]
    while stack:
        u = stack.pop()
        if u in seen:
            continue
        seen.add(u)
        if isinstance(u, PChoice):
            for p, _ in u.branches:
                if not 0 < p < 1:
                    raise ProbabilityOutOfRange(p)
            total = sum(p for p, _ in u.branches)
            if total != 1:
                raise ProbabilitySumNotOne(total)
        elif isinstance(u, Fix) and u.var in _unguarded(u.body, ung):
            raise UnguardedVariable(u.var)
        stack.extend(children(u))
    return canonical(t)


# ---------------------------------------------------------------------------
# pretty printing


def pretty(t: Term) -> str:
    """Concrete syntax accepted by :func:`parse`; a trailing ``.0`` is omitted."""
    if isinstance(t, Nil):
        return "0"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, NdChoice):
        return " + ".join(_prefix(a, c) for a, c in t.branches)
    if isinstance(t, PChoice):
        return " (+) ".join(_prefix(f"{p} {TAU}", c) for p, c in t.branches)
    body = pretty(t.body)
    if isinstance(t.body, PChoice) or (isinstance(t.body, NdChoice) and len(t.body.branches) > 1):
        body = f"({body})"
    return f"mu {t.var}.{body}"


def _prefix(act: str, cont: Term) -> str:
    if isinstance(cont, Nil):
        return act
    return f"{act}.{_unary(cont)}"


def _unary(t: Term) -> str:
    if isinstance(t, (Nil, Var)) or (isinstance(t, NdChoice) and len(t.branches) == 1):
        return pretty(t)
    return f"({pretty(t)})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<psum>\(\+\))|(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<sym>[().+/=])"
)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind, self.text, self.line, self.col = kind, text, line, col


def _tokenize(text: str, line: int = 1) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, col0 = 0, 0
    while pos < len(text):
        if text[pos] == "\n":
            line, pos, col0 = line + 1, pos + 1, pos + 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - col0 + 1)
        kind = m.lastgroup
        if kind != "ws":
            word = m.group()
            if kind == "ident":
                if word in ("mu", TAU):
                    kind = word
                elif word[0].isupper():
                    kind = "name"
                else:
                    kind = "act"
            elif kind == "sym":
                kind = word
            toks.append(_Tok(kind, word, line, pos - col0 + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - col0 + 1))
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", tok.line, tok.col)

    def take(self, kind: str, what: str) -> _Tok:
        tok = self.tok
        if tok.kind != kind:
            self.fail(f"expected {what}")
        self.i += 1
        return tok

    def expr(self) -> Term:
        if self.tok.kind == "mu":
            return self.mu()
        start = self.tok
        first = self.item()
        if self.tok.kind == "+":
            items = [first]
            while self.tok.kind == "+":
                self.i += 1
                tok = self.tok
                items.append(self.item())
                if items[-1][0] != "prefix":
                    self.fail("expected an action prefix in a sum", tok)
            if first[0] != "prefix":
                self.fail("expected an action prefix in a sum", start)
            return NdChoice((a, c) for _, a, c in items)
        if self.tok.kind == "psum":
            items = [first]
            while self.tok.kind == "psum":
                self.i += 1
                tok = self.tok
                items.append(self.item())
                if items[-1][0] != "pterm":
                    self.fail("expected a probabilistic branch 'p/q tau.T'", tok)
            if first[0] != "pterm":
                self.fail("expected a probabilistic branch 'p/q tau.T'", start)
            return PChoice((p, c) for _, p, c in items)
        return self.as_term(first, start)

    def as_term(self, item: tuple, tok: _Tok) -> Term:
        if item[0] == "prefix":
            return NdChoice([(item[1], item[2])])
        if item[0] == "pterm":
            self.fail("a probabilistic branch needs a (+) partner", tok)
        return item[1]

    def mu(self) -> Term:
        self.take("mu", "'mu'")
        var = self.take("name", "a capitalised variable after 'mu'").text
        self.take(".", "'.'")
        return Fix(var, self.expr())

    def item(self) -> tuple:
        tok = self.tok
        if tok.kind == "int":
            if self.toks[self.i + 1].kind == "/":
                return self.pterm()
            if tok.text.strip("0") == "":
                self.i += 1
                return ("term", NIL)
            self.fail("expected a term")
        if tok.kind in ("act", TAU):
            self.i += 1
            return ("prefix", tok.text, self.continuation())
        if tok.kind == "name":
            self.i += 1
            return ("term", Var(tok.text))
        if tok.kind == "(":
            self.i += 1
            if self.tok.kind == ")":
                self.fail("empty choice")
            t = self.expr()
            self.take(")", "')'")
            return ("term", t)
        if tok.kind == "mu":
            return ("term", self.mu())
        self.fail("expected a term")

    def pterm(self) -> tuple:
        num = self.take("int", "a numerator")
        self.take("/", "'/'")
        den = self.take("int", "a denominator")
        if int(den.text) == 0:
            raise ParseError("malformed fraction with zero denominator", den.line, den.col)
        self.take(TAU, "'tau' after a probability")
        return ("pterm", Fraction(int(num.text), int(den.text)), self.continuation())

    def continuation(self) -> Term:
        if self.tok.kind != ".":
            return NIL
        self.i += 1
        tok = self.tok
        return self.as_term(self.item(), tok)


def parse(text: str, line: int = 1) -> Term:
    """Parse one term.  The result is not validated."""
    p = _Parser(_tokenize(text, line))
    t = p.expr()
    if p.tok.kind != "eof":
        p.fail("unexpected trailing input")
    return t


# ---------------------------------------------------------------------------
# definitions files

_DEF = re.compile(r"\s*([A-Z][A-Za-z0-9_]*)\s*=(.*)$")


def parse_definitions(text: str) -> dict[str, Term]:
    """Parse ``Name = term`` lines into raw, unexpanded terms (file order)."""
    raw: dict[str, Term] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        m = _DEF.match(line)
        if m is None:
            raise ParseError("expected 'Name = term'", lineno, 1)
        name, body = m.group(1), m.group(2)
        if name in raw:
            raise ParseError(f"duplicate definition of {name}", lineno, 1)
        offset = m.start(2)
        try:
            raw[name] = parse(body, lineno)
        except ParseError as err:
            col = err.column + offset if err.line == lineno else err.column
            raise ParseError(str(err).split(": ", 1)[1], err.line, col) from None
    return raw


def expand(raw: Mapping[str, Term]) -> dict[str, Term]:
    """Macro-expand process names and validate every definition."""
    done: dict[str, Term] = {}
    active: list[str] = []

    def resolve(name: str) -> Term:
        if name in done:
            return done[name]
        if name in active:
            raise RecursiveDefinition(name)
        active.append(name)
        done[name] = inline(raw[name], frozenset(), {})
        active.pop()
        return done[name]

    def inline(t: Term, bound: frozenset, memo: dict) -> Term:
        names = t.free_vars - bound
        if not names:
            return t
        key = (t, bound & t.free_vars)
        if key in memo:
            return memo[key]
        if isinstance(t, Var):
            out = resolve(t.name) if t.name in raw else t
        elif isinstance(t, Fix):
            out = Fix(t.var, inline(t.body, bound | {t.var}, memo))
        else:
            out = _rebuild(t, [inline(k, bound, memo) for k in children(t)])
        memo[key] = out
        return out

    out: dict[str, Term] = {}
    for name in raw:
        try:
            out[name] = validate(resolve(name))
        except TermError as err:
            err.definition = name
            raise
    return out


def load_definitions(text: str) -> dict[str, Term]:
    return expand(parse_definitions(text))


def process(text: str, definitions: Mapping[str, Term] | None = None) -> Term:
    """Parse, expand against ``definitions`` and validate a single term."""
    t = parse(text)
    if definitions:
        raw = {**definitions, "__term__": t}
        return expand(raw)["__term__"]
    return validate(t)
