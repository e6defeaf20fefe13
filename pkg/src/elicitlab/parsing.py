"""Text literals for distributions, functionals, shapes, identification functions and scores.

One small recursive-descent parser reads every literal into a generic tree;
typed builders turn the tree into library objects.  Every object's
``literal()`` output parses back to an equal object.  The grammar is
documented in ``docs/grammar.md``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .dist import Distribution, Exponential, Lognormal, Mixture, Normal, Shifted, StudentT, TwoPoint, Uniform
from .errors import ElicitError, ParseError
from .functionals import (
    Expectile,
    ExpectedShortfall,
    ExpectileVector,
    Functional,
    Mean,
    MeanVariance,
    MomentK,
    Quantile,
    QuantileVector,
    RatioOfExpectations,
    SpectralMeasure,
    SpectralWithQuantiles,
    VaRES,
    Variance,
    stack,
)
from .ident import (
    ExpectileIdent,
    IdentSpec,
    MeanVarianceIdent,
    QuantileIdent,
    RatioIdent,
    SpectralIdent,
    StackedIdent,
    VarEsIdent,
)
from .scores import (
    AcerbiSzekelyW,
    BregmanMean,
    BregmanRatio,
    ExpectileSquare,
    MeanVarianceRevealed,
    QuantilePinball,
    Rescaled,
    ScoreSpec,
    SpectralScore,
    SumScore,
    VarEsScore,
    build_numeric_onedim,
)
from .shapes import ShapeFunction

__all__ = ["parse_distribution", "parse_functional", "parse_shape", "parse_ident", "parse_score", "parse_vector"]

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<num>[+-]?(?:inf|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z][A-Za-z0-9_]*)*)
      | (?P<op>[(),;=*@\[\]])
    )""",
    re.VERBOSE,
)


@dataclass
class Node:
    kind: str  # num | call | weighted | at | list
    value: object = None
    args: list = field(default_factory=list)
    kwargs: dict = field(default_factory=dict)
    weight: float | None = None
    bare: bool = False


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                pos += len(text[pos:]) - len(text[pos:].lstrip())
                raise ParseError(f"unexpected character {text[pos:pos + 1]!r} at position {pos} in {self.text!r}")
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def peek(self, offset=0):
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else (None, None, len(self.text))

    def take(self, want=None):
        tok = self.peek()
        if tok[0] is None or (want is not None and tok[1] != want):
            where = f"at position {tok[2]}" if tok[0] else "at end of input"
            raise ParseError(f"expected {want or 'a token'} {where} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.value()
        if self.peek()[0] is not None:
            raise ParseError(f"trailing input at position {self.peek()[2]} in {self.text!r}")
        return node

    def value(self) -> Node:
        kind, tok, _ = self.peek()
        if kind == "num":
            self.take()
            num = float(tok)
            if self.peek()[1] == "*":
                self.take()
                return Node("weighted", weight=num, args=[self.value()])
            if self.peek()[1] == "@":
                self.take()
                q = self.take()
                if q[0] != "num":
                    raise ParseError(f"expected a level after '@' in {self.text!r}")
                return Node("at", weight=num, value=float(q[1]))
            return Node("num", value=num)
        if kind == "ident":
            self.take()
            if self.peek()[1] != "(":
                return Node("call", value=tok, bare=True)
            self.take("(")
            node = Node("call", value=tok)
            if self.peek()[1] != ")":
                self.arglist(node)
            self.take(")")
            return node
        if tok == "[":
            self.take()
            items = []
            if self.peek()[1] != "]":
                items.append(self.value())
                while self.peek()[1] == ",":
                    self.take()
                    items.append(self.value())
            self.take("]")
            return Node("list", args=items)
        if kind is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        raise ParseError(f"unexpected {tok!r} at position {self.peek()[2]} in {self.text!r}")

    def arglist(self, node: Node):
        while True:
            if self.peek()[0] == "ident" and self.peek(1)[1] == "=":
                key = self.take()[1]
                self.take("=")
                if key in node.kwargs:
                    raise ParseError(f"duplicate keyword {key!r} in {self.text!r}")
                node.kwargs[key] = self.value()
            else:
                if node.kwargs:
                    raise ParseError(f"positional argument after keyword in {self.text!r}")
                node.args.append(self.value())
            sep = self.peek()[1]
            if sep in (",", ";"):
                self.take()
                continue
            return


def _tree(text: str) -> Node:
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty literal")
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _num(n: Node, what: str) -> float:
    if n.kind != "num":
        raise ParseError(f"{what} must be a number")
    return float(n.value)


def _name(n: Node, what: str) -> str:
    if n.kind != "call" or not n.bare:
        raise ParseError(f"{what} must be a bare name")
    return str(n.value)


def _arity(n: Node, lo: int, hi: int | None = None, kw: tuple[str, ...] = ()):
    hi = lo if hi is None else hi
    if not lo <= len(n.args) <= hi:
        raise ParseError(f"{n.value}() takes {lo if lo == hi else f'{lo} to {hi}'} positional arguments, got {len(n.args)}")
    extra = set(n.kwargs) - set(kw)
    if extra:
        raise ParseError(f"{n.value}() got unexpected keyword(s) {', '.join(sorted(extra))}")


def _wrap(builder, text):
    try:
        return builder(_tree(text))
    except ParseError:
        raise
    except ElicitError as e:
        raise ParseError(f"invalid literal {text!r}: {e}") from e
    except (TypeError, ValueError) as e:
        raise ParseError(f"invalid literal {text!r}: {e}") from e


# ---------------------------------------------------------------------------
# shapes
# ---------------------------------------------------------------------------


def _shape(n: Node) -> ShapeFunction:
    if n.kind != "call":
        raise ParseError("shape function must be a catalog name")
    tag = str(n.value).replace("-", "_")
    _arity(n, 0, 1)
    param = _num(n.args[0], "shape parameter") if n.args else None
    return ShapeFunction(tag, param)


def parse_shape(text: str) -> ShapeFunction:
    return _wrap(_shape, text)


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

_DIST_ARITY = {
    "normal": (Normal, 2),
    "student_t": (StudentT, 3),
    "lognormal": (Lognormal, 2),
    "uniform": (Uniform, 2),
    "exponential": (Exponential, 1),
    "two_point": (TwoPoint, 3),
}


def _dist(n: Node) -> Distribution:
    if n.kind != "call" or n.bare:
        raise ParseError("distribution must be a call such as normal(0, 1)")
    name = n.value
    if name in _DIST_ARITY:
        cls, k = _DIST_ARITY[name]
        _arity(n, k)
        return cls(*(_num(a, f"{name} parameter") for a in n.args))
    if name == "mixture":
        if not n.args:
            raise ParseError("mixture() needs weighted components like 0.5*normal(0, 1)")
        comps = []
        for a in n.args:
            if a.kind != "weighted":
                raise ParseError("mixture components must be written weight*distribution")
            comps.append((a.weight, _dist(a.args[0])))
        return Mixture(tuple(comps))
    if name == "shift":
        _arity(n, 2)
        return Shifted(_dist(n.args[0]), _num(n.args[1], "shift"))
    raise ParseError(f"unknown distribution {name!r}")


def parse_distribution(text: str) -> Distribution:
    return _wrap(_dist, text)


# ---------------------------------------------------------------------------
# functionals
# ---------------------------------------------------------------------------


def _measure(args: list[Node]) -> SpectralMeasure:
    if not args or any(a.kind != "at" for a in args):
        raise ParseError("spectral measure must be written as weight@level, ...")
    return SpectralMeasure(tuple(a.value for a in args), tuple(a.weight for a in args))


def _functional(n: Node) -> Functional:
    if n.kind != "call":
        raise ParseError("functional must be a name or call")
    name = n.value
    if n.bare:
        simple = {"mean": Mean, "mean_variance": MeanVariance, "variance": Variance}
        if name not in simple:
            raise ParseError(f"unknown functional {name!r}")
        return simple[name]()
    if name == "moment":
        _arity(n, 1)
        return MomentK(int(_num(n.args[0], "moment order")))
    if name == "ratio":
        _arity(n, 2)
        return RatioOfExpectations(_name(n.args[0], "numerator"), _name(n.args[1], "denominator"))
    one = {"quantile": Quantile, "expectile": Expectile, "var_es": VaRES, "es": ExpectedShortfall}
    if name in one:
        _arity(n, 1)
        return one[name](_num(n.args[0], "level"))
    if name == "quantiles":
        _arity(n, 1, 64)
        return QuantileVector(tuple(_num(a, "level") for a in n.args))
    if name == "expectiles":
        _arity(n, 1, 64)
        return ExpectileVector(tuple(_num(a, "level") for a in n.args))
    if name == "spectral":
        return SpectralWithQuantiles(_measure(n.args))
    if name == "stack":
        _arity(n, 1, 64)
        return stack([_functional(a) for a in n.args])
    raise ParseError(f"unknown functional {name!r}")


def parse_functional(text: str) -> Functional:
    return _wrap(_functional, text)


# ---------------------------------------------------------------------------
# identification functions
# ---------------------------------------------------------------------------


def _ident(n: Node) -> IdentSpec:
    if n.kind != "call":
        raise ParseError("identification function must be a name or call")
    name = n.value
    if n.bare:
        if name == "mean":
            return RatioIdent()
        if name == "mean_variance":
            return MeanVarianceIdent()
        raise ParseError(f"unknown identification function {name!r}")
    if name == "ratio":
        _arity(n, 2)
        return RatioIdent(_name(n.args[0], "numerator"), _name(n.args[1], "denominator"))
    one = {"quantile": QuantileIdent, "expectile": ExpectileIdent, "var_es": VarEsIdent}
    if name in one:
        _arity(n, 1)
        return one[name](_num(n.args[0], "level"))
    if name == "spectral":
        return SpectralIdent(_measure(n.args))
    if name == "stack":
        _arity(n, 1, 64)
        return StackedIdent(tuple(_ident(a) for a in n.args))
    raise ParseError(f"unknown identification function {name!r}")


def parse_ident(text: str) -> IdentSpec:
    return _wrap(_ident, text)


# ---------------------------------------------------------------------------
# scores
# ---------------------------------------------------------------------------


def _flag(n: Node, key: str) -> bool:
    if key not in n.kwargs:
        return False
    return bool(_num(n.kwargs[key], key))


def _kw_shape(n: Node, key: str, default: str | None = None) -> ShapeFunction:
    if key in n.kwargs:
        return _shape(n.kwargs[key])
    if default is None:
        raise ParseError(f"{n.value}() needs {key}=")
    return ShapeFunction(default)


def _score(n: Node) -> ScoreSpec:
    if n.kind != "call" or n.bare:
        raise ParseError("score must be a call such as pinball(0.5, G=identity)")
    name = n.value
    if name == "pinball":
        _arity(n, 1, kw=("G", "unchecked"))
        return QuantilePinball(_num(n.args[0], "level"), _kw_shape(n, "G", "identity"), _flag(n, "unchecked"))
    if name == "expectile_sq":
        _arity(n, 1)
        return ExpectileSquare(_num(n.args[0], "level"))
    if name == "bregman_mean":
        _arity(n, 0, kw=("phi", "unchecked"))
        return BregmanMean(_kw_shape(n, "phi", "square"), _flag(n, "unchecked"))
    if name == "bregman_ratio":
        _arity(n, 2, kw=("phi", "unchecked"))
        return BregmanRatio(_kw_shape(n, "phi", "square"), _name(n.args[0], "numerator"),
                            _name(n.args[1], "denominator"), _flag(n, "unchecked"))
    if name == "mean_var":
        _arity(n, 0, kw=("phi1", "phi2"))
        return MeanVarianceRevealed(_kw_shape(n, "phi1", "square"), _kw_shape(n, "phi2", "square"))
    if name == "var_es":
        _arity(n, 1, kw=("G1", "G2", "W", "unchecked"))
        W = _num(n.kwargs["W"], "W") if "W" in n.kwargs else None
        return VarEsScore(_num(n.args[0], "level"), _kw_shape(n, "G1", "zero"), _kw_shape(n, "G2", "exp"), W,
                          _flag(n, "unchecked"))
    if name == "spectral":
        _arity(n, 1, 64, kw=("G", "Gk", "unchecked"))
        g = n.kwargs.get("G")
        if g is None:
            gs = (ShapeFunction("zero"),)
        elif g.kind == "list":
            gs = tuple(_shape(a) for a in g.args)
        else:
            gs = (_shape(g),)
        return SpectralScore(_measure(n.args), gs, _kw_shape(n, "Gk", "exp"), _flag(n, "unchecked"))
    if name == "as_w":
        _arity(n, 1, kw=("W", "restrict"))
        if "W" not in n.kwargs:
            raise ParseError("as_w() needs W=")
        return AcerbiSzekelyW(_num(n.args[0], "level"), _num(n.kwargs["W"], "W"), _flag(n, "restrict"))
    if name in ("sum", "mix"):
        _arity(n, 1, 64)
        parts = []
        for a in n.args:
            if a.kind != "weighted":
                raise ParseError(f"{name}() parts must be written weight*score")
            parts.append((a.weight, _score(a.args[0])))
        return SumScore(tuple(parts), "concat" if name == "sum" else "mix")
    if name == "rescale":
        _arity(n, 2, kw=("a",))
        return Rescaled(_score(n.args[0]), _num(n.args[1], "factor"), _kw_shape(n, "a", "zero"))
    if name == "numeric":
        _arity(n, 1, kw=("g", "z0"))
        z0 = _num(n.kwargs["z0"], "z0") if "z0" in n.kwargs else 0.0
        return build_numeric_onedim(_ident(n.args[0]), _kw_shape(n, "g", "const"), z0)
    raise ParseError(f"unknown score family {name!r}")


def parse_score(text: str) -> ScoreSpec:
    return _wrap(_score, text)


def parse_vector(text: str) -> list[float]:
    """Comma-separated reals, e.g. ``"0,-1.5"``."""
    try:
        vals = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as e:
        raise ParseError(f"not a comma-separated list of numbers: {text!r}") from e
    if not vals:
        raise ParseError("empty vector")
    return vals
