"""Symbols m(x, nu) of pseudo-multipliers: builtin families, a small
expression language, and tabulated grids.

The expression grammar (see parse_symbol) covers total real arithmetic over
the variables x1..xn, nu1..nun, absnu (= |nu|), lam (= 2|nu|+n), n, pi, e.
A symbol with no x-dependence is a plain multiplier; the assembled operator
is then diagonal and many downstream computations take an exact fast path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .multiindex import MultiIndex

FUNCTIONS = {
    "exp": (1, np.exp),
    "log": (1, np.log),
    "sin": (1, np.sin),
    "cos": (1, np.cos),
    "sqrt": (1, np.sqrt),
    "abs": (1, np.abs),
    "pow": (2, np.power),
    "min": (2, np.minimum),
    "max": (2, np.maximum),
}

BUILTIN_FAMILIES = ("power", "heat", "bandlimit")


class SymbolError(Exception):
    """Base for symbol construction/evaluation failures."""


class SymbolParseError(SymbolError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class SymbolEvalError(SymbolError):
    pass


# ---------------------------------------------------------------------------
# expression trees

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple["Node", ...]


Node = Union[Num, Var, Neg, BinOp, Call]


def _variables(dim: int) -> set[str]:
    names = {"absnu", "lam", "n", "pi", "e"}
    names.update(f"x{j}" for j in range(1, dim + 1))
    names.update(f"nu{j}" for j in range(1, dim + 1))
    return names


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int, int]] = []  # kind, value, line, col
        self._scan()

    def _scan(self):
        line, col = 1, 1
        i, text = 0, self.text
        while i < len(text):
            c = text[i]
            if c == "\n":
                line += 1
                col = 1
                i += 1
                continue
            if c.isspace():
                i += 1
                col += 1
                continue
            if c.isdigit() or (c == "." and i + 1 < len(text) and text[i + 1].isdigit()):
                j = i
                while j < len(text) and (text[j].isdigit() or text[j] == "."):
                    j += 1
                if j < len(text) and text[j] in "eE":
                    k = j + 1
                    if k < len(text) and text[k] in "+-":
                        k += 1
                    if k < len(text) and text[k].isdigit():
                        j = k
                        while j < len(text) and text[j].isdigit():
                            j += 1
                lit = text[i:j]
                try:
                    float(lit)
                except ValueError:
                    raise SymbolParseError(f"malformed number {lit!r}", line, col)
                self.tokens.append(("num", lit, line, col))
                col += j - i
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("ident", text[i:j], line, col))
                col += j - i
                i = j
                continue
            if c in "+-*/^(),":
                self.tokens.append((c, c, line, col))
                i += 1
                col += 1
                continue
            raise SymbolParseError(f"unexpected character {c!r}", line, col)
        self.tokens.append(("eof", "", line, col))


class _Parser:
    """Recursive descent over:

        expr   := term (("+"|"-") term)*
        term   := factor (("*"|"/") factor)*
        factor := unary ("^" unary)?
        unary  := "-" unary | atom
        atom   := NUMBER | IDENT | "(" expr ")" | IDENT "(" expr ("," expr)* ")"
    """

    def __init__(self, text: str, dim: int):
        self.tokens = _Tokenizer(text).tokens
        self.i = 0
        self.vars = _variables(dim)

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.advance()
        if tok[0] != kind:
            raise SymbolParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2], tok[3])
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "eof":
            raise SymbolParseError(f"trailing input starting at {tok[1]!r}", tok[2], tok[3])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.unary()
        if self.peek()[0] == "^":
            self.advance()
            node = BinOp("^", node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek()[0] == "-":
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Node:
        tok = self.advance()
        kind, value, line, col = tok
        if kind == "num":
            return Num(float(value))
        if kind == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "ident":
            if self.peek()[0] == "(":
                if value not in FUNCTIONS:
                    raise SymbolParseError(f"unknown function {value!r}", line, col)
                self.advance()
                args = [self.expr()]
                while self.peek()[0] == ",":
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                arity = FUNCTIONS[value][0]
                if len(args) != arity:
                    raise SymbolParseError(
                        f"function {value!r} takes {arity} argument(s), got {len(args)}", line, col
                    )
                return Call(value, tuple(args))
            if value not in self.vars:
                raise SymbolParseError(f"unknown identifier {value!r}", line, col)
            return Var(value)
        raise SymbolParseError(f"expected a value, found {value or 'end of input'!r}", line, col)


def pretty_print(node: Node) -> str:
    """Fully parenthesized form; reparses to the identical tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{pretty_print(node.arg)})"
    if isinstance(node, BinOp):
        return f"({pretty_print(node.left)} {node.op} {pretty_print(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({', '.join(pretty_print(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


def _uses_x(node: Node) -> bool:
    if isinstance(node, Var):
        return node.name.startswith("x") and node.name[1:].isdigit()
    if isinstance(node, Neg):
        return _uses_x(node.arg)
    if isinstance(node, BinOp):
        return _uses_x(node.left) or _uses_x(node.right)
    if isinstance(node, Call):
        return any(_uses_x(a) for a in node.args)
    return False


def _eval_node(node: Node, env: dict):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -_eval_node(node.arg, env)
    if isinstance(node, BinOp):
        a = _eval_node(node.left, env)
        b = _eval_node(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b
        return np.power(a, b)
    if isinstance(node, Call):
        fn = FUNCTIONS[node.func][1]
        return fn(*(_eval_node(a, env) for a in node.args))
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# symbol specifications

@dataclass(frozen=True)
class SymbolSpec:
    """A symbol m(x, nu), one of three kinds.

    kind "builtin": family in BUILTIN_FAMILIES with params;
    kind "expression": parsed tree over the grammar above;
    kind "table": per-coordinate x grids with values tabulated per nu.
    """

    kind: str
    dim: int
    is_multiplier: bool
    claims_positive_selfadjoint: bool = False
    family: Optional[str] = None
    params: dict = field(default_factory=dict)
    tree: Optional[Node] = None
    text: Optional[str] = None
    table: Optional[dict] = None

    def describe(self) -> str:
        if self.kind == "builtin":
            p = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
            return f"builtin {self.family}({p})"
        if self.kind == "expression":
            return f"expression {self.text!r}"
        return "tabulated grid"


def parse_symbol(text: str, dim: int, positive_selfadjoint: bool = False) -> SymbolSpec:
    """Parse an expression-kind symbol; multiplier flag inferred from the tree."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    tree = _Parser(text, dim).parse()
    return SymbolSpec(
        kind="expression",
        dim=dim,
        is_multiplier=not _uses_x(tree),
        claims_positive_selfadjoint=positive_selfadjoint,
        tree=tree,
        text=text,
    )


def builtin_symbol(family: str, dim: int, **params) -> SymbolSpec:
    """The three built-in multiplier families.

    power(sigma): (2|nu|+n)^(-sigma); heat(t): e^(-t(2|nu|+n));
    bandlimit(cutoff): indicator of |nu| <= cutoff.
    """
    if family not in BUILTIN_FAMILIES:
        raise ValueError(f"unknown builtin family {family!r}; known: {BUILTIN_FAMILIES}")
    required = {"power": {"sigma"}, "heat": {"t"}, "bandlimit": {"cutoff"}}[family]
    if set(params) != required:
        raise ValueError(f"family {family!r} needs params {sorted(required)}, got {sorted(params)}")
    return SymbolSpec(
        kind="builtin",
        dim=dim,
        is_multiplier=True,
        claims_positive_selfadjoint=True,
        family=family,
        params={k: float(v) for k, v in params.items()},
    )


def table_symbol(dim: int, grids: list, values: dict, positive_selfadjoint: bool = False) -> SymbolSpec:
    """Tabulated symbol: grids is one ascending node list per coordinate,
    values maps nu tuples to arrays over the tensor grid (1-D array in dim 1).
    """
    grids = [np.asarray(g, dtype=float) for g in grids]
    if len(grids) != dim:
        raise ValueError(f"need {dim} coordinate grids, got {len(grids)}")
    for g in grids:
        if g.ndim != 1 or g.size < 2 or not np.all(np.diff(g) > 0):
            raise ValueError("each grid must be a strictly increasing 1-D array of length >= 2")
    shape = tuple(g.size for g in grids)
    vals = {}
    for nu, arr in values.items():
        key = tuple(int(k) for k in nu)
        arr = np.asarray(arr, dtype=float).reshape(shape)
        vals[key] = arr
    return SymbolSpec(
        kind="table",
        dim=dim,
        is_multiplier=False,
        claims_positive_selfadjoint=positive_selfadjoint,
        table={"grids": grids, "values": vals},
    )


def _multiplier_value(spec: SymbolSpec, nu: MultiIndex) -> float:
    lam = 2 * nu.order + spec.dim
    if spec.kind == "builtin":
        if spec.family == "power":
            return lam ** (-spec.params["sigma"])
        if spec.family == "heat":
            return math.exp(-spec.params["t"] * lam)
        return 1.0 if nu.order <= spec.params["cutoff"] else 0.0
    # x-free expression
    env = {"absnu": float(nu.order), "lam": float(lam), "n": float(spec.dim),
           "pi": math.pi, "e": math.e}
    for j, k in enumerate(nu, start=1):
        env[f"nu{j}"] = float(k)
    with np.errstate(all="ignore"):
        val = _eval_node(spec.tree, env)
    if not np.all(np.isfinite(val)):
        raise SymbolEvalError(f"symbol evaluation not finite at nu={nu.entries}")
    return float(val)


def eval_symbol(spec: SymbolSpec, x, nu: MultiIndex):
    """m(x, nu); x is a point in R^n or an (M, n) batch of points.

    Returns a float for a single point, an (M,) array for a batch.
    """
    if nu.dim != spec.dim:
        raise ValueError(f"multi-index dimension {nu.dim} != symbol dimension {spec.dim}")
    pts = np.asarray(x, dtype=float)
    scalar_input = pts.ndim <= 1
    pts = np.atleast_2d(pts.reshape(-1, spec.dim) if pts.ndim > 0 else pts)
    if pts.shape[1] != spec.dim:
        raise ValueError(f"points have dimension {pts.shape[1]}, symbol has {spec.dim}")

    if spec.is_multiplier:
        val = _multiplier_value(spec, nu)
        return val if scalar_input and pts.shape[0] == 1 else np.full(pts.shape[0], val)

    if spec.kind == "table":
        out = _eval_table(spec, pts, nu)
    else:
        env = {"absnu": float(nu.order), "lam": float(2 * nu.order + spec.dim),
               "n": float(spec.dim), "pi": math.pi, "e": math.e}
        for j, k in enumerate(nu, start=1):
            env[f"nu{j}"] = float(k)
        for j in range(spec.dim):
            env[f"x{j + 1}"] = pts[:, j]
        with np.errstate(all="ignore"):
            out = np.broadcast_to(np.asarray(_eval_node(spec.tree, env), dtype=float),
                                  (pts.shape[0],)).copy()
        if not np.all(np.isfinite(out)):
            bad = pts[~np.isfinite(out)][0]
            raise SymbolEvalError(
                f"symbol evaluation not finite at x={tuple(bad)}, nu={nu.entries}"
            )
    if scalar_input and out.size == 1:
        return float(out[0])
    return out


def _eval_table(spec: SymbolSpec, pts: np.ndarray, nu: MultiIndex) -> np.ndarray:
    grids = spec.table["grids"]
    try:
        arr = spec.table["values"][nu.entries]
    except KeyError:
        raise SymbolEvalError(f"tabulated symbol has no values for nu={nu.entries}") from None
    for j, g in enumerate(grids):
        lo, hi = g[0], g[-1]
        out_of_hull = (pts[:, j] < lo) | (pts[:, j] > hi)
        if np.any(out_of_hull):
            bad = pts[out_of_hull][0]
            raise SymbolEvalError(
                f"point x={tuple(bad)} outside tabulated hull in coordinate {j + 1} "
                f"[{lo}, {hi}]; extrapolation is refused"
            )
    if spec.dim == 1:
        return np.interp(pts[:, 0], grids[0], arr)
    from scipy.interpolate import RegularGridInterpolator

    interp = RegularGridInterpolator(grids, arr, method="linear", bounds_error=True)
    return interp(pts)


# ---------------------------------------------------------------------------
# file schema

def symbol_to_dict(spec: SymbolSpec) -> dict:
    doc = {
        "kind": spec.kind,
        "dim": spec.dim,
        "multiplier": spec.is_multiplier,
        "positive_selfadjoint": spec.claims_positive_selfadjoint,
    }
    if spec.kind == "builtin":
        doc["family"] = spec.family
        doc["params"] = dict(spec.params)
    elif spec.kind == "expression":
        doc["expr"] = spec.text
    else:
        doc["table"] = {
            "grids": [g.tolist() for g in spec.table["grids"]],
            "values": {",".join(map(str, k)): v.tolist() for k, v in spec.table["values"].items()},
        }
    return doc


def symbol_from_dict(doc: dict) -> SymbolSpec:
    if not isinstance(doc, dict):
        raise SymbolError("symbol document must be a mapping")
    for key in ("kind", "dim"):
        if key not in doc:
            raise SymbolError(f"symbol document missing field {key!r}")
    kind = doc["kind"]
    dim = int(doc["dim"])
    psd = bool(doc.get("positive_selfadjoint", False))
    if kind == "builtin":
        spec = builtin_symbol(doc["family"], dim, **doc.get("params", {}))
        if not psd:
            spec = SymbolSpec(**{**spec.__dict__, "claims_positive_selfadjoint": False})
        return spec
    if kind == "expression":
        spec = parse_symbol(doc["expr"], dim, positive_selfadjoint=psd)
        if "multiplier" in doc and bool(doc["multiplier"]) != spec.is_multiplier:
            raise SymbolError(
                f"document claims multiplier={doc['multiplier']} but the expression "
                f"{'has no' if spec.is_multiplier else 'has'} x-dependence"
            )
        return spec
    if kind == "table":
        t = doc["table"]
        values = {tuple(int(s) for s in k.split(",")): v for k, v in t["values"].items()}
        return table_symbol(dim, t["grids"], values, positive_selfadjoint=psd)
    raise SymbolError(f"unknown symbol kind {kind!r}")


def load_symbol(path) -> SymbolSpec:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SymbolError(f"{path}: not valid JSON ({exc})") from exc
    return symbol_from_dict(doc)
