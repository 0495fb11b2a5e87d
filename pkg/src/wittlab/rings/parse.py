"""Ring spec mini-language and exact expression literals.

Ring specs:

    int
    plocal:<p>
    zmod:<m>
    polyquot:<base>;<monic poly in T>     base is int | plocal:<p> | zmod:<m>
    laurent:p=<p>;gens=<n1,n2,...>[;laurent=<subset>]

Element and polynomial literals use a small expression grammar with
explicit '*', integer '^' powers, '/' division and parentheses, e.g.
"T^2+T+1", "2*L^-1", "3/4".  Parse errors carry the offending position.
"""

from ..errors import MalformedSpec, NotAUnit
from .ctx import IntegerRing, ModRing, PLocalRing, PolyQuotientRing, SymbolicLaurentRing


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("sym", text[i:j], i))
            i = j
        elif c in "+-*/^()":
            tokens.append((c, c, i))
            i += 1
        else:
            raise MalformedSpec(f"unexpected character {c!r}", text=text, pos=i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise MalformedSpec(f"expected {kind}, found {tok[0]}", text=self.text, pos=tok[2])
        self.i += 1
        return tok

    def parse(self):
        ast = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise MalformedSpec("trailing input", text=self.text, pos=tok[2])
        return ast

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            rhs = self.factor()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def factor(self):
        if self.peek()[0] == "-":
            self.take()
            return ("neg", self.factor())
        node = self.atom()
        while self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            tok = self.take("int")
            node = ("pow", node, sign * tok[1])
        return node

    def atom(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return ("int", tok[1])
        if tok[0] == "sym":
            self.take()
            return ("sym", tok[1])
        if tok[0] == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise MalformedSpec("expected a value", text=self.text, pos=tok[2])


def parse_ast(text):
    return _Parser(text).parse()


def eval_ast(ast, from_int, sym, inv=None):
    """Evaluate an expression AST over any ring-like value set.

    `from_int` and `sym` build leaves; values must support +,-,*,** and
    unary -.  Division and negative powers go through `inv` when given.
    """

    def ev(node):
        op = node[0]
        if op == "int":
            return from_int(node[1])
        if op == "sym":
            return sym(node[1])
        if op == "add":
            return ev(node[1]) + ev(node[2])
        if op == "sub":
            return ev(node[1]) - ev(node[2])
        if op == "mul":
            return ev(node[1]) * ev(node[2])
        if op == "neg":
            return -ev(node[1])
        if op == "div":
            if inv is None:
                raise MalformedSpec("division is not allowed in this literal")
            return ev(node[1]) * inv(ev(node[2]))
        if op == "pow":
            base, e = ev(node[1]), node[2]
            if e >= 0:
                return base ** e
            if inv is None:
                raise MalformedSpec("negative powers are not allowed in this literal")
            return inv(base) ** (-e)
        raise MalformedSpec(f"bad AST node {op}")

    return ev(ast)


def parse_elem(ctx, text, symbols=None):
    """Parse an element literal over ctx.

    Symbols resolve to laurent generators, the quotient variable of a
    PolyQuotientRing, or entries of the optional `symbols` mapping.
    """
    if isinstance(text, int):
        return ctx.from_int(text)
    symbols = symbols or {}

    def sym(name):
        if name in symbols:
            return symbols[name]
        if isinstance(ctx, SymbolicLaurentRing) and name in ctx.index:
            return ctx.gen(name)
        if isinstance(ctx, PolyQuotientRing) and name == ctx.varname:
            return ctx.gen()
        raise MalformedSpec(f"unknown symbol {name!r} over {ctx.describe()}", text=text, pos=0)

    def inv(x):
        # literal division is field/exact division, not unit certification:
        # "3/4" must parse over plocal:2 even though 1/4 is not 2-integral
        from ..errors import NotIntegral, UnsupportedCtx

        try:
            return ctx.exact_div(ctx.one, x)
        except (UnsupportedCtx, NotIntegral):
            pass
        try:
            return ctx.inv(x)
        except NotAUnit as exc:
            raise MalformedSpec(f"literal divides by a non-unit: {exc}") from exc

    return eval_ast(parse_ast(text), ctx.from_int, sym, inv)


def parse_base_poly(base, text, varname="T"):
    """Parse a univariate polynomial into dense base payloads, low first."""

    class DensePoly:
        __slots__ = ("coeffs",)

        def __init__(self, coeffs):
            trimmed = list(coeffs)
            while trimmed and base._is_zero(trimmed[-1]):
                trimmed.pop()
            self.coeffs = trimmed

        def __add__(self, other):
            n = max(len(self.coeffs), len(other.coeffs))
            a = self.coeffs + [base.zero.payload] * (n - len(self.coeffs))
            b = other.coeffs + [base.zero.payload] * (n - len(other.coeffs))
            return DensePoly([base._add(x, y) for x, y in zip(a, b)])

        def __neg__(self):
            return DensePoly([base._neg(c) for c in self.coeffs])

        def __sub__(self, other):
            return self + (-other)

        def __mul__(self, other):
            if not self.coeffs or not other.coeffs:
                return DensePoly([])
            out = [base.zero.payload] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] = base._add(out[i + j], base._mul(a, b))
            return DensePoly(out)

        def __pow__(self, n):
            out = DensePoly([base.one.payload])
            for _ in range(n):
                out = out * self
            return out

    def from_int(n):
        return DensePoly([base.from_int(n).payload])

    def sym(name):
        if name != varname:
            raise MalformedSpec(f"modulus may only use the variable {varname}", text=text, pos=0)
        return DensePoly([base.zero.payload, base.one.payload])

    poly = eval_ast(parse_ast(text), from_int, sym)
    return tuple(poly.coeffs)


def ring_make(spec):
    """Build a RingCtx from its mini-language description."""
    spec = spec.strip()
    if spec == "int":
        return IntegerRing()
    if spec.startswith("plocal:"):
        try:
            p = int(spec[len("plocal:"):])
        except ValueError:
            raise MalformedSpec(f"bad plocal spec {spec!r}", text=spec, pos=len("plocal:")) from None
        return PLocalRing(p)
    if spec.startswith("zmod:"):
        try:
            m = int(spec[len("zmod:"):])
        except ValueError:
            raise MalformedSpec(f"bad zmod spec {spec!r}", text=spec, pos=len("zmod:")) from None
        return ModRing(m)
    if spec.startswith("polyquot:"):
        rest = spec[len("polyquot:"):]
        if ";" not in rest:
            raise MalformedSpec("polyquot needs '<base>;<poly>'", text=spec, pos=len("polyquot:"))
        base_spec, poly_text = rest.split(";", 1)
        base = ring_make(base_spec)
        if isinstance(base, (PolyQuotientRing, SymbolicLaurentRing)):
            raise MalformedSpec("polyquot base must be int, plocal or zmod", text=spec, pos=len("polyquot:"))
        modulus = parse_base_poly(base, poly_text)
        return PolyQuotientRing(base, modulus)
    if spec.startswith("laurent:"):
        fields = spec[len("laurent:"):].split(";")
        p = None
        gens = None
        laurent = ()
        for field in fields:
            if "=" not in field:
                raise MalformedSpec(f"bad laurent field {field!r}", text=spec, pos=spec.find(field))
            key, value = field.split("=", 1)
            if key == "p":
                p = int(value)
            elif key == "gens":
                gens = tuple(g.strip() for g in value.split(",") if g.strip())
            elif key == "laurent":
                laurent = tuple(g.strip() for g in value.split(",") if g.strip())
            else:
                raise MalformedSpec(f"unknown laurent field {key!r}", text=spec, pos=spec.find(field))
        if p is None or gens is None:
            raise MalformedSpec("laurent spec needs p= and gens=", text=spec, pos=0)
        return SymbolicLaurentRing(p, gens, laurent)
    raise MalformedSpec(f"unknown ring spec {spec!r}", text=spec, pos=0)
