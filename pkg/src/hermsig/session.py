"""Session documents: a JSON-compatible declaration of one field, named
algebras and forms, and a command list.

Validation is strict: unknown keys, unknown families, unresolved names,
square deltas and non-squarefree polynomials are rejected at parse time.
JSON syntax errors carry the decoder's line/column; structural errors
carry a JSON path like ``algebras[0].a`` (and element expressions report
the offset inside the expression string).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .algebras import AlgebraElement, AlgebraWithInvolution
from .field import FieldElement, NumberField
from .hermitian import HermitianForm
from .quadforms import GramQuadraticForm, QuadraticForm

COMMANDS = (
    "orderings", "sign", "total-sign", "nil", "torsion", "transfer-check",
    "going-up", "reference-form", "cones", "cone-member", "eta-max",
    "sos-find", "sos-verify", "positivity", "ideals", "morphisms",
    "topology", "morita-check", "decompose",
)


class SessionParseError(Exception):
    def __init__(self, message: str, path: str = "", line: int | None = None,
                 col: int | None = None):
        self.message = message
        self.path = path
        self.line = line
        self.col = col
        where = path or (f"line {line}, column {col}" if line else "")
        super().__init__(f"{where}: {message}" if where else message)


# ---------------------------------------------------------------------------
# Element expressions: polynomials in the field generator with rational
# coefficients; numbers as integers, exact decimals or fractions "p/q".


class _ExprParser:
    def __init__(self, text: str, gen_name: str, field: NumberField, path: str):
        self.text = text
        self.pos = 0
        self.gen_name = gen_name
        self.field = field
        self.path = path

    def fail(self, message: str):
        raise SessionParseError(f"{message} (at offset {self.pos} in {self.text!r})",
                                self.path)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> FieldElement:
        value = self.expr()
        if self.peek():
            self.fail("trailing input")
        return value

    def expr(self) -> FieldElement:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> FieldElement:
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = value * self.factor()
        return value

    def factor(self) -> FieldElement:
        if self.peek() == "-":
            self.pos += 1
            return -self.factor()
        value = self.atom()
        if self.peek() == "^":
            self.pos += 1
            value = value ** self.uint()
        return value

    def atom(self) -> FieldElement:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            self.take(")")
            return value
        if ch.isdigit() or ch == ".":
            return self.field.element(self.number())
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                                 or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name != self.gen_name:
                self.fail(f"unknown name {name!r}; the generator is {self.gen_name!r}")
            return self.field.gen
        self.fail("expected a number, the generator or a parenthesis")

    def number(self) -> Fraction:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isdigit()
                                             or self.text[self.pos] in "./"):
            self.pos += 1
        lit = self.text[start:self.pos]
        try:
            return Fraction(lit)
        except (ValueError, ZeroDivisionError):
            self.pos = start
            self.fail(f"bad numeric literal {lit!r}")

    def uint(self) -> int:
        start = self.pos
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected an exponent")
        return int(self.text[start:self.pos])


def parse_element(value, field: NumberField, gen_name: str, path: str) -> FieldElement:
    if isinstance(value, bool):
        raise SessionParseError("expected an element expression", path)
    if isinstance(value, int):
        return field.element(value)
    if isinstance(value, str):
        return _ExprParser(value, gen_name, field, path).parse()
    raise SessionParseError("expected an element expression (string or integer)", path)


# ---------------------------------------------------------------------------
# Document model.


@dataclass
class SessionDocument:
    field: NumberField
    gen_name: str
    algebras: dict[str, AlgebraWithInvolution]
    forms: dict[str, object]  # QuadraticForm | GramQuadraticForm | HermitianForm
    commands: list[dict]
    seed: int = 0
    source: dict = dataclass_field(default_factory=dict)


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise SessionParseError(f"missing required key {key!r}", path)
    return obj[key]


def _check_keys(obj: dict, allowed: set[str], path: str):
    for k in obj:
        if k not in allowed:
            raise SessionParseError(f"unknown key {k!r}", path)


def _parse_field(spec, path: str) -> tuple[NumberField, str]:
    if not isinstance(spec, dict):
        raise SessionParseError("field declaration must be an object", path)
    _check_keys(spec, {"min_poly", "generator"}, path)
    coeffs = _require(spec, "min_poly", path)
    if not isinstance(coeffs, list) or not coeffs:
        raise SessionParseError("min_poly must be a coefficient list, constant first",
                                f"{path}.min_poly")
    gen = spec.get("generator", "x")
    if not isinstance(gen, str) or not gen.isidentifier():
        raise SessionParseError("generator must be an identifier", f"{path}.generator")
    try:
        fractions = [_exact_number(c, f"{path}.min_poly[{i}]")
                     for i, c in enumerate(coeffs)]
        field = NumberField(fractions)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        if isinstance(exc, SessionParseError):
            raise
        raise SessionParseError(str(exc), f"{path}.min_poly")
    return field, gen


def _exact_number(c, path: str) -> Fraction:
    if isinstance(c, bool) or isinstance(c, float):
        raise SessionParseError(
            "numeric literals must be integers or exact strings like \"3/4\"", path)
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise SessionParseError("expected a number", path)


def _parse_algebra(spec, field: NumberField, gen: str, path: str) -> tuple[str, AlgebraWithInvolution]:
    if not isinstance(spec, dict):
        raise SessionParseError("algebra declaration must be an object", path)
    _check_keys(spec, {"name", "family", "n", "a", "b", "delta"}, path)
    name = _require(spec, "name", path)
    family = _require(spec, "family", path)
    n = spec.get("n", 1)
    if not isinstance(n, int) or n < 1:
        raise SessionParseError("n must be a positive integer", f"{path}.n")
    kwargs = {}
    for key in ("a", "b", "delta"):
        if key in spec:
            kwargs[key] = parse_element(spec[key], field, gen, f"{path}.{key}")
    try:
        algebra = AlgebraWithInvolution(field, family, n, **kwargs)
    except Exception as exc:
        raise SessionParseError(str(exc), path)
    return name, algebra


def _parse_entry(value, algebra: AlgebraWithInvolution, gen: str, path: str):
    ed = algebra.entry_dim
    if ed == 1 or not isinstance(value, list):
        # bare expressions denote scalar entries in any family
        scalar = parse_element(value, algebra.field, gen, path)
        return algebra.entry(scalar if ed == 1 else [scalar] + [0] * (ed - 1))
    if len(value) != ed:
        raise SessionParseError(
            f"{algebra.family} entries are {ed}-component coordinate lists", path)
    coords = [parse_element(v, algebra.field, gen, f"{path}[{i}]")
              for i, v in enumerate(value)]
    return algebra.entry(coords)


def parse_algebra_element(value, algebra: AlgebraWithInvolution, gen: str,
                          path: str) -> AlgebraElement:
    n = algebra.n
    if not isinstance(value, list) or len(value) != n \
            or any(not isinstance(r, list) or len(r) != n for r in value):
        raise SessionParseError(f"expected an {n}x{n} entry matrix", path)
    rows = [[_parse_entry(value[r][c], algebra, gen, f"{path}[{r}][{c}]")
             for c in range(n)] for r in range(n)]
    try:
        return AlgebraElement(algebra, rows)
    except Exception as exc:
        raise SessionParseError(str(exc), path)


def _parse_form(spec, field: NumberField, gen: str,
                algebras: dict[str, AlgebraWithInvolution], path: str):
    if not isinstance(spec, dict):
        raise SessionParseError("form declaration must be an object", path)
    _check_keys(spec, {"name", "algebra", "diag", "gram"}, path)
    name = _require(spec, "name", path)
    if ("diag" in spec) == ("gram" in spec):
        raise SessionParseError("a form is either 'diag' or 'gram'", path)

    if "algebra" not in spec:
        if "diag" in spec:
            entries = [parse_element(v, field, gen, f"{path}.diag[{i}]")
                       for i, v in enumerate(spec["diag"])]
            try:
                return name, QuadraticForm(field, entries)
            except ValueError as exc:
                raise SessionParseError(str(exc), f"{path}.diag")
        rows = spec["gram"]
        if not isinstance(rows, list):
            raise SessionParseError("gram must be a row list", f"{path}.gram")
        parsed = [[parse_element(v, field, gen, f"{path}.gram[{r}][{c}]")
                   for c, v in enumerate(row)] for r, row in enumerate(rows)]
        try:
            return name, GramQuadraticForm(field, parsed)
        except ValueError as exc:
            raise SessionParseError(str(exc), f"{path}.gram")

    alg_name = spec["algebra"]
    if alg_name not in algebras:
        raise SessionParseError(f"unresolved algebra name {alg_name!r}",
                                f"{path}.algebra")
    algebra = algebras[alg_name]
    if "diag" in spec:
        values = spec["diag"]
        if not isinstance(values, list):
            raise SessionParseError("diag must be a list", f"{path}.diag")
        entries = []
        for i, v in enumerate(values):
            if algebra.n == 1:
                entry = _parse_entry(v, algebra, gen, f"{path}.diag[{i}]")
                entries.append(AlgebraElement(algebra, [[entry]]))
            else:
                entries.append(parse_algebra_element(v, algebra, gen,
                                                     f"{path}.diag[{i}]"))
        try:
            return name, HermitianForm.diagonal(algebra, entries)
        except ValueError as exc:
            raise SessionParseError(str(exc), f"{path}.diag")
    rows = spec["gram"]
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise SessionParseError("gram must be a row list", f"{path}.gram")
    parsed = [[_parse_entry(v, algebra, gen, f"{path}.gram[{r}][{c}]")
               for c, v in enumerate(row)] for r, row in enumerate(rows)]
    try:
        return name, HermitianForm(algebra, parsed)
    except ValueError as exc:
        raise SessionParseError(str(exc), f"{path}.gram")


def render_session(doc: SessionDocument) -> str:
    """Canonical JSON rendering; re-parsing yields a semantically identical
    document (hermitian forms are emitted as full entry Grams)."""
    from .field import render_element

    gen = doc.gen_name

    def elem(e) -> str:
        return render_element(e, gen)

    def entry(algebra, v):
        coords = algebra.entry_coords(v)
        if algebra.entry_dim == 1:
            return elem(coords[0])
        return [elem(c) for c in coords]

    out: dict = {
        "field": {"min_poly": [str(c) for c in doc.field.min_poly],
                  "generator": gen},
        "seed": doc.seed,
        "algebras": [],
        "forms": [],
        "commands": doc.commands,
    }
    for name, alg in doc.algebras.items():
        spec = {"name": name, "family": alg.family, "n": alg.n}
        if alg.family == "unitary":
            spec["delta"] = elem(alg.ext.delta)
        elif alg.quat is not None:
            spec["a"] = elem(alg.quat.a)
            spec["b"] = elem(alg.quat.b)
        out["algebras"].append(spec)
    for name, form in doc.forms.items():
        if isinstance(form, QuadraticForm):
            out["forms"].append({"name": name, "diag": [elem(e) for e in form.entries]})
        elif isinstance(form, GramQuadraticForm):
            out["forms"].append({"name": name,
                                 "gram": [[elem(v) for v in row] for row in form.rows]})
        else:
            alg_name = next(n for n, a in doc.algebras.items() if a == form.algebra)
            out["forms"].append({
                "name": name, "algebra": alg_name,
                "gram": [[entry(form.algebra, v) for v in row] for row in form.gram]})
    return json.dumps(out, indent=2, sort_keys=True) + "\n"


def parse_session(text: str) -> SessionDocument:
    """Parse and validate a session document."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SessionParseError(exc.msg, line=exc.lineno, col=exc.colno)
    if not isinstance(raw, dict):
        raise SessionParseError("document must be a JSON object", "$")
    _check_keys(raw, {"field", "algebras", "forms", "commands", "seed"}, "$")
    field, gen = _parse_field(_require(raw, "field", "$"), "field")

    algebras: dict[str, AlgebraWithInvolution] = {}
    for i, spec in enumerate(raw.get("algebras", [])):
        name, algebra = _parse_algebra(spec, field, gen, f"algebras[{i}]")
        if name in algebras:
            raise SessionParseError(f"duplicate algebra name {name!r}", f"algebras[{i}]")
        algebras[name] = algebra

    forms: dict[str, object] = {}
    for i, spec in enumerate(raw.get("forms", [])):
        name, form = _parse_form(spec, field, gen, algebras, f"forms[{i}]")
        if name in forms or name in algebras:
            raise SessionParseError(f"duplicate name {name!r}", f"forms[{i}]")
        forms[name] = form

    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        raise SessionParseError("seed must be an integer", "seed")

    commands = raw.get("commands", [])
    if not isinstance(commands, list):
        raise SessionParseError("commands must be a list", "commands")
    for i, cmd in enumerate(commands):
        if not isinstance(cmd, dict):
            raise SessionParseError("command must be an object", f"commands[{i}]")
        op = _require(cmd, "op", f"commands[{i}]")
        if op not in COMMANDS:
            raise SessionParseError(f"unknown command {op!r}", f"commands[{i}].op")
        for key in ("form", "q", "h"):
            if key in cmd and cmd[key] not in forms:
                raise SessionParseError(f"unresolved form name {cmd[key]!r}",
                                        f"commands[{i}].{key}")
        if "algebra" in cmd and cmd["algebra"] not in algebras:
            raise SessionParseError(f"unresolved algebra name {cmd['algebra']!r}",
                                    f"commands[{i}].algebra")

    return SessionDocument(field, gen, algebras, forms, commands, seed, raw)
