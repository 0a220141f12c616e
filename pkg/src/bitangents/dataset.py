"""Dataset and report files, and the built-in Klein quartic dataset.

Datasets are JSON.  A field element is an array of phi(n) rational strings
"p/q" (or "p") in the basis zeta^0 .. zeta^(phi(n)-1); a polynomial is an array
of field elements, constant term first.  See README.md for the full schema.
"""

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .curve import BitangentLine, BitangentSection, QuarticCurve
from .errors import SchemaError
from .exactfield import Poly, field_make

DATASET_FORMAT = "bitangent-dataset/1"
REPORT_FORMAT = "bitangent-report/1"


@dataclass
class Dataset:
    field: object
    curve: QuarticCurve
    lines: list
    sections: dict = dc_field(default_factory=dict)  # line name -> BitangentSection
    metadata: dict = dc_field(default_factory=dict)

    @property
    def order(self):
        return self.field.order

    def names(self):
        return [line.name for line in self.lines]

    def resolve(self, token):
        """Position of a line given its name or a 1-based position string."""
        token = str(token).strip()
        names = self.names()
        if token in names:
            return names.index(token)
        if token.isdigit():
            pos = int(token)
            if 1 <= pos <= len(self.lines):
                return pos - 1
        raise SchemaError(f"unknown line {token!r}: neither a line name nor a position in 1..{len(self.lines)}")


# --- Klein quartic ------------------------------------------------------------

KLEIN_PRINTED = {
    # label: (family m, shift j)
    "L1": (0, 0),
    "L2": (1, 0),
    "L3": (1, 1),
    "L4": (3, 3),
    "L5": (1, 6),
    "L6": (3, 4),
    "L7": (2, 5),
}


def builtin_klein():
    """Klein quartic x^3 + t^3 x + t over Q(zeta_28) with its 28 bitangents.

    zeta_7 = zeta_28^4 and sqrt(-1) = zeta_28^7.  The seven lines L1..L7 come
    first, with the sections printed for them; the other 21 follow in family
    order and carry no section (derive them with ``derive_section``).
    """
    F = field_make(28)
    z = F.root_of_unity(4)
    i = F.root_of_unity(7)
    e1, e2, e3 = z + z**-1, z**2 + z**-2, z**4 + z**-4
    slope_unit = {0: F.one, 1: e1, 2: e2, 3: e3}
    const_unit = {0: F.one, 1: e3, 2: e1, 3: e2}

    def line(name, m, j):
        return BitangentLine(name, -(z**j) * slope_unit[m] ** 2, -(z ** (3 * j)) * const_unit[m] ** -2)

    a1 = 2 * z**5 + z**4 + z**3 + 2 * z**2 + 4
    b1 = 3 * z**5 + z**4 + z**3 + 3 * z**2 + 3
    a3 = 2 * z**5 + z**4 + z + 2 + 4 * z**6
    b3 = 3 * z**4 + z**3 + 1 + 3 * z**6 + 3 * z**5
    a7 = z**2 + 2 + 2 * z**6 + z**4 + 4 * z**3
    b7 = z**5 + 3 * z**3 + 3 * z**2 + 1 + 3 * z**6
    # y = scale * (t^2 + lin t + const)
    printed_y = {
        "L1": (i, F.one, F.one),
        "L2": (i * e1, a1, b1),
        "L3": (i * z**4 * e1, z**2 * a1, z**4 * b1),
        "L4": (i * z**5 * e3, a3, b3),
        "L5": (i * z**3 * e1, z**5 * a1, z**3 * b1),
        "L6": (i * z**2 * e3, z**2 * a3, z**4 * b3),
        "L7": (i * z**6 * e2, a7, b7),
    }

    lines, sections = [], {}
    for name, (m, j) in KLEIN_PRINTED.items():
        ln = line(name, m, j)
        lines.append(ln)
        scale, lin, const = printed_y[name]
        sections[name] = BitangentSection(ln, scale, scale * lin, scale * const)
    printed = set(KLEIN_PRINTED.values())
    for m in range(4):
        for j in range(7):
            if (m, j) not in printed:
                lines.append(line(f"L{m}.{j}", m, j))

    curve = QuarticCurve.from_coeffs(F, p=(), q=(0, 0, 0, 1), r=(0, 1))
    metadata = {
        "description": "Klein quartic F(t,x) = x^3 + t^3 x + t and its 28 bitangents",
        "provenance": (
            "bitangent families L{m}.{j}: x = -zeta7^j E_m^2 t - zeta7^(3j) E'_m^-2, "
            "(E, E') = (1,1), (e1,e3), (e2,e1), (e3,e2), e_k = zeta7^k' + zeta7^-k' for k' = 1,2,4; "
            "zeta7 = zeta28^4, sqrt(-1) = zeta28^7"
        ),
        "aliases": {name: f"L{m}.{j}" for name, (m, j) in KLEIN_PRINTED.items()},
    }
    return Dataset(F, curve, lines, sections, metadata)


# --- serialization ------------------------------------------------------------

def _rat_str(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def elem_to_json(x):
    return [_rat_str(c) for c in x.coords]


def poly_to_json(poly):
    return [elem_to_json(c) for c in poly.coeffs]


def dataset_to_json(ds):
    out = {
        "format": DATASET_FORMAT,
        "field_order": ds.order,
        "curve": {name: poly_to_json(getattr(ds.curve, name)) for name in ("p", "q", "r")},
        "bitangents": [],
        "metadata": ds.metadata,
    }
    for line in ds.lines:
        entry = {"name": line.name, "a": elem_to_json(line.a), "b": elem_to_json(line.b)}
        sec = ds.sections.get(line.name)
        if sec is not None:
            entry["section"] = {k: elem_to_json(getattr(sec, k)) for k in ("c", "d", "e")}
        out["bitangents"].append(entry)
    return out


def dumps_dataset(ds):
    return json.dumps(dataset_to_json(ds), indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def save_dataset(ds, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_dataset(ds))


def _parse_rational(text, where):
    if not isinstance(text, str):
        raise SchemaError(f"{where}: rational must be a string 'p/q', got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: bad rational {text!r}") from exc


def _parse_elem(F, value, where):
    if not isinstance(value, list) or len(value) != F.degree:
        got = len(value) if isinstance(value, list) else type(value).__name__
        raise SchemaError(f"{where}: expected {F.degree} coordinates, got {got}")
    return F.from_coords(_parse_rational(v, f"{where}[{k}]") for k, v in enumerate(value))


def _parse_poly(F, value, where):
    if not isinstance(value, list):
        raise SchemaError(f"{where}: polynomial must be an array of field elements")
    return Poly(F, [_parse_elem(F, v, f"{where}[{k}]") for k, v in enumerate(value)])


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    return obj[key]


def dataset_from_json(doc):
    if doc.get("format", DATASET_FORMAT) != DATASET_FORMAT:
        raise SchemaError(f"format: unsupported {doc.get('format')!r}")
    order = _require(doc, "field_order", "dataset")
    if not isinstance(order, int) or order < 1:
        raise SchemaError(f"field_order: must be a positive integer, got {order!r}")
    F = field_make(order)
    cv = _require(doc, "curve", "dataset")
    polys = {name: _parse_poly(F, cv.get(name, []), f"curve.{name}") for name in ("p", "q", "r")}
    try:
        curve = QuarticCurve(F, polys["p"], polys["q"], polys["r"])
    except ValueError as exc:
        raise SchemaError(f"curve: {exc}") from exc
    lines, sections = [], {}
    for k, entry in enumerate(_require(doc, "bitangents", "dataset")):
        where = f"bitangents[{k}]"
        name = _require(entry, "name", where)
        if name in {ln.name for ln in lines}:
            raise SchemaError(f"{where}.name: duplicate line name {name!r}")
        ln = BitangentLine(name, _parse_elem(F, _require(entry, "a", where), f"{where}.a"),
                           _parse_elem(F, _require(entry, "b", where), f"{where}.b"))
        lines.append(ln)
        if "section" in entry:
            sec = entry["section"]
            c, d, e = (_parse_elem(F, _require(sec, key, f"{where}.section"), f"{where}.section.{key}") for key in "cde")
            try:
                sections[name] = BitangentSection(ln, c, d, e)
            except ValueError as exc:
                raise SchemaError(f"{where}.section: {exc}") from exc
    return Dataset(F, curve, lines, sections, doc.get("metadata", {}))


def loads_dataset(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("dataset: top level must be an object")
    return dataset_from_json(doc)


def load_dataset(path):
    with open(path, encoding="utf-8") as fh:
        return loads_dataset(fh.read())


def dataset_digest(ds):
    return hashlib.sha256(dumps_dataset(ds).encode()).hexdigest()


# --- reports ------------------------------------------------------------------

def make_report(command, argv, inputs, results, diagnostics=None, oracle=None):
    report = {
        "format": REPORT_FORMAT,
        "command": command,
        "argv": list(argv),
        "inputs": inputs,
        "results": results,
        "diagnostics": diagnostics or {},
    }
    if oracle is not None:
        report["oracle"] = oracle
    return report


def dumps_report(report):
    return json.dumps(report, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def save_report(report, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_report(report))


def load_report(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if doc.get("format") != REPORT_FORMAT:
        raise SchemaError(f"format: expected {REPORT_FORMAT!r}")
    return doc
